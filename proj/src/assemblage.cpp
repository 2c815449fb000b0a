#include "qse/assemblage.hpp"

#include "qse/error.hpp"

#include <cmath>

namespace qse {

namespace {

constexpr double kDirectionTol = 1e-12;
constexpr double kCollinearityTol = 1e-8;

} // namespace

ConditionalEnsemble steer(const PauliDecomposition& decomp, const Vec3& direction,
                          Party measuring) {
    const double len = direction.norm();
    if (!std::isfinite(len) || std::abs(len - 1.0) > kDirectionTol)
        throw Error(ErrorCode::NonUnitDirection,
                    "measurement direction has norm " + std::to_string(len),
                    std::abs(len - 1.0));
    const PauliDecomposition d = measuring == Party::Alice ? decomp : decomp.swapped();

    ConditionalEnsemble out;
    out.direction = direction;
    const double proj = direction.dot(d.a);
    const Vec3 shift = d.T.transpose() * direction;
    out.p_plus = 0.5 * (1.0 + proj);
    out.p_minus = 0.5 * (1.0 - proj);
    if (out.p_plus >= kOutcomeSuppression)
        out.state_plus = QubitState::from_bloch((d.b + shift) / (1.0 + proj));
    if (out.p_minus >= kOutcomeSuppression)
        out.state_minus = QubitState::from_bloch((d.b - shift) / (1.0 - proj));
    return out;
}

ConditionalEnsemble steer(const TwoQubitState& state, const Vec3& direction, Party measuring) {
    return steer(pauli_decompose(state), direction, measuring);
}

EnsembleProbabilities probability_from_geometry(const Vec3& b, const Vec3& s_plus,
                                                const Vec3& s_minus) {
    const Vec3 chord = s_plus - s_minus;
    const double len = chord.norm();
    if (len < 1e-12)
        throw Error(ErrorCode::CoincidentEndpoints, "chord endpoints coincide", len);

    const Vec3 unit = chord / len;
    const double t = (b - s_minus).dot(unit) / len; // 0 at s_-, 1 at s_+
    const double off_line = ((b - s_minus) - (b - s_minus).dot(unit) * unit).norm() / len;
    if (off_line > kCollinearityTol || t < -kCollinearityTol || t > 1.0 + kCollinearityTol)
        throw Error(ErrorCode::NotCollinear, "b is not on the segment [s+, s-]",
                    std::max(off_line, std::max(-t, t - 1.0)));

    EnsembleProbabilities p;
    p.p_plus = std::clamp((b - s_minus).norm() / len, 0.0, 1.0);
    p.p_minus = std::clamp((b - s_plus).norm() / len, 0.0, 1.0);
    return p;
}

ChordEnsemble ensemble_through_point(const SteeringEllipsoid& ellipsoid, const Vec3& b,
                                     const Vec3& chord_direction) {
    if (!ellipsoid.is_full())
        throw Error(ErrorCode::DegenerateEllipsoid, "chord construction needs a full ellipsoid");
    const double dn = chord_direction.norm();
    if (!(dn > 0.0) || !std::isfinite(dn))
        throw Error(ErrorCode::NonUnitDirection, "chord direction must be nonzero");
    const Vec3 d = chord_direction / dn;

    // Work in principal coordinates scaled to the unit sphere.
    const Vec3 inv = ellipsoid.semiaxes.cwiseInverse();
    const Vec3 x0 = (ellipsoid.orientation.transpose() * (b - ellipsoid.center)).cwiseProduct(inv);
    const Vec3 dd = (ellipsoid.orientation.transpose() * d).cwiseProduct(inv);
    const double inside = x0.squaredNorm() - 1.0;
    if (inside >= 0.0)
        throw Error(ErrorCode::PointOutsideEllipsoid, "b is not strictly inside the ellipsoid",
                    inside);

    // |x0 + t dd|^2 = 1 -> A t^2 + 2 B t + C = 0 with C < 0, so roots straddle 0.
    const double A = dd.squaredNorm();
    const double B = x0.dot(dd);
    const double C = inside;
    const double disc = std::sqrt(B * B - A * C);
    // Stable root pair.
    const double q = -(B + std::copysign(disc, B));
    double t1 = q / A;
    double t2 = C / q;
    const double t_plus = std::max(t1, t2);
    const double t_minus = std::min(t1, t2);

    ChordEnsemble out;
    out.s_plus = b + t_plus * d;
    out.s_minus = b + t_minus * d;
    const auto p = probability_from_geometry(b, out.s_plus, out.s_minus);
    out.p_plus = p.p_plus;
    out.p_minus = p.p_minus;
    return out;
}

} // namespace qse
