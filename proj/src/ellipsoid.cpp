#include "qse/ellipsoid.hpp"

#include "qse/error.hpp"
#include "qse/linalg.hpp"

#include <cmath>
#include <numbers>

namespace qse {

namespace {

constexpr double kSteererPurityGuard = 1e-9;

Degeneracy classify(const Vec3& semiaxes) {
    int rank = 0;
    for (int i = 0; i < 3; ++i)
        if (semiaxes(i) > kDegeneracyThreshold) ++rank;
    switch (rank) {
    case 3: return Degeneracy::Full;
    case 2: return Degeneracy::Pancake;
    case 1: return Degeneracy::Needle;
    default: return Degeneracy::Point;
    }
}

} // namespace

std::string_view to_string(Degeneracy d) noexcept {
    switch (d) {
    case Degeneracy::Full: return "Full";
    case Degeneracy::Pancake: return "Pancake";
    case Degeneracy::Needle: return "Needle";
    case Degeneracy::Point: return "Point";
    }
    return "Unknown";
}

double SteeringEllipsoid::surface_residual(const Vec3& x) const {
    if (!is_full())
        throw Error(ErrorCode::DegenerateEllipsoid, "residual needs a full-rank ellipsoid");
    const Vec3 local = orientation.transpose() * (x - center);
    return local.cwiseQuotient(semiaxes).squaredNorm() - 1.0;
}

double SteeringEllipsoid::support(const Vec3& d) const {
    return center.dot(d) + std::sqrt(std::max(0.0, d.dot(Q * d)));
}

Vec3 SteeringEllipsoid::support_point(const Vec3& d) const {
    const double s = std::sqrt(std::max(0.0, d.dot(Q * d)));
    if (s == 0.0) return center;
    return center + Q * d / s;
}

SteeringEllipsoid ellipsoid_from_geometry(const Vec3& center, const Mat3& Q, Party party) {
    SteeringEllipsoid e;
    e.party = party;
    e.center = center;
    e.Q = 0.5 * (Q + Q.transpose());
    const SymEigen3 eig = canonical_eigh3(e.Q);
    e.semiaxes = eig.values.cwiseMax(0.0).cwiseSqrt();
    e.orientation = eig.vectors;
    e.gamma_sq = 1.0;
    e.degeneracy = classify(e.semiaxes);
    return e;
}

SteeringEllipsoid compute_ellipsoid(const PauliDecomposition& decomp, Party party) {
    const PauliDecomposition d = party == Party::Bob ? decomp : decomp.swapped();
    const Vec3& a = d.a;
    const Vec3& b = d.b;
    const Mat3& T = d.T;

    const double steerer_norm = a.norm();
    if (steerer_norm > 1.0 - kSteererPurityGuard)
        throw Error(ErrorCode::DegenerateSteerer,
                    "steering party's marginal is pure (|Bloch vector| = " +
                        std::to_string(steerer_norm) + ")",
                    steerer_norm);

    const double g2 = 1.0 / (1.0 - a.squaredNorm());
    const Vec3 center = g2 * (b - T.transpose() * a);
    const Mat3 Q = g2 * (T.transpose() - b * a.transpose()) *
                   (Mat3::Identity() + g2 * a * a.transpose()) * (T - a * b.transpose());

    SteeringEllipsoid e = ellipsoid_from_geometry(center, Q, party);
    e.gamma_sq = g2;
    return e;
}

double ellipsoid_volume(const SteeringEllipsoid& e) {
    if (!e.is_full()) return 0.0;
    return 4.0 * std::numbers::pi / 3.0 * e.semiaxes.prod();
}

Vec3 surface_point(const SteeringEllipsoid& e, const Vec3& direction) {
    if (!e.is_full())
        throw Error(ErrorCode::DegenerateEllipsoid,
                    std::string("surface parameterization needs a full ellipsoid, got ") +
                        std::string(to_string(e.degeneracy)));
    const double n = direction.norm();
    if (!(n > 0.0) || !std::isfinite(n))
        throw Error(ErrorCode::NonUnitDirection, "direction must be a nonzero finite vector");
    return e.center + e.orientation * e.semiaxes.asDiagonal() * e.orientation.transpose() * (direction / n);
}

} // namespace qse
