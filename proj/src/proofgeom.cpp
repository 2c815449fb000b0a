#include "qse/proofgeom.hpp"

#include "qse/error.hpp"
#include "qse/linalg.hpp"
#include "qse/tangency.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace qse::proof {

namespace {

constexpr int kWitnessGrid = 20000;
constexpr double kWitnessMargin = 1e-9;
constexpr std::size_t kFacetCheckLimit = 30;

void require_axes(double u, double v) {
    if (!(u > 0.0) || !(v > 0.0) || !std::isfinite(u) || !std::isfinite(v))
        throw Error(ErrorCode::DegenerateEllipse, "ellipse semiaxes must be positive");
}

const Eigen::Matrix3Xd& witness_grid() {
    static const Eigen::Matrix3Xd grid = [] {
        const auto pts = fibonacci_sphere(kWitnessGrid);
        Eigen::Matrix3Xd g(3, static_cast<Eigen::Index>(pts.size()));
        for (std::size_t i = 0; i < pts.size(); ++i) g.col(static_cast<Eigen::Index>(i)) = pts[i];
        return g;
    }();
    return grid;
}

struct SupportGap {
    const SteeringEllipsoid& el;
    const Eigen::Matrix3Xd& verts;

    double operator()(const Vec3& d) const {
        return el.support(d) - (verts.transpose() * d).maxCoeff();
    }
};

// Point of the ellipsoid farthest from the origin.
Vec3 farthest_point(const SteeringEllipsoid& el) {
    const Mat3 L = sqrtm_psd(el.Q);
    SphereQuadratic q;
    q.M = el.Q;
    q.w = L * el.center;
    q.c0 = el.center.squaredNorm();
    const TrsSolution sol = trs_maximize(q);
    Vec3 x;
    switch (sol.kind) {
    case ArgmaxKind::Point:
    case ArgmaxKind::TwoPoints: x = sol.points.front(); break;
    case ArgmaxKind::Circle: x = sol.circle_center + sol.circle_radius * sol.circle_u1; break;
    case ArgmaxKind::Sphere: x = Vec3::UnitZ(); break;
    }
    return el.center + L * x.normalized();
}

std::pair<Vec3, double> pattern_search(const SupportGap& gap, Vec3 d) {
    d.normalize();
    double best = gap(d);
    double step = 0.05;
    while (step > 1e-10) {
        const Vec3 t1 = any_orthogonal(d);
        const Vec3 t2 = d.cross(t1);
        bool improved = false;
        for (const Vec3& t : {t1, Vec3(-t1), t2, Vec3(-t2)}) {
            const Vec3 trial = (d + step * t).normalized();
            const double val = gap(trial);
            if (val > best) {
                best = val;
                d = trial;
                improved = true;
                break;
            }
        }
        if (!improved) step *= 0.5;
    }
    return {d, best};
}

std::optional<bool> confirm_by_facets(std::span<const Vec3> verts, const Vec3& w) {
    const std::size_t m = verts.size();
    bool any_facet = false;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k) {
                Vec3 nrm = (verts[j] - verts[i]).cross(verts[k] - verts[i]);
                if (nrm.norm() < 1e-12) continue;
                nrm.normalize();
                const double off = nrm.dot(verts[i]);
                bool below = true, above = true;
                for (const Vec3& x : verts) {
                    const double s = nrm.dot(x) - off;
                    below = below && s <= 1e-12;
                    above = above && s >= -1e-12;
                }
                if (!below && !above) continue;
                any_facet = true;
                const double out = nrm.dot(w) - off;
                if ((below && out > 1e-12) || (above && out < -1e-12)) return true;
            }
    if (!any_facet) return std::nullopt;
    return false;
}

} // namespace

SectionFrame section(double sphere_r, const SteeringEllipsoid& ellipsoid, const Vec3& p,
                     const Vec3& b, const Vec3& e) {
    if (!ellipsoid.is_full())
        throw Error(ErrorCode::DegenerateEllipse, "section needs a full ellipsoid");
    const Vec3 pb = b - p, pe = e - p;
    Vec3 n = pb.cross(pe);
    const double scale = pb.norm() * pe.norm();
    if (!(scale > 0.0) || n.norm() <= 1e-10 * scale)
        throw Error(ErrorCode::CollinearPoints, "p, b and e do not span a plane",
                    scale > 0.0 ? n.norm() / scale : 0.0);
    n.normalize();

    const double sphere_dev = std::abs(p.norm() - sphere_r);
    const double surf_dev = std::abs(ellipsoid.surface_residual(p));
    const Mat3 Qi = ellipsoid.orientation *
                    ellipsoid.semiaxes.cwiseAbs2().cwiseInverse().asDiagonal() *
                    ellipsoid.orientation.transpose();
    const Vec3 grad = Qi * (p - ellipsoid.center);
    const double normal_dev = grad.normalized().cross(p.normalized()).norm();
    if (sphere_dev > 1e-7 || surf_dev > 1e-7 || normal_dev > 1e-6 ||
        grad.dot(p) <= 0.0)
        throw Error(ErrorCode::NotTangentAtP, "p is not a tangency point of the ellipsoid",
                    std::max({sphere_dev, surf_dev, normal_dev}));

    SectionFrame f;
    f.origin = p;
    f.normal = n;
    const Vec3 o = p.dot(n) * n;
    f.R = (o - p).norm();
    if (!(f.R > 0.0))
        throw Error(ErrorCode::DegenerateEllipse, "plane only touches the sphere");
    f.e2 = (o - p) / f.R;
    f.e1 = f.e2.cross(n);
    f.circle_center = Vec2(0.0, f.R);

    Eigen::Matrix<double, 3, 2> P;
    P.col(0) = f.e1;
    P.col(1) = f.e2;
    const Vec3 d0 = p - ellipsoid.center;
    const Eigen::Matrix2d A2 = P.transpose() * Qi * P;
    const Vec2 beta = P.transpose() * Qi * d0;
    const double gamma = d0.dot(Qi * d0) - 1.0;
    const Vec2 c2 = -A2.ldlt().solve(beta);
    const double kappa = c2.dot(A2 * c2) - gamma;
    if (!(kappa > 0.0))
        throw Error(ErrorCode::DegenerateEllipse, "plane misses the ellipsoid interior", kappa);
    const Eigen::Matrix2d A = A2 / kappa;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(A);
    if (!(es.eigenvalues()(0) > 0.0))
        throw Error(ErrorCode::DegenerateEllipse, "section is not an ellipse");
    f.ellipse_center = c2;

    const Vec2 axes = es.eigenvalues().cwiseSqrt().cwiseInverse();
    const int iv = std::abs(es.eigenvectors()(1, 0)) >= std::abs(es.eigenvectors()(1, 1)) ? 0 : 1;
    f.v = axes(iv);
    f.u = axes(1 - iv);
    if (std::abs(f.u - f.v) <= 1e-12 * std::max(f.u, f.v)) {
        f.theta = 0.0;
        return f;
    }
    Vec2 dv = es.eigenvectors().col(iv);
    if (dv(0) > 0.0 || (dv(0) == 0.0 && dv(1) < 0.0)) dv = -dv;
    f.theta = std::atan2(-dv(0), dv(1));
    if (f.theta >= std::numbers::pi) f.theta -= std::numbers::pi;
    return f;
}

SectionConstants section_constants(double u, double v, double theta, double k) {
    require_axes(u, v);
    const double u2 = u * u, v2 = v * v;
    const double s = std::sin(theta), c = std::cos(theta);
    SectionConstants out;
    out.G = u2 * v2 * std::sqrt(u2 + v2 + (v2 - u2) * std::cos(2.0 * theta));
    out.W0 = u2 * s * s + v2 * c * c;
    out.Wk = (k * k * v2 + u2) * s * s + (k * k * u2 + v2) * c * c +
             k * (v2 - u2) * std::sin(2.0 * theta);
    return out;
}

Vec2 chord_circle(double k, double R) {
    if (!(R > 0.0)) throw Error(ErrorCode::InvalidInput, "circle radius must be positive", R);
    const double den = 1.0 + k * k;
    return {2.0 * k * R / den, 2.0 * k * k * R / den};
}

Vec2 chord_ellipse(double k, double u, double v, double theta) {
    const SectionConstants sc = section_constants(u, v, theta, k);
    const double s = std::sqrt(2.0) * k * sc.G / (sc.W0 * sc.Wk);
    return {s, s * k};
}

double chord_ratio(double k, double u, double v, double theta, double R) {
    if (!(R > 0.0)) throw Error(ErrorCode::InvalidInput, "circle radius must be positive", R);
    const SectionConstants sc = section_constants(u, v, theta, k);
    return (1.0 + k * k) * sc.G / (std::sqrt(2.0) * R * sc.W0 * sc.Wk);
}

double lhs_lower_bound(double u, double v, double theta, double R, double p_p) {
    if (!(R > 0.0)) throw Error(ErrorCode::InvalidInput, "circle radius must be positive", R);
    if (!(p_p >= 0.0 && p_p <= 1.0))
        throw Error(ErrorCode::OutOfRange, "p_p must lie in [0, 1]", p_p);
    const SectionConstants sc = section_constants(u, v, theta, 0.0);
    return sc.G / (std::sqrt(2.0) * R * sc.W0) * p_p;
}

std::optional<NoncontainmentWitness>
polytope_noncontainment_witness(const SteeringEllipsoid& ellipsoid, std::span<const Vec3> vertices) {
    if (vertices.empty()) throw Error(ErrorCode::InvalidInput, "polytope has no vertices");
    Eigen::Matrix3Xd verts(3, static_cast<Eigen::Index>(vertices.size()));
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        if (!(vertices[i].norm() <= 1.0 + 1e-10))
            throw Error(ErrorCode::InvalidInput, "polytope vertex outside the unit ball",
                        vertices[i].norm());
        verts.col(static_cast<Eigen::Index>(i)) = vertices[i];
    }
    const SupportGap gap{ellipsoid, verts};

    const Eigen::Matrix3Xd& grid = witness_grid();
    const Eigen::RowVectorXd h_poly = (verts.transpose() * grid).colwise().maxCoeff();
    const Eigen::RowVectorXd h_quad =
        (grid.array() * (ellipsoid.Q * grid).array()).colwise().sum().max(0.0).sqrt().matrix();
    const Eigen::RowVectorXd margins = ellipsoid.center.transpose() * grid + h_quad - h_poly;
    Eigen::Index best_idx = 0;
    margins.maxCoeff(&best_idx);

    auto [d, m] = pattern_search(gap, grid.col(best_idx));
    const Vec3 far = farthest_point(ellipsoid);
    if (far.norm() > 0.0) {
        auto [d2, m2] = pattern_search(gap, far.normalized());
        if (m2 > m) {
            d = d2;
            m = m2;
        }
    }
    if (!(m > kWitnessMargin)) return std::nullopt;

    NoncontainmentWitness w;
    w.direction = d;
    w.margin = m;
    w.point = ellipsoid.support_point(d);
    if (vertices.size() <= kFacetCheckLimit) w.facet_confirmed = confirm_by_facets(vertices, w.point);
    return w;
}

} // namespace qse::proof
