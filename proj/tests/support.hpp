#pragma once

// Independent oracles and samplers shared by the test binaries. Nothing here
// calls the library routine it is used to check.

#include "qse/ellipsoid.hpp"
#include "qse/linalg.hpp"
#include "qse/states.hpp"
#include "qse/tangency.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>
#include <vector>

namespace qse::test {

/// QSE_SEED overrides the default seed of the property suites.
inline std::uint64_t seed(std::uint64_t fallback = 20261015) {
    if (const char* s = std::getenv("QSE_SEED")) return std::strtoull(s, nullptr, 10);
    return fallback;
}

inline Mat4c ket_projector(const Eigen::Vector4cd& psi) {
    const Eigen::Vector4cd n = psi.normalized();
    return n * n.adjoint();
}

inline Mat4c singlet() {
    Eigen::Vector4cd psi(0, 1, -1, 0);
    return ket_projector(psi);
}

inline Mat4c maximally_mixed() { return Mat4c::Identity() / 4.0; }

/// q |psi-><psi-| + (1-q) |0><0| (x) I/2, written out by hand.
inline Mat4c spp_matrix(double q) {
    Mat4c m = q * singlet();
    m(0, 0) += (1.0 - q) / 2.0;
    m(1, 1) += (1.0 - q) / 2.0;
    return m;
}

inline Mat4c werner_matrix(double w) {
    return w * singlet() + (1.0 - w) * maximally_mixed();
}

/// Partial trace by explicit index sums: rho_A(i,k) = sum_j rho(2i+j, 2k+j).
inline Mat2c brute_partial_trace(const Mat4c& rho, Party keep) {
    Mat2c r = Mat2c::Zero();
    for (int i = 0; i < 2; ++i)
        for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j)
                r(i, k) += keep == Party::Alice ? rho(2 * i + j, 2 * k + j) : rho(2 * j + i, 2 * j + k);
    return r;
}

inline Mat2c pauli(int i) {
    const cplx I(0, 1);
    Mat2c s;
    if (i == 0) s << 0, 1, 1, 0;
    else if (i == 1) s << 0, -I, I, 0;
    else s << 1, 0, 0, -1;
    return s;
}

/// Tr[(X (x) Y) rho] by explicit sums over the tensor indices.
inline double brute_expectation(const Mat2c& X, const Mat2c& Y, const Mat4c& rho) {
    cplx acc = 0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) acc += X(i, k) * Y(j, l) * rho(2 * k + l, 2 * i + j);
    return acc.real();
}

inline Mat4c kron(const Mat2c& x, const Mat2c& y) {
    Mat4c k;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int r = 0; r < 2; ++r)
                for (int c = 0; c < 2; ++c) k(2 * i + r, 2 * j + c) = x(i, j) * y(r, c);
    return k;
}

/// 1/4 (I + a.sigma (x) I + I (x) b.sigma + sum T_ij sigma_i (x) sigma_j) by explicit products.
inline Mat4c matrix_from_bloch(const Vec3& a, const Vec3& b, const Mat3& T) {
    const Mat2c id = Mat2c::Identity();
    Mat4c m = kron(id, id);
    for (int i = 0; i < 3; ++i) {
        m += a(i) * kron(pauli(i), id) + b(i) * kron(id, pauli(i));
        for (int j = 0; j < 3; ++j) m += T(i, j) * kron(pauli(i), pauli(j));
    }
    return m / 4.0;
}

inline Mat4c x_state_matrix(double az, double bz, double tx, double ty, double tz) {
    return matrix_from_bloch(Vec3(0, 0, az), Vec3(0, 0, bz), Vec3(tx, ty, tz).asDiagonal().toDenseMatrix());
}

struct BruteDecomp {
    Vec3 a, b;
    Mat3 T;
};

inline BruteDecomp brute_pauli(const Mat4c& rho) {
    BruteDecomp d;
    const Mat2c id = Mat2c::Identity();
    for (int i = 0; i < 3; ++i) {
        d.a(i) = brute_expectation(pauli(i), id, rho);
        d.b(i) = brute_expectation(id, pauli(i), rho);
        for (int j = 0; j < 3; ++j) d.T(i, j) = brute_expectation(pauli(i), pauli(j), rho);
    }
    return d;
}

inline Vec3 random_unit(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Vec3 v;
    do v = Vec3(n(rng), n(rng), n(rng));
    while (v.norm() < 1e-6);
    return v.normalized();
}

inline double angle(const Vec3& x, const Vec3& y) { return std::atan2(x.cross(y).norm(), x.dot(y)); }

inline Vec3 random_in_ball(std::mt19937_64& rng, double radius = 1.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return random_unit(rng) * radius * std::cbrt(u(rng));
}

inline Mat3 random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Mat3 g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) g(i, j) = n(rng);
    Eigen::HouseholderQR<Mat3> qr(g);
    Mat3 q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) = -q.col(0);
    return q;
}

/// Convex mixture of random pure product states (separable by construction).
inline Mat4c random_separable(std::mt19937_64& rng, int terms = 5) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Mat4c rho = Mat4c::Zero();
    double total = 0.0;
    for (int t = 0; t < terms; ++t) {
        const double w = u(rng);
        const Mat2c ra = (Mat2c::Identity() + [&] {
            const Vec3 v = random_unit(rng);
            return Mat2c(v(0) * pauli(0) + v(1) * pauli(1) + v(2) * pauli(2));
        }()) / 2.0;
        const Mat2c rb = (Mat2c::Identity() + [&] {
            const Vec3 v = random_unit(rng);
            return Mat2c(v(0) * pauli(0) + v(1) * pauli(1) + v(2) * pauli(2));
        }()) / 2.0;
        rho += w * kron(ra, rb);
        total += w;
    }
    return rho / total;
}

/// Full ellipsoid touching the unit sphere from inside at one point.
struct TangentEllipsoid {
    SteeringEllipsoid ellipsoid;
    Vec3 touch;   ///< tangency point on the unit sphere
};

inline TangentEllipsoid random_tangent_ellipsoid(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> axis(0.05, 0.6);
    while (true) {
        const Mat3 R = random_rotation(rng);
        const Vec3 s(axis(rng), axis(rng), axis(rng));
        const Mat3 L = R * s.asDiagonal() * R.transpose();
        const Mat3 Q = L * L;
        const Vec3 y = L * random_unit(rng);               // surface offset from centre
        const Vec3 normal = (Q.inverse() * y).normalized();
        const Vec3 c = normal - y;                          // puts centre + y on the sphere
        // Reject unless the whole ellipsoid stays in the ball.
        SphereQuadratic q;
        q.M = Q;
        q.w = L * c;
        q.c0 = c.squaredNorm();
        if (trs_maximize(q).max_value > 1.0 + 1e-12) continue;
        return {ellipsoid_from_geometry(c, Q), c + y};
    }
}

/// Second intersection of the ray t (1, k) with the ellipse through the origin
/// tangent to the x axis, from the implicit equation (x - c)^T A (x - c) = 1.
inline Vec2 conic_line_oracle(double k, double u, double v, double theta) {
    Eigen::Matrix2d Rm;
    Rm << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    const Eigen::Matrix2d A = Rm * Eigen::Vector2d(1 / (u * u), 1 / (v * v)).asDiagonal() * Rm.transpose();
    // Centre on the normal through the origin at the distance that puts the origin on the curve.
    const Eigen::Matrix2d Ainv = A.inverse();
    const Vec2 c = Ainv * Vec2(0, 1) / std::sqrt(Vec2(0, 1).dot(Ainv * Vec2(0, 1)));
    const Vec2 d(1.0, k);
    // (t d - c)^T A (t d - c) = 1 with c^T A c = 1 -> t = 2 d^T A c / d^T A d.
    const double t = 2.0 * d.dot(A * c) / d.dot(A * d);
    return t * d;
}

/// Parameter of the second intersection of x0 + t d with
/// {(x - c)^T A (x - c) = 1}, given that x0 is already on the curve.
inline double second_hit(const Vec2& x0, const Vec2& d, const Eigen::Matrix2d& A, const Vec2& c) {
    return -2.0 * d.dot(A * (x0 - c)) / d.dot(A * d);
}

/// Golden-angle lattice, written here so the oracle shares no code with the library.
inline std::vector<Vec3> lattice(int n) {
    std::vector<Vec3> pts;
    pts.reserve(n);
    const double ga = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / n;
        const double r = std::sqrt(1.0 - z * z);
        pts.emplace_back(r * std::cos(ga * i), r * std::sin(ga * i), z);
    }
    return pts;
}

struct OracleMax {
    double value = -1e300;
    std::vector<Vec3> points;   ///< refined local maxima, best first
    std::vector<double> values;
};

/// Grid scan followed by the ascent n <- normalize((M + sI) n + w), which never
/// decreases g once M + sI is PSD. Seeds are the best grid points at least
/// 0.3 rad apart.
inline OracleMax grid_oracle(const SphereQuadratic& q, int n = 20000, int seeds = 8, int iters = 20000) {
    const auto pts = lattice(n);
    std::vector<std::pair<double, int>> order;
    for (int i = 0; i < n; ++i) order.emplace_back(q(pts[i]), i);
    std::sort(order.begin(), order.end(), [](auto& x, auto& y) { return x.first > y.first; });
    std::vector<Vec3> chosen;
    for (const auto& [g, i] : order) {
        if (static_cast<int>(chosen.size()) == seeds) break;
        bool far = true;
        for (const Vec3& c : chosen) far = far && angle(c, pts[i]) > 0.3;
        if (far) chosen.push_back(pts[i]);
    }
    const double shift = std::abs(q.M.trace()) + q.M.norm() + 1.0;
    const Mat3 A = q.M + shift * Mat3::Identity();
    OracleMax out;
    std::vector<std::pair<double, Vec3>> found;
    for (Vec3 x : chosen) {
        for (int it = 0; it < iters; ++it) {
            const Vec3 nx = (A * x + q.w).normalized();
            if ((nx - x).norm() < 1e-15) break;
            x = nx;
        }
        found.emplace_back(q(x), x);
    }
    std::sort(found.begin(), found.end(), [](auto& x, auto& y) { return x.first > y.first; });
    for (auto& [g, x] : found) {
        out.points.push_back(x);
        out.values.push_back(g);
    }
    out.value = found.front().first;
    return out;
}

/// Implicit matrix of the ellipse with semiaxes u (axis (cos, sin)) and v
/// (axis (-sin, cos)).
inline Eigen::Matrix2d ellipse_matrix(double u, double v, double theta) {
    Eigen::Matrix2d Rm;
    Rm << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
    return Rm * Eigen::Vector2d(1 / (u * u), 1 / (v * v)).asDiagonal() * Rm.transpose();
}

/// Plane section of {(x - c)^T Q^-1 (x - c) = 1} by origin + span(e1, e2),
/// from the restricted quadratic form. Returns centre (plane coordinates) and
/// semiaxes sorted descending.
struct PlaneConic {
    Vec2 center;
    Vec2 semiaxes;
    Eigen::Matrix2d A;   ///< (x - center)^T A (x - center) = 1
};

inline PlaneConic plane_section_oracle(const Mat3& Q, const Vec3& c, const Vec3& origin, const Vec3& e1,
                                       const Vec3& e2) {
    Eigen::Matrix<double, 3, 2> E;
    E.col(0) = e1;
    E.col(1) = e2;
    const Mat3 P = Q.inverse();
    const Eigen::Matrix2d A2 = E.transpose() * P * E;
    const Vec2 lin = E.transpose() * P * (origin - c);
    const double k0 = (origin - c).dot(P * (origin - c)) - 1.0;
    PlaneConic out;
    out.center = -A2.inverse() * lin;
    const double rhs = -(k0 - out.center.dot(A2 * out.center));
    out.A = A2 / rhs;
    // Eigenvalues of a symmetric 2x2 in closed form.
    const double tr = out.A.trace(), det = out.A.determinant();
    const double disc = std::sqrt(std::max(0.0, tr * tr / 4 - det));
    out.semiaxes = Vec2(1 / std::sqrt(tr / 2 - disc), 1 / std::sqrt(tr / 2 + disc));
    return out;
}

/// Required LHS weight along the chord of slope k, computed from conic-line
/// intersections only: |pe|/|pq| * |bf|/|ef|, f the second point of line e-b
/// on the ellipse.
inline double required_weight(double k, const Eigen::Matrix2d& A, const Vec2& c, double R, const Vec2& b) {
    const Vec2 d = Vec2(1.0, k).normalized();
    const double te = second_hit(Vec2::Zero(), d, A, c);
    const double tq = second_hit(Vec2::Zero(), d, Eigen::Matrix2d::Identity() / (R * R), Vec2(0, R));
    const Vec2 e = te * d;
    const Vec2 de = (b - e).normalized();
    const Vec2 f = e + second_hit(e, de, A, c) * de;
    return std::abs(te / tq) * (b - f).norm() / (e - f).norm();
}

/// Geometric probability of p on the chord through b: |b f_p| / |p f_p|.
inline double chord_probability(const Eigen::Matrix2d& A, const Vec2& c, const Vec2& b) {
    const Vec2 d = b.normalized();
    const Vec2 f = second_hit(Vec2::Zero(), d, A, c) * d;
    return (b - f).norm() / f.norm();
}

/// Infimum of required_weight over a log grid of slopes in [kmin, kmax].
inline double kgrid_infimum(const Eigen::Matrix2d& A, const Vec2& c, double R, const Vec2& b,
                            double kmin = 1e-6, double kmax = 1e-3, int n = 200) {
    double inf = 1e300;
    for (int i = 0; i < n; ++i) {
        const double k = kmin * std::pow(kmax / kmin, double(i) / (n - 1));
        inf = std::min(inf, required_weight(k, A, c, R, b));
    }
    return inf;
}

inline std::vector<Vec3> random_polytope(std::mt19937_64& rng, int vertices) {
    std::vector<Vec3> v;
    for (int i = 0; i < vertices; ++i) v.push_back(random_in_ball(rng));
    return v;
}

} // namespace qse::test
