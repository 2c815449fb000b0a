#include "qse/tangency.hpp"

#include "qse/assemblage.hpp"
#include "qse/error.hpp"
#include "qse/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace qse {

namespace {

constexpr double kSteererPurityGuard = 1e-9;
constexpr double kHardCaseTol = 1e-10;
constexpr double kScanKeep = -1e-6;
constexpr double kSeedSeparation = 0.25;
constexpr int kMaxSeeds = 16;

double angle_between(const Vec3& x, const Vec3& y) {
    return std::atan2(x.cross(y).norm(), x.dot(y));
}

bool lex_greater(const Vec3& x, const Vec3& y) {
    for (int i = 0; i < 3; ++i)
        if (std::abs(x(i) - y(i)) > 1e-12) return x(i) > y(i);
    return false;
}

// Canonical measurement axis: first nonzero component positive.
std::pair<Vec3, int> canonical_axis(const Vec3& n) {
    for (int i = 0; i < 3; ++i) {
        if (std::abs(n(i)) > 1e-12)
            return n(i) < 0 ? std::pair{Vec3(Vec3::Zero() - n), -1} : std::pair{n, 1};
    }
    return {n, 1};
}

Vec2c top_eigenvector(const Mat2c& m) {
    Eigen::SelfAdjointEigenSolver<Mat2c> es(m);
    return es.eigenvectors().col(1);
}

// Local maximization on the sphere: Newton in the tangent plane, gradient
// ascent with backtracking whenever Newton fails to increase g.
ScanCandidate refine(const SphereQuadratic& q, Vec3 n) {
    double f = q(n);
    for (int iter = 0; iter < 200; ++iter) {
        const Vec3 egrad = 2.0 * (q.M * n + q.w);
        const Vec3 rgrad = egrad - n.dot(egrad) * n;
        if (rgrad.norm() < 1e-15) break;

        const Vec3 t1 = any_orthogonal(n);
        const Vec3 t2 = n.cross(t1);
        const double lam = n.dot(egrad);
        Eigen::Matrix2d H;
        H << 2.0 * t1.dot(q.M * t1) - lam, 2.0 * t1.dot(q.M * t2),
             2.0 * t2.dot(q.M * t1), 2.0 * t2.dot(q.M * t2) - lam;
        const Eigen::Vector2d g(t1.dot(egrad), t2.dot(egrad));

        bool moved = false;
        if (H(0, 0) < 0.0 && H.determinant() > 0.0) {
            const Eigen::Vector2d s = -H.ldlt().solve(g);
            const Vec3 trial = (n + s(0) * t1 + s(1) * t2).normalized();
            const double ft = q(trial);
            if (ft >= f) {
                moved = (trial - n).norm() > 0.0;
                n = trial;
                f = ft;
            }
        }
        if (!moved) {
            double step = 1.0 / (2.0 * (q.M.norm() + q.w.norm()) + 1.0);
            for (int k = 0; k < 60; ++k, step *= 0.5) {
                const Vec3 trial = (n + step * rgrad).normalized();
                const double ft = q(trial);
                if (ft > f) {
                    n = trial;
                    f = ft;
                    moved = true;
                    break;
                }
            }
        }
        if (!moved) break;
    }
    return {n, f};
}

} // namespace

void ToleranceConfig::validate() const {
    if (!(tangency_tol > 0.0) || !(purity_tol > 0.0) || !(cluster_angle > 0.0))
        throw Error(ErrorCode::InvalidInput, "tolerances must be strictly positive");
    if (!(tangency_tol < 1e-6))
        throw Error(ErrorCode::InvalidInput, "tangency tolerance must be below 1e-6", tangency_tol);
}

SphereQuadratic build_quadratic(const PauliDecomposition& decomp, Party steered) {
    const PauliDecomposition d = steered == Party::Bob ? decomp : decomp.swapped();
    const double steerer_norm = d.a.norm();
    if (steerer_norm > 1.0 - kSteererPurityGuard)
        throw Error(ErrorCode::DegenerateSteerer,
                    "steering party's marginal is pure (|Bloch vector| = " +
                        std::to_string(steerer_norm) + ")",
                    steerer_norm);
    SphereQuadratic q;
    q.M = d.T * d.T.transpose() - d.a * d.a.transpose();
    q.M = 0.5 * (q.M + q.M.transpose());
    q.w = d.T * d.b - d.a;
    q.c0 = d.b.squaredNorm() - 1.0;
    return q;
}

std::string_view to_string(ArgmaxKind k) noexcept {
    switch (k) {
    case ArgmaxKind::Point: return "Point";
    case ArgmaxKind::TwoPoints: return "TwoPoints";
    case ArgmaxKind::Circle: return "Circle";
    case ArgmaxKind::Sphere: return "Sphere";
    }
    return "Unknown";
}

TrsSolution trs_maximize(const SphereQuadratic& q, double cluster_angle) {
    Eigen::SelfAdjointEigenSolver<Mat3> es(0.5 * (q.M + q.M.transpose()));
    Vec3 lam;
    Mat3 V;
    for (int i = 0; i < 3; ++i) {
        lam(i) = es.eigenvalues()(2 - i);
        V.col(i) = es.eigenvectors().col(2 - i);
    }
    const Vec3 wt = V.transpose() * q.w;
    Vec3 gap;
    for (int i = 0; i < 3; ++i) gap(i) = lam(0) - lam(i);

    int top = 1;
    while (top < 3 && gap(top) <= kHardCaseTol) ++top;
    const double w_top = wt.head(top).norm();

    TrsSolution sol;
    if (w_top <= kHardCaseTol) {
        Vec3 n0 = Vec3::Zero();
        for (int i = top; i < 3; ++i) n0 += wt(i) / gap(i) * V.col(i);
        const double r2 = 1.0 - n0.squaredNorm();
        if (r2 >= -kHardCaseTol) {
            const double r = std::sqrt(std::max(r2, 0.0));
            sol.hard_case = true;
            sol.multiplier = lam(0);
            const Vec3 p1 = (n0 + r * V.col(0)).normalized();
            const Vec3 p2 = (n0 - r * V.col(0)).normalized();
            sol.max_value = q(p1);
            if (top == 3) {
                sol.kind = ArgmaxKind::Sphere;
                sol.circle_radius = 1.0;
            } else if (angle_between(p1, p2) < cluster_angle) {
                sol.kind = ArgmaxKind::Point;
                sol.points = {n0.normalized()};
                sol.max_value = q(sol.points.front());
            } else if (top == 1) {
                sol.kind = ArgmaxKind::TwoPoints;
                sol.points = {p1, p2};
                sol.max_value = std::max(q(p1), q(p2));
            } else {
                sol.kind = ArgmaxKind::Circle;
                sol.circle_center = n0;
                sol.circle_u1 = V.col(0);
                sol.circle_u2 = V.col(1);
                sol.circle_radius = r;
            }
            return sol;
        }
    }

    // Secular equation phi(delta) = sum wt_i^2 / (delta + gap_i)^2 = 1 with
    // mu = lambda_max + delta; phi is decreasing and phi(|w|) <= 1.
    const auto phi = [&](double delta) {
        double s = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double den = delta + gap(i);
            if (den == 0.0) {
                if (wt(i) != 0.0) return std::numeric_limits<double>::infinity();
                continue;
            }
            s += wt(i) * wt(i) / (den * den);
        }
        return s;
    };
    double lo = 0.0;
    double hi = q.w.norm();
    if (!(hi > 0.0) || !(phi(hi) <= 1.0 + 1e-12) || !(phi(lo) >= 1.0))
        throw Error(ErrorCode::NumericFailure, "trs_maximize: secular equation not bracketed",
                    phi(hi) - 1.0);
    while (true) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (phi(mid) > 1.0 ? lo : hi) = mid;
    }
    const double delta = hi;
    Vec3 n = Vec3::Zero();
    for (int i = 0; i < 3; ++i) n += wt(i) / (delta + gap(i)) * V.col(i);
    n.normalize();
    sol.kind = ArgmaxKind::Point;
    sol.multiplier = lam(0) + delta;
    sol.points = {n};
    sol.max_value = q(n);
    return sol;
}

std::string_view to_string(CountClass c) noexcept {
    switch (c) {
    case CountClass::Zero: return "Zero";
    case CountClass::One: return "One";
    case CountClass::Two: return "Two";
    case CountClass::Infinite: return "Infinite";
    }
    return "Unknown";
}

int count_value(CountClass c) noexcept {
    switch (c) {
    case CountClass::Zero: return 0;
    case CountClass::One: return 1;
    case CountClass::Two: return 2;
    case CountClass::Infinite: return -1;
    }
    return -1;
}

TangencyReport find_tangency(const PauliDecomposition& decomp, Party steered,
                             const ToleranceConfig& cfg) {
    cfg.validate();
    const SphereQuadratic q = build_quadratic(decomp, steered);
    const PauliDecomposition d = steered == Party::Bob ? decomp : decomp.swapped();

    TangencyReport rep;
    rep.steered = steered;
    rep.purity = decomp.purity();
    const TrsSolution sol = trs_maximize(q, cfg.cluster_angle);
    rep.max_g = sol.max_value;

    if (rep.purity >= 1.0 - cfg.purity_tol) {
        rep.count = CountClass::Infinite;
        return rep;
    }
    if (sol.max_value < -cfg.tangency_tol) {
        rep.count = CountClass::Zero;
        return rep;
    }
    if (sol.kind == ArgmaxKind::Circle || sol.kind == ArgmaxKind::Sphere)
        throw Error(ErrorCode::InconsistentWithClassification,
                    std::string("find_tangency: mixed state touches the sphere along a ") +
                        (sol.kind == ArgmaxKind::Circle ? "circle" : "whole sphere") +
                        " (purity " + std::to_string(rep.purity) + ")",
                    sol.max_value);

    for (const Vec3& n : sol.points) {
        TangencyPoint tp;
        const double s = 1.0 + d.a.dot(n);
        tp.bloch_point = (d.b + d.T.transpose() * n) / s;
        std::tie(tp.direction, tp.outcome_sign) = canonical_axis(n);
        tp.probability = 0.5 * s;
        tp.residual = std::abs(q(n));
        rep.points.push_back(tp);
    }
    std::sort(rep.points.begin(), rep.points.end(),
              [](const TangencyPoint& x, const TangencyPoint& y) {
                  return lex_greater(x.bloch_point, y.bloch_point);
              });
    rep.count = rep.points.size() == 1 ? CountClass::One : CountClass::Two;
    return rep;
}

namespace {

double effect_residual(const Mat2c& effect, const Vec3& pure_bloch) {
    const Vec2c psi = top_eigenvector(qubit_matrix(pure_bloch.normalized()));
    return (effect * psi).norm();
}

double fidelity_pure(const Vec3& pure_bloch, const Vec3& state_bloch) {
    return 0.5 * (1.0 + pure_bloch.normalized().dot(state_bloch));
}

Vec3 steered_bloch(const PauliDecomposition& d, const Vec3& effect, Party measuring) {
    const ConditionalEnsemble ens = steer(d, effect.normalized(), measuring);
    if (!ens.state_plus)
        throw Error(ErrorCode::NumericFailure, "correspondence: effect has zero probability");
    return ens.state_plus->bloch();
}

} // namespace

std::vector<CorrespondencePair> correspondence_map(const TwoQubitState& state,
                                                   const TangencyReport& bob_tangency,
                                                   const ToleranceConfig& cfg) {
    if (bob_tangency.count != CountClass::One && bob_tangency.count != CountClass::Two)
        throw Error(ErrorCode::InvalidInput,
                    "correspondence_map needs one or two tangency points on Bob's side");
    const PauliDecomposition d = pauli_decompose(state);
    const TangencyReport alice = find_tangency(d, Party::Alice, cfg);
    if (alice.count != bob_tangency.count)
        throw Error(ErrorCode::CountMismatch,
                    "Alice has " + std::string(to_string(alice.count)) +
                        " tangency points, Bob has " +
                        std::string(to_string(bob_tangency.count)));

    std::vector<CorrespondencePair> out;
    for (const TangencyPoint& bp : bob_tangency.points) {
        const Vec3 n_a = bp.effect_bloch();
        const Vec3 predicted_alpha = -n_a;
        const auto best = std::min_element(
            alice.points.begin(), alice.points.end(),
            [&](const TangencyPoint& x, const TangencyPoint& y) {
                return angle_between(x.bloch_point, predicted_alpha) <
                       angle_between(y.bloch_point, predicted_alpha);
            });
        const Vec3 n_b = best->effect_bloch();

        CorrespondencePair pair;
        pair.alice_effect = projector(n_a);
        pair.bob_pure = QubitState::from_bloch(bp.bloch_point);
        pair.bob_effect = projector(n_b);
        pair.alice_pure = QubitState::from_bloch(best->bloch_point);
        pair.residual_alice = effect_residual(pair.alice_effect, best->bloch_point);
        pair.residual_bob = effect_residual(pair.bob_effect, bp.bloch_point);
        pair.fidelity_alice =
            fidelity_pure(best->bloch_point, steered_bloch(d, n_b, Party::Bob));
        pair.fidelity_bob = fidelity_pure(bp.bloch_point, steered_bloch(d, n_a, Party::Alice));
        out.push_back(pair);
    }
    return out;
}

CorrespondencePair correspondence_for_effect(const TwoQubitState& state, const Vec3& alice_effect) {
    const PauliDecomposition d = pauli_decompose(state);
    const Vec3 n_a = alice_effect.normalized();
    const Vec3 beta = steered_bloch(d, n_a, Party::Alice);
    const Vec3 alpha = -n_a;
    const Vec3 n_b = -beta.normalized();

    CorrespondencePair pair;
    pair.alice_effect = projector(n_a);
    pair.bob_pure = QubitState::from_bloch(beta);
    pair.bob_effect = projector(n_b);
    pair.alice_pure = QubitState::from_bloch(alpha);
    pair.residual_alice = effect_residual(pair.alice_effect, alpha);
    pair.residual_bob = effect_residual(pair.bob_effect, beta);
    pair.fidelity_alice = fidelity_pure(alpha, steered_bloch(d, n_b, Party::Bob));
    pair.fidelity_bob = fidelity_pure(beta, beta);
    return pair;
}

std::vector<ScanCandidate> scan_sphere_quadratic(const SphereQuadratic& q, int grid_size) {
    const std::vector<Vec3> grid = fibonacci_sphere(grid_size);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = q(grid[i]);
    std::vector<std::size_t> order(grid.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return values[x] > values[y]; });

    std::vector<Vec3> seeds;
    const double min_cos = std::cos(kSeedSeparation);
    for (std::size_t idx : order) {
        if (static_cast<int>(seeds.size()) >= kMaxSeeds) break;
        const Vec3& p = grid[idx];
        if (std::all_of(seeds.begin(), seeds.end(),
                        [&](const Vec3& s) { return s.dot(p) < min_cos; }))
            seeds.push_back(p);
    }

    std::vector<ScanCandidate> out;
    for (const Vec3& s : seeds) {
        const ScanCandidate c = refine(q, s);
        const auto dup = std::find_if(out.begin(), out.end(), [&](const ScanCandidate& o) {
            return angle_between(o.direction, c.direction) < 1e-3;
        });
        if (dup == out.end())
            out.push_back(c);
        else if (c.g > dup->g)
            *dup = c;
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const ScanCandidate& x, const ScanCandidate& y) { return x.g > y.g; });
    return out;
}

std::vector<ScanCandidate> scan_pure_directions(const PauliDecomposition& decomp, Party steered,
                                                int grid_size) {
    if (grid_size < 1000)
        throw Error(ErrorCode::OutOfRange, "scan grid must have at least 1000 nodes",
                    static_cast<double>(grid_size));
    auto cands = scan_sphere_quadratic(build_quadratic(decomp, steered), grid_size);
    std::erase_if(cands, [](const ScanCandidate& c) { return c.g < kScanKeep; });
    return cands;
}

} // namespace qse
