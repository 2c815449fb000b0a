#pragma once

#include "qse/states.hpp"
#include "qse/types.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace qse {

struct ToleranceConfig {
    double tangency_tol = 1e-9;   ///< on g
    double purity_tol = 1e-12;    ///< on 1 - Tr(rho^2)
    double cluster_angle = 1e-4;  ///< radians, maximizer dedup

    /// InvalidInput unless every field is positive and tangency_tol < 1e-6.
    void validate() const;
};

/// g(n) = n^T M n + 2 w^T n + c0 on the unit sphere.
struct SphereQuadratic {
    Mat3 M = Mat3::Zero();
    Vec3 w = Vec3::Zero();
    double c0 = 0.0;

    double operator()(const Vec3& n) const { return n.dot(M * n) + 2.0 * w.dot(n) + c0; }
};

/// Quadratic whose zeros on the sphere generate pure states of `steered`:
/// g(n) = |b + T^T n|^2 - (1 + a.n)^2 with a the steering party's vector, so
/// M = T T^T - a a^T, w = T b - a, c0 = |b|^2 - 1.
/// DegenerateSteerer when the steering party's marginal is pure.
SphereQuadratic build_quadratic(const PauliDecomposition& decomp, Party steered);

enum class ArgmaxKind { Point, TwoPoints, Circle, Sphere };

std::string_view to_string(ArgmaxKind k) noexcept;

/// Global maximum of a SphereQuadratic with every maximizer.
struct TrsSolution {
    double max_value = 0.0;
    double multiplier = 0.0;       ///< mu >= lambda_max(M) with (mu I - M) n = w
    ArgmaxKind kind = ArgmaxKind::Point;
    std::vector<Vec3> points;      ///< Point: 1, TwoPoints: 2, otherwise empty
    bool hard_case = false;
    // Circle: {circle_center + r (cos t u1 + sin t u2)}.
    Vec3 circle_center = Vec3::Zero();
    Vec3 circle_u1 = Vec3::Zero();
    Vec3 circle_u2 = Vec3::Zero();
    double circle_radius = 0.0;
};

/// Exact trust-region-subproblem solve by the secular equation, including the
/// hard case (w orthogonal to the top eigenspace of M). Maximizers closer than
/// `cluster_angle` are merged. NumericFailure if the secular equation cannot be
/// bracketed.
TrsSolution trs_maximize(const SphereQuadratic& q, double cluster_angle = 1e-4);

enum class CountClass { Zero, One, Two, Infinite };

std::string_view to_string(CountClass c) noexcept;
int count_value(CountClass c) noexcept;   ///< -1 for Infinite

struct TangencyPoint {
    Vec3 bloch_point = Vec3::Zero();  ///< steered pure state
    Vec3 direction = Vec3::UnitZ();   ///< measurement axis, first nonzero component positive
    int outcome_sign = 1;             ///< effect is (I + sign direction.sigma)/2
    double probability = 0.0;
    double residual = 0.0;            ///< |g| at the generating direction

    /// sign * direction.
    Vec3 effect_bloch() const { return outcome_sign * direction; }
};

struct TangencyReport {
    Party steered = Party::Bob;
    CountClass count = CountClass::Zero;
    std::vector<TangencyPoint> points;
    double max_g = 0.0;
    double purity = 0.0;   ///< Tr(rho^2); certificate for Infinite
};

/// Counts the pure states of `steered` that the other party can prepare.
/// Infinite when the global state is pure; otherwise the argmax set of g is
/// Zero (max below -tangency_tol), One or Two points. A circle or sphere of
/// maximizers on a mixed state raises InconsistentWithClassification.
TangencyReport find_tangency(const PauliDecomposition& decomp, Party steered,
                             const ToleranceConfig& cfg = {});

/// One paired tangency. Bob's pure state beta is prepared by Alice's effect
/// Pi_A; Alice's pure state alpha by Bob's effect Pi_B. The pairing predicts
/// Pi_A alpha = 0 and Pi_B beta = 0.
struct CorrespondencePair {
    Mat2c alice_effect;
    QubitState bob_pure = QubitState::from_bloch(Vec3::UnitZ());
    Mat2c bob_effect;
    QubitState alice_pure = QubitState::from_bloch(Vec3::UnitZ());
    double residual_alice = 0.0;   ///< |Pi_A alpha|
    double residual_bob = 0.0;     ///< |Pi_B beta|
    double fidelity_alice = 0.0;   ///< <alpha| (state Bob's Pi_B prepares) |alpha>
    double fidelity_bob = 0.0;     ///< <beta| (state Alice's Pi_A prepares) |beta>
};

/// Pairs each Bob tangency with an Alice tangency found independently.
/// InvalidInput unless the Bob report has count One or Two; CountMismatch if
/// Alice's count differs.
std::vector<CorrespondencePair> correspondence_map(const TwoQubitState& state,
                                                   const TangencyReport& bob_tangency,
                                                   const ToleranceConfig& cfg = {});

/// Pairing for a single Alice effect (I + n.sigma)/2, used when N is infinite.
/// alpha is predicted as -n and Pi_B as the projector orthogonal to beta.
CorrespondencePair correspondence_for_effect(const TwoQubitState& state, const Vec3& alice_effect);

struct ScanCandidate {
    Vec3 direction = Vec3::UnitZ();
    double g = 0.0;
};

/// Grid oracle: evaluates q on a Fibonacci grid, refines up to 16 separated
/// local maxima on the sphere and returns them sorted by g, descending.
std::vector<ScanCandidate> scan_sphere_quadratic(const SphereQuadratic& q, int grid_size);

/// Candidates of the scan with g >= -1e-6. OutOfRange when grid_size < 1000.
std::vector<ScanCandidate> scan_pure_directions(const PauliDecomposition& decomp, Party steered,
                                                int grid_size);

} // namespace qse
