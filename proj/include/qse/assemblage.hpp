#pragma once

#include "qse/ellipsoid.hpp"
#include "qse/states.hpp"

#include <optional>

namespace qse {

/// Outcomes below this probability are treated as never occurring.
inline constexpr double kOutcomeSuppression = 1e-12;

/// Ensemble prepared on the other party by a projective measurement along
/// `direction` with effects E_{+-} = (I +- n.sigma)/2.
struct ConditionalEnsemble {
    Vec3 direction = Vec3::UnitZ();
    double p_plus = 0.5;
    double p_minus = 0.5;
    std::optional<QubitState> state_plus;   ///< absent when p_plus < 1e-12
    std::optional<QubitState> state_minus;
};

/// Conditional states for a measurement by `measuring`. When Alice measures:
/// p_+- = (1 +- n.a)/2 and Bloch vectors (b +- T^T n)/(1 +- n.a).
/// NonUnitDirection if |direction| deviates from 1 by more than 1e-12.
ConditionalEnsemble steer(const PauliDecomposition& decomp, const Vec3& direction,
                          Party measuring);
ConditionalEnsemble steer(const TwoQubitState& state, const Vec3& direction, Party measuring);

struct EnsembleProbabilities {
    double p_plus = 0.0;
    double p_minus = 0.0;
};

/// p_+- = |b - s_-+| / |s_+ - s_-|. Requires b on the segment [s_+, s_-]
/// within 1e-8 of the chord length (NotCollinear) and distinct endpoints
/// (CoincidentEndpoints).
EnsembleProbabilities probability_from_geometry(const Vec3& b, const Vec3& s_plus,
                                                const Vec3& s_minus);

struct ChordEnsemble {
    Vec3 s_plus = Vec3::Zero();   ///< intersection in the +chord direction
    Vec3 s_minus = Vec3::Zero();
    double p_plus = 0.0;
    double p_minus = 0.0;
};

/// Rebuilds one ensemble of the assemblage from the ellipsoid and the
/// marginal alone: the chord through b along `chord_direction` meets the
/// surface at s_+ and s_-, weighted by probability_from_geometry.
/// DegenerateEllipsoid unless Full; PointOutsideEllipsoid unless b is strictly
/// inside.
ChordEnsemble ensemble_through_point(const SteeringEllipsoid& ellipsoid, const Vec3& b,
                                     const Vec3& chord_direction);

} // namespace qse
