#pragma once

#include "qse/states.hpp"
#include "qse/types.hpp"

#include <string_view>

namespace qse {

enum class Degeneracy { Full, Pancake, Needle, Point };

std::string_view to_string(Degeneracy d) noexcept;

/// Semiaxes at or below this value count as collapsed.
inline constexpr double kDegeneracyThreshold = 1e-8;

/// Quantum steering ellipsoid living in `party`'s Bloch ball, i.e. the set of
/// states the other party can steer `party` to with projective measurements.
struct SteeringEllipsoid {
    Party party = Party::Bob;
    Vec3 center = Vec3::Zero();
    Mat3 Q = Mat3::Zero();             ///< squared-semiaxis matrix
    Vec3 semiaxes = Vec3::Zero();      ///< descending
    Mat3 orientation = Mat3::Identity(); ///< columns = principal axes
    double gamma_sq = 1.0;             ///< 1 / (1 - |steerer Bloch vector|^2)
    Degeneracy degeneracy = Degeneracy::Point;

    bool is_full() const noexcept { return degeneracy == Degeneracy::Full; }

    /// (x - c)^T Q^{-1} (x - c) - 1; negative inside. Full ellipsoids only.
    double surface_residual(const Vec3& x) const;

    /// Support function h(d) = c.d + sqrt(d^T Q d).
    double support(const Vec3& d) const;

    /// Boundary point with outward normal d (any degeneracy).
    Vec3 support_point(const Vec3& d) const;
};

/// Ellipsoid of `party` from the decomposition. For Bob (steered by Alice):
/// gamma^2 = 1/(1-|a|^2), c = gamma^2 (b - T^T a),
/// Q = gamma^2 (T^T - b a^T)(I + gamma^2 a a^T)(T - a b^T). Alice's follows by
/// the swap a <-> b, T -> T^T.
///
/// Throws DegenerateSteerer when the steering party's Bloch vector has norm
/// above 1 - 1e-9.
SteeringEllipsoid compute_ellipsoid(const PauliDecomposition& decomp, Party party);

/// Builds an ellipsoid directly from center and shape matrix (geometry only;
/// gamma_sq is set to 1).
SteeringEllipsoid ellipsoid_from_geometry(const Vec3& center, const Mat3& Q,
                                          Party party = Party::Bob);

/// (4 pi / 3) * product of semiaxes; 0 unless Full.
double ellipsoid_volume(const SteeringEllipsoid& e);

/// center + Q^{1/2} direction, i.e. the principal-frame point
/// orientation * diag(semiaxes) * orientation^T * direction. The direction is
/// normalized first. DegenerateEllipsoid unless Full.
Vec3 surface_point(const SteeringEllipsoid& e, const Vec3& direction);

} // namespace qse
