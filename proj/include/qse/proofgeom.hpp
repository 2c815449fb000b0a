#pragma once

#include "qse/ellipsoid.hpp"
#include "qse/types.hpp"

#include <optional>
#include <span>

namespace qse::proof {

/// Plane through a tangency point p. Origin at p, e2 points from p toward the
/// centre of the circle cut from the sphere, e1 = e2 x normal. 2-D coordinates
/// (s, t) map to p + s e1 + t e2.
struct SectionFrame {
    Vec3 origin = Vec3::Zero();
    Vec3 e1 = Vec3::UnitX();
    Vec3 e2 = Vec3::UnitY();
    Vec3 normal = Vec3::UnitZ();

    Vec2 circle_center = Vec2::Zero();   ///< (0, R)
    double R = 1.0;

    Vec2 ellipse_center = Vec2::Zero();
    double u = 0.0;
    double v = 0.0;          ///< semiaxis closer to the e2 direction
    double theta = 0.0;      ///< v axis is (-sin theta, cos theta), theta in [0, pi)

    Vec3 lift(const Vec2& x) const { return origin + x(0) * e1 + x(1) * e2; }
    Vec2 project(const Vec3& x) const { return {(x - origin).dot(e1), (x - origin).dot(e2)}; }
};

/// Cross-section of the sphere of radius `sphere_r` and of `ellipsoid` by the
/// plane through p, b, e. CollinearPoints when the three points span no
/// plane; NotTangentAtP unless p lies on both surfaces (1e-7) with parallel
/// normals; DegenerateEllipse if the section is not an ellipse.
SectionFrame section(double sphere_r, const SteeringEllipsoid& ellipsoid, const Vec3& p,
                     const Vec3& b, const Vec3& e);

struct SectionConstants {
    double G = 0.0;
    double W0 = 0.0;
    double Wk = 0.0;
};

/// G = u^2 v^2 sqrt(u^2 + v^2 + (v^2 - u^2) cos 2theta),
/// W0 = u^2 sin^2 theta + v^2 cos^2 theta,
/// Wk = (k^2 v^2 + u^2) sin^2 theta + (k^2 u^2 + v^2) cos^2 theta + k (v^2 - u^2) sin 2theta.
SectionConstants section_constants(double u, double v, double theta, double k);

/// Second intersection of y = k x with the circle of radius R centred at (0, R):
/// (2kR/(1+k^2), 2k^2R/(1+k^2)).
Vec2 chord_circle(double k, double R);

/// Second intersection of y = k x with the ellipse through the origin tangent
/// to the x axis: sqrt2 k G/(W0 Wk) (1, k). DegenerateEllipse unless u, v > 0.
Vec2 chord_ellipse(double k, double u, double v, double theta);

/// |pe| / |pq| from the two closed forms: (1+k^2) G / (sqrt2 R W0 Wk).
double chord_ratio(double k, double u, double v, double theta, double R);

/// Lower bound G/(sqrt2 R W0) * p_p on the probability an LHS model must put
/// near p as the chord slope goes to 0.
double lhs_lower_bound(double u, double v, double theta, double R, double p_p);

struct NoncontainmentWitness {
    Vec3 point = Vec3::Zero();       ///< on the ellipsoid, outside the hull
    Vec3 direction = Vec3::UnitZ();  ///< separating direction
    double margin = 0.0;             ///< h_ellipsoid(d) - h_polytope(d)
    std::optional<bool> facet_confirmed;   ///< set when there are at most 30 vertices
};

/// Searches for a direction d with h_ellipsoid(d) > h_polytope(d) + 1e-9 on a
/// 20000-direction grid plus local refinement. InvalidInput for an empty
/// vertex list or a vertex outside the closed unit ball (1e-10).
std::optional<NoncontainmentWitness>
polytope_noncontainment_witness(const SteeringEllipsoid& ellipsoid, std::span<const Vec3> vertices);

} // namespace qse::proof
