#pragma once

#include <optional>
#include <vector>

#include "curvmeas/types.hpp"

namespace curvmeas {

// ---------------------------------------------------------------------------
// Sphere-sphere and sphere-sphere-sphere intersections
// ---------------------------------------------------------------------------

/// Circle of intersection of two equal-radius spheres, or nullopt when the
/// spheres are disjoint or tangent beyond tolerance. Coincident centers are a
/// hard degeneracy ("degenerate pair"). Result is bitwise symmetric in the
/// arguments: the axis always points from the lower to the higher id.
std::optional<IntersectionCircle> sphere_sphere_circle(const Sphere& a, int id_a,
                                                       const Sphere& b, int id_b,
                                                       const Tolerance& tol = {});

/// The points of the triple intersection of three pairwise-intersecting
/// equal-radius sphere boundaries: two points, or empty when the third sphere
/// misses the pair circle. A tangential (single-point) configuration within
/// tolerance throws DegeneracyError, as does a degenerate (collinear-center)
/// triple.
std::vector<Vec3> triple_intersection_points(const Sphere& a, const Sphere& b, const Sphere& c,
                                             const Tolerance& tol = {});

/// Area of the spherical triangle on the unit sphere with side lengths
/// alpha12, alpha23, alpha13 (L'Huilier). Throws ParameterError when the
/// spherical triangle inequalities fail.
double spherical_triangle_area(double alpha12, double alpha23, double alpha13);

// ---------------------------------------------------------------------------
// Directed arcs and loops on the unit sphere of directions
//
// All boundary bookkeeping happens on the unit sphere around a ball center:
// a point of the ball surface is center + r*w with ||w|| = 1. Circles become
// (axis u, polar cosine ct); caps become half-space constraints w . u > ct.
// ---------------------------------------------------------------------------

struct UnitArc {
    Vec3 u;                 // circle axis, unit
    double ct = 0, st = 1;  // cos/sin of the circle polar radius about u, st >= 0
    Vec3 p, q;              // in-plane frame, q = u x p
    double t0 = 0;          // start parameter
    double dt = 0;          // signed sweep, + is ccw about u; |dt| <= 2*pi
    bool full = false;      // full circle (|dt| == 2*pi, no endpoints)

    Vec3 point(double t) const {
        return u * ct + (p * std::cos(t) + q * std::sin(t)) * st;
    }
    Vec3 start() const { return point(t0); }
    Vec3 end() const { return point(t0 + dt); }
    /// Unit tangent in traversal direction at parameter t.
    Vec3 tangent(double t) const {
        Vec3 d = (q * std::cos(t) - p * std::sin(t)) * (dt >= 0 ? 1.0 : -1.0);
        return normalized(d);
    }
    Vec3 start_tangent() const { return tangent(t0); }
    Vec3 end_tangent() const { return tangent(t0 + dt); }
};

using UnitLoop = std::vector<UnitArc>;

/// Angle folded into [0, 2*pi).
double wrap_angle(double t);

/// Exterior turning angle at a corner with outward normal w (unit position on
/// the direction sphere), from incoming tangent tin to outgoing tangent tout.
double turning_angle(const Vec3& w, const Vec3& tin, const Vec3& tout);

/// Gauss-Bonnet area on the unit sphere of a region with Euler characteristic
/// chi whose boundary loops are traversed with the region on the left:
///     area = 2*pi*chi - sum(ct * dt) - sum(turning angles).
double gauss_bonnet_area(const std::vector<UnitLoop>& loops, int chi);

// ---------------------------------------------------------------------------
// Circle vs cap interval computation
// ---------------------------------------------------------------------------

enum class CapOverlap { kNone, kAll, kInterval, kTangent };

struct CapInterval {
    CapOverlap kind = CapOverlap::kNone;
    double center = 0;  // interval is (center - half, center + half), angles mod 2*pi
    double half = 0;
};

/// Parameter interval of the circle (u, ct, st; frame p, q) lying strictly
/// inside the open cap {w : w . n > c}. ang_tol is the angular tolerance below
/// which the configuration is reported as tangent.
CapInterval circle_cap_interval(const Vec3& u, double ct, double st, const Vec3& p, const Vec3& q,
                                const Vec3& n, double c, double ang_tol);

/// Complement of a union of angular intervals on a circle. Input intervals are
/// (center, half) pairs; output is maximal free intervals as (start, length)
/// with, for each endpoint, the index of the covering interval that produced
/// it (start_cover for the interval whose end is the start of the free run,
/// end_cover for the one whose start terminates it). A fully free circle
/// yields one pseudo-interval with full = true. Endpoints closer than ang_tol
/// are a degeneracy.
struct FreeInterval {
    double start = 0;
    double length = 0;
    int start_cover = -1;
    int end_cover = -1;
    bool full = false;
};

std::vector<FreeInterval> subtract_intervals(const std::vector<CapInterval>& covered,
                                             double ang_tol);

// ---------------------------------------------------------------------------
// Point-vs-loop side test (parity of geodesic crossings)
// ---------------------------------------------------------------------------

/// True when the unit direction w lies on the region side (left) of the loop.
/// Every arc of the loop must avoid the open cap around its own axis u above
/// ct (which holds for all loops produced by cap/half-space clipping); the
/// test walks a geodesic from w to a cap apex whose side is known.
bool left_of_loop(const UnitLoop& loop, const Vec3& w);

/// Group loops bounding one clipped region into connected components.
/// Returns component index per loop. Loops must be disjoint and oriented with
/// the region on the left.
std::vector<int> group_loops(const std::vector<UnitLoop>& loops);

/// Membership test for a (possibly disconnected) region bounded by disjoint
/// loops oriented region-on-left. w must not lie on a loop. An empty loop set
/// means the empty region.
bool region_contains(const std::vector<UnitLoop>& loops, const Vec3& w);

}  // namespace curvmeas
