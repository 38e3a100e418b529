#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "curvmeas/vec3.hpp"

namespace curvmeas {

/// Absolute incidence tolerance, in model length units. Configurations within
/// tau of a degenerate one are rejected with a hard error rather than guessed at.
struct Tolerance {
    double tau = 1e-9;
};

// ---------------------------------------------------------------------------
// Errors. The CLI maps these onto exit codes: parameter/usage problems -> 1,
// data problems (parse failures, degenerate input) -> 2, broken internal
// invariants -> 3.
// ---------------------------------------------------------------------------

struct ParameterError : std::runtime_error {
    explicit ParameterError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Input violates the general-position assumptions (tangency, coincidence, ...).
/// The caller is expected to perturb the data; we never silently pick a branch.
struct DegeneracyError : DataError {
    explicit DegeneracyError(const std::string& msg) : DataError(msg) {}
};

struct InternalError : std::runtime_error {
    explicit InternalError(const std::string& msg) : std::runtime_error(msg) {}
};

// ---------------------------------------------------------------------------
// Geometric domain types
// ---------------------------------------------------------------------------

struct Sphere {
    Vec3 center;
    double radius = 0.0;  // > 0
};

/// Circle of intersection of two equal-radius spheres.
/// The axis is the unit normal of the circle plane and points from the
/// lower-id parent sphere to the higher-id one, so swapping the arguments
/// of sphere_sphere_circle yields a bitwise identical result.
struct IntersectionCircle {
    Vec3 center;
    double radius = 0.0;
    Vec3 axis;
    int parent_lo = 0;
    int parent_hi = 1;
};

/// Circular arc, parameterized counterclockwise about the circle axis.
/// Angles refer to the deterministic in-plane frame circle_frame() below.
struct Arc {
    IntersectionCircle circle;
    double start_angle = 0.0;
    double end_angle = 0.0;  // start_angle + beta
    double beta = 0.0;       // in (0, 2*pi]; 2*pi means a full circle with no endpoints
    bool full_circle = false;
};

/// In-plane orthonormal frame (p, q) completing a circle axis u, with q = u x p.
/// Deterministic function of the axis only.
struct CircleFrame {
    Vec3 p, q;
};

inline CircleFrame circle_frame(const Vec3& axis) {
    CircleFrame f;
    f.p = any_orthogonal(axis);
    f.q = cross(axis, f.p);
    return f;
}

inline Vec3 arc_point(const IntersectionCircle& c, const CircleFrame& f, double t) {
    return c.center + c.radius * (std::cos(t) * f.p + std::sin(t) * f.q);
}

/// Orthonormal right-handed frame (origin, i, j, k) used when evaluating the
/// closed-form edge matrices: k is the circle axis and i points from the
/// circle center toward the start point of the (sub-)arc.
struct ArcFrame {
    Vec3 origin;
    Vec3 i, j, k;

    Mat3 rotation() const { return Mat3::from_columns(i, j, k); }
};

/// Spherical polygon: a face of the offset boundary living on one sphere.
/// Each loop is a closed cyclic chain of arcs traversed with the face on the
/// left when viewed from outside the sphere. No loops at all means the full
/// sphere.
struct SphericalPolygon {
    Sphere sphere;
    int sphere_id = -1;
    std::vector<std::vector<Arc>> loops;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 6.28318530717958647692;

}  // namespace curvmeas
