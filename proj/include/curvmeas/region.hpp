#pragma once

#include <functional>
#include <vector>

#include "curvmeas/geometry.hpp"

namespace curvmeas {

/// Half-space constraint on the unit direction sphere: keep dot(w, u) <= c.
/// (The open cap above c is the removed side.)
struct HalfSpace {
    Vec3 u;
    double c = 0;
};

/// A connected-or-not piece of one sphere's surface, as directions from the
/// sphere center. Membership in the underlying constraint set is
/// "all dot(w,u) <= c"; the loops select the component(s) cut out so far.
struct RegionPiece {
    std::vector<HalfSpace> constraints;
    std::vector<UnitLoop> loops;  // region on the left
    bool full_sphere = false;     // whole sphere, no boundary

    bool empty() const { return !full_sphere && loops.empty(); }
};

/// Result of cutting a piece by the plane dot(w, n) = c.
struct SplitResult {
    RegionPiece le;  // dot(w, n) <= c side
    RegionPiece ge;  // dot(w, n) >= c side
};

/// Cut a piece in two along a plane. Throws DegeneracyError when the cut
/// grazes a loop vertex or runs tangent to boundary geometry; callers that
/// choose the plane freely should nudge and retry.
SplitResult split_piece(const RegionPiece& piece, const Vec3& n, double c, double ang_tol);

/// Remove the open cap {dot(w,u) > ct} from the piece.
RegionPiece clip_cap(const RegionPiece& piece, const Vec3& u, double ct, double ang_tol);

/// Quadrature patch on the unit sphere: exact area of a cell of diameter
/// below the subdivision threshold, plus a representative interior direction.
struct Patch {
    double area = 0;     // steradians
    Vec3 sample;         // unit direction inside the patch
};

/// Partition a piece into patches of chordal diameter <= max_diam (on the
/// unit sphere) and hand each to the sink. Patch areas are exact (each is a
/// Gauss-Bonnet evaluation); they sum to the piece area up to rounding.
/// The frame steers the cut planes so the decomposition is rigid-motion
/// covariant whenever the frame is derived covariantly.
void subdivide_piece(const RegionPiece& piece, double max_diam, const Mat3& frame,
                     const std::function<void(const Patch&)>& sink);

/// Fast path for a whole sphere: recursive quartering of the octahedron into
/// geodesic triangles with L'Huilier areas.
void subdivide_full_sphere(double max_diam, const Mat3& frame,
                           const std::function<void(const Patch&)>& sink);

/// Area of a piece (Gauss-Bonnet; groups loops into components as needed).
double piece_area(const RegionPiece& piece);

}  // namespace curvmeas
