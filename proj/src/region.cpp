#include "curvmeas/region.hpp"

#include <algorithm>
#include <cmath>

namespace curvmeas {

namespace {

constexpr double kAngTolDefault = 1e-11;

struct NodeTable {
    std::vector<Vec3> pos;
    double tol;

    explicit NodeTable(double t) : tol(t) {}

    int add_or_find(const Vec3& w) {
        for (size_t i = 0; i < pos.size(); ++i)
            if (dist2(pos[i], w) < tol * tol) return static_cast<int>(i);
        pos.push_back(w);
        return static_cast<int>(pos.size()) - 1;
    }
};

struct SubArc {
    UnitArc arc;
    int start_node = -1;
    int end_node = -1;
};

/// Crossing of the cut circle with a loop arc.
struct Crossing {
    Vec3 w;        // position on the unit sphere
    double s;      // parameter on the cut circle
    int node = -1;
};

/// Parameters (traversal offsets tau in (0, |dt|)) where the arc crosses the
/// plane dot(w, n) = c, sorted along the traversal. Throws when the crossing
/// grazes an endpoint or runs tangent.
std::vector<double> arc_plane_crossings(const UnitArc& arc, const Vec3& n, double c,
                                        double ang_tol) {
    double A = arc.st * dot(arc.p, n);
    double B = arc.st * dot(arc.q, n);
    double C = arc.ct * dot(arc.u, n);
    double R = std::hypot(A, B);
    if (R <= ang_tol) {
        if (std::fabs(C - c) <= ang_tol)
            throw DegeneracyError("cut plane tangent to a boundary circle");
        return {};
    }
    double x = (c - C) / R;
    if (std::fabs(x) >= 1.0 - ang_tol) {
        if (std::fabs(x) <= 1.0 + ang_tol)
            throw DegeneracyError("cut plane tangent to a boundary arc");
        return {};
    }
    double phi = std::atan2(B, A);
    double delta = std::acos(x);
    double span = std::fabs(arc.dt);
    std::vector<double> taus;
    for (double t : {phi + delta, phi - delta}) {
        double tau = (arc.dt >= 0) ? wrap_angle(t - arc.t0) : wrap_angle(arc.t0 - t);
        if (arc.full) {
            taus.push_back(tau);
            continue;
        }
        if (tau < ang_tol || tau > span - ang_tol) {
            if (tau < span + ang_tol && tau > -ang_tol)
                throw DegeneracyError("cut plane passes through a loop vertex");
            continue;
        }
        taus.push_back(tau);
    }
    std::sort(taus.begin(), taus.end());
    return taus;
}

UnitArc make_subarc(const UnitArc& arc, double tau_a, double tau_b) {
    UnitArc s = arc;
    s.full = false;
    if (arc.dt >= 0) {
        s.t0 = arc.t0 + tau_a;
        s.dt = tau_b - tau_a;
    } else {
        s.t0 = arc.t0 - tau_a;
        s.dt = -(tau_b - tau_a);
    }
    return s;
}

std::vector<UnitLoop> stitch(const std::vector<SubArc>& pieces) {
    // start node -> piece index; unique by construction.
    std::vector<UnitLoop> loops;
    std::vector<char> used(pieces.size(), 0);
    for (size_t seed = 0; seed < pieces.size(); ++seed) {
        if (used[seed]) continue;
        UnitLoop loop;
        size_t cur = seed;
        for (size_t guard = 0; guard <= pieces.size(); ++guard) {
            used[cur] = 1;
            loop.push_back(pieces[cur].arc);
            int want = pieces[cur].end_node;
            if (want == pieces[seed].start_node) break;
            size_t nxt = pieces.size();
            for (size_t j = 0; j < pieces.size(); ++j)
                if (!used[j] && pieces[j].start_node == want) {
                    nxt = j;
                    break;
                }
            if (nxt == pieces.size())
                throw InternalError("split_piece: boundary stitching failed (open chain)");
            cur = nxt;
            if (guard == pieces.size())
                throw InternalError("split_piece: boundary stitching failed (no closure)");
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

}  // namespace

SplitResult split_piece(const RegionPiece& piece, const Vec3& n, double c, double ang_tol) {
    if (ang_tol <= 0) ang_tol = kAngTolDefault;
    SplitResult out;
    out.le.constraints = piece.constraints;
    out.le.constraints.push_back({n, c});
    out.ge.constraints = piece.constraints;
    out.ge.constraints.push_back({-n, -c});
    if (piece.empty()) return out;

    const double st_c = std::sqrt(std::max(0.0, 1.0 - c * c));
    if (st_c <= ang_tol) throw DegeneracyError("cut plane tangent to the sphere");
    CircleFrame kf = circle_frame(n);

    if (piece.full_sphere) {
        UnitArc cap;
        cap.u = n;
        cap.ct = c;
        cap.st = st_c;
        cap.p = kf.p;
        cap.q = kf.q;
        cap.t0 = 0;
        cap.full = true;
        UnitArc le_arc = cap;
        le_arc.dt = -kTwoPi;  // region {w.n <= c} on the left: clockwise about n
        UnitArc ge_arc = cap;
        ge_arc.dt = kTwoPi;
        out.le.loops.push_back({le_arc});
        out.ge.loops.push_back({ge_arc});
        return out;
    }

    // --- collect crossings of the cut circle with the piece boundary -------
    NodeTable nodes(3e-10);
    std::vector<Crossing> crossings;
    // Per loop, per arc: sorted traversal offsets and crossing node ids.
    struct ArcCut {
        std::vector<double> taus;
        std::vector<int> node_ids;
    };
    std::vector<std::vector<ArcCut>> cuts(piece.loops.size());
    bool any_crossing = false;
    for (size_t li = 0; li < piece.loops.size(); ++li) {
        cuts[li].resize(piece.loops[li].size());
        for (size_t ai = 0; ai < piece.loops[li].size(); ++ai) {
            const UnitArc& arc = piece.loops[li][ai];
            ArcCut cut;
            cut.taus = arc_plane_crossings(arc, n, c, ang_tol);
            for (double tau : cut.taus) {
                double t = (arc.dt >= 0) ? arc.t0 + tau : arc.t0 - tau;
                Crossing x;
                x.w = arc.point(t);
                x.s = std::atan2(dot(x.w, kf.q), dot(x.w, kf.p));
                x.node = nodes.add_or_find(x.w);
                cut.node_ids.push_back(x.node);
                crossings.push_back(x);
                any_crossing = true;
            }
            cuts[li][ai] = std::move(cut);
        }
    }

    if (!any_crossing) {
        // Each loop lies strictly on one side; the cut circle either misses
        // the piece or floats in its interior (adding a hole on both sides).
        bool kappa_inside = false;
        std::vector<CapInterval> covered;
        bool kappa_blocked = false;
        for (const HalfSpace& h : piece.constraints) {
            CapInterval ci =
                circle_cap_interval(n, c, st_c, kf.p, kf.q, h.u, h.c, ang_tol);
            // The removed side of the constraint is dot(w, h.u) > h.c.
            if (ci.kind == CapOverlap::kTangent)
                throw DegeneracyError("cut circle tangent to a constraint circle");
            if (ci.kind == CapOverlap::kAll) kappa_blocked = true;
            if (ci.kind == CapOverlap::kInterval) kappa_blocked = true;  // would cross loops if inside
        }
        if (!kappa_blocked) {
            Vec3 wtest = n * c + kf.p * st_c;
            kappa_inside = region_contains(piece.loops, wtest);
        }
        for (const UnitLoop& loop : piece.loops) {
            const UnitArc& a0 = loop.front();
            Vec3 mid = a0.point(a0.t0 + 0.5 * a0.dt);
            if (dot(mid, n) <= c)
                out.le.loops.push_back(loop);
            else
                out.ge.loops.push_back(loop);
        }
        if (kappa_inside) {
            UnitArc cap;
            cap.u = n;
            cap.ct = c;
            cap.st = st_c;
            cap.p = kf.p;
            cap.q = kf.q;
            cap.t0 = 0;
            cap.full = true;
            UnitArc le_arc = cap;
            le_arc.dt = -kTwoPi;
            UnitArc ge_arc = cap;
            ge_arc.dt = kTwoPi;
            out.le.loops.push_back({le_arc});
            out.ge.loops.push_back({ge_arc});
        }
        return out;
    }

    // --- split loop arcs and classify the fragments -------------------------
    std::vector<SubArc> le_pieces, ge_pieces;
    for (size_t li = 0; li < piece.loops.size(); ++li) {
        const UnitLoop& loop = piece.loops[li];
        bool loop_cut = false;
        for (const ArcCut& cut : cuts[li])
            if (!cut.taus.empty()) loop_cut = true;
        if (!loop_cut) {
            const UnitArc& a0 = loop.front();
            Vec3 mid = a0.point(a0.t0 + 0.5 * a0.dt);
            if (dot(mid, n) <= c)
                out.le.loops.push_back(loop);
            else
                out.ge.loops.push_back(loop);
            continue;
        }
        for (size_t ai = 0; ai < loop.size(); ++ai) {
            const UnitArc& arc = loop[ai];
            const ArcCut& cut = cuts[li][ai];
            std::vector<double> taus = cut.taus;
            std::vector<int> nids = cut.node_ids;
            // Sort node ids along with taus (taus came sorted; node ids were
            // pushed in the same order as the sorted taus).
            if (arc.full) {
                if (taus.empty())
                    throw InternalError("split_piece: full-circle loop in a cut loop");
                // Cyclic: fragments between consecutive crossings, wrapping.
                for (size_t k = 0; k < taus.size(); ++k) {
                    size_t k2 = (k + 1) % taus.size();
                    double tb = (k2 == 0) ? taus[k2] + kTwoPi : taus[k2];
                    SubArc s;
                    s.arc = make_subarc(arc, taus[k], tb);
                    s.arc.full = false;
                    s.start_node = nids[k];
                    s.end_node = nids[k2];
                    (dot(s.arc.point(s.arc.t0 + 0.5 * s.arc.dt), n) <= c ? le_pieces : ge_pieces)
                        .push_back(s);
                }
            } else {
                std::vector<double> bounds;
                std::vector<int> bnodes;
                bounds.push_back(0.0);
                bnodes.push_back(nodes.add_or_find(arc.start()));
                for (size_t k = 0; k < taus.size(); ++k) {
                    bounds.push_back(taus[k]);
                    bnodes.push_back(nids[k]);
                }
                bounds.push_back(std::fabs(arc.dt));
                bnodes.push_back(nodes.add_or_find(arc.end()));
                for (size_t k = 0; k + 1 < bounds.size(); ++k) {
                    SubArc s;
                    s.arc = make_subarc(arc, bounds[k], bounds[k + 1]);
                    s.start_node = bnodes[k];
                    s.end_node = bnodes[k + 1];
                    (dot(s.arc.point(s.arc.t0 + 0.5 * s.arc.dt), n) <= c ? le_pieces : ge_pieces)
                        .push_back(s);
                }
            }
        }
    }

    // --- fragments of the cut circle inside the piece -----------------------
    std::vector<CapInterval> covered;
    for (const HalfSpace& h : piece.constraints) {
        CapInterval ci = circle_cap_interval(n, c, st_c, kf.p, kf.q, h.u, h.c, ang_tol);
        if (ci.kind == CapOverlap::kTangent)
            throw DegeneracyError("cut circle tangent to a constraint circle");
        if (ci.kind == CapOverlap::kAll)
            throw InternalError("split_piece: cut circle inside a removed cap yet crossing loops");
        if (ci.kind == CapOverlap::kInterval) covered.push_back(ci);
    }
    std::vector<FreeInterval> free = subtract_intervals(covered, ang_tol);

    auto find_crossing = [&](double s) -> int {
        int best = -1;
        double bestd = 0.25 * std::max(ang_tol, 1e-12);
        for (size_t i = 0; i < crossings.size(); ++i) {
            double d = std::fabs(wrap_angle(crossings[i].s - s + kPi) - kPi);
            if (d < bestd) {
                bestd = d;
                best = static_cast<int>(i);
            }
        }
        return best;
    };

    for (const FreeInterval& f : free) {
        if (f.full)
            throw InternalError("split_piece: unconstrained cut circle despite loop crossings");
        int ca = find_crossing(f.start);
        int cb = find_crossing(f.start + f.length);
        if ((ca < 0) != (cb < 0))
            throw InternalError("split_piece: cut fragment matches only one loop crossing");
        if (ca < 0) continue;  // fragment lies in a different component of the constraint set
        UnitArc base;
        base.u = n;
        base.ct = c;
        base.st = st_c;
        base.p = kf.p;
        base.q = kf.q;
        SubArc ge_arc;  // ccw about n keeps {w.n >= c} on the left
        ge_arc.arc = base;
        ge_arc.arc.t0 = f.start;
        ge_arc.arc.dt = f.length;
        ge_arc.start_node = crossings[ca].node;
        ge_arc.end_node = crossings[cb].node;
        ge_pieces.push_back(ge_arc);
        SubArc le_arc;
        le_arc.arc = base;
        le_arc.arc.t0 = f.start + f.length;
        le_arc.arc.dt = -f.length;
        le_arc.start_node = crossings[cb].node;
        le_arc.end_node = crossings[ca].node;
        le_pieces.push_back(le_arc);
    }

    for (UnitLoop& loop : stitch(le_pieces)) out.le.loops.push_back(std::move(loop));
    for (UnitLoop& loop : stitch(ge_pieces)) out.ge.loops.push_back(std::move(loop));
    return out;
}

RegionPiece clip_cap(const RegionPiece& piece, const Vec3& u, double ct, double ang_tol) {
    SplitResult s = split_piece(piece, u, ct, ang_tol);
    return std::move(s.le);
}

double piece_area(const RegionPiece& piece) {
    if (piece.full_sphere) return 2.0 * kTwoPi;
    if (piece.loops.empty()) return 0;
    int chi;
    if (piece.loops.size() == 1) {
        chi = 1;
    } else {
        std::vector<int> comp = group_loops(piece.loops);
        int ncomp = 1 + *std::max_element(comp.begin(), comp.end());
        chi = 2 * ncomp - static_cast<int>(piece.loops.size());
    }
    return gauss_bonnet_area(piece.loops, chi);
}

namespace {

struct SampleSet {
    std::vector<std::vector<Vec3>> per_loop;
    double max_sag = 0;
};

SampleSet sample_boundary(const RegionPiece& piece) {
    SampleSet s;
    s.per_loop.resize(piece.loops.size());
    for (size_t li = 0; li < piece.loops.size(); ++li) {
        for (const UnitArc& arc : piece.loops[li]) {
            double span = std::fabs(arc.dt);
            int nseg = std::max(1, static_cast<int>(std::ceil(span / 0.3)));
            double step = span / nseg;
            s.max_sag = std::max(s.max_sag, arc.st * step * step * 0.125);
            for (int k = 0; k <= nseg; ++k) {
                double tau = std::min(span, k * step);
                double t = (arc.dt >= 0) ? arc.t0 + tau : arc.t0 - tau;
                s.per_loop[li].push_back(arc.point(t));
            }
        }
    }
    return s;
}

Vec3 centroid_dir(const std::vector<const std::vector<Vec3>*>& loops_samples) {
    Vec3 sum;
    size_t n = 0;
    for (const auto* v : loops_samples)
        for (const Vec3& w : *v) {
            sum += w;
            ++n;
        }
    double len = norm(sum);
    if (n == 0 || len < 1e-12) return Vec3{1, 0, 0};
    return sum / len;
}

void emit_leaf(const RegionPiece& piece, const SampleSet& samples,
               const std::function<void(const Patch&)>& sink) {
    std::vector<int> comp;
    int ncomp = 1;
    if (piece.loops.size() == 1) {
        comp = {0};
    } else {
        comp = group_loops(piece.loops);
        ncomp = 1 + *std::max_element(comp.begin(), comp.end());
    }
    for (int c = 0; c < ncomp; ++c) {
        std::vector<UnitLoop> loops;
        std::vector<const std::vector<Vec3>*> samp;
        int nloops = 0;
        for (size_t li = 0; li < piece.loops.size(); ++li)
            if (comp[li] == c) {
                loops.push_back(piece.loops[li]);
                samp.push_back(&samples.per_loop[li]);
                ++nloops;
            }
        double area = gauss_bonnet_area(loops, 2 - nloops);
        if (area < -1e-9) throw InternalError("subdivide_piece: negative patch area");
        if (area <= 0) continue;
        Patch patch;
        patch.area = area;
        patch.sample = centroid_dir(samp);
        sink(patch);
    }
}

void recurse_piece(const RegionPiece& piece, double max_diam, const Mat3& frame,
                   const std::function<void(const Patch&)>& sink, int depth) {
    if (piece.empty()) return;
    if (depth > 80) throw InternalError("subdivide_piece: recursion too deep");

    SampleSet samples = sample_boundary(piece);
    Vec3 cols[3] = {{frame(0, 0), frame(1, 0), frame(2, 0)},
                    {frame(0, 1), frame(1, 1), frame(2, 1)},
                    {frame(0, 2), frame(1, 2), frame(2, 2)}};
    Vec3 lo{1e30, 1e30, 1e30}, hi{-1e30, -1e30, -1e30};
    for (const auto& loop : samples.per_loop)
        for (const Vec3& w : loop)
            for (int j = 0; j < 3; ++j) {
                double v = dot(w, cols[j]);
                if (v < lo[j]) lo[j] = v;
                if (v > hi[j]) hi[j] = v;
            }
    Vec3 ext = hi - lo;
    double diam = norm(ext) + 2.0 * samples.max_sag;
    if (diam <= max_diam) {
        emit_leaf(piece, samples, sink);
        return;
    }

    int axis = 0;
    if (ext.y > ext.x) axis = 1;
    if (ext.z > ext[axis]) axis = 2;
    double mid = 0.5 * (lo[axis] + hi[axis]);
    // Nudge the plane when it grazes a vertex or runs tangent somewhere.
    static const double kNudge[] = {0.0,   0.0131, -0.0173, 0.0311, -0.0437,
                                    0.0563, -0.0677, 0.0811, -0.0947, 0.1100};
    for (double nd : kNudge) {
        double cc = mid + nd * ext[axis];
        if (std::fabs(cc) >= 1.0) continue;
        try {
            SplitResult s = split_piece(piece, cols[axis], cc, 1e-11);
            recurse_piece(s.le, max_diam, frame, sink, depth + 1);
            recurse_piece(s.ge, max_diam, frame, sink, depth + 1);
            return;
        } catch (const DegeneracyError&) {
            continue;
        }
    }
    throw InternalError("subdivide_piece: no clean cut plane found");
}

void recurse_triangle(const Vec3& a, const Vec3& b, const Vec3& c, double max_diam,
                      const std::function<void(const Patch&)>& sink, int depth) {
    double m = std::max({dist(a, b), dist(b, c), dist(a, c)});
    if (m <= max_diam) {
        Patch patch;
        patch.area = spherical_triangle_area(angle_between(a, b), angle_between(b, c),
                                             angle_between(a, c));
        patch.sample = normalized(a + b + c);
        sink(patch);
        return;
    }
    if (depth > 40) throw InternalError("subdivide_full_sphere: recursion too deep");
    Vec3 ab = normalized(a + b), bc = normalized(b + c), ac = normalized(a + c);
    recurse_triangle(a, ab, ac, max_diam, sink, depth + 1);
    recurse_triangle(ab, b, bc, max_diam, sink, depth + 1);
    recurse_triangle(ac, bc, c, max_diam, sink, depth + 1);
    recurse_triangle(ab, bc, ac, max_diam, sink, depth + 1);
}

}  // namespace

void subdivide_full_sphere(double max_diam, const Mat3& frame,
                           const std::function<void(const Patch&)>& sink) {
    Vec3 e0{frame(0, 0), frame(1, 0), frame(2, 0)};
    Vec3 e1{frame(0, 1), frame(1, 1), frame(2, 1)};
    Vec3 e2{frame(0, 2), frame(1, 2), frame(2, 2)};
    for (int s0 : {1, -1})
        for (int s1 : {1, -1})
            for (int s2 : {1, -1})
                recurse_triangle(e0 * s0, e1 * s1, e2 * s2, max_diam, sink, 0);
}

void subdivide_piece(const RegionPiece& piece, double max_diam, const Mat3& frame,
                     const std::function<void(const Patch&)>& sink) {
    if (max_diam <= 0) throw ParameterError("subdivision diameter must be positive");
    if (piece.empty()) return;
    if (piece.full_sphere) {
        subdivide_full_sphere(max_diam, frame, sink);
        return;
    }
    recurse_piece(piece, max_diam, frame, sink, 0);
}

}  // namespace curvmeas
