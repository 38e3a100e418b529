#include "curvmeas/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace curvmeas {

double wrap_angle(double t) {
    t = std::fmod(t, kTwoPi);
    if (t < 0) t += kTwoPi;
    return t;
}

std::optional<IntersectionCircle> sphere_sphere_circle(const Sphere& a, int id_a,
                                                       const Sphere& b, int id_b,
                                                       const Tolerance& tol) {
    if (std::fabs(a.radius - b.radius) > tol.tau)
        throw ParameterError("sphere_sphere_circle: unequal radii are not supported");
    if (id_a == id_b) throw ParameterError("sphere_sphere_circle: identical sphere ids");

    const Sphere& lo = (id_a < id_b) ? a : b;
    const Sphere& hi = (id_a < id_b) ? b : a;
    const double r = lo.radius;

    Vec3 d = hi.center - lo.center;
    double D = norm(d);
    if (D <= tol.tau) throw DegeneracyError("degenerate pair: coincident sphere centers");
    if (D >= 2.0 * r - tol.tau) return std::nullopt;  // disjoint or tangent

    IntersectionCircle c;
    c.center = (lo.center + hi.center) * 0.5;
    c.radius = std::sqrt(std::max(0.0, r * r - 0.25 * D * D));
    c.axis = d / D;
    c.parent_lo = std::min(id_a, id_b);
    c.parent_hi = std::max(id_a, id_b);
    return c;
}

std::vector<Vec3> triple_intersection_points(const Sphere& a, const Sphere& b, const Sphere& c,
                                             const Tolerance& tol) {
    const double r = a.radius;
    if (std::fabs(b.radius - r) > tol.tau || std::fabs(c.radius - r) > tol.tau)
        throw ParameterError("triple_intersection_points: unequal radii are not supported");

    // Relative to the first center, the point satisfies y.d1 = |d1|^2/2 and
    // y.d2 = |d2|^2/2 (equidistance), plus |y| = r. Solve in the (d1, d2, n)
    // basis with n = d1 x d2.
    Vec3 d1 = b.center - a.center;
    Vec3 d2 = c.center - a.center;
    Vec3 n = cross(d1, d2);
    double n2 = norm2(n);
    double g11 = norm2(d1), g22 = norm2(d2), g12 = dot(d1, d2);
    double det = g11 * g22 - g12 * g12;  // == n2
    double scale2 = std::max(g11, g22);
    if (det <= scale2 * scale2 * 1e-24 || n2 <= 0) {
        // Collinear centers: the two pair circles are coaxial. They either
        // coincide (degenerate) or miss each other.
        double D1 = std::sqrt(g11);
        if (D1 <= tol.tau) throw DegeneracyError("degenerate triple: coincident centers");
        Vec3 u = d1 / D1;
        // The two pair circles live in planes y.u = D1/2 and y.u = dot(d2,u)/2.
        if (std::fabs(0.5 * D1 - 0.5 * dot(d2, u)) <= tol.tau)
            throw DegeneracyError("degenerate triple: collinear centers with coincident circles");
        return {};
    }

    double rhs1 = 0.5 * g11, rhs2 = 0.5 * g22;
    double alpha = (rhs1 * g22 - rhs2 * g12) / det;
    double beta = (rhs2 * g11 - rhs1 * g12) / det;
    Vec3 base = d1 * alpha + d2 * beta;
    double hh = r * r - norm2(base);
    double h = (hh > 0) ? std::sqrt(hh) : 0.0;
    if (h <= tol.tau) {
        if (hh > -2.0 * tol.tau * r)
            throw DegeneracyError("degenerate triple: tangential intersection");
        return {};
    }
    Vec3 nu = n / std::sqrt(n2);
    Vec3 p0 = a.center + base + nu * h;
    Vec3 p1 = a.center + base - nu * h;
    return {p0, p1};
}

double spherical_triangle_area(double a12, double a23, double a13) {
    const double sides[3] = {a12, a23, a13};
    for (double s : sides) {
        if (!(s > 0.0) || !(s < kPi)) throw ParameterError("invalid spherical triangle: side out of (0, pi)");
    }
    if (a12 >= a23 + a13 || a23 >= a12 + a13 || a13 >= a12 + a23)
        throw ParameterError("invalid spherical triangle: triangle inequality violated");
    double sigma = 0.5 * (a12 + a23 + a13);
    if (sigma >= kPi) throw ParameterError("invalid spherical triangle: half-perimeter >= pi");
    double t = std::tan(0.5 * sigma) * std::tan(0.5 * (sigma - a12)) *
               std::tan(0.5 * (sigma - a23)) * std::tan(0.5 * (sigma - a13));
    return 4.0 * std::atan(std::sqrt(std::max(0.0, t)));
}

double turning_angle(const Vec3& w, const Vec3& tin, const Vec3& tout) {
    return std::atan2(dot(cross(tin, tout), w), dot(tin, tout));
}

double gauss_bonnet_area(const std::vector<UnitLoop>& loops, int chi) {
    double area = kTwoPi * chi;
    for (const UnitLoop& loop : loops) {
        for (const UnitArc& arc : loop) area -= arc.ct * arc.dt;
        if (loop.size() == 1 && loop.front().full) continue;  // no corners
        for (size_t i = 0; i < loop.size(); ++i) {
            const UnitArc& cur = loop[i];
            const UnitArc& nxt = loop[(i + 1) % loop.size()];
            area -= turning_angle(nxt.start(), cur.end_tangent(), nxt.start_tangent());
        }
    }
    return area;
}

CapInterval circle_cap_interval(const Vec3& u, double ct, double st, const Vec3& p, const Vec3& q,
                                const Vec3& n, double c, double ang_tol) {
    // w(t).n = A cos t + B sin t + C
    double A = st * dot(p, n);
    double B = st * dot(q, n);
    double C = ct * dot(u, n);
    double R = std::hypot(A, B);
    double g = c - C;  // inside the cap iff R cos(t - phi) > g

    CapInterval out;
    if (R <= ang_tol) {
        // Circle parallel to the cap boundary: all-or-nothing.
        if (std::fabs(g) <= ang_tol) {
            out.kind = CapOverlap::kTangent;
        } else {
            out.kind = (g < 0) ? CapOverlap::kAll : CapOverlap::kNone;
        }
        return out;
    }
    double x = g / R;
    if (x >= 1.0 - ang_tol) {
        out.kind = (x <= 1.0 + ang_tol) ? CapOverlap::kTangent : CapOverlap::kNone;
        return out;
    }
    if (x <= -1.0 + ang_tol) {
        out.kind = (x >= -1.0 - ang_tol) ? CapOverlap::kTangent : CapOverlap::kAll;
        return out;
    }
    out.kind = CapOverlap::kInterval;
    out.center = std::atan2(B, A);
    out.half = std::acos(x);
    return out;
}

std::vector<FreeInterval> subtract_intervals(const std::vector<CapInterval>& covered,
                                             double ang_tol) {
    if (covered.empty()) {
        FreeInterval f;
        f.full = true;
        f.start = 0;
        f.length = kTwoPi;
        return {f};
    }

    struct Event {
        double t;
        int delta;  // +1 interval starts, -1 interval ends
        int id;
    };
    std::vector<Event> events;
    events.reserve(2 * covered.size());
    int baseline = 0;
    for (size_t i = 0; i < covered.size(); ++i) {
        double len = 2.0 * covered[i].half;
        if (len >= kTwoPi - ang_tol) return {};  // one interval covers the whole circle
        double a = wrap_angle(covered[i].center - covered[i].half);
        events.push_back({a, +1, static_cast<int>(i)});
        events.push_back({wrap_angle(a + len), -1, static_cast<int>(i)});
        if (wrap_angle(0.0 - a) < len) ++baseline;  // interval contains angle 0
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.id < b.id;
    });
    for (size_t i = 0; i + 1 < events.size(); ++i) {
        if (events[i + 1].id != events[i].id && events[i + 1].t - events[i].t < ang_tol)
            throw DegeneracyError("tangency: circle partition endpoints collide");
    }

    std::vector<FreeInterval> free;
    int count = baseline;
    for (size_t i = 0; i < events.size(); ++i) {
        count += events[i].delta;
        if (count == 0) {
            const Event& nxt = events[(i + 1) % events.size()];
            FreeInterval f;
            f.start = events[i].t;
            f.length = wrap_angle(nxt.t - events[i].t);
            if (f.length <= 0) f.length = kTwoPi;  // single gap spanning the wrap
            f.start_cover = events[i].id;
            f.end_cover = nxt.id;
            free.push_back(f);
        }
        if (count < 0) throw InternalError("subtract_intervals: unbalanced events");
    }
    return free;
}

namespace {

/// Count crossings of the open geodesic segment (w -> apex) with the arc.
/// Returns -1 when the configuration is too close to degenerate to decide.
int segment_arc_crossings(const UnitArc& arc, const Vec3& w, const Vec3& apex, double tol) {
    Vec3 g = cross(w, apex);
    double gn = norm(g);
    if (gn < tol) return -1;
    g = g / gn;
    Vec3 e1 = w;
    Vec3 e2 = normalized(apex - e1 * dot(apex, e1));
    double s_apex = angle_between(w, apex);

    double A = arc.st * dot(arc.p, g);
    double B = arc.st * dot(arc.q, g);
    double C = arc.ct * dot(arc.u, g);
    double R = std::hypot(A, B);
    if (R < tol) {
        // Arc circle lies (almost) in the test great circle: degenerate.
        return (std::fabs(C) < tol) ? -1 : 0;
    }
    double x = -C / R;
    if (std::fabs(x) > 1.0 - tol) {
        if (std::fabs(x) < 1.0 + tol) return -1;  // tangential
        return 0;
    }
    double phi = std::atan2(B, A);
    double delta = std::acos(x);
    int crossings = 0;
    for (double t : {phi + delta, phi - delta}) {
        // Inside the traversed parameter range?
        if (!arc.full) {
            double lo = (arc.dt >= 0) ? arc.t0 : arc.t0 + arc.dt;
            double span = std::fabs(arc.dt);
            double s = wrap_angle(t - lo);
            if (s < tol || s > span - tol) {
                if (s < span + tol) return -1;  // grazes an arc endpoint
                continue;
            }
        }
        Vec3 y = arc.point(t);
        double sy = std::atan2(dot(y, e2), dot(y, e1));
        if (sy < -tol) continue;
        if (sy < tol || std::fabs(sy - s_apex) < tol) return -1;  // grazes segment endpoint
        if (sy > s_apex) continue;
        ++crossings;
    }
    return crossings;
}

}  // namespace

bool left_of_loop(const UnitLoop& loop, const Vec3& w) {
    // Reference point: any direction strictly inside the removed cap of one of
    // the loop's arcs; such a point is always on the right (non-region) side.
    const double tol = 1e-11;
    for (size_t attempt = 0; attempt < 4 * loop.size() + 4; ++attempt) {
        const UnitArc& ref = loop[attempt % loop.size()];
        Vec3 apex = ref.u;
        if (attempt >= loop.size()) {
            // Jitter the apex inside the cap, deterministically.
            size_t k = attempt / loop.size();
            Vec3 off = ref.p * (0.37 * k) + ref.q * (0.61 * k);
            apex = normalized(ref.u + off * 1.3e-4);
            if (dot(apex, ref.u) <= ref.ct) continue;  // left the cap, useless
        }
        int total = 0;
        bool bad = false;
        for (const UnitArc& arc : loop) {
            int c = segment_arc_crossings(arc, w, apex, tol);
            if (c < 0) {
                bad = true;
                break;
            }
            total += c;
        }
        if (!bad) return (total % 2) == 1;
    }
    throw InternalError("left_of_loop: could not find a clean reference geodesic");
}

bool region_contains(const std::vector<UnitLoop>& loops, const Vec3& w) {
    if (loops.empty()) return false;
    const int n = static_cast<int>(loops.size());
    // Signature of the query cell: side per loop.
    std::vector<bool> sig(n);
    for (int m = 0; m < n; ++m) sig[m] = left_of_loop(loops[m], w);
    // The region is the union of the cells immediately left of each loop;
    // compare against each such cell's signature.
    for (int l = 0; l < n; ++l) {
        if (!sig[l]) continue;
        const UnitArc& a = loops[l].front();
        Vec3 rep = a.point(a.t0 + 0.5 * a.dt);
        bool match = true;
        for (int m = 0; m < n && match; ++m) {
            if (m == l) continue;
            if (left_of_loop(loops[m], rep) != sig[m]) match = false;
        }
        if (match) return true;
    }
    return false;
}

std::vector<int> group_loops(const std::vector<UnitLoop>& loops) {
    const int n = static_cast<int>(loops.size());
    std::vector<int> comp(n);
    for (int i = 0; i < n; ++i) comp[i] = i;
    if (n <= 1) return comp;

    // Representative point on each loop.
    std::vector<Vec3> rep(n);
    for (int i = 0; i < n; ++i) {
        const UnitArc& a = loops[i].front();
        rep[i] = a.point(a.t0 + 0.5 * a.dt);
    }
    // side[i][j]: is rep[i] on the region side of loop j?
    std::vector<std::vector<bool>> side(n, std::vector<bool>(n, true));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) side[i][j] = left_of_loop(loops[j], rep[i]);

    auto find = [&](int a) {
        while (comp[a] != a) a = comp[a] = comp[comp[a]];
        return a;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (!side[i][j] || !side[j][i]) continue;
            bool same = true;
            for (int k = 0; k < n && same; ++k)
                if (k != i && k != j && side[i][k] != side[j][k]) same = false;
            if (same) comp[find(i)] = find(j);
        }
    for (int i = 0; i < n; ++i) comp[i] = find(i);
    // Renumber densely in first-appearance order.
    std::vector<int> remap(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        if (remap[comp[i]] < 0) remap[comp[i]] = next++;
        comp[i] = remap[comp[i]];
    }
    return comp;
}

}  // namespace curvmeas
