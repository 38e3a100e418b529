#include <doctest.h>

#include <cstring>
#include <random>

#include "curvmeas/geometry.hpp"
#include "oracles.hpp"

using namespace curvmeas;

TEST_CASE("sphere_sphere_circle: symmetric lens") {
    Sphere a{{0, 0, 0}, 1.0}, b{{1, 0, 0}, 1.0};
    auto c = sphere_sphere_circle(a, 0, b, 1);
    REQUIRE(c.has_value());
    CHECK(dist(c->center, Vec3{0.5, 0, 0}) < 1e-15);
    CHECK(c->radius == doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-14));
    CHECK(dist(c->axis, Vec3{1, 0, 0}) < 1e-15);
}

TEST_CASE("sphere_sphere_circle: disjoint and coincident") {
    Sphere a{{0, 0, 0}, 1.0}, b{{3, 0, 0}, 1.0};
    CHECK(!sphere_sphere_circle(a, 0, b, 1).has_value());
    Sphere c{{0, 0, 0}, 1.0};
    CHECK_THROWS_AS((void)sphere_sphere_circle(a, 0, c, 1), DegeneracyError);
}

TEST_CASE("sphere_sphere_circle: bitwise symmetric under swap") {
    std::mt19937_64 rng(7);
    for (int it = 0; it < 200; ++it) {
        Sphere a{oracles::random_in_ball(rng, 2.0), 1.0};
        Sphere b{a.center + oracles::random_unit(rng) * 1.2, 1.0};
        auto c1 = sphere_sphere_circle(a, 3, b, 9);
        auto c2 = sphere_sphere_circle(b, 9, a, 3);
        REQUIRE(c1.has_value());
        REQUIRE(c2.has_value());
        CHECK(std::memcmp(&c1->center, &c2->center, sizeof(Vec3)) == 0);
        CHECK(std::memcmp(&c1->axis, &c2->axis, sizeof(Vec3)) == 0);
        CHECK(c1->radius == c2->radius);
        CHECK(c1->parent_lo == 3);
        CHECK(c1->parent_hi == 9);
    }
}

TEST_CASE("triple_intersection_points: equilateral triple") {
    Sphere a{{0, 0, 0}, 1.0}, b{{1, 0, 0}, 1.0}, c{{0.5, std::sqrt(3.0) / 2, 0}, 1.0};
    auto pts = triple_intersection_points(a, b, c);
    REQUIRE(pts.size() == 2);
    for (const Vec3& p : pts) {
        CHECK(p.x == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(p.y == doctest::Approx(std::sqrt(3.0) / 6).epsilon(1e-12));
        CHECK(std::fabs(p.z) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
        for (const Sphere& s : {a, b, c}) CHECK(std::fabs(dist(p, s.center) - 1.0) < 1e-12);
    }
    CHECK(pts[0].z > 0);  // deterministic ordering
    CHECK(pts[1].z < 0);
}

TEST_CASE("triple_intersection_points: far apart and residual property") {
    Sphere a{{0, 0, 0}, 1.0}, b{{1, 0, 0}, 1.0}, c{{0, 5, 0}, 1.0};
    CHECK(triple_intersection_points(a, b, c).empty());

    std::mt19937_64 rng(12);
    int produced = 0;
    for (int it = 0; it < 300; ++it) {
        Sphere s1{oracles::random_in_ball(rng, 1.0), 1.0};
        Sphere s2{s1.center + oracles::random_in_ball(rng, 1.4), 1.0};
        Sphere s3{s1.center + oracles::random_in_ball(rng, 1.4), 1.0};
        std::vector<Vec3> pts;
        try {
            pts = triple_intersection_points(s1, s2, s3);
        } catch (const DataError&) {
            continue;
        }
        for (const Vec3& p : pts) {
            ++produced;
            for (const Sphere& s : {s1, s2, s3})
                CHECK(std::fabs(dist(p, s.center) - s.radius) < 1e-9);
        }
    }
    CHECK(produced > 100);
}

TEST_CASE("spherical_triangle_area: octant and planar limit") {
    CHECK(spherical_triangle_area(kPi / 2, kPi / 2, kPi / 2) == doctest::Approx(kPi / 2).epsilon(1e-14));
    for (double x : {1e-3, 1e-4, 1e-5}) {
        double area = spherical_triangle_area(x, x, x);
        double flat = std::sqrt(3.0) / 4 * x * x;
        CHECK(area == doctest::Approx(flat).epsilon(1e-2));
    }
    CHECK_THROWS_AS(spherical_triangle_area(2.0, 0.5, 0.5), ParameterError);
}

TEST_CASE("spherical_triangle_area: permutation invariant") {
    double a = 1.0, b = 1.2, c = 0.9;
    double ref = spherical_triangle_area(a, b, c);
    CHECK(spherical_triangle_area(b, c, a) == doctest::Approx(ref).epsilon(1e-15));
    CHECK(spherical_triangle_area(c, a, b) == doctest::Approx(ref).epsilon(1e-15));
    CHECK(spherical_triangle_area(b, a, c) == doctest::Approx(ref).epsilon(1e-15));
}

TEST_CASE("spherical_triangle_area vs Monte-Carlo solid angle") {
    // Vertices with pairwise angular distances (1.0, 1.2, 0.9).
    double a12 = 1.0, a23 = 1.2, a13 = 0.9;
    Vec3 A{1, 0, 0};
    Vec3 B{std::cos(a12), std::sin(a12), 0};
    double cx = std::cos(a13);
    double cy = (std::cos(a23) - std::cos(a12) * cx) / std::sin(a12);
    Vec3 C{cx, cy, std::sqrt(std::max(0.0, 1 - cx * cx - cy * cy))};
    REQUIRE(angle_between(A, C) == doctest::Approx(a13).epsilon(1e-12));
    REQUIRE(angle_between(B, C) == doctest::Approx(a23).epsilon(1e-12));

    // Inward edge-plane normals; rejection-sample the triangle's solid angle.
    Vec3 nab = normalized(cross(A, B));
    if (dot(nab, C) < 0) nab = -nab;
    Vec3 nbc = normalized(cross(B, C));
    if (dot(nbc, A) < 0) nbc = -nbc;
    Vec3 nac = normalized(cross(A, C));
    if (dot(nac, B) < 0) nac = -nac;
    std::mt19937_64 rng(2024);
    const int n = 10'000'000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        Vec3 v = oracles::random_unit(rng);
        if (dot(v, nab) >= 0 && dot(v, nbc) >= 0 && dot(v, nac) >= 0) ++hits;
    }
    double mc = 2.0 * kTwoPi * hits / n;
    CHECK(spherical_triangle_area(a12, a23, a13) == doctest::Approx(mc).epsilon(0).scale(0).epsilon(1e9));
    CHECK(std::fabs(spherical_triangle_area(a12, a23, a13) - mc) < 1e-3);
}

TEST_CASE("gauss_bonnet_area: caps, hemisphere, octant") {
    auto make_cap_loop = [](const Vec3& u, double ct, double dir) {
        UnitArc a;
        a.u = u;
        a.ct = ct;
        a.st = std::sqrt(1 - ct * ct);
        CircleFrame f = circle_frame(u);
        a.p = f.p;
        a.q = f.q;
        a.t0 = 0;
        a.dt = dir * kTwoPi;
        a.full = true;
        return UnitLoop{a};
    };
    // Cap of half-angle theta around u: boundary ccw about u keeps the cap left.
    double theta = 0.7;
    double cap = gauss_bonnet_area({make_cap_loop({0, 0, 1}, std::cos(theta), +1)}, 1);
    CHECK(cap == doctest::Approx(kTwoPi * (1 - std::cos(theta))).epsilon(1e-14));
    // Complement: clockwise.
    double comp = gauss_bonnet_area({make_cap_loop({0, 0, 1}, std::cos(theta), -1)}, 1);
    CHECK(cap + comp == doctest::Approx(2 * kTwoPi).epsilon(1e-14));
    // Hemisphere.
    double hemi = gauss_bonnet_area({make_cap_loop({0, 0, 1}, 0.0, +1)}, 1);
    CHECK(hemi == doctest::Approx(kTwoPi).epsilon(1e-14));
    // Full sphere: no loops, chi = 2.
    CHECK(gauss_bonnet_area({}, 2) == doctest::Approx(2 * kTwoPi).epsilon(1e-15));

    // Octant via three great-circle quarter arcs x->y->z->x.
    auto quarter = [](const Vec3& u, const Vec3& from, double sweep) {
        UnitArc a;
        a.u = u;
        a.ct = 0;
        a.st = 1;
        a.p = from;
        a.q = cross(u, from);
        a.t0 = 0;
        a.dt = sweep;
        return a;
    };
    // Boundary of the +++ octant traversed with the octant on the left:
    // x->y (about z), y->z (about x), z->x (about y).
    UnitLoop oct{quarter({0, 0, 1}, {1, 0, 0}, kPi / 2), quarter({1, 0, 0}, {0, 1, 0}, kPi / 2),
                 quarter({0, 1, 0}, {0, 0, 1}, kPi / 2)};
    CHECK(gauss_bonnet_area({oct}, 1) == doctest::Approx(kPi / 2).epsilon(1e-14));
}

TEST_CASE("circle_cap_interval basics") {
    // Great circle in the xy-plane vs cap around +x.
    Vec3 u{0, 0, 1}, p{1, 0, 0}, q{0, 1, 0};
    auto ci = circle_cap_interval(u, 0, 1, p, q, Vec3{1, 0, 0}, std::cos(0.5), 1e-12);
    REQUIRE(ci.kind == CapOverlap::kInterval);
    CHECK(wrap_angle(ci.center) == doctest::Approx(0.0));
    CHECK(ci.half == doctest::Approx(0.5).epsilon(1e-12));
    // Cap that misses / swallows the circle.
    CHECK(circle_cap_interval(u, 0, 1, p, q, Vec3{0, 0, 1}, 0.5, 1e-12).kind == CapOverlap::kNone);
    CHECK(circle_cap_interval(u, 0, 1, p, q, Vec3{0, 0, -1}, -0.5, 1e-12).kind == CapOverlap::kAll);
}

TEST_CASE("subtract_intervals") {
    std::vector<CapInterval> cov;
    auto mk = [](double c, double h) {
        CapInterval ci;
        ci.kind = CapOverlap::kInterval;
        ci.center = c;
        ci.half = h;
        return ci;
    };
    SUBCASE("empty cover -> full circle") {
        auto f = subtract_intervals(cov, 1e-9);
        REQUIRE(f.size() == 1);
        CHECK(f[0].full);
    }
    SUBCASE("one interval") {
        cov.push_back(mk(1.0, 0.3));
        auto f = subtract_intervals(cov, 1e-9);
        REQUIRE(f.size() == 1);
        CHECK(!f[0].full);
        CHECK(f[0].start == doctest::Approx(1.3));
        CHECK(f[0].length == doctest::Approx(kTwoPi - 0.6));
        CHECK(f[0].start_cover == 0);
        CHECK(f[0].end_cover == 0);
    }
    SUBCASE("two disjoint intervals, including wrap") {
        cov.push_back(mk(0.1, 0.3));  // [-0.2, 0.4] wraps
        cov.push_back(mk(kPi, 0.5));
        auto f = subtract_intervals(cov, 1e-9);
        REQUIRE(f.size() == 2);
        double total = f[0].length + f[1].length;
        CHECK(total == doctest::Approx(kTwoPi - 0.6 - 1.0));
    }
    SUBCASE("full coverage") {
        cov.push_back(mk(0.0, 1.8));
        cov.push_back(mk(2.2, 1.8));
        cov.push_back(mk(4.4, 1.9));
        auto f = subtract_intervals(cov, 1e-9);
        CHECK(f.empty());
    }
}

TEST_CASE("left_of_loop and region_contains") {
    // Region: complement of the cap around +z with half-angle 0.6.
    double theta = 0.6;
    UnitArc a;
    a.u = {0, 0, 1};
    a.ct = std::cos(theta);
    a.st = std::sin(theta);
    CircleFrame f = circle_frame(a.u);
    a.p = f.p;
    a.q = f.q;
    a.t0 = 0;
    a.dt = -kTwoPi;  // clockwise: complement on the left
    a.full = true;
    UnitLoop loop{a};
    CHECK(left_of_loop(loop, Vec3{0, 0, -1}));
    CHECK(!left_of_loop(loop, Vec3{0, 0, 1}));
    CHECK(left_of_loop(loop, normalized(Vec3{1, 0, 0.2})));

    // Two-loop region: band between caps at +z and -z.
    UnitArc b = a;
    b.u = {0, 0, -1};
    CircleFrame f2 = circle_frame(b.u);
    b.p = f2.p;
    b.q = f2.q;
    std::vector<UnitLoop> band{{a}, {b}};
    CHECK(region_contains(band, Vec3{1, 0, 0}));
    CHECK(!region_contains(band, Vec3{0, 0, 1}));
    CHECK(!region_contains(band, Vec3{0, 0, -1}));
    auto comp = group_loops(band);
    CHECK(comp[0] == comp[1]);  // one band, two loops

    // Two disjoint caps as a disconnected region: loops ccw about their axes.
    UnitArc c1 = a;
    c1.dt = kTwoPi;  // cap around +z on the left
    UnitArc c2 = b;
    c2.dt = kTwoPi;
    std::vector<UnitLoop> caps{{c1}, {c2}};
    CHECK(region_contains(caps, Vec3{0, 0, 1}));
    CHECK(region_contains(caps, Vec3{0, 0, -1}));
    CHECK(!region_contains(caps, Vec3{1, 0, 0}));
    auto comp2 = group_loops(caps);
    CHECK(comp2[0] != comp2[1]);
}
