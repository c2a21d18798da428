#include <cmath>

#include "doctest.h"
#include "surfdist/concavity.hpp"
#include "surfdist/cut_locus.hpp"
#include "surfdist/reach.hpp"
#include "test_helpers.hpp"

using namespace surfdist;
using doctest::Approx;

namespace {

std::vector<SurfacePoint> ellipse_polyline(const SurfacePtr& s, double a, double b, int n) {
    std::vector<SurfacePoint> pts;
    for (int i = 0; i < n; ++i) {
        double t = 2 * kPi * i / n;
        pts.push_back(s->point(a * std::cos(t), b * std::sin(t)));
    }
    return pts;
}

}  // namespace

TEST_CASE("sphere polar set: cut locus is the antipode cluster") {
    auto s = make_sphere(1.0);
    ClosedSet A(s, PointDescriptor{s->point(0, 0)});
    Config cfg;
    auto est = estimate_cut_locus(A, {kPi / 2, -kPi}, {kPi, kPi}, 65, 65, cfg);
    REQUIRE(!est.empty());
    SurfacePoint south = s->point(kPi, 0);
    double diam = 0;
    for (const auto& p : est.samples) {
        CHECK(s->distance(p, south) <= 2 * est.dilation);
        for (const auto& q : est.samples) diam = std::max(diam, s->distance(p, q));
    }
    CHECK(diam <= 2 * est.dilation);
    CHECK(est.distance_to(south) <= 1e-9);
}

TEST_CASE("cylinder point set: cut locus is the opposite meridian line") {
    double L = 2 * kPi;
    auto s = make_cylinder(L);
    ClosedSet A(s, PointDescriptor{s->point(0, 0)});
    Config cfg;
    cfg.footpoint_tol = 0.05;
    auto est = estimate_cut_locus(A, {0, -2}, {L - L / 128, 2}, 128, 65, cfg);
    REQUIRE(!est.empty());
    // Derived by unrolling: the bisector of the two nearest lifts of the
    // base point is the vertical line u = pi.
    double cell = L / 128;
    for (const auto& p : est.samples)
        CHECK(std::abs(p.coords.x - kPi) <= 1.5 * cell);
    // The line is covered top to bottom.
    double hmin = 1e9, hmax = -1e9;
    for (const auto& p : est.samples) {
        hmin = std::min(hmin, p.coords.y);
        hmax = std::max(hmax, p.coords.y);
    }
    CHECK(hmin <= -1.9);
    CHECK(hmax >= 1.9);
}

TEST_CASE("convex polygon: exterior has no cut locus, interior has the skeleton") {
    auto s = make_plane();
    std::vector<SurfacePoint> sq = {s->point(-1, -1), s->point(1, -1), s->point(1, 1),
                                    s->point(-1, 1)};
    ClosedSet A(s, PolylineDescriptor{sq, true}, 5e-3);
    Config cfg;
    cfg.footpoint_tol = 0.05;

    auto outside = estimate_cut_locus(A, {1.2, -2.0}, {3.0, 2.0}, 33, 33, cfg);
    CHECK(outside.empty());

    auto inside = estimate_cut_locus(A, {-0.9, -0.9}, {0.9, 0.9}, 49, 49, cfg);
    REQUIRE(!inside.empty());
    // Brute-force medial oracle: distance to each edge segment; medial points
    // have at least two edges within the tie tolerance of the minimum.
    auto seg_dist = [](Vec2 p, Vec2 a, Vec2 b) {
        Vec2 ab = b - a;
        double t = std::clamp(dot(p - a, ab) / dot(ab, ab), 0.0, 1.0);
        return norm(p - (a + t * ab));
    };
    Vec2 corners[4] = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    auto is_medial = [&](Vec2 p, double tol) {
        double d[4];
        double mn = 1e9;
        for (int e = 0; e < 4; ++e) {
            d[e] = seg_dist(p, corners[e], corners[(e + 1) % 4]);
            mn = std::min(mn, d[e]);
        }
        int close = 0;
        for (int e = 0; e < 4; ++e)
            if (d[e] <= mn + tol) ++close;
        return close >= 2;
    };
    for (const auto& p : inside.samples) CHECK(is_medial(p.coords, 0.06));
    // And the skeleton is covered: its center point is estimated.
    CHECK(inside.distance_to(s->point(0, 0)) <= 1.5 * inside.dilation);
    // Diagonal arm points as well.
    CHECK(inside.distance_to(s->point(0.5, 0.5)) <= 1.5 * inside.dilation);
}

TEST_CASE("flow invariance: plane two-point bisector") {
    auto s = make_plane();
    ClosedSet A(s, PointSetDescriptor{{s->point(-1, 0), s->point(1, 0)}});
    Config cfg;
    cfg.footpoint_tol = 0.03;
    auto est = estimate_cut_locus(A, {-2, -2}, {2, 2}, 65, 65, cfg);
    REQUIRE(!est.empty());
    auto drift = flow_invariance_test(A, est, 5.0, 24, cfg);
    CHECK(drift.flowed > 0);
    CHECK(drift.max_drift <= 1.5 * est.dilation);
}

TEST_CASE("flow invariance: sphere antipode is stationary") {
    auto s = make_sphere(1.0);
    ClosedSet A(s, PointDescriptor{s->point(0, 0)});
    Config cfg;
    auto est = estimate_cut_locus(A, {kPi / 2, -kPi}, {kPi, kPi}, 33, 33, cfg);
    REQUIRE(!est.empty());
    auto drift = flow_invariance_test(A, est, 3.0, 8, cfg);
    CHECK(drift.max_drift <= 1e-6);
}

TEST_CASE("nearest cut point: hemisphere scenario passes") {
    auto s = make_sphere(1.0);
    ClosedSet A(s, SublevelDescriptor{"sphere-dist-south", kPi / 2});
    Config cfg;
    auto est = estimate_cut_locus(A, {0, -kPi}, {kPi / 2 - 0.2, kPi}, 49, 49, cfg);
    REQUIRE(!est.empty());
    Region northern{s, {0.05, -kPi}, {kPi / 2 - 0.2, kPi}, {}};
    Rng rng(91);
    std::vector<SurfacePoint> queries;
    for (int i = 0; i < 200; ++i)
        queries.push_back(s->point(rng.uniform(0.02, kPi / 2 - 0.25), rng.uniform(-kPi, kPi)));
    auto rep = nearest_cut_point_test(A, est, northern, queries, 1e-3, cfg);
    CHECK(!rep.skipped);
    CHECK(rep.precheck_ok);
    CHECK(!rep.informational);
    CHECK(rep.pass);
    CHECK(rep.failures == 0);
    // d_A at the estimated cut point is the quarter turn.
    CHECK(rep.queries.front().dA_nearest == Approx(kPi / 2).epsilon(1e-6));
}

TEST_CASE("nearest cut point: empty estimate skips, failed precheck is informational") {
    auto s = make_plane();
    ClosedSet A(s, PointSetDescriptor{{s->point(-1, 0), s->point(1, 0)}});
    Config cfg;
    cfg.footpoint_tol = 0.03;

    CutLocusEstimate empty;
    empty.surface = s;
    Region reg{s, {-2, -2}, {2, 2}, {}};
    auto skipped = nearest_cut_point_test(A, empty, reg, {s->point(0, 1)}, 1e-3, cfg);
    CHECK(skipped.skipped);

    auto est = estimate_cut_locus(A, {-2, -2}, {2, 2}, 65, 65, cfg);
    auto rep = nearest_cut_point_test(A, est, reg, {s->point(0.4, 0.9)}, 1e-3, cfg);
    CHECK(!rep.skipped);
    CHECK(!rep.precheck_ok);  // d_A of a two-point set is nowhere near concave
    CHECK(rep.informational);
}

TEST_CASE("reach of a unit circle is 1") {
    auto s = make_plane();
    ClosedSet A(s, CircleDescriptor{s->point(0, 0), 1.0});
    Config cfg;
    auto rep = reach(A, 2.0, cfg);
    CHECK(!rep.infinite);
    CHECK(rep.reach == Approx(1.0).epsilon(0.01));
    CHECK(rep.certified_unique_radius < rep.first_failure_radius);
    CHECK(rep.certified_unique_radius <= rep.reach);
    CHECK(rep.reach <= rep.first_failure_radius);
    REQUIRE(rep.witness.has_value());
    CHECK(norm(rep.witness->coords) <= 0.1);  // witnesses appear near the center
}

TEST_CASE("reach of a segment is infinite (sentinel)") {
    auto s = make_plane();
    std::vector<SurfacePoint> seg = {s->point(-1, 0), s->point(1, 0)};
    ClosedSet A(s, PolylineDescriptor{seg, false}, 1e-2);
    Config cfg;
    auto rep = reach(A, 1.5, cfg);
    CHECK(rep.infinite);
    CHECK(rep.certified_unique_radius == Approx(1.5));
    CHECK(rep.tested_rmax == Approx(1.5));
}

TEST_CASE("reach of the 2:1 ellipse is b^2/a") {
    auto s = make_plane();
    ClosedSet A(s, PolylineDescriptor{ellipse_polyline(s, 2.0, 1.0, 720), true}, 2e-2);
    Config cfg;
    auto rep = reach(A, 0.9, cfg);
    CHECK(!rep.infinite);
    // Analytic oracle: reach = 1/kappa_max = b^2/a = 0.5.
    CHECK(rep.reach == Approx(0.5).epsilon(0.04));
    REQUIRE(rep.witness.has_value());
    CHECK(std::abs(rep.witness->coords.y) <= 0.2);  // near the major axis
}

TEST_CASE("reach drops when an extra point creates a nearer medial point") {
    auto s = make_plane();
    ClosedSet A(s, CircleDescriptor{s->point(0, 0), 1.0});
    Config cfg;
    auto base = reach(A, 1.6, cfg);
    // Add a far point: the gap between it and the circle is 1.4, so a new
    // medial point appears at half the gap.
    ClosedSet B(s, PointSetDescriptor{{s->point(2.4, 0)}});
    std::vector<SurfacePoint> cloudpts = {s->point(2.4, 0)};
    // Union as a polyline is awkward; model the union with a point set plus
    // the circle sampled densely.
    std::vector<SurfacePoint> pts = cloudpts;
    for (int i = 0; i < 720; ++i) {
        double t = 2 * kPi * i / 720;
        pts.push_back(s->point(std::cos(t), std::sin(t)));
    }
    ClosedSet U(s, PointSetDescriptor{pts});
    Config ucfg;
    ucfg.footpoint_tol = 2e-2;
    auto with_point = reach(U, 1.6, ucfg);
    CHECK(!with_point.infinite);
    CHECK(with_point.reach <= base.reach + 1e-9);
    CHECK(with_point.reach == Approx(0.7).epsilon(0.08));
}

TEST_CASE("reach is invariant under rigid motions") {
    auto s = make_plane();
    Config cfg;
    ClosedSet A(s, PolylineDescriptor{ellipse_polyline(s, 2.0, 1.0, 720), true}, 2e-2);
    auto r1 = reach(A, 0.9, cfg);
    // Rotate by 0.7 and translate by (3, -2).
    double ca = std::cos(0.7), sa = std::sin(0.7);
    std::vector<SurfacePoint> moved;
    for (int i = 0; i < 720; ++i) {
        double t = 2 * kPi * i / 720;
        double x = 2.0 * std::cos(t), y = std::sin(t);
        moved.push_back(s->point(ca * x - sa * y + 3, sa * x + ca * y - 2));
    }
    ClosedSet B(s, PolylineDescriptor{moved, true}, 2e-2);
    auto r2 = reach(B, 0.9, cfg);
    CHECK(std::abs(r1.reach - r2.reach) <= 2 * cfg.bisection_tol + 1e-9);
}

TEST_CASE("positive reach cross-checks") {
    auto s = make_plane();
    ClosedSet A(s, CircleDescriptor{s->point(0, 0), 1.0});
    Config cfg;
    auto rep = reach(A, 2.0, cfg);
    double half = rep.reach / 2;
    // Semiconvexity succeeds on half-reach balls at sampled points of A.
    Rng rng(92);
    for (int i = 0; i < 10; ++i) {
        double t = rng.angle();
        auto rr = semiconvexity_near_A(A, s->point(std::cos(t), std::sin(t)), half, 1500,
                                       rng.raw(), cfg);
        CHECK(!rr.convex_infinite);
        CHECK(rr.convex_C <= 1.0 / (1.0 - half) + 0.5);
    }
    // Gradient of d_A is Lipschitz on the half-reach tube minus A.
    auto grid = classify_region(A, {-1.8, -1.8}, {1.8, 1.8}, 65, 65, cfg);
    auto lip = c1_gradient_lipschitz(grid, cfg, [&](const SurfacePoint& p) {
        double d = A.eval(p);
        return d > 0.02 && d < half;
    });
    CHECK(lip.pairs > 100);
    CHECK(lip.constant <= 1.0 / (1.0 - half) * 1.3);
}

TEST_CASE("normal cones: line, circle, and square corner") {
    auto s = make_plane();
    Config cfg;

    std::vector<SurfacePoint> seg = {s->point(-3, 0), s->point(3, 0)};
    ClosedSet L(s, PolylineDescriptor{seg, false}, 5e-3);
    auto nc = normal_cone(L, s->point(0, 0), 0.2, cfg);
    REQUIRE(nc.tangent_dirs.size() == 2);
    REQUIRE(!nc.normal_dirs.empty());
    for (const auto& n : nc.normal_dirs) {
        CHECK(std::abs(n.comp.x) <= 0.06);  // +-e_y up to the cone tolerance
        for (const auto& t : nc.tangent_dirs)
            CHECK(s->angle(n, t) >= kPi / 2 - cfg.direction_merge_angle - 1e-9);
    }

    ClosedSet C(s, CircleDescriptor{s->point(0, 0), 1.0});
    auto nc2 = normal_cone(C, s->point(1, 0), 0.2, cfg);
    bool has_out = false, has_in = false;
    for (const auto& n : nc2.normal_dirs) {
        if (n.comp.x > 0.99) has_out = true;
        if (n.comp.x < -0.99) has_in = true;
        CHECK(std::abs(n.comp.y) <= 0.12);
    }
    CHECK(has_out);
    CHECK(has_in);

    std::vector<SurfacePoint> sq = {s->point(-1, -1), s->point(1, -1), s->point(1, 1),
                                    s->point(-1, 1)};
    ClosedSet Q(s, PolylineDescriptor{sq, true}, 5e-3);
    auto nc3 = normal_cone(Q, s->point(1, 1), 0.2, cfg);
    // Outward quarter: directions between +e_x and +e_y.
    int quarter = 0;
    for (const auto& n : nc3.normal_dirs) {
        double a = std::atan2(n.comp.y, n.comp.x);
        CHECK(a >= -cfg.direction_merge_angle - 0.02);
        CHECK(a <= kPi / 2 + cfg.direction_merge_angle + 0.02);
        if (a > 0.1 && a < kPi / 2 - 0.1) ++quarter;
    }
    CHECK(quarter > 10);
}

TEST_CASE("normal cone requires a base point of A and positive reach nearby") {
    auto s = make_plane();
    ClosedSet C(s, CircleDescriptor{s->point(0, 0), 1.0});
    Config cfg;
    CHECK_THROWS_AS(normal_cone(C, s->point(0.5, 0), 0.2, cfg), UsageError);
    // A probe deep enough to cross the center reports a reach violation.
    CHECK_THROWS_AS(normal_cone(C, s->point(1, 0), 2.6, cfg), ReachViolation);
}

TEST_CASE("normal geodesics: circle both sides and the sphere equator") {
    auto plane = make_plane();
    ClosedSet C(plane, CircleDescriptor{plane->point(0, 0), 1.0});
    Config cfg;
    auto x = plane->point(1, 0);
    auto outward = plane->unit_tangent(x, {1, 0});
    auto inward = plane->unit_tangent(x, {-1, 0});
    auto r1 = normal_geodesic_test(C, x, outward, 5.0, 5.0, cfg);
    CHECK(r1.max_residual <= 1e-9);
    auto r2 = normal_geodesic_test(C, x, inward, 0.9, 0.9, cfg);
    CHECK(r2.max_residual <= 1e-9);
    // Truncation warning when s_max exceeds the certificate.
    auto r3 = normal_geodesic_test(C, x, inward, 0.9, 0.5, cfg);
    CHECK(r3.truncated);
    CHECK(r3.tested_smax == Approx(0.5));

    auto sphere = make_sphere(1.0);
    ClosedSet E(sphere, CircleDescriptor{sphere->point(0, 0), kPi / 2});
    auto xe = sphere->point(kPi / 2, 0.4);
    auto north = sphere->unit_tangent(xe, {-1, 0});
    auto r4 = normal_geodesic_test(E, xe, north, 1.0, 1.0, cfg);
    CHECK(r4.max_residual <= 1e-9);
}

TEST_CASE("slit plane: second-difference jump across the shadow line, gradient Lipschitz finite") {
    auto s = make_slit_plane();
    ClosedSet A(s, PointDescriptor{s->point(1, 0)});
    Config cfg;

    // Vertical geodesic crossing the shadow boundary at (-0.75, 0).
    auto path = s->geodesics(s->point(-0.75, -1.0), s->point(-0.75, 1.0)).paths.front();
    ScalarField f = [&](const SurfacePoint& p) { return A.eval(p); };
    auto prof = second_difference_profile(f, path, path.length / 64);
    double jump = 0;
    for (std::size_t i = 1; i < prof.value.size(); ++i)
        jump = std::max(jump, std::abs(prof.value[i] - prof.value[i - 1]));
    // Closed-form oracle: second derivative jumps from 1/(a+1) to 1/a at the
    // junction, i.e. by 1/0.75 - 1/1.75 = 0.762 at a = 0.75.
    CHECK(jump >= 0.5);
    CHECK(jump <= 1.0);

    auto grid = classify_region(A, {-3, -3}, {3, 3}, 97, 97, cfg);
    auto lip = c1_gradient_lipschitz(grid, cfg, [](const SurfacePoint& p) {
        return norm(p.coords) >= 0.25;  // keep clear of the tip singularity
    });
    CHECK(lip.constant < 10.0);
    // And the same bound holds at doubled resolution (no divergence).
    auto grid2 = classify_region(A, {-3, -3}, {3, 3}, 193, 193, cfg);
    auto lip2 = c1_gradient_lipschitz(grid2, cfg, [](const SurfacePoint& p) {
        return norm(p.coords) >= 0.25;
    });
    CHECK(lip2.constant <= lip.constant * 1.5 + 0.5);
}
