#include <cmath>

#include "doctest.h"
#include "surfdist/closed_set.hpp"
#include "test_helpers.hpp"

using namespace surfdist;
using surfdist::testing::random_point;
using doctest::Approx;

namespace {

// Brute-force check that paths dipping below the axis approach the reported
// infimum on the slit plane: one-knee polylines through (xk, -eps).
double slit_dip_infimum(Vec2 p, Vec2 q) {
    double best = 1e100;
    for (double eps : {0.1, 0.01, 0.001, 1e-4, 1e-5}) {
        for (int i = -40; i <= 40; ++i) {
            Vec2 v{i * 0.01, -eps};
            best = std::min(best, norm(v - p) + norm(q - v));
        }
    }
    return best;
}

Config cfg_with_ftol(double f) {
    Config c;
    c.footpoint_tol = f;
    return c;
}

}  // namespace

TEST_CASE("plane circle distance") {
    auto s = make_plane();
    ClosedSet A(s, CircleDescriptor{s->point(0, 0), 1.0});
    CHECK(A.eval(s->point(3, 0)) == Approx(2.0));
    CHECK(A.eval(s->point(0.25, 0)) == Approx(0.75));
    CHECK(A.contains(s->point(std::cos(1.1), std::sin(1.1)), 1e-9));
}

TEST_CASE("sphere point-set distance is the polar angle") {
    auto s = make_sphere(1.0);
    ClosedSet A(s, PointDescriptor{s->point(0, 0)});
    for (double th : {0.3, 1.0, 2.2, 3.0})
        CHECK(A.eval(s->point(th, 0.7)) == Approx(th));
}

TEST_CASE("slit plane infimum through the tip is reported unattained") {
    auto s = make_slit_plane();
    ClosedSet A(s, PointDescriptor{s->point(1, 0)});
    auto ev = A.eval_detail(s->point(-1, 0));
    CHECK(ev.value == Approx(2.0));
    CHECK(!ev.attained);
    CHECK(std::abs(slit_dip_infimum({-1, 0}, {1, 0}) - 2.0) < 2e-3);
    // In the sight region the infimum is attained.
    auto ev2 = A.eval_detail(s->point(-1, -1));
    CHECK(ev2.attained);
    CHECK(ev2.value == Approx(std::hypot(2, 1)));
}

TEST_CASE("two-point footpoints on the symmetry axis") {
    auto s = make_plane();
    ClosedSet A(s, PointSetDescriptor{{s->point(-1, 0), s->point(1, 0)}});
    Config cfg = cfg_with_ftol(1e-6);
    auto fr = A.footpoints(s->point(0, 1), cfg);
    CHECK(fr.value == Approx(std::sqrt(2.0)));
    REQUIRE(fr.footpoints.size() == 2);
    REQUIRE(fr.directions.size() == 2);
    CHECK(!fr.continuum);
    double sep = s->angle(fr.directions[0], fr.directions[1]);
    CHECK(sep == Approx(2 * std::atan(1.0)));  // = pi/2
}

TEST_CASE("sphere antipodal footpoint direction continuum") {
    auto s = make_sphere(1.0);
    ClosedSet A(s, PointDescriptor{s->point(0, 0)});
    Config cfg = cfg_with_ftol(1e-6);
    auto fr = A.footpoints(s->point(kPi, 0), cfg);
    CHECK(fr.continuum);
    CHECK(fr.value == Approx(kPi));
    CHECK(fr.raw_candidates >= cfg.continuum_threshold);
}

TEST_CASE("circle seen from its center is a continuum at distance 1") {
    auto s = make_plane();
    ClosedSet A(s, CircleDescriptor{s->point(0, 0), 1.0});
    Config cfg = cfg_with_ftol(1e-6);
    auto fr = A.footpoints(s->point(0, 0), cfg);
    CHECK(fr.continuum);
    CHECK(fr.value == Approx(1.0));
    CHECK(fr.span_angle > kPi);
}

TEST_CASE("circle footpoint from outside and inside") {
    auto s = make_plane();
    ClosedSet A(s, CircleDescriptor{s->point(0, 0), 1.0});
    Config cfg = cfg_with_ftol(1e-6);
    auto out = A.footpoints(s->point(3, 0), cfg);
    REQUIRE(out.footpoints.size() == 1);
    CHECK(out.footpoints[0].coords.x == Approx(1.0));
    CHECK(out.footpoints[0].coords.y == Approx(0.0).scale(1));
    auto in = A.footpoints(s->point(0.5, 0), cfg);
    REQUIRE(in.footpoints.size() == 1);
    CHECK(in.footpoints[0].coords.x == Approx(1.0));
    CHECK(in.directions[0].comp.x == Approx(1.0));
}

TEST_CASE("query inside A is a usage error") {
    auto s = make_plane();
    ClosedSet A(s, CircleDescriptor{s->point(0, 0), 1.0});
    Config cfg = cfg_with_ftol(1e-6);
    CHECK_THROWS_AS(A.footpoints(s->point(1, 0), cfg), UsageError);
}

TEST_CASE("one-Lipschitz property of d_A") {
    auto plane = make_plane();
    auto sphere = make_sphere(1.0);
    ClosedSet A1(plane, CircleDescriptor{plane->point(0.3, -0.2), 1.0});
    ClosedSet A2(sphere, PointDescriptor{sphere->point(0, 0)});
    Rng rng(77);
    for (int i = 0; i < 10000; ++i) {
        auto x = random_point(*plane, rng), y = random_point(*plane, rng);
        CHECK(std::abs(A1.eval(x) - A1.eval(y)) <= plane->distance(x, y) + 1e-9);
    }
    for (int i = 0; i < 10000; ++i) {
        auto x = random_point(*sphere, rng), y = random_point(*sphere, rng);
        CHECK(std::abs(A2.eval(x) - A2.eval(y)) <= sphere->distance(x, y) + 1e-9);
    }
}

TEST_CASE("footpoint and direction certificates") {
    auto plane = make_plane();
    auto sphere = make_sphere(1.0);
    Config cfg;
    std::vector<ClosedSet> sets;
    sets.emplace_back(plane, CircleDescriptor{plane->point(0, 0), 1.0});
    sets.emplace_back(plane, PointSetDescriptor{{plane->point(-1, 0), plane->point(1, 0)}});
    sets.emplace_back(sphere, PointDescriptor{sphere->point(0.4, 0.3)});
    Rng rng(78);
    for (auto& A : sets) {
        const auto& s = A.surface();
        double ftol = cfg.effective_footpoint_tol(A.pitch());
        int done = 0;
        for (int i = 0; i < 300 && done < 150; ++i) {
            auto x = random_point(*s, rng);
            if (A.eval(x) <= 2 * ftol) continue;
            auto fr = A.footpoints(x, cfg);
            if (fr.continuum) continue;
            for (const auto& fp : fr.footpoints)
                CHECK(std::abs(s->distance(x, fp) - fr.value) <= ftol);
            for (const auto& dir : fr.directions) {
                auto land = s->exp_map(x, dir, fr.value);
                double best = 1e100;
                for (const auto& fp : fr.footpoints)
                    best = std::min(best, s->distance(land, fp));
                CHECK(best <= std::max(ftol, 1e-7));
            }
            ++done;
        }
        CHECK(done >= 100);
    }
}

TEST_CASE("polyline set: square boundary") {
    auto s = make_plane();
    std::vector<SurfacePoint> sq = {s->point(-1, -1), s->point(1, -1), s->point(1, 1),
                                    s->point(-1, 1)};
    ClosedSet A(s, PolylineDescriptor{sq, true}, 5e-3);
    CHECK(A.eval(s->point(0, 0)) == Approx(1.0).epsilon(1e-6));
    CHECK(A.eval(s->point(2, 0)) == Approx(1.0).epsilon(1e-6));
    CHECK(A.eval(s->point(2, 2)) == Approx(std::sqrt(2.0)).epsilon(1e-6));
    Config cfg;
    // Center of the square sees four edge footpoints.
    auto fr = A.footpoints(s->point(0, 0), cfg);
    CHECK(fr.footpoints.size() == 4);
    CHECK(!fr.continuum);
    // Generic point has a single footpoint.
    auto fr2 = A.footpoints(s->point(0.3, 0.1), cfg);
    CHECK(fr2.footpoints.size() == 1);
}

TEST_CASE("ellipse polyline: center footpoints at the minor vertices") {
    auto s = make_plane();
    std::vector<SurfacePoint> pts;
    int n = 720;
    for (int i = 0; i < n; ++i) {
        double t = 2 * kPi * i / n;
        pts.push_back(s->point(2 * std::cos(t), std::sin(t)));
    }
    ClosedSet A(s, PolylineDescriptor{pts, true}, 2e-2);
    CHECK(A.eval(s->point(0, 0)) == Approx(1.0).epsilon(1e-4));
    Config cfg;
    auto fr = A.footpoints(s->point(0, 0), cfg);
    REQUIRE(fr.footpoints.size() == 2);
    CHECK(std::abs(fr.footpoints[0].coords.y) == Approx(1.0).epsilon(1e-3));
}

TEST_CASE("sublevel sets: half-plane and southern hemisphere") {
    auto plane = make_plane();
    ClosedSet H(plane, SublevelDescriptor{"plane-y", 0.0});
    CHECK(H.eval(plane->point(2, 3)) == Approx(3.0));
    CHECK(H.contains(plane->point(1, -0.5), 1e-9));
    Config cfg = cfg_with_ftol(1e-6);
    auto fr = H.footpoints(plane->point(2, 3), cfg);
    REQUIRE(fr.footpoints.size() == 1);
    CHECK(fr.footpoints[0].coords.x == Approx(2.0));
    CHECK(fr.directions[0].comp.y == Approx(-1.0));

    auto sphere = make_sphere(1.0);
    ClosedSet S(sphere, SublevelDescriptor{"sphere-dist-south", kPi / 2});
    CHECK(S.eval(sphere->point(kPi / 2, 0.3)) == Approx(0.0));
    CHECK(S.eval(sphere->point(kPi / 4, 1.0)) == Approx(kPi / 4));
    auto top = S.footpoints(sphere->point(0, 0), cfg);
    CHECK(top.value == Approx(kPi / 2));
    CHECK(top.continuum);
    auto mid = S.footpoints(sphere->point(kPi / 4, 1.0), cfg);
    REQUIRE(mid.footpoints.size() == 1);
    CHECK(mid.footpoints[0].coords.x == Approx(kPi / 2));
}

TEST_CASE("cloud points satisfy the descriptor at pitch accuracy") {
    auto s = make_plane();
    ClosedSet A(s, CircleDescriptor{s->point(0.5, -0.25), 1.5}, 1e-2);
    for (const auto& q : A.cloud())
        CHECK(std::abs(s->distance(q, s->point(0.5, -0.25)) - 1.5) <= 1e-9);
    // Pitch coverage: consecutive samples are within the pitch.
    for (std::size_t i = 0; i + 1 < A.cloud().size(); ++i)
        CHECK(s->distance(A.cloud()[i], A.cloud()[i + 1]) <= A.pitch() * 1.01);
}

TEST_CASE("normal pushes leave the set on both sides of a curve") {
    auto s = make_plane();
    ClosedSet A(s, CircleDescriptor{s->point(0, 0), 1.0});
    auto pushes = A.normal_pushes(0.1, 32);
    CHECK(pushes.size() > 50);
    int inward = 0, outward = 0;
    for (const auto& np : pushes) {
        Vec2 radial = normalized(np.base.coords);
        double align = dot(radial, normalized(np.dir.comp));
        if (align > 0.5) ++outward;
        if (align < -0.5) ++inward;
        auto probe = s->exp_map(np.base, np.dir, 0.05);
        CHECK(A.eval(probe) >= 0.04);
    }
    CHECK(inward > 10);
    CHECK(outward > 10);
}
