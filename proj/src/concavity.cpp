#include "surfdist/concavity.hpp"

#include <algorithm>
#include <cmath>

namespace surfdist {

SurfacePoint Region::sample(Rng& rng) const {
    for (int tries = 0; tries < 10000; ++tries) {
        Vec2 c{rng.uniform(lo.x, hi.x), rng.uniform(lo.y, hi.y)};
        if (!surface->contains(c)) continue;
        SurfacePoint p{surface->id(), c};
        if (mask && !mask(p)) continue;
        return p;
    }
    throw Error("region sampling failed: mask rejects everything");
}

double Region::inradius() const {
    Vec2 mid{0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)};
    SurfacePoint c{surface->id(), mid};
    if (!surface->contains(mid)) return 0.25 * std::min(hi.x - lo.x, hi.y - lo.y);
    SurfacePoint ex{surface->id(), {hi.x, mid.y}};
    SurfacePoint ey{surface->id(), {mid.x, hi.y}};
    double wx = surface->contains(ex.coords) ? surface->distance(c, ex) : 0;
    double wy = surface->contains(ey.coords) ? surface->distance(c, ey) : 0;
    double r = std::min(wx, wy);
    return r > 0 ? r : std::max(wx, wy);
}

namespace {

struct RoundStats {
    double conc = -1e300;
    double conv = -1e300;
    WorstPair worst_conc;
    WorstPair worst_conv;
    int pairs = 0;
    int skipped = 0;
};

RoundStats run_round(const ScalarField& f, const Region& region, double cap, int budget,
                     Rng& rng, const Config& cfg) {
    const Surface& s = *region.surface;
    RoundStats st;
    double min_d = 0.05 * cap;
    for (int it = 0; it < budget; ++it) {
        SurfacePoint p1 = region.sample(rng);
        double d = rng.uniform(min_d, cap);
        double ang = rng.angle();
        SurfacePoint p2;
        try {
            p2 = s.exp_map(p1, s.from_angle(p1, ang), d);
        } catch (const DomainExit&) {
            ++st.skipped;
            continue;
        }
        bool in_rect = p2.coords.x >= region.lo.x - 1e-12 &&
                       p2.coords.x <= region.hi.x + 1e-12 &&
                       p2.coords.y >= region.lo.y - 1e-12 &&
                       p2.coords.y <= region.hi.y + 1e-12;
        if (!s.contains(p2.coords) || !in_rect || (region.mask && !region.mask(p2))) {
            ++st.skipped;
            continue;
        }
        auto m = s.midpoint(p1, p2, cfg.geodesic_tol);
        if (!m) {
            ++st.skipped;
            continue;
        }
        double dd = s.distance(p1, p2);
        if (dd <= 0) {
            ++st.skipped;
            continue;
        }
        double mean = 0.5 * (f(p1) + f(p2));
        double fm = f(*m);
        double e_conc = 8 * (mean - fm) / (dd * dd);
        double e_conv = -e_conc;
        ++st.pairs;
        if (e_conc > st.conc) {
            st.conc = e_conc;
            st.worst_conc = {p1, p2, *m, dd, e_conc};
        }
        if (e_conv > st.conv) {
            st.conv = e_conv;
            st.worst_conv = {p1, p2, *m, dd, e_conv};
        }
    }
    return st;
}

bool sentinel(double r0, double r1, double r2) {
    return r2 > 0.5 && r1 >= 1.4 * std::max(r0, 1e-12) && r2 >= 1.4 * std::max(r1, 1e-12);
}

}  // namespace

ConcavityReport midpoint_concavity(const ScalarField& f, const Region& region,
                                   int pair_budget, std::uint64_t seed, const Config& cfg,
                                   double cap) {
    if (!region.surface) throw UsageError("region needs a surface");
    if (pair_budget < 30) throw UsageError("pair budget too small");
    if (cap <= 0) cap = 0.5 * region.inradius();
    if (cap <= 0) throw UsageError("could not derive a pair cap for the region");

    Rng rng(seed);
    int per_round = pair_budget / 3;
    RoundStats r0 = run_round(f, region, cap, per_round, rng, cfg);
    RoundStats r1 = run_round(f, region, cap / 2, per_round, rng, cfg);
    RoundStats r2 = run_round(f, region, cap / 4, per_round, rng, cfg);

    ConcavityReport rep;
    rep.pair_count = r0.pairs + r1.pairs + r2.pairs;
    rep.skipped = r0.skipped + r1.skipped + r2.skipped;
    if (rep.pair_count == 0) throw Error("no admissible pairs sampled");

    rep.concave_infinite = sentinel(r0.conc, r1.conc, r2.conc);
    rep.convex_infinite = sentinel(r0.conv, r1.conv, r2.conv);

    auto pick = [](const RoundStats& a, const RoundStats& b, const RoundStats& c, bool conv) {
        const RoundStats* best = &a;
        auto val = [conv](const RoundStats& r) { return conv ? r.conv : r.conc; };
        if (val(b) > val(*best)) best = &b;
        if (val(c) > val(*best)) best = &c;
        return std::pair<double, WorstPair>(val(*best),
                                            conv ? best->worst_conv : best->worst_conc);
    };
    auto [cc, wc] = pick(r0, r1, r2, false);
    auto [cv, wv] = pick(r0, r1, r2, true);
    rep.concave_C = cc;
    rep.convex_C = cv;
    rep.worst_concave = wc;
    rep.worst_convex = wv;
    return rep;
}

SecondDiffProfile second_difference_profile(const ScalarField& f, const GeodesicPath& path,
                                            double h) {
    if (!(h > 0)) throw UsageError("step must be positive");
    if (path.length < 3 * h)
        throw UsageError("path must be at least 3 steps long for second differences");
    SecondDiffProfile out;
    auto second = [&](double t, double step) {
        double a = f(path.point_at(t - step));
        double b = f(path.point_at(t));
        double c = f(path.point_at(t + step));
        return (a - 2 * b + c) / (step * step);
    };
    for (double t = h; t <= path.length - h + 1e-12; t += h) {
        double S = second(t, h);
        out.t.push_back(t);
        out.value.push_back(S);
        if (t - h / 2 >= 0 && t + h / 2 <= path.length) {
            double Sh = second(t, h / 2);
            out.max_richardson_gap = std::max(out.max_richardson_gap, std::abs(S - Sh));
        }
    }
    return out;
}

CoshComparisonResult cosh_comparison_check(const std::vector<double>& trace, double ds,
                                           double kappa, double tol) {
    if (trace.size() < 3) throw UsageError("trace needs at least 3 samples");
    if (!(ds > 0) || !(kappa > 0)) throw UsageError("ds and kappa must be positive");
    for (std::size_t i = 0; i + 1 < trace.size(); ++i)
        if (std::abs(trace[i + 1] - trace[i]) > ds * (1 + 1e-6) + 1e-12)
            throw PreconditionViolation("trace is not 1-Lipschitz at the sampling step");
    double rt = std::sqrt(kappa);
    CoshComparisonResult out;
    out.worst_margin = 1e300;
    for (std::size_t i = 1; i + 1 < trace.size(); ++i) {
        double Hm = std::cosh(rt * trace[i - 1]);
        double H0 = std::cosh(rt * trace[i]);
        double Hp = std::cosh(rt * trace[i + 1]);
        double second = (Hm - 2 * H0 + Hp) / (ds * ds);
        double margin = (kappa * H0 - second) / (kappa * H0);
        out.worst_margin = std::min(out.worst_margin, margin);
    }
    out.pass = out.worst_margin >= -tol;
    return out;
}

ConcavityReport semiconvexity_near_A(const ClosedSet& A, const SurfacePoint& x, double radius,
                                     int pair_budget, std::uint64_t seed, const Config& cfg) {
    const Surface& s = *A.surface();
    double ftol = cfg.effective_footpoint_tol(A.pitch());
    if (!A.contains(x, std::max(ftol, 1e-9)))
        throw UsageError("semiconvexity_near_A expects a base point of A");

    Rng rng(seed);
    auto ball_point = [&](Rng& r) {
        for (int tries = 0; tries < 1000; ++tries) {
            double rad = radius * std::sqrt(r.uniform(0, 1));
            try {
                return s.exp_map(x, s.from_angle(x, r.angle()), rad);
            } catch (const DomainExit&) {
            }
        }
        throw Error("ball sampling failed");
    };

    // Uniqueness scan: positive reach on the ball is a precondition. Exact
    // ties form a null set, so the scan widens the tie window to the ball's
    // sampling scale.
    Config scan_cfg = cfg;
    scan_cfg.footpoint_tol = std::max(ftol, radius / 32);
    for (int i = 0; i < std::max(256, pair_budget / 4); ++i) {
        SurfacePoint p = ball_point(rng);
        if (A.eval(p) <= 2 * scan_cfg.footpoint_tol) continue;
        auto fr = A.footpoints(p, scan_cfg);
        if (fr.continuum || fr.footpoints.size() > 1 || fr.directions.size() > 1)
            throw ReachViolation("non-unique footpoints inside the ball");
    }

    ScalarField f = [&](const SurfacePoint& p) { return A.eval(p); };
    ConcavityReport rep;
    rep.convex_C = -1e300;
    rep.concave_C = -1e300;
    double cap = radius;  // pairs inside the ball, straddling A freely
    int rounds[3] = {pair_budget / 3, pair_budget / 3, pair_budget / 3};
    double caps[3] = {cap, cap / 2, cap / 4};
    double round_conv[3];
    for (int rd = 0; rd < 3; ++rd) {
        double best = -1e300;
        for (int i = 0; i < rounds[rd]; ++i) {
            SurfacePoint p1 = ball_point(rng);
            double d = rng.uniform(0.05 * caps[rd], caps[rd]);
            SurfacePoint p2;
            try {
                p2 = s.exp_map(p1, s.from_angle(p1, rng.angle()), d);
            } catch (const DomainExit&) {
                ++rep.skipped;
                continue;
            }
            if (s.distance(x, p2) > radius) {
                ++rep.skipped;
                continue;
            }
            auto m = s.midpoint(p1, p2, cfg.geodesic_tol);
            if (!m) {
                ++rep.skipped;
                continue;
            }
            double dd = s.distance(p1, p2);
            if (dd <= 0) continue;
            double fm = A.contains(*m, ftol) ? 0.0 : A.eval(*m);
            double mean = 0.5 * (f(p1) + f(p2));
            double e_conv = 8 * (fm - mean) / (dd * dd);
            double e_conc = -e_conv;
            ++rep.pair_count;
            if (e_conv > rep.convex_C) {
                rep.convex_C = e_conv;
                rep.worst_convex = {p1, p2, *m, dd, e_conv};
            }
            if (e_conc > rep.concave_C) {
                rep.concave_C = e_conc;
                rep.worst_concave = {p1, p2, *m, dd, e_conc};
            }
            best = std::max(best, e_conv);
        }
        round_conv[rd] = best;
    }
    rep.convex_infinite = sentinel(round_conv[0], round_conv[1], round_conv[2]);
    return rep;
}

}  // namespace surfdist
