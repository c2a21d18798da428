#include "surfdist/reach.hpp"

#include <algorithm>
#include <cmath>

namespace surfdist {

namespace {

// One tube probe at radius r: pushes boundary samples outward and checks
// footpoint uniqueness at the pushed points. Returns true when all probes
// stay unique; otherwise deposits a witness.
bool tube_unique(const ClosedSet& A, double r, const Config& cfg, SurfacePoint* witness) {
    const Surface& s = *A.surface();
    double ftol = cfg.effective_footpoint_tol(A.pitch());
    auto pushes = A.normal_pushes(r / cfg.tube_pitch_divisor, 32);
    for (const auto& np : pushes) {
        SurfacePoint p;
        try {
            p = s.exp_map(np.base, np.dir, r);
        } catch (const DomainExit&) {
            continue;
        }
        double d = A.eval(p);
        // Pushed past the medial set: the normal segment stopped minimizing.
        // The push's own probe ratio sets the expected growth rate.
        if (d < np.probe_ratio * r - std::max(0.01 * r, 1e-3)) {
            if (witness) *witness = p;
            return false;
        }
        if (d <= ftol) continue;
        auto fr = A.footpoints(p, cfg);
        if (fr.continuum || fr.footpoints.size() > 1 || fr.directions.size() > 1) {
            if (witness) *witness = p;
            return false;
        }
    }
    return true;
}

}  // namespace

ReachReport reach(const ClosedSet& A, double r_max, const Config& cfg) {
    if (!(r_max > 0)) throw UsageError("r_max must be positive");
    if (A.pitch() > r_max / 8)
        throw Error("set sampling pitch too coarse to resolve the requested tube radii");

    ReachReport rep;
    rep.tested_rmax = r_max;

    SurfacePoint wit;
    if (tube_unique(A, r_max, cfg, &wit)) {
        rep.infinite = true;
        rep.reach = r_max;
        rep.certified_unique_radius = r_max;
        rep.first_failure_radius = r_max;
        return rep;
    }
    double lo = 0, hi = r_max;
    rep.witness = wit;
    while (hi - lo > cfg.bisection_tol) {
        double mid = 0.5 * (lo + hi);
        if (tube_unique(A, mid, cfg, &wit)) {
            lo = mid;
        } else {
            hi = mid;
            rep.witness = wit;
        }
    }
    rep.certified_unique_radius = lo;
    rep.first_failure_radius = hi;
    rep.reach = 0.5 * (lo + hi);
    return rep;
}

NormalCone normal_cone(const ClosedSet& A, const SurfacePoint& x, double neighbor_radius,
                       const Config& cfg) {
    const Surface& s = *A.surface();
    double ftol = cfg.effective_footpoint_tol(A.pitch());
    if (!A.contains(x, std::max(ftol, 1e-9)))
        throw UsageError("normal_cone expects a base point of A");

    NormalCone out;
    out.base = x;

    // Tangent sample: initial directions to nearby set points.
    std::vector<TangentVector> raw;
    for (const auto& q : A.cloud()) {
        double d = s.distance(x, q);
        if (d <= 1e-12 || d > neighbor_radius) continue;
        auto gl = s.geodesics(x, q, cfg.geodesic_tol);
        if (gl.continuum) continue;
        for (const auto& p : gl.paths) raw.push_back(p.initial_dir);
    }
    // Cluster by the merge angle, keeping the first member per cluster.
    std::vector<double> angles;
    for (const auto& v : raw) angles.push_back(wrap_periodic(s.angle_of(v), 2 * kPi));
    std::sort(angles.begin(), angles.end());
    std::vector<double> reps;
    for (double a : angles) {
        if (!reps.empty() && a - reps.back() <= cfg.direction_merge_angle) continue;
        reps.push_back(a);
    }
    if (reps.size() > 1 && reps.front() + 2 * kPi - reps.back() <= cfg.direction_merge_angle)
        reps.pop_back();
    for (double a : reps) out.tangent_dirs.push_back(s.from_angle(x, a));

    // Normal sample: directions at angle >= pi/2 from every tangent sample,
    // up to the clustering tolerance of the tangent estimate.
    double cone_tol = cfg.direction_merge_angle;
    const int sweep = 720;
    for (int i = 0; i < sweep; ++i) {
        double u = 2 * kPi * i / sweep;
        bool ok = true;
        for (double a : reps) {
            double gap = std::abs(wrap_signed(u - a, 2 * kPi));
            if (gap < kPi / 2 - cone_tol) {
                ok = false;
                break;
            }
        }
        if (ok) out.normal_dirs.push_back(s.from_angle(x, u));
    }

    // Reach probe along a few normals.
    int step = std::max<std::size_t>(1, out.normal_dirs.size() / 8);
    for (std::size_t i = 0; i < out.normal_dirs.size(); i += step) {
        try {
            SurfacePoint p = s.exp_map(x, out.normal_dirs[i], neighbor_radius / 2);
            if (A.eval(p) <= ftol) continue;
            auto fr = A.footpoints(p, cfg);
            if (fr.continuum || fr.footpoints.size() > 1)
                throw ReachViolation("non-unique footpoints along a normal probe");
        } catch (const DomainExit&) {
        }
    }
    return out;
}

NormalGeodesicReport normal_geodesic_test(const ClosedSet& A, const SurfacePoint& x,
                                          const TangentVector& h, double s_max,
                                          double certified_radius, const Config& cfg) {
    (void)cfg;
    const Surface& s = *A.surface();
    NormalGeodesicReport rep;
    double limit = s_max;
    if (certified_radius > 0 && s_max > certified_radius) {
        limit = certified_radius;
        rep.truncated = true;
    }
    rep.tested_smax = limit;
    const int steps = 64;
    for (int i = 1; i <= steps; ++i) {
        double t = limit * i / steps;
        SurfacePoint p;
        try {
            p = s.exp_map(x, h, t);
        } catch (const DomainExit&) {
            rep.truncated = true;
            rep.tested_smax = limit * (i - 1) / steps;
            break;
        }
        rep.max_residual = std::max(rep.max_residual, std::abs(A.eval(p) - t));
    }
    return rep;
}

}  // namespace surfdist
