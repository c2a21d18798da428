#include "surfdist/cut_locus.hpp"

#include <algorithm>
#include <cmath>

namespace surfdist {

double CutLocusEstimate::distance_to(const SurfacePoint& p) const {
    double best = 1e300;
    for (const auto& q : samples) best = std::min(best, surface->distance(p, q));
    return best;
}

CutLocusEstimate estimate_cut_locus(const FieldGrid& grid, const Config& cfg) {
    CutLocusEstimate est;
    est.surface = grid.surface;
    est.threshold = cfg.grad_threshold;
    est.dilation = grid.max_cell_diag;
    est.lo = grid.lo;
    est.hi = grid.hi;
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            std::size_t k = grid.idx(i, j);
            if (grid.label[k] != CellLabel::CutCandidate) continue;
            est.samples.push_back(grid.node(i, j));
            est.grad_norms.push_back(grid.grad_norm[k]);
        }
    return est;
}

CutLocusEstimate estimate_cut_locus(const ClosedSet& A, Vec2 lo, Vec2 hi, int nx, int ny,
                                    const Config& cfg) {
    return estimate_cut_locus(classify_region(A, lo, hi, nx, ny, cfg), cfg);
}

DriftReport flow_invariance_test(const ClosedSet& A, const CutLocusEstimate& est,
                                 double horizon, int sample_count, const Config& cfg) {
    if (est.empty()) throw UsageError("flow invariance needs a nonempty estimate");
    DriftReport rep;
    auto oracle = make_dA_oracle(A, cfg);
    RegionBound bound{est.lo, est.hi, true};
    StepPolicy pol = StepPolicy::from(cfg);

    int n = static_cast<int>(est.samples.size());
    int k = std::min(sample_count, n);
    for (int s = 0; s < k; ++s) {
        int idx = (k == 1) ? 0 : static_cast<int>(static_cast<long long>(s) * (n - 1) / (k - 1));
        const SurfacePoint& x0 = est.samples[idx];
        FlowCurve curve;
        try {
            curve = flow(*A.surface(), oracle, x0, horizon, pol, bound);
        } catch (const OracleFailure&) {
            ++rep.domain_exits;
            continue;
        }
        if (curve.termination == FlowTermination::DomainExit) {
            ++rep.domain_exits;
            continue;
        }
        ++rep.flowed;
        for (const auto& nd : curve.nodes)
            rep.max_drift = std::max(rep.max_drift, est.distance_to(nd.point));
    }
    return rep;
}

NearestCutPointReport nearest_cut_point_test(const ClosedSet& A, const CutLocusEstimate& est,
                                             const Region& concavity_region,
                                             const std::vector<SurfacePoint>& queries,
                                             double tol, const Config& cfg) {
    NearestCutPointReport rep;
    if (est.empty()) {
        rep.skipped = true;
        rep.skip_reason = "empty cut-locus estimate";
        return rep;
    }

    ScalarField f = [&](const SurfacePoint& p) { return A.eval(p); };
    auto conc = midpoint_concavity(f, concavity_region, 3000, cfg.seed, cfg);
    rep.precheck_C = conc.concave_infinite ? 1e300 : conc.concave_C;
    rep.precheck_ok = !conc.concave_infinite && conc.concave_C <= cfg.concavity_precheck_tol;
    rep.informational = !rep.precheck_ok;

    rep.pass = true;
    for (const auto& x : queries) {
        CutPointQuery q;
        q.x = x;
        double best = 1e300;
        for (const auto& c : est.samples) {
            double d = A.surface()->distance(x, c);
            if (d < best) {
                best = d;
                q.nearest = c;
            }
        }
        q.dA_x = A.eval(x);
        q.dA_nearest = A.eval(q.nearest);
        q.pass = q.dA_nearest >= q.dA_x - tol;
        if (!q.pass) {
            ++rep.failures;
            rep.pass = false;
        }
        rep.queries.push_back(q);
    }
    return rep;
}

}  // namespace surfdist
