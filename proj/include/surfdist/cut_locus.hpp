#pragma once

#include <optional>
#include <string>
#include <vector>

#include "surfdist/concavity.hpp"
#include "surfdist/distance_field.hpp"
#include "surfdist/gradient_flow.hpp"

namespace surfdist {

/// Grid-sampled cut locus: the CUT-CANDIDATE nodes of a field grid together
/// with the closure dilation (one cell diagonal) used by invariance checks.
struct CutLocusEstimate {
    std::vector<SurfacePoint> samples;
    std::vector<double> grad_norms;
    double threshold = 0;  // tau used for the labeling
    double dilation = 0;   // one cell diagonal
    Vec2 lo, hi;           // the estimated region
    SurfacePtr surface;

    bool empty() const { return samples.empty(); }
    /// Distance from p to the sample set (no dilation applied).
    double distance_to(const SurfacePoint& p) const;
};

CutLocusEstimate estimate_cut_locus(const FieldGrid& grid, const Config& cfg);
CutLocusEstimate estimate_cut_locus(const ClosedSet& A, Vec2 lo, Vec2 hi, int nx, int ny,
                                    const Config& cfg);

struct DriftReport {
    double max_drift = 0;  // sup over flowed samples and times of point-to-set distance
    int flowed = 0;
    int domain_exits = 0;  // samples excluded because their flow left the surface
};

/// Flows a subsample of the estimate under the d_A gradient flow and measures
/// how far the curves stray from the estimate set.
DriftReport flow_invariance_test(const ClosedSet& A, const CutLocusEstimate& est,
                                 double horizon, int sample_count, const Config& cfg);

struct CutPointQuery {
    SurfacePoint x;
    SurfacePoint nearest;
    double dA_x = 0;
    double dA_nearest = 0;
    bool pass = false;
};

/// Nearest-cut-point monotonicity: with d_A concave on the region, the
/// nearest cut point x0 of any x satisfies d_A(x0) >= d_A(x). The concavity
/// precheck gates pass/fail; when it fails the run is informational.
struct NearestCutPointReport {
    bool skipped = false;
    std::string skip_reason;
    bool precheck_ok = false;
    double precheck_C = 0;
    bool informational = false;
    bool pass = false;
    int failures = 0;
    std::vector<CutPointQuery> queries;
};

NearestCutPointReport nearest_cut_point_test(const ClosedSet& A, const CutLocusEstimate& est,
                                             const Region& concavity_region,
                                             const std::vector<SurfacePoint>& queries,
                                             double tol, const Config& cfg);

}  // namespace surfdist
