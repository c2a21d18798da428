#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "surfdist/closed_set.hpp"
#include "surfdist/config.hpp"
#include "surfdist/rng.hpp"

namespace surfdist {

using ScalarField = std::function<double(const SurfacePoint&)>;

/// Sampling region: a chart rectangle, optionally masked. Pair sampling and
/// midpoints both stay inside the surface's chart domain.
struct Region {
    SurfacePtr surface;
    Vec2 lo, hi;
    std::function<bool(const SurfacePoint&)> mask;

    SurfacePoint sample(Rng& rng) const;
    /// Rough metric inradius (half the smaller metric extent at the center).
    double inradius() const;
};

struct WorstPair {
    SurfacePoint p1, p2, m;
    double pair_distance = 0;
    double violation = 0;  // the midpoint expression 8*(mean - f(m)) / d^2 (sign per side)
};

/// Midpoint-inequality estimates: the smallest C so that
///   f(m) >= (f(p1)+f(p2))/2 - C/8 d^2   (concave side)
/// holds over the sampled pairs, and the mirror convex constant. When the
/// violations keep growing as the pair cap shrinks (a convex kink), the side
/// is reported as the +infinity sentinel instead of a number.
struct ConcavityReport {
    double concave_C = 0;
    double convex_C = 0;
    bool concave_infinite = false;
    bool convex_infinite = false;
    int pair_count = 0;
    int skipped = 0;
    WorstPair worst_concave;
    WorstPair worst_convex;
};

ConcavityReport midpoint_concavity(const ScalarField& f, const Region& region,
                                   int pair_budget, std::uint64_t seed, const Config& cfg,
                                   double cap = 0);

/// Central second differences of f along an arclength-parametrized path,
/// with a Richardson consistency probe at h/2.
struct SecondDiffProfile {
    std::vector<double> t;
    std::vector<double> value;        // second difference / h^2
    double max_richardson_gap = 0;    // |S_h - S_{h/2}| sup, flags discretization artifacts
};

SecondDiffProfile second_difference_profile(const ScalarField& f, const GeodesicPath& path,
                                            double h);

/// Discrete form of the cosh comparison for a 1-Lipschitz value trace h(s):
/// checks d2/ds2 cosh(sqrt(kappa) h) <= kappa cosh(sqrt(kappa) h) at interior
/// samples, normalized margins. Throws PreconditionViolation when the trace
/// is not 1-Lipschitz at the sampling step.
struct CoshComparisonResult {
    bool pass = false;
    double worst_margin = 0;  // min over samples of normalized slack
};

CoshComparisonResult cosh_comparison_check(const std::vector<double>& trace, double ds,
                                           double kappa, double tol);

/// Convexity constant of d_A on a ball around a point of A. Pairs whose
/// midpoint falls in A use f(m) = 0 directly. Throws ReachViolation when a
/// sampled ball point has non-unique footpoints.
ConcavityReport semiconvexity_near_A(const ClosedSet& A, const SurfacePoint& x, double radius,
                                     int pair_budget, std::uint64_t seed, const Config& cfg);

}  // namespace surfdist
