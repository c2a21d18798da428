#pragma once

#include <optional>
#include <vector>

#include "surfdist/closed_set.hpp"
#include "surfdist/config.hpp"

namespace surfdist {

struct ReachReport {
    double reach = 0;                    // bracket midpoint (or r_max when infinite)
    double certified_unique_radius = 0;  // largest tested all-unique tube radius
    double first_failure_radius = 0;     // smallest tested radius with a witness
    std::optional<SurfacePoint> witness; // a tube point with non-unique footpoints
    bool infinite = false;               // sentinel: unique all the way to r_max
    double tested_rmax = 0;
};

/// Bisection on the tube radius: at radius r the tube is probed by pushing
/// boundary samples (pitch r/16) along their normal directions and checking
/// footpoint uniqueness at the pushed points.
ReachReport reach(const ClosedSet& A, double r_max, const Config& cfg);

struct NormalCone {
    SurfacePoint base;
    std::vector<TangentVector> tangent_dirs;
    std::vector<TangentVector> normal_dirs;
};

/// Tangent directions sampled from A-points within neighbor_radius; normal
/// directions are the unit vectors at angle >= pi/2 (minus the angular
/// tolerance) from every tangent sample. Throws ReachViolation when probe
/// points along candidate normals have non-unique footpoints.
NormalCone normal_cone(const ClosedSet& A, const SurfacePoint& x, double neighbor_radius,
                       const Config& cfg);

struct NormalGeodesicReport {
    double max_residual = 0;  // sup over s of |d_A(exp(x, h, s)) - s|
    double tested_smax = 0;
    bool truncated = false;   // s_max exceeded the certified radius and was cut
};

NormalGeodesicReport normal_geodesic_test(const ClosedSet& A, const SurfacePoint& x,
                                          const TangentVector& h, double s_max,
                                          double certified_radius, const Config& cfg);

}  // namespace surfdist
