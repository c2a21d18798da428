#pragma once

#include <string>
#include <variant>
#include <vector>

#include "surfdist/config.hpp"
#include "surfdist/surface.hpp"

namespace surfdist {

// ---- descriptors ----------------------------------------------------------

struct PointDescriptor {
    SurfacePoint p;
};

struct PointSetDescriptor {
    std::vector<SurfacePoint> pts;
};

/// Geodesic circle of the given radius (length units) around a center.
/// Exact evaluation on the plane and the sphere; other surfaces should use a
/// polyline instead.
struct CircleDescriptor {
    SurfacePoint center;
    double radius;
};

/// Consecutive points joined by (unique) minimizing geodesic segments.
struct PolylineDescriptor {
    std::vector<SurfacePoint> pts;
    bool closed = false;
};

/// A = { x : field(x) <= level } for a named 1-Lipschitz field with unit
/// gradient off A. Known fields: "plane-y" (second coordinate on flat planar
/// charts) and "sphere-dist-south" (geodesic distance from the south pole).
struct SublevelDescriptor {
    std::string field;
    double level;
};

using SetDescriptor = std::variant<PointDescriptor, PointSetDescriptor, CircleDescriptor,
                                   PolylineDescriptor, SublevelDescriptor>;

// ---- query results --------------------------------------------------------

struct EvalResult {
    double value = 0;
    // False when the infimum is not attained by any curve in the surface
    // (blocked pairs on the non-complete slit plane).
    bool attained = true;
};

struct FootpointResult {
    SurfacePoint query;
    double value = 0;
    bool attained = true;
    std::vector<SurfacePoint> footpoints;
    std::vector<TangentVector> directions;  // unit initial directions, clustered
    bool continuum = false;
    double span_angle = 0;  // angular arc covered by the raw direction candidates
    int raw_candidates = 0;
};

/// Push sample for tube/normal machinery: a base point of A together with an
/// outward direction probing the neighborhood. probe_ratio records how fast
/// d_A grew along the direction at a small probe step (1 for exact normals).
struct NormalPush {
    SurfacePoint base;
    TangentVector dir;
    double probe_ratio = 1.0;
};

// ---- the set --------------------------------------------------------------

/// A closed subset of a model surface. Immutable after construction; all
/// queries are pure. Carries a dense sample cloud of pitch `pitch()` used by
/// the generic minimization paths and the tube samplers.
class ClosedSet {
public:
    ClosedSet(SurfacePtr surface, SetDescriptor desc, double sample_pitch = 1e-2);

    const SurfacePtr& surface() const { return surface_; }
    const SetDescriptor& descriptor() const { return desc_; }
    const std::vector<SurfacePoint>& cloud() const { return cloud_; }
    double pitch() const { return pitch_; }

    bool contains(const SurfacePoint& x, double tol) const;

    double eval(const SurfacePoint& x) const { return eval_detail(x).value; }
    EvalResult eval_detail(const SurfacePoint& x) const;

    FootpointResult footpoints(const SurfacePoint& x, const Config& cfg) const;

    /// Outward push directions at boundary samples spaced `along_pitch`,
    /// pruned so that a small probe step increases d_A at nearly unit rate.
    std::vector<NormalPush> normal_pushes(double along_pitch, int fan = 32) const;

private:
    struct CurveSegment {
        SurfacePoint start;
        TangentVector dir;
        double length = 0;
        double cum0 = 0;  // arclength at segment start
    };

    void build_cloud();
    double field_value(const SurfacePoint& x) const;  // sublevel fields
    SurfacePoint curve_point(double t) const;
    double curve_length() const;
    FootpointResult footpoints_generic(const SurfacePoint& x, const Config& cfg) const;

    SurfacePtr surface_;
    SetDescriptor desc_;
    double pitch_;
    std::vector<SurfacePoint> cloud_;
    std::vector<double> cloud_param_;     // curve parameter per cloud point (polyline)
    std::vector<CurveSegment> segments_;  // polyline geometry
};

}  // namespace surfdist
