#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "surfdist/errors.hpp"
#include "surfdist/geometry.hpp"

namespace surfdist {

class Surface;
using SurfacePtr = std::shared_ptr<const Surface>;

/// A point of a model surface, expressed in the surface's chart coordinates
/// (radians on the sphere, length units on flat charts, disk coordinates on
/// the hyperbolic plane, a graph node index on meshes).
struct SurfacePoint {
    int surface_id = -1;
    Vec2 coords;
};

/// A tangent vector at `base` with components in the chart frame. The cached
/// norm always equals the metric norm of the components; construct through
/// Surface::tangent / Surface::unit_tangent to keep that invariant.
struct TangentVector {
    SurfacePoint base;
    Vec2 comp;
    double cached_norm = 0.0;
};

/// One minimizing path, parametrized by arclength. `eval` is exact for the
/// analytic models; `attained == false` marks infimal paths that pass through
/// a removed point (the slit-plane tip), whose length is the metric distance
/// even though no curve in the surface realizes it.
struct GeodesicPath {
    SurfacePoint start;
    TangentVector initial_dir;  // unit
    double length = 0.0;
    bool attained = true;
    std::function<SurfacePoint(double)> eval;

    SurfacePoint point_at(double s) const { return eval(s); }
    SurfacePoint endpoint() const { return eval(length); }
};

struct GeodesicList {
    std::vector<GeodesicPath> paths;
    // True when the minimizers form a continuum (sphere antipode); `paths`
    // then holds a representative direction sample.
    bool continuum = false;
};

/// Metric-orthonormal frame at a point, as chart components of the two frame
/// vectors. Decomposing against it turns tangent vectors into ordinary
/// Euclidean 2-vectors (used for angles and the gradient sweep).
struct OrthoFrame {
    Vec2 e1;
    Vec2 e2;
};

/// A 2-dimensional length space: distance, minimizing geodesics, exponential
/// map and initial directions (log), behind one interface. Implementations
/// are immutable after construction; every operation is a pure function of
/// its inputs and safe to call concurrently.
class Surface {
public:
    enum class Kind { Plane, Sphere, Hyperbolic, Cylinder, SlitPlane, Cone, Mesh };

    virtual ~Surface() = default;

    int id() const { return id_; }
    Kind kind() const { return kind_; }
    bool complete() const { return complete_; }
    virtual std::string name() const = 0;

    /// Chart-domain membership (the slit plane excludes the removed ray).
    virtual bool contains(Vec2 coords) const = 0;

    virtual double distance(const SurfacePoint& x, const SurfacePoint& y) const = 0;

    /// All minimizing geodesics from x to y, up to direction clustering at
    /// tolerance `tol` on length ties. Never empty for x != y.
    virtual GeodesicList geodesics(const SurfacePoint& x, const SurfacePoint& y,
                                   double tol = 1e-9,
                                   int max_representatives = 16) const = 0;

    /// Point at arclength t >= 0 along the geodesic from x with initial unit
    /// direction v. Throws DomainExit when the geodesic leaves the surface.
    virtual SurfacePoint exp_map(const SurfacePoint& x, const TangentVector& v,
                                 double t) const = 0;

    /// Riemannian inner product of chart components at a point.
    virtual double metric_dot(const SurfacePoint& at, Vec2 a, Vec2 b) const = 0;

    virtual OrthoFrame orthoframe(const SurfacePoint& at) const = 0;

    virtual double curvature_lower_bound() const = 0;

    /// Radius below which geodesics from x are unique (conservative).
    virtual double injectivity_scale(const SurfacePoint& x) const = 0;

    // ---- derived conveniences ------------------------------------------

    SurfacePoint point(double a, double b) const;
    void check_point(const SurfacePoint& p) const;

    TangentVector tangent(const SurfacePoint& at, Vec2 comp) const;
    TangentVector unit_tangent(const SurfacePoint& at, Vec2 comp) const;

    /// Metric angle in [0, pi]; throws UsageError on zero vectors or
    /// mismatched base points.
    double angle(const TangentVector& u, const TangentVector& v) const;

    /// Oriented angle in (-pi, pi], orientation given by the orthoframe.
    double signed_angle(const TangentVector& u, const TangentVector& v) const;

    /// Frame angle of v at its base point, in (-pi, pi].
    double angle_of(const TangentVector& v) const;

    /// Unit tangent at `at` with the given frame angle.
    TangentVector from_angle(const SurfacePoint& at, double alpha) const;

    /// Midpoint of the minimizing geodesic when it is unique (and lands in
    /// the surface domain); nullopt otherwise.
    std::optional<SurfacePoint> midpoint(const SurfacePoint& x, const SurfacePoint& y,
                                         double tol = 1e-9) const;

protected:
    Surface(Kind kind, bool complete);

    int id_;
    Kind kind_;
    bool complete_;
};

inline void check_same_surface(const SurfacePoint& x, const SurfacePoint& y) {
    if (x.surface_id != y.surface_id)
        throw UsageError("points belong to different surfaces");
}

// ---- factories ----------------------------------------------------------

SurfacePtr make_plane();
SurfacePtr make_sphere(double curvature);          // curvature K > 0
SurfacePtr make_hyperbolic(double curvature);      // curvature -K < 0 (pass the negative value)
SurfacePtr make_cylinder(double circumference);
SurfacePtr make_slit_plane();
SurfacePtr make_cone(double total_angle);

}  // namespace surfdist
