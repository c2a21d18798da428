#include "surfdist/surface.hpp"

#include <atomic>
#include <cmath>

namespace surfdist {

namespace {
std::atomic<int> g_next_surface_id{0};
}

Surface::Surface(Kind kind, bool complete)
    : id_(g_next_surface_id.fetch_add(1)), kind_(kind), complete_(complete) {}

SurfacePoint Surface::point(double a, double b) const {
    Vec2 c{a, b};
    if (!contains(c)) throw UsageError(name() + ": coordinates outside chart domain");
    return SurfacePoint{id_, c};
}

void Surface::check_point(const SurfacePoint& p) const {
    if (p.surface_id != id_) throw UsageError("point belongs to a different surface");
}

TangentVector Surface::tangent(const SurfacePoint& at, Vec2 comp) const {
    check_point(at);
    double n2 = metric_dot(at, comp, comp);
    return TangentVector{at, comp, std::sqrt(std::max(0.0, n2))};
}

TangentVector Surface::unit_tangent(const SurfacePoint& at, Vec2 comp) const {
    TangentVector v = tangent(at, comp);
    if (v.cached_norm <= 0) throw UsageError("cannot normalize a zero tangent vector");
    return TangentVector{at, (1.0 / v.cached_norm) * comp, 1.0};
}

double Surface::angle(const TangentVector& u, const TangentVector& v) const {
    check_same_surface(u.base, v.base);
    if (u.base.coords.x != v.base.coords.x || u.base.coords.y != v.base.coords.y)
        throw UsageError("angle requires tangent vectors at the same base point");
    if (u.cached_norm <= 0 || v.cached_norm <= 0)
        throw UsageError("angle undefined for zero tangent vectors");
    // Decompose in the orthonormal frame and use atan2 for stability.
    OrthoFrame f = orthoframe(u.base);
    Vec2 a = {metric_dot(u.base, u.comp, f.e1), metric_dot(u.base, u.comp, f.e2)};
    Vec2 b = {metric_dot(v.base, v.comp, f.e1), metric_dot(v.base, v.comp, f.e2)};
    return std::atan2(std::abs(cross(a, b)), dot(a, b));
}

double Surface::signed_angle(const TangentVector& u, const TangentVector& v) const {
    check_same_surface(u.base, v.base);
    if (u.cached_norm <= 0 || v.cached_norm <= 0)
        throw UsageError("angle undefined for zero tangent vectors");
    OrthoFrame f = orthoframe(u.base);
    Vec2 a = {metric_dot(u.base, u.comp, f.e1), metric_dot(u.base, u.comp, f.e2)};
    Vec2 b = {metric_dot(v.base, v.comp, f.e1), metric_dot(v.base, v.comp, f.e2)};
    return std::atan2(cross(a, b), dot(a, b));
}

double Surface::angle_of(const TangentVector& v) const {
    if (v.cached_norm <= 0) throw UsageError("angle_of undefined for zero vectors");
    OrthoFrame f = orthoframe(v.base);
    return std::atan2(metric_dot(v.base, v.comp, f.e2), metric_dot(v.base, v.comp, f.e1));
}

TangentVector Surface::from_angle(const SurfacePoint& at, double alpha) const {
    OrthoFrame f = orthoframe(at);
    Vec2 comp = std::cos(alpha) * f.e1 + std::sin(alpha) * f.e2;
    return TangentVector{at, comp, 1.0};
}

std::optional<SurfacePoint> Surface::midpoint(const SurfacePoint& x, const SurfacePoint& y,
                                              double tol) const {
    GeodesicList gl = geodesics(x, y, tol);
    if (gl.continuum || gl.paths.size() != 1) return std::nullopt;
    const GeodesicPath& p = gl.paths.front();
    SurfacePoint m = p.point_at(0.5 * p.length);
    if (!contains(m.coords)) return std::nullopt;
    return m;
}

}  // namespace surfdist
