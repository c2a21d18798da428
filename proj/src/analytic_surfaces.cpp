#include <cmath>
#include <complex>

#include "surfdist/surface.hpp"

namespace surfdist {

namespace {

// Near-antipodal threshold on the sphere: below it we report the continuum.
constexpr double kAntipodeEps = 1e-9;

GeodesicPath single_path(const Surface& s, const SurfacePoint& x, TangentVector dir,
                         double length) {
    GeodesicPath p;
    p.start = x;
    p.initial_dir = dir;
    p.length = length;
    const Surface* sp = &s;
    p.eval = [sp, x, dir](double t) { return sp->exp_map(x, dir, t); };
    return p;
}

// ---------------------------------------------------------------------------
// Euclidean plane
// ---------------------------------------------------------------------------

class EuclideanPlane final : public Surface {
public:
    EuclideanPlane() : Surface(Kind::Plane, true) {}

    std::string name() const override { return "euclidean-plane"; }
    bool contains(Vec2) const override { return true; }

    double distance(const SurfacePoint& x, const SurfacePoint& y) const override {
        check_point(x);
        check_same_surface(x, y);
        return norm(y.coords - x.coords);
    }

    GeodesicList geodesics(const SurfacePoint& x, const SurfacePoint& y, double,
                           int) const override {
        check_point(x);
        check_same_surface(x, y);
        double d = norm(y.coords - x.coords);
        if (d == 0) throw UsageError("geodesics requires x != y");
        TangentVector dir{x, (1.0 / d) * (y.coords - x.coords), 1.0};
        GeodesicList gl;
        gl.paths.push_back(single_path(*this, x, dir, d));
        return gl;
    }

    SurfacePoint exp_map(const SurfacePoint& x, const TangentVector& v,
                         double t) const override {
        check_point(x);
        if (t < 0) throw UsageError("exp_map requires t >= 0");
        return SurfacePoint{id_, x.coords + t * v.comp};
    }

    double metric_dot(const SurfacePoint&, Vec2 a, Vec2 b) const override {
        return dot(a, b);
    }

    OrthoFrame orthoframe(const SurfacePoint&) const override {
        return {{1, 0}, {0, 1}};
    }

    double curvature_lower_bound() const override { return 0.0; }
    double injectivity_scale(const SurfacePoint&) const override { return 1e100; }
};

// ---------------------------------------------------------------------------
// Round sphere of curvature K (radius 1/sqrt(K)); chart (theta, phi) with
// theta in [0, pi]. The chart frame degenerates at the poles; tangent
// components there are taken in the fixed frame that is the limit of the
// (theta, phi) frame along the phi = 0 meridian.
// ---------------------------------------------------------------------------

class RoundSphere final : public Surface {
public:
    explicit RoundSphere(double curvature)
        : Surface(Kind::Sphere, true), K_(curvature), R_(1.0 / std::sqrt(curvature)) {
        if (!(curvature > 0)) throw UsageError("sphere curvature must be positive");
    }

    std::string name() const override { return "round-sphere"; }
    bool contains(Vec2 c) const override { return c.x >= 0.0 && c.x <= kPi; }

    double radius() const { return R_; }

    Vec3 embed(const SurfacePoint& p) const {
        double th = p.coords.x, ph = p.coords.y;
        return {R_ * std::sin(th) * std::cos(ph), R_ * std::sin(th) * std::sin(ph),
                R_ * std::cos(th)};
    }

    bool at_pole(const SurfacePoint& p) const {
        return p.coords.x <= 0.0 || p.coords.x >= kPi;
    }

    // Unit ambient frame vectors corresponding to the chart directions.
    void ambient_frame(const SurfacePoint& p, Vec3& e1, Vec3& e2) const {
        double th = p.coords.x, ph = p.coords.y;
        if (at_pole(p)) {
            // Limit of e_theta along the phi=0 meridian; e2 completes it.
            if (th <= 0.0) {
                e1 = {1, 0, 0};
                e2 = {0, 1, 0};
            } else {
                e1 = {-1, 0, 0};
                e2 = {0, 1, 0};
            }
            return;
        }
        e1 = {std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th)};
        e2 = {-std::sin(ph), std::cos(ph), 0};
    }

    // Ambient vector of chart components (metric-faithful).
    Vec3 to_ambient(const SurfacePoint& p, Vec2 comp) const {
        Vec3 e1, e2;
        ambient_frame(p, e1, e2);
        if (at_pole(p)) return R_ * (comp.x * e1 + comp.y * e2);
        double th = p.coords.x;
        return R_ * (comp.x * e1 + std::sin(th) * comp.y * e2);
    }

    Vec2 from_ambient(const SurfacePoint& p, Vec3 u) const {
        Vec3 e1, e2;
        ambient_frame(p, e1, e2);
        if (at_pole(p)) return {dot(u, e1) / R_, dot(u, e2) / R_};
        double th = p.coords.x;
        return {dot(u, e1) / R_, dot(u, e2) / (R_ * std::sin(th))};
    }

    SurfacePoint from_embed(Vec3 q) const {
        Vec3 n = normalized(q);
        double th = std::acos(clamp_unit(n.z));
        double ph = (std::abs(n.x) + std::abs(n.y) > 0) ? std::atan2(n.y, n.x) : 0.0;
        return SurfacePoint{id_, {th, ph}};
    }

    double distance(const SurfacePoint& x, const SurfacePoint& y) const override {
        check_point(x);
        check_same_surface(x, y);
        return R_ * stable_angle(embed(x), embed(y));
    }

    GeodesicList geodesics(const SurfacePoint& x, const SurfacePoint& y, double,
                           int max_representatives) const override {
        check_point(x);
        check_same_surface(x, y);
        Vec3 px = normalized(embed(x)), py = normalized(embed(y));
        double sigma = stable_angle(px, py);
        if (sigma == 0) throw UsageError("geodesics requires x != y");
        GeodesicList gl;
        if (sigma >= kPi - kAntipodeEps) {
            // Antipodal pair: continuum of great circles; return a sample.
            gl.continuum = true;
            Vec3 a = std::abs(px.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
            Vec3 b1 = normalized(cross(px, a));
            Vec3 b2 = cross(px, b1);
            int k = std::max(1, max_representatives);
            for (int j = 0; j < k; ++j) {
                double beta = 2 * kPi * j / k;
                Vec3 u = std::cos(beta) * b1 + std::sin(beta) * b2;
                TangentVector dir = unit_tangent(x, from_ambient(x, u));
                gl.paths.push_back(single_path(*this, x, dir, kPi * R_));
            }
            return gl;
        }
        Vec3 u = (1.0 / std::sin(sigma)) * (py - std::cos(sigma) * px);
        TangentVector dir = unit_tangent(x, from_ambient(x, u));
        gl.paths.push_back(single_path(*this, x, dir, R_ * sigma));
        return gl;
    }

    SurfacePoint exp_map(const SurfacePoint& x, const TangentVector& v,
                         double t) const override {
        check_point(x);
        if (t < 0) throw UsageError("exp_map requires t >= 0");
        Vec3 px = embed(x);
        Vec3 u = normalized(to_ambient(x, v.comp));
        double a = t / R_;
        Vec3 q = std::cos(a) * px + (R_ * std::sin(a)) * u;
        return from_embed(q);
    }

    double metric_dot(const SurfacePoint& at, Vec2 a, Vec2 b) const override {
        if (at_pole(at)) return R_ * R_ * dot(a, b);
        double s = std::sin(at.coords.x);
        return R_ * R_ * (a.x * b.x + s * s * a.y * b.y);
    }

    OrthoFrame orthoframe(const SurfacePoint& at) const override {
        if (at_pole(at)) return {{1.0 / R_, 0}, {0, 1.0 / R_}};
        double s = std::sin(at.coords.x);
        return {{1.0 / R_, 0}, {0, 1.0 / (R_ * s)}};
    }

    double curvature_lower_bound() const override { return K_; }
    double injectivity_scale(const SurfacePoint&) const override {
        return 0.999 * kPi * R_;
    }

private:
    double K_;
    double R_;
};

// ---------------------------------------------------------------------------
// Hyperbolic plane of curvature -K in the Poincare disk model: conformal
// metric lambda(z)|dz| with lambda = (2/sqrt(K)) / (1 - |z|^2).
// ---------------------------------------------------------------------------

class HyperbolicPlane final : public Surface {
public:
    explicit HyperbolicPlane(double curvature)
        : Surface(Kind::Hyperbolic, true), K_(-curvature) {
        if (!(curvature < 0)) throw UsageError("hyperbolic curvature must be negative");
        sqrtK_ = std::sqrt(K_);
    }

    std::string name() const override { return "hyperbolic-plane"; }
    bool contains(Vec2 c) const override { return c.x * c.x + c.y * c.y < 1.0; }

    double lambda(Vec2 c) const {
        return (2.0 / sqrtK_) / (1.0 - (c.x * c.x + c.y * c.y));
    }

    static std::complex<double> cx(Vec2 c) { return {c.x, c.y}; }
    static Vec2 vc(std::complex<double> z) { return {z.real(), z.imag()}; }

    // Disk isometry sending 0 to a.
    static std::complex<double> mobius(std::complex<double> a, std::complex<double> w) {
        return (w + a) / (1.0 + std::conj(a) * w);
    }

    double distance(const SurfacePoint& x, const SurfacePoint& y) const override {
        check_point(x);
        check_same_surface(x, y);
        auto zx = cx(x.coords), zy = cx(y.coords);
        double r = std::abs((zy - zx) / (1.0 - std::conj(zx) * zy));
        return (2.0 / sqrtK_) * std::atanh(std::min(r, 1.0 - 1e-16));
    }

    GeodesicList geodesics(const SurfacePoint& x, const SurfacePoint& y, double,
                           int) const override {
        check_point(x);
        check_same_surface(x, y);
        auto zx = cx(x.coords), zy = cx(y.coords);
        auto w = (zy - zx) / (1.0 - std::conj(zx) * zy);
        double r = std::abs(w);
        if (r == 0) throw UsageError("geodesics requires x != y");
        // The differential of the Mobius translation at 0 is a positive real
        // scalar, so the Euclidean direction of w is the chart direction at x.
        Vec2 e = vc(w / r);
        TangentVector dir = unit_tangent(x, e);
        double d = (2.0 / sqrtK_) * std::atanh(r);
        GeodesicList gl;
        gl.paths.push_back(single_path(*this, x, dir, d));
        return gl;
    }

    SurfacePoint exp_map(const SurfacePoint& x, const TangentVector& v,
                         double t) const override {
        check_point(x);
        if (t < 0) throw UsageError("exp_map requires t >= 0");
        Vec2 e = normalized(v.comp);
        double r = std::tanh(0.5 * sqrtK_ * t);
        auto y = mobius(cx(x.coords), r * cx(e));
        return SurfacePoint{id_, vc(y)};
    }

    double metric_dot(const SurfacePoint& at, Vec2 a, Vec2 b) const override {
        double l = lambda(at.coords);
        return l * l * dot(a, b);
    }

    OrthoFrame orthoframe(const SurfacePoint& at) const override {
        double l = lambda(at.coords);
        return {{1.0 / l, 0}, {0, 1.0 / l}};
    }

    double curvature_lower_bound() const override { return -K_; }
    double injectivity_scale(const SurfacePoint&) const override { return 1e100; }

private:
    double K_;  // positive magnitude of the curvature
    double sqrtK_;
};

// ---------------------------------------------------------------------------
// Flat cylinder of circumference L: chart (u, h), u periodic in [0, L).
// ---------------------------------------------------------------------------

class FlatCylinder final : public Surface {
public:
    explicit FlatCylinder(double circumference)
        : Surface(Kind::Cylinder, true), L_(circumference) {
        if (!(circumference > 0)) throw UsageError("circumference must be positive");
    }

    std::string name() const override { return "flat-cylinder"; }
    bool contains(Vec2 c) const override { return c.x >= 0.0 && c.x < L_; }

    double distance(const SurfacePoint& x, const SurfacePoint& y) const override {
        check_point(x);
        check_same_surface(x, y);
        double du = wrap_signed(y.coords.x - x.coords.x, L_);
        double dh = y.coords.y - x.coords.y;
        return std::hypot(du, dh);
    }

    GeodesicList geodesics(const SurfacePoint& x, const SurfacePoint& y, double tol,
                           int) const override {
        check_point(x);
        check_same_surface(x, y);
        double du = wrap_signed(y.coords.x - x.coords.x, L_);
        double dh = y.coords.y - x.coords.y;
        if (du == 0 && dh == 0) throw UsageError("geodesics requires x != y");
        // Two lifts can tie when the points sit halfway around the circle.
        double lifts[2] = {du, du >= 0 ? du - L_ : du + L_};
        double len[2] = {std::hypot(lifts[0], dh), std::hypot(lifts[1], dh)};
        double best = std::min(len[0], len[1]);
        GeodesicList gl;
        for (int i = 0; i < 2; ++i) {
            if (len[i] <= best + tol) {
                Vec2 delta{lifts[i], dh};
                TangentVector dir{x, (1.0 / len[i]) * delta, 1.0};
                gl.paths.push_back(single_path(*this, x, dir, len[i]));
            }
        }
        return gl;
    }

    SurfacePoint exp_map(const SurfacePoint& x, const TangentVector& v,
                         double t) const override {
        check_point(x);
        if (t < 0) throw UsageError("exp_map requires t >= 0");
        return SurfacePoint{
            id_, {wrap_periodic(x.coords.x + t * v.comp.x, L_), x.coords.y + t * v.comp.y}};
    }

    double metric_dot(const SurfacePoint&, Vec2 a, Vec2 b) const override {
        return dot(a, b);
    }

    OrthoFrame orthoframe(const SurfacePoint&) const override {
        return {{1, 0}, {0, 1}};
    }

    double curvature_lower_bound() const override { return 0.0; }
    double injectivity_scale(const SurfacePoint&) const override { return 0.499 * L_; }

private:
    double L_;
};

// ---------------------------------------------------------------------------
// Slit plane: R^2 minus the closed ray {(0, t) : t >= 0} with its intrinsic
// length metric. Blocked pairs are joined by the infimal two-segment path
// through the removed tip; its length is the distance but it is not attained.
// ---------------------------------------------------------------------------

class SlitPlane final : public Surface {
public:
    SlitPlane() : Surface(Kind::SlitPlane, false) {}

    std::string name() const override { return "slit-plane"; }

    bool contains(Vec2 c) const override { return c.x != 0.0 || c.y < 0.0; }

    static bool blocked(Vec2 p, Vec2 q) {
        if (p.x * q.x >= 0.0) return false;  // both strictly one side, or one on the axis
        double t = p.x / (p.x - q.x);
        double ycross = p.y + t * (q.y - p.y);
        return ycross >= 0.0;
    }

    double distance(const SurfacePoint& x, const SurfacePoint& y) const override {
        check_point(x);
        check_same_surface(x, y);
        Vec2 p = x.coords, q = y.coords;
        if (blocked(p, q)) return norm(p) + norm(q);
        return norm(q - p);
    }

    GeodesicList geodesics(const SurfacePoint& x, const SurfacePoint& y, double,
                           int) const override {
        check_point(x);
        check_same_surface(x, y);
        Vec2 p = x.coords, q = y.coords;
        GeodesicList gl;
        if (!blocked(p, q)) {
            double d = norm(q - p);
            if (d == 0) throw UsageError("geodesics requires x != y");
            TangentVector dir{x, (1.0 / d) * (q - p), 1.0};
            gl.paths.push_back(single_path(*this, x, dir, d));
            return gl;
        }
        double a = norm(p), b = norm(q);
        GeodesicPath path;
        path.start = x;
        path.initial_dir = TangentVector{x, (-1.0 / a) * p, 1.0};
        path.length = a + b;
        path.attained = false;  // passes through the removed tip
        int sid = id_;
        path.eval = [p, q, a, b, sid](double s) {
            if (s <= a) return SurfacePoint{sid, (1.0 - s / a) * p};
            return SurfacePoint{sid, ((s - a) / b) * q};
        };
        gl.paths.push_back(std::move(path));
        return gl;
    }

    SurfacePoint exp_map(const SurfacePoint& x, const TangentVector& v,
                         double t) const override {
        check_point(x);
        if (t < 0) throw UsageError("exp_map requires t >= 0");
        Vec2 p = x.coords, d = v.comp;
        if (d.x != 0.0) {
            double s = -p.x / d.x;
            if (s > 0 && s <= t && p.y + s * d.y >= 0.0)
                throw DomainExit("geodesic hits the removed ray", s);
        } else if (p.x == 0.0 && d.y > 0) {
            double s = -p.y / d.y;  // p.y < 0 on the negative axis
            if (s <= t) throw DomainExit("geodesic hits the slit tip", s);
        }
        return SurfacePoint{id_, p + t * d};
    }

    double metric_dot(const SurfacePoint&, Vec2 a, Vec2 b) const override {
        return dot(a, b);
    }

    OrthoFrame orthoframe(const SurfacePoint&) const override {
        return {{1, 0}, {0, 1}};
    }

    double curvature_lower_bound() const override { return 0.0; }

    double injectivity_scale(const SurfacePoint& x) const override {
        return norm(x.coords);  // distance to the tip
    }
};

// ---------------------------------------------------------------------------
// Flat cone of total apex angle alpha: chart (r, psi), psi periodic in
// [0, alpha). The apex r = 0 belongs to the surface; tangent vectors there
// are degenerate and exp_map refuses them.
// ---------------------------------------------------------------------------

class FlatCone final : public Surface {
public:
    explicit FlatCone(double total_angle)
        : Surface(Kind::Cone, true), alpha_(total_angle) {
        if (!(total_angle > 0)) throw UsageError("cone angle must be positive");
    }

    std::string name() const override { return "flat-cone"; }
    bool contains(Vec2 c) const override {
        return c.x >= 0.0 && c.y >= 0.0 && c.y < alpha_;
    }

    double distance(const SurfacePoint& x, const SurfacePoint& y) const override {
        check_point(x);
        check_same_surface(x, y);
        double r1 = x.coords.x, r2 = y.coords.x;
        if (r1 == 0 || r2 == 0) return r1 + r2;  // radial distance to the apex
        double dpsi = std::abs(wrap_signed(y.coords.y - x.coords.y, alpha_));
        if (dpsi >= kPi) return r1 + r2;
        return std::sqrt(std::max(0.0, r1 * r1 + r2 * r2 - 2 * r1 * r2 * std::cos(dpsi)));
    }

    GeodesicList geodesics(const SurfacePoint& x, const SurfacePoint& y, double tol,
                           int) const override {
        check_point(x);
        check_same_surface(x, y);
        double r1 = x.coords.x, r2 = y.coords.x;
        GeodesicList gl;
        if (r1 == 0 || r2 == 0) {
            if (r1 == r2) throw UsageError("geodesics requires x != y");
            // Radial segment to or from the apex.
            if (r1 == 0) {
                // Leaving the apex: direction frame is degenerate; march along
                // the target ray by construction.
                GeodesicPath path;
                path.start = x;
                path.length = r2;
                double psi = y.coords.y;
                int sid = id_;
                path.initial_dir = TangentVector{x, {1, 0}, 1.0};
                path.eval = [sid, psi](double s) { return SurfacePoint{sid, {s, psi}}; };
                gl.paths.push_back(std::move(path));
            } else {
                TangentVector dir{x, {-1, 0}, 1.0};
                gl.paths.push_back(single_path(*this, x, dir, r1));
            }
            return gl;
        }
        // Two ways around the apex; each side shorter than pi unrolls to a
        // straight segment.
        double dpsi_pos = wrap_periodic(y.coords.y - x.coords.y, alpha_);
        double sides[2] = {dpsi_pos, alpha_ - dpsi_pos};
        double signs[2] = {+1, -1};
        double best = distance(x, y);
        bool through_apex = true;
        for (int i = 0; i < 2; ++i) {
            if (sides[i] < kPi) {
                double len = std::sqrt(std::max(
                    0.0, r1 * r1 + r2 * r2 - 2 * r1 * r2 * std::cos(sides[i])));
                if (len <= best + tol) {
                    // Unrolled: x at angle 0, y at angle signs[i]*sides[i].
                    Vec2 px{r1, 0};
                    Vec2 py{r2 * std::cos(sides[i]), signs[i] * r2 * std::sin(sides[i])};
                    Vec2 e = normalized(py - px);
                    // Chart components: e = v_r * E_r + v_psi * E_psi with
                    // E_r = (1,0), E_psi = (0, r1) in the unrolled frame.
                    TangentVector dir = unit_tangent(x, {e.x, e.y / r1});
                    gl.paths.push_back(single_path(*this, x, dir, len));
                    through_apex = false;
                }
            }
        }
        if (through_apex) {
            // Both side angles >= pi: the minimizer is the path through the apex.
            GeodesicPath path;
            path.start = x;
            path.length = r1 + r2;
            path.initial_dir = TangentVector{x, {-1, 0}, 1.0};
            int sid = id_;
            double psi1 = x.coords.y, psi2 = y.coords.y;
            path.eval = [sid, r1, psi1, psi2](double s) {
                if (s <= r1) return SurfacePoint{sid, {r1 - s, psi1}};
                return SurfacePoint{sid, {s - r1, psi2}};
            };
            gl.paths.push_back(std::move(path));
        }
        return gl;
    }

    SurfacePoint exp_map(const SurfacePoint& x, const TangentVector& v,
                         double t) const override {
        check_point(x);
        if (t < 0) throw UsageError("exp_map requires t >= 0");
        double r = x.coords.x;
        if (r == 0) throw UsageError("tangent frame degenerate at the cone apex");
        Vec2 p{r, 0};
        Vec2 dir{v.comp.x, r * v.comp.y};  // unrolled unit direction
        Vec2 q = p + t * dir;
        double rq = norm(q);
        if (rq < 1e-300) {
            throw DomainExit("geodesic hits the cone apex", r);
        }
        double dpsi = std::atan2(q.y, q.x);
        return SurfacePoint{id_, {rq, wrap_periodic(x.coords.y + dpsi, alpha_)}};
    }

    double metric_dot(const SurfacePoint& at, Vec2 a, Vec2 b) const override {
        double r = at.coords.x;
        return a.x * b.x + r * r * a.y * b.y;
    }

    OrthoFrame orthoframe(const SurfacePoint& at) const override {
        double r = at.coords.x;
        if (r == 0) throw UsageError("tangent frame degenerate at the cone apex");
        return {{1, 0}, {0, 1.0 / r}};
    }

    double curvature_lower_bound() const override { return 0.0; }

    double injectivity_scale(const SurfacePoint& x) const override {
        double r = x.coords.x;
        return r * std::sin(std::min(alpha_ / 2, kPi / 2)) * 0.999;
    }

private:
    double alpha_;
};

}  // namespace

SurfacePtr make_plane() { return std::make_shared<EuclideanPlane>(); }
SurfacePtr make_sphere(double curvature) { return std::make_shared<RoundSphere>(curvature); }
SurfacePtr make_hyperbolic(double curvature) {
    return std::make_shared<HyperbolicPlane>(curvature);
}
SurfacePtr make_cylinder(double circumference) {
    return std::make_shared<FlatCylinder>(circumference);
}
SurfacePtr make_slit_plane() { return std::make_shared<SlitPlane>(); }
SurfacePtr make_cone(double total_angle) { return std::make_shared<FlatCone>(total_angle); }

}  // namespace surfdist
