#include "surfdist/closed_set.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace surfdist {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ClusteredDirs {
    std::vector<TangentVector> dirs;
    double span = 0;
    int raw = 0;
};

ClusteredDirs cluster_directions(const Surface& s, const std::vector<TangentVector>& raw,
                                 double merge_angle) {
    ClusteredDirs out;
    out.raw = static_cast<int>(raw.size());
    if (raw.empty()) return out;
    std::vector<std::pair<double, std::size_t>> angles;
    angles.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        angles.emplace_back(wrap_periodic(s.angle_of(raw[i]), 2 * kPi), i);
    std::sort(angles.begin(), angles.end());

    // Span = arc covered by the candidates = 2*pi minus the largest gap.
    double max_gap = 0;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        double next = (i + 1 < angles.size()) ? angles[i + 1].first
                                              : angles[0].first + 2 * kPi;
        max_gap = std::max(max_gap, next - angles[i].first);
    }
    out.span = angles.size() > 1 ? 2 * kPi - max_gap : 0.0;

    // Greedy circular clustering at the merge angle; a cluster keeps its
    // first (lowest-angle) member as representative.
    std::vector<bool> used(angles.size(), false);
    for (std::size_t i = 0; i < angles.size(); ++i) {
        if (used[i]) continue;
        double a0 = angles[i].first;
        out.dirs.push_back(raw[angles[i].second]);
        for (std::size_t j = i; j < angles.size(); ++j) {
            double delta = angles[j].first - a0;
            if (delta <= merge_angle + 1e-15) {
                used[j] = true;
                a0 = angles[j].first;  // chains within the merge angle
            }
        }
    }
    // Circular wrap: merge the last cluster into the first when they touch.
    if (out.dirs.size() > 1) {
        double first = wrap_periodic(s.angle_of(out.dirs.front()), 2 * kPi);
        double last = wrap_periodic(s.angle_of(out.dirs.back()), 2 * kPi);
        if (first + 2 * kPi - last <= merge_angle + 1e-15) out.dirs.pop_back();
    }
    return out;
}

double golden_minimize(const std::function<double(double)>& f, double lo, double hi,
                       int iters, double* arg) {
    const double phi = (std::sqrt(5.0) - 1) / 2;
    double a = lo, b = hi;
    double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters; ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + phi * (b - a);
            f2 = f(x2);
        }
    }
    double xm = 0.5 * (a + b);
    if (arg) *arg = xm;
    return f(xm);
}

}  // namespace

// ---------------------------------------------------------------------------

ClosedSet::ClosedSet(SurfacePtr surface, SetDescriptor desc, double sample_pitch)
    : surface_(std::move(surface)), desc_(std::move(desc)), pitch_(sample_pitch) {
    if (!surface_) throw UsageError("closed set needs a surface");
    if (!(sample_pitch > 0)) throw UsageError("sample pitch must be positive");

    if (const auto* c = std::get_if<CircleDescriptor>(&desc_)) {
        if (surface_->kind() != Surface::Kind::Plane &&
            surface_->kind() != Surface::Kind::Sphere)
            throw UsageError("circle descriptors are supported on the plane and the sphere");
        if (!(c->radius > 0)) throw UsageError("circle radius must be positive");
        surface_->check_point(c->center);
    }
    if (const auto* sl = std::get_if<SublevelDescriptor>(&desc_)) {
        if (sl->field == "plane-y") {
            if (surface_->kind() != Surface::Kind::Plane)
                throw UsageError("field 'plane-y' lives on the euclidean plane");
        } else if (sl->field == "sphere-dist-south") {
            if (surface_->kind() != Surface::Kind::Sphere)
                throw UsageError("field 'sphere-dist-south' lives on the sphere");
            if (!(sl->level > 0)) throw UsageError("sublevel level must be positive");
        } else {
            throw UsageError("unknown sublevel field: " + sl->field);
        }
    }
    if (const auto* pl = std::get_if<PolylineDescriptor>(&desc_)) {
        if (pl->pts.size() < 2) throw UsageError("polyline needs at least two points");
        std::size_t n = pl->pts.size();
        double cum = 0;
        std::size_t seg_count = pl->closed ? n : n - 1;
        for (std::size_t i = 0; i < seg_count; ++i) {
            const SurfacePoint& a = pl->pts[i];
            const SurfacePoint& b = pl->pts[(i + 1) % n];
            auto gl = surface_->geodesics(a, b);
            if (gl.continuum || gl.paths.size() != 1)
                throw UsageError("polyline segment has no unique geodesic");
            const auto& path = gl.paths.front();
            segments_.push_back({a, path.initial_dir, path.length, cum});
            cum += path.length;
        }
    }
    build_cloud();
}

double ClosedSet::curve_length() const {
    if (segments_.empty()) return 0;
    return segments_.back().cum0 + segments_.back().length;
}

SurfacePoint ClosedSet::curve_point(double t) const {
    double total = curve_length();
    const auto* pl = std::get_if<PolylineDescriptor>(&desc_);
    if (pl && pl->closed) t = wrap_periodic(t, total);
    t = std::clamp(t, 0.0, total);
    auto it = std::upper_bound(segments_.begin(), segments_.end(), t,
                               [](double v, const CurveSegment& s) { return v < s.cum0; });
    std::size_t idx = (it == segments_.begin()) ? 0 : (it - segments_.begin() - 1);
    const CurveSegment& seg = segments_[idx];
    double local = std::clamp(t - seg.cum0, 0.0, seg.length);
    return surface_->exp_map(seg.start, seg.dir, local);
}

void ClosedSet::build_cloud() {
    cloud_.clear();
    cloud_param_.clear();
    if (const auto* p = std::get_if<PointDescriptor>(&desc_)) {
        surface_->check_point(p->p);
        cloud_ = {p->p};
        pitch_ = 0;
        return;
    }
    if (const auto* ps = std::get_if<PointSetDescriptor>(&desc_)) {
        if (ps->pts.empty()) throw UsageError("point set must be nonempty");
        for (const auto& q : ps->pts) surface_->check_point(q);
        cloud_ = ps->pts;
        pitch_ = 0;
        return;
    }
    if (const auto* c = std::get_if<CircleDescriptor>(&desc_)) {
        double circ = 2 * kPi * c->radius;  // upper bound; fine on the sphere too
        int n = std::max<int>(16, static_cast<int>(std::ceil(circ / pitch_)));
        for (int j = 0; j < n; ++j) {
            auto v = surface_->from_angle(c->center, 2 * kPi * j / n);
            cloud_.push_back(surface_->exp_map(c->center, v, c->radius));
        }
        return;
    }
    if (std::get_if<PolylineDescriptor>(&desc_)) {
        double total = curve_length();
        const auto* pl = std::get_if<PolylineDescriptor>(&desc_);
        int n = std::max<int>(8, static_cast<int>(std::ceil(total / pitch_)));
        int count = pl->closed ? n : n + 1;
        for (int j = 0; j < count; ++j) {
            double t = total * j / n;
            cloud_.push_back(curve_point(t));
            cloud_param_.push_back(t);
        }
        return;
    }
    const auto& sl = std::get<SublevelDescriptor>(desc_);
    if (sl.field == "plane-y") {
        // Boundary line sampled over a fixed working window.
        const double span = 6.0;
        int n = static_cast<int>(std::ceil(2 * span / pitch_));
        for (int j = 0; j <= n; ++j)
            cloud_.push_back(surface_->point(-span + 2 * span * j / n, sl.level));
        return;
    }
    // sphere-dist-south: boundary is the geodesic circle of radius `level`
    // around the south pole.
    SurfacePoint south = surface_->point(kPi, 0.0);
    double circ = 2 * kPi * sl.level;
    int n = std::max<int>(16, static_cast<int>(std::ceil(circ / pitch_)));
    for (int j = 0; j < n; ++j) {
        auto v = surface_->from_angle(south, 2 * kPi * j / n);
        cloud_.push_back(surface_->exp_map(south, v, sl.level));
    }
}

double ClosedSet::field_value(const SurfacePoint& x) const {
    const auto& sl = std::get<SublevelDescriptor>(desc_);
    if (sl.field == "plane-y") return x.coords.y;
    // sphere-dist-south: theta is the polar angle from the north pole.
    SurfacePoint south{x.surface_id, {kPi, 0.0}};
    return surface_->distance(x, south);
}

bool ClosedSet::contains(const SurfacePoint& x, double tol) const {
    surface_->check_point(x);
    if (const auto* sl = std::get_if<SublevelDescriptor>(&desc_))
        return field_value(x) <= sl->level + tol;
    return eval(x) <= tol;
}

EvalResult ClosedSet::eval_detail(const SurfacePoint& x) const {
    surface_->check_point(x);
    const bool slit = surface_->kind() == Surface::Kind::SlitPlane;

    auto attained_to = [&](const SurfacePoint& target) {
        if (!slit) return true;
        if (surface_->distance(x, target) == 0) return true;
        auto gl = surface_->geodesics(x, target);
        for (const auto& p : gl.paths)
            if (p.attained) return true;
        return false;
    };

    if (const auto* p = std::get_if<PointDescriptor>(&desc_))
        return {surface_->distance(x, p->p), attained_to(p->p)};

    if (const auto* ps = std::get_if<PointSetDescriptor>(&desc_)) {
        double best = kInf;
        const SurfacePoint* argmin = nullptr;
        for (const auto& q : ps->pts) {
            double d = surface_->distance(x, q);
            if (d < best) {
                best = d;
                argmin = &q;
            }
        }
        return {best, argmin ? attained_to(*argmin) : true};
    }

    if (const auto* c = std::get_if<CircleDescriptor>(&desc_))
        return {std::abs(surface_->distance(x, c->center) - c->radius), true};

    if (std::get_if<SublevelDescriptor>(&desc_)) {
        double g = field_value(x);
        return {std::max(0.0, g - std::get<SublevelDescriptor>(desc_).level), true};
    }

    // Polyline: cloud scan plus golden-section refinement near the winner.
    double best = kInf;
    std::size_t besti = 0;
    for (std::size_t i = 0; i < cloud_.size(); ++i) {
        double d = surface_->distance(x, cloud_[i]);
        if (d < best) {
            best = d;
            besti = i;
        }
    }
    double total = curve_length();
    const auto* pl = std::get_if<PolylineDescriptor>(&desc_);
    double t = cloud_param_[besti];
    double lo = t - total / cloud_.size(), hi = t + total / cloud_.size();
    if (!pl->closed) {
        lo = std::max(lo, 0.0);
        hi = std::min(hi, total);
    }
    double targ = t;
    double refined = golden_minimize(
        [&](double tt) { return surface_->distance(x, curve_point(tt)); }, lo, hi, 60, &targ);
    double value = std::min(best, refined);
    return {value, slit ? attained_to(curve_point(targ)) : true};
}

FootpointResult ClosedSet::footpoints(const SurfacePoint& x, const Config& cfg) const {
    surface_->check_point(x);
    double ftol = cfg.effective_footpoint_tol(pitch_);
    EvalResult ev = eval_detail(x);
    if (ev.value <= ftol)
        throw UsageError("footpoints requires the query point outside A");

    FootpointResult out;
    out.query = x;
    out.value = ev.value;
    out.attained = ev.attained;

    std::vector<TangentVector> raw;
    bool continuum_hint = false;

    auto add_paths_to = [&](const SurfacePoint& fp) {
        auto gl = surface_->geodesics(x, fp, cfg.geodesic_tol, cfg.continuum_representatives);
        continuum_hint = continuum_hint || gl.continuum;
        for (const auto& p : gl.paths) raw.push_back(p.initial_dir);
    };

    if (const auto* p = std::get_if<PointDescriptor>(&desc_)) {
        out.footpoints = {p->p};
        add_paths_to(p->p);
    } else if (const auto* ps = std::get_if<PointSetDescriptor>(&desc_)) {
        for (const auto& q : ps->pts)
            if (surface_->distance(x, q) <= ev.value + ftol) {
                out.footpoints.push_back(q);
                add_paths_to(q);
            }
    } else if (const auto* c = std::get_if<CircleDescriptor>(&desc_)) {
        double dc = surface_->distance(x, c->center);
        bool center_like = dc <= 1e-12;
        bool antipodal = surface_->kind() == Surface::Kind::Sphere &&
                         dc >= kPi / std::sqrt(surface_->curvature_lower_bound()) - 1e-9;
        if (center_like || antipodal) {
            int k = cfg.continuum_representatives;
            for (int j = 0; j < k; ++j) {
                auto v = surface_->from_angle(c->center, 2 * kPi * j / k);
                SurfacePoint fp = surface_->exp_map(c->center, v, c->radius);
                out.footpoints.push_back(fp);
                add_paths_to(fp);
            }
            continuum_hint = true;
        } else {
            auto dir_cx = surface_->geodesics(c->center, x).paths.front().initial_dir;
            SurfacePoint fp = surface_->exp_map(c->center, dir_cx, c->radius);
            out.footpoints = {fp};
            add_paths_to(fp);
        }
    } else if (const auto* sl = std::get_if<SublevelDescriptor>(&desc_)) {
        if (sl->field == "plane-y") {
            SurfacePoint fp = surface_->point(x.coords.x, sl->level);
            out.footpoints = {fp};
            add_paths_to(fp);
        } else {
            SurfacePoint south{x.surface_id, {kPi, 0.0}};
            double dsouth = surface_->distance(x, south);
            double R = 1.0 / std::sqrt(surface_->curvature_lower_bound());
            bool north_pole = dsouth >= kPi * R - 1e-9;
            if (north_pole) {
                // The whole boundary circle is equidistant.
                int k = cfg.continuum_representatives;
                for (int j = 0; j < k; ++j) {
                    auto v = surface_->from_angle(south, 2 * kPi * j / k);
                    SurfacePoint fp = surface_->exp_map(south, v, sl->level);
                    out.footpoints.push_back(fp);
                    add_paths_to(fp);
                }
                continuum_hint = true;
            } else {
                auto dir_sx = surface_->geodesics(south, x).paths.front().initial_dir;
                SurfacePoint fp = surface_->exp_map(south, dir_sx, sl->level);
                out.footpoints = {fp};
                add_paths_to(fp);
            }
        }
    } else {
        return footpoints_generic(x, cfg);
    }

    auto clustered = cluster_directions(*surface_, raw, cfg.direction_merge_angle);
    out.directions = std::move(clustered.dirs);
    out.span_angle = clustered.span;
    out.raw_candidates = clustered.raw;
    out.continuum = continuum_hint ||
                    (clustered.raw >= cfg.continuum_threshold &&
                     clustered.span > cfg.direction_merge_angle);
    return out;
}

FootpointResult ClosedSet::footpoints_generic(const SurfacePoint& x, const Config& cfg) const {
    const auto* pl = std::get_if<PolylineDescriptor>(&desc_);
    double ftol = cfg.effective_footpoint_tol(pitch_);
    double total = curve_length();
    std::size_t n = cloud_.size();

    std::vector<double> d(n);
    double dmin = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = surface_->distance(x, cloud_[i]);
        dmin = std::min(dmin, d[i]);
    }

    // Refine every sampled local minimum near the global value.
    struct Candidate {
        double t;
        double d;
    };
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < n; ++i) {
        double prev = pl->closed ? d[(i + n - 1) % n] : (i > 0 ? d[i - 1] : kInf);
        double next = pl->closed ? d[(i + 1) % n] : (i + 1 < n ? d[i + 1] : kInf);
        if (d[i] > prev || d[i] > next) continue;
        if (d[i] > dmin + ftol + 2 * pitch_) continue;
        double step = total / (pl->closed ? n : (n - 1));
        double lo = cloud_param_[i] - step, hi = cloud_param_[i] + step;
        if (!pl->closed) {
            lo = std::max(0.0, lo);
            hi = std::min(total, hi);
        }
        double targ = cloud_param_[i];
        double val = golden_minimize(
            [&](double tt) { return surface_->distance(x, curve_point(tt)); }, lo, hi, 80,
            &targ);
        cands.push_back({pl->closed ? wrap_periodic(targ, total) : targ, val});
    }

    double best = kInf;
    for (const auto& c : cands) best = std::min(best, c.d);

    FootpointResult out;
    out.query = x;
    out.value = best;
    out.attained = true;

    std::vector<TangentVector> raw;
    bool continuum_hint = false;
    const bool slit = surface_->kind() == Surface::Kind::SlitPlane;
    bool any_attained = false;
    for (const auto& c : cands) {
        if (c.d > best + ftol) continue;
        SurfacePoint fp = curve_point(c.t);
        bool dup = false;
        for (const auto& existing : out.footpoints)
            if (surface_->distance(existing, fp) <= 0.5 * pitch_) dup = true;
        if (dup) continue;
        out.footpoints.push_back(fp);
        auto gl = surface_->geodesics(x, fp, cfg.geodesic_tol, cfg.continuum_representatives);
        continuum_hint = continuum_hint || gl.continuum;
        for (const auto& p : gl.paths) {
            raw.push_back(p.initial_dir);
            any_attained = any_attained || p.attained;
        }
    }
    if (slit) out.attained = any_attained;

    auto clustered = cluster_directions(*surface_, raw, cfg.direction_merge_angle);
    out.directions = std::move(clustered.dirs);
    out.span_angle = clustered.span;
    out.raw_candidates = clustered.raw;
    out.continuum = continuum_hint ||
                    (clustered.raw >= cfg.continuum_threshold &&
                     clustered.span > cfg.direction_merge_angle);
    return out;
}

std::vector<NormalPush> ClosedSet::normal_pushes(double along_pitch, int fan) const {
    std::vector<SurfacePoint> bases;
    if (const auto* p = std::get_if<PointDescriptor>(&desc_)) {
        bases = {p->p};
    } else if (const auto* ps = std::get_if<PointSetDescriptor>(&desc_)) {
        bases = ps->pts;
    } else if (const auto* c = std::get_if<CircleDescriptor>(&desc_)) {
        double circ = 2 * kPi * c->radius;
        int n = std::max<int>(8, static_cast<int>(std::ceil(circ / along_pitch)));
        for (int j = 0; j < n; ++j) {
            auto v = surface_->from_angle(c->center, 2 * kPi * j / n);
            bases.push_back(surface_->exp_map(c->center, v, c->radius));
        }
    } else if (std::get_if<PolylineDescriptor>(&desc_)) {
        double total = curve_length();
        const auto* pl = std::get_if<PolylineDescriptor>(&desc_);
        int n = std::max<int>(8, static_cast<int>(std::ceil(total / along_pitch)));
        int count = pl->closed ? n : n + 1;
        for (int j = 0; j < count; ++j) bases.push_back(curve_point(total * j / n));
    } else {
        const auto& sl = std::get<SublevelDescriptor>(desc_);
        if (sl.field == "plane-y") {
            const double span = 6.0;
            int n = std::max<int>(8, static_cast<int>(std::ceil(2 * span / along_pitch)));
            for (int j = 0; j <= n; ++j)
                bases.push_back(surface_->point(-span + 2 * span * j / n, sl.level));
        } else {
            SurfacePoint south = surface_->point(kPi, 0.0);
            int n = std::max<int>(8,
                                  static_cast<int>(std::ceil(2 * kPi * sl.level / along_pitch)));
            for (int j = 0; j < n; ++j) {
                auto v = surface_->from_angle(south, 2 * kPi * j / n);
                bases.push_back(surface_->exp_map(south, v, sl.level));
            }
        }
    }

    // Candidate directions: a full fan everywhere (covers point sets, corner
    // cones, polyline endpoints) plus the exact perpendiculars for curve
    // descriptors. A probe step must leave A at near-unit rate, so only
    // near-exact normals survive the filter.
    double probe = std::max(along_pitch / 4, 1e-4);
    std::vector<NormalPush> out;
    auto try_dir = [&](const SurfacePoint& base, const TangentVector& v) {
        try {
            SurfacePoint probe_pt = surface_->exp_map(base, v, probe);
            double ratio = eval(probe_pt) / probe;
            if (ratio >= 0.99) out.push_back({base, v, std::min(ratio, 1.0)});
        } catch (const DomainExit&) {
        }
    };
    for (const auto& base : bases) {
        for (int j = 0; j < fan; ++j)
            try_dir(base, surface_->from_angle(base, 2 * kPi * j / fan));
        // Exact perpendiculars where the set is a curve through the base.
        if (const auto* c = std::get_if<CircleDescriptor>(&desc_)) {
            auto inward = surface_->geodesics(base, c->center).paths.front().initial_dir;
            double a = surface_->angle_of(inward);
            try_dir(base, surface_->from_angle(base, a));
            try_dir(base, surface_->from_angle(base, a + kPi));
        } else if (std::get_if<PolylineDescriptor>(&desc_) && !segments_.empty()) {
            // Tangent from the nearest cloud sample's segment direction.
            double bestd = 1e300;
            std::size_t besti = 0;
            for (std::size_t i = 0; i < cloud_.size(); ++i) {
                double d = surface_->distance(base, cloud_[i]);
                if (d < bestd) {
                    bestd = d;
                    besti = i;
                }
            }
            double t = cloud_param_[besti];
            auto it = std::upper_bound(
                segments_.begin(), segments_.end(), t,
                [](double v, const CurveSegment& s) { return v < s.cum0; });
            std::size_t idx = (it == segments_.begin()) ? 0 : (it - segments_.begin() - 1);
            double a = surface_->angle_of(segments_[idx].dir);
            try_dir(base, surface_->from_angle(base, a + kPi / 2));
            try_dir(base, surface_->from_angle(base, a - kPi / 2));
        } else if (const auto* sl = std::get_if<SublevelDescriptor>(&desc_)) {
            if (sl->field == "plane-y") {
                try_dir(base, surface_->from_angle(base, kPi / 2));
            } else {
                SurfacePoint south = surface_->point(kPi, 0.0);
                auto inward = surface_->geodesics(base, south).paths.front().initial_dir;
                try_dir(base, surface_->from_angle(base, surface_->angle_of(inward) + kPi));
            }
        }
    }
    return out;
}

}  // namespace surfdist
