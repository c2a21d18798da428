#include "surfdist/distance_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "surfdist/parallel.hpp"

namespace surfdist {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

const char* to_string(CellLabel label) {
    switch (label) {
        case CellLabel::Regular: return "REGULAR";
        case CellLabel::CutCandidate: return "CUT-CANDIDATE";
        case CellLabel::InSet: return "IN-A";
        case CellLabel::Unresolved: return "UNRESOLVED";
    }
    return "?";
}

std::size_t FieldGrid::count(CellLabel l) const {
    std::size_t n = 0;
    for (auto c : label)
        if (c == l) ++n;
    return n;
}

double gradient_norm_from_angles(const std::vector<double>& dir_angles, const Config& cfg,
                                 double* arg_angle) {
    if (dir_angles.empty()) throw UsageError("gradient norm needs at least one direction");
    if (dir_angles.size() == 1) {
        // Unique footpoint direction: the max-min is exactly 1, opposite it.
        if (arg_angle) *arg_angle = wrap_periodic(dir_angles[0] + kPi, 2 * kPi);
        return 1.0;
    }
    auto g = [&](double u) {
        double worst = std::numeric_limits<double>::infinity();
        for (double a : dir_angles) worst = std::min(worst, -std::cos(u - a));
        return worst;
    };
    // Coarse sweep.
    int n = std::max(8, cfg.sweep_samples);
    double best_u = 0, best_g = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        double u = 2 * kPi * i / n;
        double v = g(u);
        if (v > best_g) {
            best_g = v;
            best_u = u;
        }
    }
    // Bracketed refinement rounds around the running best.
    double half = 2 * kPi / n;
    int m = std::max(8, cfg.sweep_refine_samples);
    for (int round = 0; round < cfg.sweep_refine_rounds; ++round) {
        double lo = best_u - half, hi = best_u + half;
        for (int i = 0; i <= m; ++i) {
            double u = lo + (hi - lo) * i / m;
            double v = g(u);
            if (v > best_g) {
                best_g = v;
                best_u = u;
            }
        }
        half = (hi - lo) / m;
    }
    if (arg_angle) *arg_angle = wrap_periodic(best_u, 2 * kPi);
    return std::max(0.0, best_g);
}

GradientInfo gradient_norm(const ClosedSet& A, const SurfacePoint& x, const Config& cfg) {
    const Surface& s = *A.surface();
    FootpointResult fr = A.footpoints(x, cfg);

    GradientInfo out;
    out.point = x;
    out.value = fr.value;
    out.footpoint_count = static_cast<int>(fr.footpoints.size());
    out.continuum = fr.continuum;
    out.span_angle = fr.span_angle;
    out.attained = fr.attained;

    std::vector<double> angles;
    angles.reserve(fr.directions.size());
    for (const auto& d : fr.directions) angles.push_back(s.angle_of(d));

    double arg = 0;
    out.grad_norm = gradient_norm_from_angles(angles, cfg, &arg);
    if (out.grad_norm > 0) {
        TangentVector unit = s.from_angle(x, arg);
        out.grad_dir =
            TangentVector{x, out.grad_norm * unit.comp, out.grad_norm};
    }
    return out;
}

FieldGrid classify_region(const ClosedSet& A, Vec2 lo, Vec2 hi, int nx, int ny,
                          const Config& cfg) {
    if (nx < 2 || ny < 2) throw UsageError("grid needs at least 2x2 nodes");
    const SurfacePtr& s = A.surface();
    FieldGrid grid;
    grid.surface = s;
    grid.lo = lo;
    grid.hi = hi;
    grid.nx = nx;
    grid.ny = ny;
    std::size_t total = static_cast<std::size_t>(nx) * ny;
    grid.value.assign(total, kNaN);
    grid.grad_norm.assign(total, kNaN);
    grid.grad_angle.assign(total, kNaN);
    grid.footpoint_count.assign(total, 0);
    grid.label.assign(total, CellLabel::Unresolved);

    double in_tol = cfg.effective_footpoint_tol(A.pitch());

    parallel_for(
        static_cast<std::size_t>(ny),
        [&](std::size_t j) {
            for (int i = 0; i < nx; ++i) {
                std::size_t k = grid.idx(i, static_cast<int>(j));
                Vec2 c = grid.node_coords(i, static_cast<int>(j));
                if (!s->contains(c)) continue;  // off-domain: stays Unresolved
                SurfacePoint p{s->id(), c};
                double d = A.eval(p);
                grid.value[k] = d;
                if (d <= in_tol) {
                    grid.label[k] = CellLabel::InSet;
                    continue;
                }
                GradientInfo gi = gradient_norm(A, p, cfg);
                grid.grad_norm[k] = gi.grad_norm;
                grid.footpoint_count[k] = gi.footpoint_count;
                if (gi.grad_dir) grid.grad_angle[k] = s->angle_of(*gi.grad_dir);
                if (gi.grad_norm < 1.0 - cfg.grad_threshold)
                    grid.label[k] = CellLabel::CutCandidate;
                else if (gi.footpoint_count == 1 && !gi.continuum)
                    grid.label[k] = CellLabel::Regular;
                else
                    grid.label[k] = CellLabel::Unresolved;
            }
        },
        cfg.threads);

    // Largest metric cell diagonal.
    double diag = 0;
    for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i) {
            Vec2 a = grid.node_coords(i, j), b = grid.node_coords(i + 1, j + 1);
            if (!s->contains(a) || !s->contains(b)) continue;
            diag = std::max(diag, s->distance(SurfacePoint{s->id(), a},
                                              SurfacePoint{s->id(), b}));
        }
    grid.max_cell_diag = diag;
    return grid;
}

LipschitzReport c1_gradient_lipschitz(const FieldGrid& grid, const Config& cfg,
                                      const std::function<bool(const SurfacePoint&)>& mask) {
    const Surface& s = *grid.surface;
    double worst = 0;
    int pairs = 0;
    auto consider = [&](int i1, int j1, int i2, int j2) {
        std::size_t a = grid.idx(i1, j1), b = grid.idx(i2, j2);
        if (grid.label[a] != CellLabel::Regular || grid.label[b] != CellLabel::Regular)
            return;
        SurfacePoint pa = grid.node(i1, j1), pb = grid.node(i2, j2);
        if (mask && (!mask(pa) || !mask(pb))) return;
        if (std::isnan(grid.grad_angle[a]) || std::isnan(grid.grad_angle[b])) return;
        double d = s.distance(pa, pb);
        if (d <= 0) return;
        auto gl = s.geodesics(pa, pb, cfg.geodesic_tol);
        if (gl.continuum || gl.paths.size() != 1) return;
        double fwd_at_a = s.angle_of(gl.paths.front().initial_dir);
        auto rev = s.geodesics(pb, pa, cfg.geodesic_tol);
        if (rev.continuum || rev.paths.size() != 1) return;
        double fwd_at_b = wrap_periodic(s.angle_of(rev.paths.front().initial_dir) + kPi, 2 * kPi);
        // Angles of the gradient against the connecting geodesic at both ends.
        double psi1 = wrap_signed(grid.grad_angle[a] - fwd_at_a, 2 * kPi);
        double psi2 = wrap_signed(grid.grad_angle[b] - fwd_at_b, 2 * kPi);
        double dpsi = std::abs(wrap_signed(psi2 - psi1, 2 * kPi));
        double dnorm = std::abs(grid.grad_norm[b] - grid.grad_norm[a]);
        double scale = 0.5 * (grid.grad_norm[a] + grid.grad_norm[b]);
        double diff = std::sqrt(dnorm * dnorm + dpsi * dpsi * scale * scale);
        worst = std::max(worst, diff / d);
        ++pairs;
    };
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            if (i + 1 < grid.nx) consider(i, j, i + 1, j);
            if (j + 1 < grid.ny) consider(i, j, i, j + 1);
        }
    if (pairs < 2)
        throw InsufficientData("fewer than 2 regular node pairs for the gradient-Lipschitz estimate");
    return {worst, pairs};
}

}  // namespace surfdist
