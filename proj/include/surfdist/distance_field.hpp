#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "surfdist/closed_set.hpp"
#include "surfdist/config.hpp"

namespace surfdist {

/// Gradient data of d_A at a point, derived from the footpoint directions via
/// the first-variation rule D_x d_A(u) = -max_i cos(angle(u, v_i)). The
/// gradient direction is absent at critical points (grad_norm == 0).
struct GradientInfo {
    SurfacePoint point;
    double value = 0;  // d_A
    double grad_norm = 0;
    std::optional<TangentVector> grad_dir;  // length == grad_norm
    int footpoint_count = 0;
    bool continuum = false;
    double span_angle = 0;
    bool attained = true;
};

enum class CellLabel : unsigned char { Regular, CutCandidate, InSet, Unresolved };

const char* to_string(CellLabel label);

/// Sampled classification of a chart rectangle. Nodes span the rectangle
/// inclusively: node (i, j) sits at lo + (i/(nx-1), j/(ny-1)) * (hi - lo).
/// Off-domain nodes (the slit-plane ray) are labeled Unresolved.
struct FieldGrid {
    SurfacePtr surface;
    Vec2 lo, hi;
    int nx = 0, ny = 0;
    std::vector<double> value;
    std::vector<double> grad_norm;
    std::vector<double> grad_angle;  // frame angle; NaN when absent
    std::vector<int> footpoint_count;
    std::vector<CellLabel> label;
    double max_cell_diag = 0;  // largest metric diagonal of a grid cell

    std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    Vec2 node_coords(int i, int j) const {
        return {lo.x + (hi.x - lo.x) * i / (nx - 1), lo.y + (hi.y - lo.y) * j / (ny - 1)};
    }
    SurfacePoint node(int i, int j) const {
        return SurfacePoint{surface->id(), node_coords(i, j)};
    }
    std::size_t count(CellLabel l) const;
};

/// Max-min reduction over the direction circle for given footpoint-direction
/// frame angles: coarse sweep plus bracketed refinement rounds. Returns the
/// clamped gradient norm; `arg_angle` receives the maximizing direction.
double gradient_norm_from_angles(const std::vector<double>& dir_angles, const Config& cfg,
                                 double* arg_angle = nullptr);

GradientInfo gradient_norm(const ClosedSet& A, const SurfacePoint& x, const Config& cfg);

FieldGrid classify_region(const ClosedSet& A, Vec2 lo, Vec2 hi, int nx, int ny,
                          const Config& cfg);

struct LipschitzReport {
    double constant = 0;
    int pairs = 0;
};

/// Measured Lipschitz constant of the gradient field over adjacent Regular
/// node pairs (angle differences taken against the connecting geodesic, norm
/// differences directly). Throws InsufficientData below 2 usable samples.
LipschitzReport c1_gradient_lipschitz(const FieldGrid& grid, const Config& cfg,
                                      const std::function<bool(const SurfacePoint&)>& mask = {});

}  // namespace surfdist
