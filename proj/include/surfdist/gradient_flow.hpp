#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "surfdist/closed_set.hpp"
#include "surfdist/config.hpp"
#include "surfdist/distance_field.hpp"

namespace surfdist {

/// What a gradient oracle reports at a point: the function value, the
/// gradient norm, and the gradient direction (absent at critical points).
struct GradientSample {
    double value = 0;
    double grad_norm = 0;
    std::optional<TangentVector> grad_dir;  // length == grad_norm
};

using GradientOracle = std::function<GradientSample(const SurfacePoint&)>;

GradientOracle make_dA_oracle(const ClosedSet& A, const Config& cfg);

enum class FlowTermination { Horizon, CriticalPoint, DomainExit, RegionExit };

const char* to_string(FlowTermination t);

struct FlowNode {
    double t = 0;  // flow time (arclength after reparametrization)
    SurfacePoint point;
    double f = 0;
    double grad_norm = 0;
    std::optional<TangentVector> step_dir;  // unit direction used leaving this node
};

struct FlowCurve {
    std::vector<FlowNode> nodes;
    FlowTermination termination = FlowTermination::Horizon;
    std::vector<double> arclength;  // cumulative chordal arclength per node
    bool by_arclength = false;

    double total_arclength() const { return arclength.empty() ? 0 : arclength.back(); }
};

/// Thrown when the oracle fails mid-integration; carries the curve computed
/// so far.
struct OracleFailure : Error {
    OracleFailure(const std::string& what, FlowCurve prefix)
        : Error(what), prefix(std::move(prefix)) {}
    FlowCurve prefix;
};

struct StepPolicy {
    double max_step = 0.02;
    double min_step = 1e-5;
    double max_turn = 0.1;      // radians of gradient rotation per step
    double critical_eps = 1e-3;

    static StepPolicy from(const Config& cfg) {
        return {cfg.flow_max_step, cfg.flow_min_step, cfg.flow_max_turn, cfg.critical_eps};
    }
};

struct RegionBound {
    Vec2 lo, hi;
    bool active = false;

    bool inside(Vec2 c) const {
        return !active || (c.x >= lo.x && c.x <= hi.x && c.y >= lo.y && c.y <= hi.y);
    }
};

/// Explicit Euler on the exponential map: x <- exp(x, dir, dt * |grad|),
/// with the step halved whenever the gradient direction turns faster than
/// the policy allows. First order on purpose: the field is at best Lipschitz.
FlowCurve flow(const Surface& s, const GradientOracle& oracle, const SurfacePoint& x0,
               double horizon, const StepPolicy& pol, const RegionBound& bound = {});

/// Sup over interior nodes of |d/dt f(curve) - grad_norm^2| (central
/// differences); 0 for curves with fewer than 3 nodes.
double check_flow_value_identity(const FlowCurve& c);

/// Resamples the curve at uniform arclength ds, re-evaluating the oracle at
/// the new nodes. Throws PreconditionViolation on interior critical points.
FlowCurve arclength_reparam(const FlowCurve& c, const Surface& s,
                            const GradientOracle& oracle, double ds);

struct RestrictionCheck {
    bool pass = false;
    double worst_excess = 0;  // max second difference minus the allowed bound
};

/// Second-difference test of a uniformly sampled value trace against a
/// concavity constant C (or a per-sample bound h).
RestrictionCheck check_trace_concavity(const std::vector<double>& fvals, double ds, double C,
                                       double tol);
RestrictionCheck check_trace_concavity_field(const std::vector<double>& fvals, double ds,
                                             const std::vector<double>& bound, double tol);

}  // namespace surfdist
