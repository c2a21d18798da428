#include "surfdist/gradient_flow.hpp"

#include <algorithm>
#include <cmath>

namespace surfdist {

const char* to_string(FlowTermination t) {
    switch (t) {
        case FlowTermination::Horizon: return "horizon";
        case FlowTermination::CriticalPoint: return "critical-point";
        case FlowTermination::DomainExit: return "domain-exit";
        case FlowTermination::RegionExit: return "region-exit";
    }
    return "?";
}

GradientOracle make_dA_oracle(const ClosedSet& A, const Config& cfg) {
    return [&A, cfg](const SurfacePoint& x) {
        GradientInfo gi = gradient_norm(A, x, cfg);
        return GradientSample{gi.value, gi.grad_norm, gi.grad_dir};
    };
}

FlowCurve flow(const Surface& s, const GradientOracle& oracle, const SurfacePoint& x0,
               double horizon, const StepPolicy& pol, const RegionBound& bound) {
    if (!(horizon >= 0)) throw UsageError("flow horizon must be nonnegative");
    FlowCurve curve;
    curve.arclength.push_back(0);

    auto sample = [&](const SurfacePoint& p) -> GradientSample {
        try {
            return oracle(p);
        } catch (const std::exception& e) {
            throw OracleFailure(std::string("gradient oracle failed: ") + e.what(), curve);
        }
    };

    double t = 0;
    SurfacePoint x = x0;
    GradientSample g = sample(x);
    double h = pol.max_step;

    auto push_node = [&](const GradientSample& gs, const SurfacePoint& p, double time,
                         std::optional<TangentVector> dir) {
        FlowNode node;
        node.t = time;
        node.point = p;
        node.f = gs.value;
        node.grad_norm = gs.grad_norm;
        node.step_dir = std::move(dir);
        if (!curve.nodes.empty()) {
            double ds = s.distance(curve.nodes.back().point, p);
            curve.arclength.push_back(curve.arclength.back() + ds);
        }
        curve.nodes.push_back(std::move(node));
    };

    for (;;) {
        if (g.grad_norm < pol.critical_eps || !g.grad_dir) {
            push_node(g, x, t, std::nullopt);
            curve.termination = FlowTermination::CriticalPoint;
            return curve;
        }
        if (t >= horizon - 1e-15) {
            push_node(g, x, t, std::nullopt);
            curve.termination = FlowTermination::Horizon;
            return curve;
        }
        double dt = std::min(h, horizon - t);
        TangentVector unit = s.unit_tangent(x, g.grad_dir->comp);
        SurfacePoint y;
        try {
            y = s.exp_map(x, unit, dt * g.grad_norm);
        } catch (const DomainExit&) {
            push_node(g, x, t, std::nullopt);
            curve.termination = FlowTermination::DomainExit;
            return curve;
        }
        if (!bound.inside(y.coords)) {
            push_node(g, x, t, std::nullopt);
            curve.termination = FlowTermination::RegionExit;
            return curve;
        }
        GradientSample gy = sample(y);
        double turn = 0;
        if (gy.grad_dir)
            turn = std::abs(wrap_signed(s.angle_of(*gy.grad_dir) - s.angle_of(*g.grad_dir),
                                        2 * kPi));
        if (turn > pol.max_turn && dt > pol.min_step) {
            h = std::max(pol.min_step, h / 2);
            continue;  // retry the step shorter
        }
        push_node(g, x, t, unit);
        x = y;
        t += dt;
        g = gy;
        if (turn < 0.25 * pol.max_turn) h = std::min(pol.max_step, 1.25 * h);
    }
}

double check_flow_value_identity(const FlowCurve& c) {
    if (c.nodes.size() < 3) return 0;
    double worst = 0;
    for (std::size_t i = 1; i + 1 < c.nodes.size(); ++i) {
        double dtm = c.nodes[i + 1].t - c.nodes[i - 1].t;
        if (dtm <= 0) continue;
        double deriv = (c.nodes[i + 1].f - c.nodes[i - 1].f) / dtm;
        double g2 = c.nodes[i].grad_norm * c.nodes[i].grad_norm;
        worst = std::max(worst, std::abs(deriv - g2));
    }
    return worst;
}

FlowCurve arclength_reparam(const FlowCurve& c, const Surface& s,
                            const GradientOracle& oracle, double ds) {
    if (!(ds > 0)) throw UsageError("ds must be positive");
    if (c.nodes.size() < 2)
        throw PreconditionViolation("cannot reparametrize a curve without segments");
    for (std::size_t i = 0; i + 1 < c.nodes.size(); ++i)
        if (!c.nodes[i].step_dir)
            throw PreconditionViolation(
                "interior critical point: arclength parametrization undefined");

    double total = c.total_arclength();
    FlowCurve out;
    out.by_arclength = true;
    out.termination = c.termination;
    int n = std::max(1, static_cast<int>(std::floor(total / ds)));

    std::size_t seg = 0;
    for (int k = 0; k <= n; ++k) {
        double target = std::min(total, k * ds);
        while (seg + 1 < c.nodes.size() - 1 && c.arclength[seg + 1] <= target) ++seg;
        double local = target - c.arclength[seg];
        SurfacePoint p;
        if (local <= 0) {
            p = c.nodes[seg].point;
        } else {
            const auto& dir = c.nodes[seg].step_dir;
            p = s.exp_map(c.nodes[seg].point, *dir, local);
        }
        GradientSample g = oracle(p);
        FlowNode node;
        node.t = target;
        node.point = p;
        node.f = g.value;
        node.grad_norm = g.grad_norm;
        if (g.grad_dir) node.step_dir = s.unit_tangent(p, g.grad_dir->comp);
        out.nodes.push_back(std::move(node));
        out.arclength.push_back(target);
    }
    return out;
}

RestrictionCheck check_trace_concavity(const std::vector<double>& fvals, double ds, double C,
                                       double tol) {
    std::vector<double> bound(fvals.size(), C);
    return check_trace_concavity_field(fvals, ds, bound, tol);
}

RestrictionCheck check_trace_concavity_field(const std::vector<double>& fvals, double ds,
                                             const std::vector<double>& bound, double tol) {
    if (fvals.size() < 3) throw UsageError("trace needs at least 3 samples");
    if (bound.size() != fvals.size()) throw UsageError("bound and trace sizes differ");
    if (!(ds > 0)) throw UsageError("ds must be positive");
    RestrictionCheck out;
    out.worst_excess = -1e300;
    for (std::size_t i = 1; i + 1 < fvals.size(); ++i) {
        double S = (fvals[i - 1] - 2 * fvals[i] + fvals[i + 1]) / (ds * ds);
        out.worst_excess = std::max(out.worst_excess, S - bound[i]);
    }
    out.pass = out.worst_excess <= tol;
    return out;
}

}  // namespace surfdist
