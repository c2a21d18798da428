#pragma once

#include <cstdint>

namespace surfdist {

/// Tolerances and sampling knobs shared across the toolkit. A Config travels
/// with scenario runs; library calls take one explicitly so every threshold
/// is pinned at the call site.
struct Config {
    // Global angular comparison tolerance (radians).
    double angular_tol = 1e-6;
    // Length tie tolerance when enumerating minimizing geodesics.
    double geodesic_tol = 1e-9;

    // Cut-candidate threshold tau: grad-norm < 1 - tau flags a cell.
    double grad_threshold = 0.02;
    // Tolerance for "grad-norm equals 1" style assertions.
    double grad_tol = 1e-3;

    // Footpoint machinery.
    double direction_merge_angle = 0.05;  // radians
    int continuum_threshold = 16;         // raw candidates before continuum flag
    int continuum_representatives = 16;   // sampled directions in continuum cases
    double footpoint_tol = 0.0;           // 0: derive 3 * cloud pitch

    // Angular sweep for the gradient norm.
    int sweep_samples = 2048;
    int sweep_refine_rounds = 3;
    int sweep_refine_samples = 64;

    // Charts.
    double ortho_tol = 0.1;  // radians

    // Reach bisection.
    double bisection_tol = 5e-3;
    int tube_pitch_divisor = 16;  // sampling pitch r / divisor

    // Nearest-cut-point concavity precheck.
    double concavity_precheck_tol = 0.05;

    // Gradient flow.
    double critical_eps = 1e-3;
    double flow_max_step = 0.02;
    double flow_min_step = 1e-5;
    double flow_max_turn = 0.1;  // radians per step before the step shrinks

    std::uint64_t seed = 42;
    int threads = 0;  // 0: hardware concurrency

    double effective_footpoint_tol(double cloud_pitch) const {
        if (footpoint_tol > 0) return footpoint_tol;
        double t = 3.0 * cloud_pitch;
        return t > 0 ? t : 1e-9;
    }
};

}  // namespace surfdist
