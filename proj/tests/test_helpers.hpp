#pragma once

#include <cmath>
#include <vector>

#include "surfdist/rng.hpp"
#include "surfdist/surface.hpp"

namespace surfdist::testing {

// Random point in a sensible chart box for each model, away from frame
// degeneracies unless a test opts in explicitly.
inline SurfacePoint random_point(const Surface& s, Rng& rng) {
    switch (s.kind()) {
        case Surface::Kind::Plane:
            return s.point(rng.uniform(-3, 3), rng.uniform(-3, 3));
        case Surface::Kind::Sphere:
            return s.point(rng.uniform(0.05, kPi - 0.05), rng.uniform(-kPi, kPi));
        case Surface::Kind::Hyperbolic: {
            double r = 0.85 * std::sqrt(rng.uniform(0, 1));
            double a = rng.angle();
            return s.point(r * std::cos(a), r * std::sin(a));
        }
        case Surface::Kind::Cylinder: {
            // Chart period is unknown here; sample via exp from the origin.
            SurfacePoint o = s.point(0.0, 0.0);
            auto v = s.from_angle(o, rng.angle());
            return s.exp_map(o, v, rng.uniform(0, 3));
        }
        case Surface::Kind::SlitPlane: {
            for (;;) {
                double x = rng.uniform(-3, 3), y = rng.uniform(-3, 3);
                if (x != 0.0 || y < 0.0) return s.point(x, y);
            }
        }
        case Surface::Kind::Cone: {
            SurfacePoint o = s.point(1.0, 0.0);
            for (;;) {
                try {
                    auto v = s.from_angle(o, rng.angle());
                    SurfacePoint p = s.exp_map(o, v, rng.uniform(0, 2.5));
                    if (p.coords.x > 0.05) return p;
                } catch (const DomainExit&) {
                }
            }
        }
        default:
            return s.point(rng.uniform(-3, 3), rng.uniform(-3, 3));
    }
}

}  // namespace surfdist::testing
