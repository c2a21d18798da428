#pragma once

#include <cstdint>
#include <random>

#include "surfdist/geometry.hpp"

namespace surfdist {

/// Deterministic random source. All sampled tests draw from one of these,
/// seeded from the scenario, so repeated runs reproduce byte-identical
/// artifacts.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen_);
    }

    double angle() { return uniform(0.0, 2.0 * kPi); }

    int index(int n) { return std::uniform_int_distribution<int>(0, n - 1)(gen_); }

    std::uint64_t raw() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

}  // namespace surfdist
