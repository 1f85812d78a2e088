#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <utility>

namespace siegel {

/// Deterministic per-stream generator. Streams are derived from
/// (seed, stream index) by splitmix64 mixing, so batch k of a Monte Carlo run
/// produces the same draws no matter which thread executes it. All
/// distributions below are implemented from uniform bits with fixed
/// algorithms, keeping sequences identical across standard libraries.
class RngStream {
public:
    RngStream(uint64_t seed, uint64_t stream) {
        state_ = mix(mix(seed) ^ mix(stream + 0x9E3779B97F4A7C15ull));
    }

    uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ull;
        uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform on the open interval (0,1).
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal (Box-Muller; the second member of each pair is cached).
    double normal() {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586477 * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

    /// Gamma(shape, 1) by Marsaglia-Tsang squeeze; shapes < 1 are boosted.
    double gamma(double shape) {
        if (shape < 1.0) {
            double g = gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
            return g > 0.0 ? g : 5e-324;  // guard against underflow at tiny shapes
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    double chi_squared(double dof) { return 2.0 * gamma(0.5 * dof); }

    /// Beta(a,b) draw returned as the exact pair (u, 1-u) = (G1, G2)/(G1+G2);
    /// the second component carries full relative precision near u = 1.
    std::pair<double, double> beta_pair(double a, double b) {
        double g1 = gamma(a), g2 = gamma(b);
        return {g1 / (g1 + g2), g2 / (g1 + g2)};
    }

    /// Uniform direction on the unit sphere of R^dim.
    Eigen::VectorXd sphere(int dim) {
        Eigen::VectorXd v(dim);
        for (;;) {
            for (int i = 0; i < dim; ++i) v(i) = normal();
            double norm = v.norm();
            if (norm > 0.0) return v / norm;
        }
    }

private:
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    uint64_t state_;
    bool has_cached_ = false;
    double cached_ = 0.0;
};

}  // namespace siegel
