#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "siegel/geometry.hpp"
#include "siegel/rng.hpp"

namespace siegel {

struct MCConfig {
    long long samples = 1000000;
    uint64_t seed = 0;
    long long batch_size = 65536;
};

struct IntegralEstimate {
    Complex value{0.0, 0.0};
    double std_error = 0.0;  // serialized as "stderr" (a macro in C)
    long long samples_used = 0;
    uint64_t seed = 0;

    /// Non-convergent variance flag: stderr/|value| > 1 after all samples.
    bool converged() const { return !(std_error > std::abs(value)); }
};

struct DivergenceVerdict {
    bool diverges = false;
    std::vector<std::pair<double, double>> truncation_levels;  // (radius, estimate)
    std::vector<double> growth_ratios;
};

using BallIntegrand = std::function<Complex(const BallPoint&)>;
using SiegelIntegrand = std::function<Complex(const SiegelPoint&)>;

struct WeightedBallSample {
    BallPoint xi;
    double weight;        // total mass pi^n Gamma(t+1)/Gamma(n+1+t)
    double one_minus_sq;  // 1 - |xi|^2, exact from the Beta construction
};

/// Draw xi with density proportional to (1-|xi|^2)^t on the ball:
/// |xi|^2 ~ Beta(n, t+1), direction uniform on S^{2n-1}. Requires t > -1.
WeightedBallSample sample_ball_weighted(int n, double t, RngStream& rng);

/// Total mass of the (1-|xi|^2)^t measure: pi^n Gamma(t+1)/Gamma(n+1+t).
double ball_weight_mass(int n, double t);

/// Unbiased MC estimate of the weighted ball integral
/// int_B (1-|xi|^2)^t g(xi) dV.
IntegralEstimate mc_integrate_ball(int n, double t, const BallIntegrand& g,
                                   const MCConfig& cfg);

/// Estimates int_U rho(w)^t g(w) dV(w) by pulling back to the ball through the
/// Cayley transform; shares mc_integrate_ball's code path sample for sample.
IntegralEstimate mc_integrate_siegel(int n, double t, const SiegelIntegrand& g,
                                     const MCConfig& cfg);

/// Truncated estimates of int rho(w)^t g(w) dV over the nested regions
/// U_R = { rho(w) > 1/R, |w| < R }, R doubling from 2. diverges requires
/// >= 4 consecutive growth ratios above the threshold. Requires levels >= 4.
DivergenceVerdict divergence_probe(int n, double t, const SiegelIntegrand& g,
                                   const MCConfig& cfg, int levels = 6,
                                   double threshold = 1.2);

/// A Siegel-domain sample carrying its exact boundary distance. rho is
/// computed from the sampler's construction variables (products and exact
/// Beta ratios only); recomputing it from the coordinates loses all precision
/// near the boundary.
struct SiegelSample {
    SiegelPoint w;
    double rho;
};

/// Importance sampler with the normalized kernel density
///   q(w) = rho(w)^t |rho(c,w)|^{-s} * rho(c)^{s-t-n-1} / C2(n,s,t),
/// valid for t > -1 and s - t > n + 1. Draws are made at the canonical center
/// i and moved to c by a Heisenberg translation and dilation, which preserve
/// the density family.
class KernelSampler {
public:
    KernelSampler(SiegelPoint center, double t, double s);

    /// As above with rho(center) supplied by the caller; use when the center
    /// is itself a sample whose exact boundary distance would be lost by
    /// recomputation from coordinates.
    KernelSampler(SiegelPoint center, double center_rho, double t, double s);

    SiegelSample draw(RngStream& rng) const;
    double density(const SiegelSample& sample) const;

    const SiegelPoint& center() const { return center_; }

private:
    SiegelPoint center_;
    double t_, s_;
    double lambda_;    // sqrt(rho(center))
    double norm_lin_;  // rho(c)^{s-t-n-1} / C2(n,s,t)
};

/// Uniform mixture of kernel components with deterministic round-robin
/// component assignment by global sample index. Densities are weighted by the
/// exact per-component allocation counts so the estimator stays unbiased for
/// any sample total.
class MixtureSampler {
public:
    explicit MixtureSampler(std::vector<KernelSampler> components);

    /// Fix allocation weights for a run of `total` samples.
    void set_allocation(long long total);

    SiegelSample draw(long long sample_index, RngStream& rng) const;
    double density(const SiegelSample& sample) const;

    int components() const { return static_cast<int>(parts_.size()); }

private:
    std::vector<KernelSampler> parts_;
    std::vector<double> alloc_;
};

/// Points interpolating the Bergman geodesic from z to u (inclusive), spaced
/// at most `step` apart in Bergman distance; mixture centers for two-center
/// integrands. At most 64 interior subdivisions.
std::vector<SiegelPoint> bridge_centers(const SiegelPoint& z, const SiegelPoint& u,
                                        double step = 0.8);

/// Deterministic batched MC driver: eval(rng, i) must return the i-th
/// importance-weighted integrand value when fed the stream of batch i/batch_size,
/// and must be pure (it runs concurrently). Batches may run on several threads
/// (SIEGEL_THREADS); partial sums combine in batch order, so results are
/// bit-identical for any thread count.
IntegralEstimate run_mc(const MCConfig& cfg,
                        const std::function<Complex(RngStream&, long long)>& eval);

/// f/q with a zero/overflow guard: returns 0 when the proposal density
/// underflows, which only happens where f is negligible too.
inline Complex weight_ratio(Complex f, double q) {
    if (!(q > 0.0) || !std::isfinite(q)) return Complex(0.0, 0.0);
    return f / q;
}

}  // namespace siegel
