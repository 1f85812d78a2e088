#include "siegel/quadrature.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <string>
#include <thread>

#include "siegel/specfun.hpp"

namespace siegel {

namespace {

constexpr double kLogPi = 1.1447298858494001741;

[[noreturn]] void fail(const std::string& who, std::vector<std::string> violated) {
    std::ostringstream msg;
    msg << who << ": violated";
    for (const auto& v : violated) msg << " [" << v << "]";
    throw ConstraintError(msg.str(), std::move(violated));
}

void check_config(const std::string& who, const MCConfig& cfg) {
    std::vector<std::string> bad;
    if (cfg.samples < 1) bad.push_back("samples >= 1");
    if (cfg.batch_size < 1) bad.push_back("batch_size >= 1");
    if (!bad.empty()) fail(who, bad);
}

int thread_count() {
    if (const char* env = std::getenv("SIEGEL_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1)
            return static_cast<int>(std::min(v, 64L));
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(std::min(hw, 64u)) : 1;
}

struct BatchPartial {
    double sre = 0.0, sim = 0.0, sre2 = 0.0, sim2 = 0.0;
};

/// Runs body(batch_index) over all batches, possibly on several threads.
template <class Body>
void for_each_batch(long long nbatch, const Body& body) {
    const int threads = static_cast<int>(
        std::min<long long>(thread_count(), nbatch));
    auto work = [&](long long first) {
        for (long long b = first; b < nbatch; b += threads) body(b);
    };
    if (threads <= 1) {
        for (long long b = 0; b < nbatch; ++b) body(b);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads - 1);
    for (int t = 1; t < threads; ++t) pool.emplace_back(work, t);
    work(0);
    for (auto& th : pool) th.join();
}

BallPoint draw_ball(int n, double t, RngStream& rng, double* one_minus_sq) {
    auto [u, omu] = rng.beta_pair(static_cast<double>(n), t + 1.0);
    Eigen::VectorXd dir = rng.sphere(2 * n);
    const double r = std::sqrt(u);
    CVector xi(n);
    for (int j = 0; j < n; ++j) xi[j] = r * Complex(dir[j], dir[n + j]);
    if (one_minus_sq) *one_minus_sq = omu;
    return BallPoint::closure(std::move(xi));
}

}  // namespace

IntegralEstimate run_mc(const MCConfig& cfg,
                        const std::function<Complex(RngStream&, long long)>& eval) {
    check_config("run_mc", cfg);
    const long long N = cfg.samples, B = cfg.batch_size;
    const long long nbatch = (N + B - 1) / B;
    std::vector<BatchPartial> parts(static_cast<size_t>(nbatch));
    for_each_batch(nbatch, [&](long long b) {
        RngStream rng(cfg.seed, static_cast<uint64_t>(b));
        const long long lo = b * B, hi = std::min(N, lo + B);
        BatchPartial p;
        for (long long i = lo; i < hi; ++i) {
            const Complex y = eval(rng, i);
            p.sre += y.real();
            p.sim += y.imag();
            p.sre2 += y.real() * y.real();
            p.sim2 += y.imag() * y.imag();
        }
        parts[static_cast<size_t>(b)] = p;
    });
    double sre = 0.0, sim = 0.0, sre2 = 0.0, sim2 = 0.0;
    for (const auto& p : parts) {
        sre += p.sre;
        sim += p.sim;
        sre2 += p.sre2;
        sim2 += p.sim2;
    }
    const double dn = static_cast<double>(N);
    const double mre = sre / dn, mim = sim / dn;
    IntegralEstimate est;
    est.value = Complex(mre, mim);
    est.samples_used = N;
    est.seed = cfg.seed;
    if (N > 1) {
        const double vre = std::max(0.0, sre2 - dn * mre * mre) / (dn - 1.0);
        const double vim = std::max(0.0, sim2 - dn * mim * mim) / (dn - 1.0);
        est.std_error = std::sqrt((vre + vim) / dn);
    } else {
        est.std_error = std::numeric_limits<double>::infinity();
    }
    return est;
}

double ball_weight_mass(int n, double t) {
    std::vector<std::string> bad;
    if (n < 1) bad.push_back("n >= 1");
    if (!(t > -1.0)) bad.push_back("t > -1");
    if (!bad.empty()) fail("ball_weight_mass", bad);
    return std::exp(n * kLogPi + ln_gamma(t + 1.0) - ln_gamma(n + 1.0 + t));
}

WeightedBallSample sample_ball_weighted(int n, double t, RngStream& rng) {
    const double mass = ball_weight_mass(n, t);
    double omu = 0.0;
    BallPoint xi = draw_ball(n, t, rng, &omu);
    return {std::move(xi), mass, omu};
}

IntegralEstimate mc_integrate_ball(int n, double t, const BallIntegrand& g,
                                   const MCConfig& cfg) {
    const double mass = ball_weight_mass(n, t);
    return run_mc(cfg, [n, t, mass, &g](RngStream& rng, long long) -> Complex {
        return mass * g(draw_ball(n, t, rng, nullptr));
    });
}

IntegralEstimate mc_integrate_siegel(int n, double t, const SiegelIntegrand& g,
                                     const MCConfig& cfg) {
    const double ex = -(n + 1.0 + t);
    const BallIntegrand wrapped = [ex, &g](const BallPoint& xi) {
        const double fac = 4.0 * std::pow(std::norm(1.0 + xi.xn()), ex);
        return fac * g(cayley(xi));
    };
    return mc_integrate_ball(n, t, wrapped, cfg);
}

DivergenceVerdict divergence_probe(int n, double t, const SiegelIntegrand& g,
                                   const MCConfig& cfg, int levels,
                                   double threshold) {
    check_config("divergence_probe", cfg);
    std::vector<std::string> bad;
    if (n < 1) bad.push_back("n >= 1");
    if (levels < 4) bad.push_back("levels >= 4");
    if (!bad.empty()) fail("divergence_probe", bad);

    const SiegelPoint center = SiegelPoint::base(n);
    std::vector<KernelSampler> comps;
    comps.emplace_back(center, -0.95, n + 0.35);
    comps.emplace_back(center, 0.0, n + 1.3);
    MixtureSampler mix(std::move(comps));
    mix.set_allocation(cfg.samples);

    std::vector<double> radii(levels);
    for (int k = 0; k < levels; ++k) radii[k] = std::ldexp(1.0, k + 1);

    const long long N = cfg.samples, B = cfg.batch_size;
    const long long nbatch = (N + B - 1) / B;
    std::vector<std::vector<double>> parts(
        static_cast<size_t>(nbatch), std::vector<double>(levels, 0.0));
    for_each_batch(nbatch, [&](long long b) {
        RngStream rng(cfg.seed, static_cast<uint64_t>(b));
        const long long lo = b * B, hi = std::min(N, lo + B);
        std::vector<double>& sums = parts[static_cast<size_t>(b)];
        for (long long i = lo; i < hi; ++i) {
            const SiegelSample smp = mix.draw(i, rng);
            const double absw = std::sqrt(smp.w.zprime().squaredNorm() +
                                          std::norm(smp.w.zn()));
            int first = -1;
            for (int k = 0; k < levels; ++k) {
                if (smp.rho > 1.0 / radii[k] && absw < radii[k]) {
                    first = k;
                    break;
                }
            }
            if (first < 0) continue;
            const Complex f = std::pow(smp.rho, t) * g(smp.w);
            const double y = weight_ratio(f, mix.density(smp)).real();
            for (int k = first; k < levels; ++k) sums[k] += y;
        }
    });

    DivergenceVerdict verdict;
    std::vector<double> ests(levels, 0.0);
    for (const auto& sums : parts)
        for (int k = 0; k < levels; ++k) ests[k] += sums[k];
    for (int k = 0; k < levels; ++k) {
        ests[k] /= static_cast<double>(N);
        verdict.truncation_levels.emplace_back(radii[k], ests[k]);
    }
    int run = 0, best = 0;
    for (int k = 0; k + 1 < levels; ++k) {
        double ratio;
        if (ests[k] == 0.0 && ests[k + 1] == 0.0)
            ratio = 1.0;
        else
            ratio = ests[k + 1] / ests[k];
        verdict.growth_ratios.push_back(ratio);
        run = ratio > threshold ? run + 1 : 0;
        best = std::max(best, run);
    }
    verdict.diverges = best >= 4;
    return verdict;
}

KernelSampler::KernelSampler(SiegelPoint center, double t, double s)
    : KernelSampler(center, rho(center), t, s) {}

KernelSampler::KernelSampler(SiegelPoint center, double center_rho, double t,
                             double s)
    : center_(std::move(center)), t_(t), s_(s) {
    const int n = center_.n();
    std::vector<std::string> bad;
    if (!(t > -1.0)) bad.push_back("t > -1");
    if (!(s - t > n + 1.0)) bad.push_back("s - t > n + 1");
    if (!(center_rho > 0.0)) bad.push_back("rho(center) > 0");
    if (!bad.empty()) fail("KernelSampler", bad);
    lambda_ = std::sqrt(center_rho);
    norm_lin_ = std::exp((s - t - n - 1.0) * std::log(center_rho) -
                         std::log(const_C2(n, s, t)));
}

SiegelSample KernelSampler::draw(RngStream& rng) const {
    const int n = center_.n(), m = n - 1;
    const double v = rng.gamma(n + t_) / rng.gamma(s_ - n - 1.0 - t_);
    const double chi = rng.chi_squared(s_ - 1.0);
    const double re_can = (v + 1.0) * rng.normal() / std::sqrt(chi);

    CVector wp(m);
    double rho_can;
    if (m > 0) {
        auto [u, omu] = rng.beta_pair(static_cast<double>(m), t_ + 1.0);
        Eigen::VectorXd dir = rng.sphere(2 * m);
        const double r = std::sqrt(v * u);
        for (int j = 0; j < m; ++j) wp[j] = r * Complex(dir[j], dir[m + j]);
        rho_can = v * omu;
    } else {
        rho_can = v;
    }

    const double lam2 = lambda_ * lambda_;
    const CVector wp2 = lambda_ * wp;
    const Complex wn2 = lam2 * Complex(re_can, v);
    const CVector& zeta = center_.zprime();
    const Complex wn3 = wn2 + std::real(center_.zn()) +
                        2.0 * Complex(0.0, 1.0) * hermitian(wp2, zeta) +
                        Complex(0.0, zeta.squaredNorm());
    CVector wp3 = wp2 + zeta;
    return {SiegelPoint::unchecked(std::move(wp3), wn3), lam2 * rho_can};
}

double KernelSampler::density(const SiegelSample& sample) const {
    return std::pow(sample.rho, t_) *
           std::pow(std::abs(rho_pair(center_, sample.w)), -s_) * norm_lin_;
}

MixtureSampler::MixtureSampler(std::vector<KernelSampler> components)
    : parts_(std::move(components)) {
    if (parts_.empty()) fail("MixtureSampler", {"components >= 1"});
    alloc_.assign(parts_.size(), 1.0 / static_cast<double>(parts_.size()));
}

void MixtureSampler::set_allocation(long long total) {
    if (total < 1) fail("MixtureSampler::set_allocation", {"total >= 1"});
    const long long K = static_cast<long long>(parts_.size());
    for (long long k = 0; k < K; ++k) {
        const long long count = total / K + (k < total % K ? 1 : 0);
        alloc_[static_cast<size_t>(k)] =
            static_cast<double>(count) / static_cast<double>(total);
    }
}

SiegelSample MixtureSampler::draw(long long sample_index, RngStream& rng) const {
    return parts_[static_cast<size_t>(sample_index % parts_.size())].draw(rng);
}

double MixtureSampler::density(const SiegelSample& sample) const {
    double q = 0.0;
    for (size_t k = 0; k < parts_.size(); ++k)
        q += alloc_[k] * parts_[k].density(sample);
    return q;
}

std::vector<SiegelPoint> bridge_centers(const SiegelPoint& z, const SiegelPoint& u,
                                        double step) {
    std::vector<std::string> bad;
    if (!(step > 0.0)) bad.push_back("step > 0");
    if (z.n() != u.n()) bad.push_back("dim(z) == dim(u)");
    if (!bad.empty()) fail("bridge_centers", bad);

    const double lam = 1.0 / std::sqrt(rho(z));
    const HeisenbergElement to_base{(-z.zprime()).eval(), -std::real(z.zn())};
    const BallPoint xi = cayley_inv(dilate(lam, heisenberg_act(to_base, u)));
    const double r = std::sqrt(xi.xi().squaredNorm());
    if (r <= 1e-14) return {z};

    const double d = std::atanh(std::min(r, 1.0 - 1e-14));
    const int parts = std::clamp(static_cast<int>(std::ceil(d / step)), 1, 64);
    const HeisenbergElement from_base{z.zprime(), std::real(z.zn())};
    std::vector<SiegelPoint> centers;
    centers.reserve(parts + 1);
    for (int k = 0; k <= parts; ++k) {
        const double tau = std::tanh(k * d / parts);
        const BallPoint xik = BallPoint::closure((tau / r) * xi.xi());
        centers.push_back(
            heisenberg_act(from_base, dilate(1.0 / lam, cayley(xik))));
    }
    return centers;
}

}  // namespace siegel
