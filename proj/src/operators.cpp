#include "siegel/operators.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace siegel {

namespace {

constexpr double kLogPi = 1.1447298858494001741;
constexpr double kLog4 = 1.3862943611198906188;

[[noreturn]] void fail(const std::string& who, std::vector<std::string> violated) {
    std::ostringstream msg;
    msg << who << ": violated";
    for (const auto& v : violated) msg << " [" << v << "]";
    throw ConstraintError(msg.str(), std::move(violated));
}

void require(std::vector<std::string>& violated, bool ok, const std::string& name) {
    if (!ok) violated.push_back(name);
}

bool is_inf(double p) { return std::isinf(p); }

IntegralEstimate scaled(IntegralEstimate est, double factor) {
    est.value *= factor;
    est.std_error *= std::abs(factor);
    return est;
}

}  // namespace

const char* failed_condition_name(FailedCondition f) {
    switch (f) {
        case FailedCondition::LowerWeightCondition: return "LowerWeightCondition";
        case FailedCondition::UpperWeightCondition: return "UpperWeightCondition";
        case FailedCondition::HomogeneityCondition: return "HomogeneityCondition";
    }
    return "?";
}

IntegralEstimate apply_T_estimate(const KernelParams& k, const SiegelIntegrand& f,
                                  const SiegelPoint& z, const MCConfig& cfg) {
    const SiegelIntegrand h = [&k, &f, &z](const SiegelPoint& w) {
        return f(w) * std::pow(rho_pair(z, w), -k.c);
    };
    return scaled(mc_integrate_siegel(z.n(), k.b, h, cfg), std::pow(rho(z), k.a));
}

Complex apply_T(const KernelParams& k, const SiegelIntegrand& f,
                const SiegelPoint& z, const MCConfig& cfg) {
    return apply_T_estimate(k, f, z, cfg).value;
}

IntegralEstimate apply_S_estimate(const KernelParams& k, const SiegelIntegrand& f,
                                  const SiegelPoint& z, const MCConfig& cfg) {
    const SiegelIntegrand h = [&k, &f, &z](const SiegelPoint& w) {
        return f(w) * std::pow(std::abs(rho_pair(z, w)), -k.c);
    };
    return scaled(mc_integrate_siegel(z.n(), k.b, h, cfg), std::pow(rho(z), k.a));
}

Complex apply_S(const KernelParams& k, const SiegelIntegrand& f,
                const SiegelPoint& z, const MCConfig& cfg) {
    return apply_S_estimate(k, f, z, cfg).value;
}

IntegralEstimate apply_S_delta_estimate(const KernelParams& k, double delta_exp,
                                        const SiegelIntegrand& f,
                                        const SiegelPoint& z, const MCConfig& cfg) {
    const int n = z.n();
    std::vector<std::string> bad;
    require(bad, delta_exp >= 0.0, "delta_exp >= 0");
    require(bad, k.c == n + 1 + k.a + k.b, "c = n+1+a+b");
    if (!bad.empty()) fail("apply_S_delta", bad);
    const SiegelIntegrand h = [&k, delta_exp, &f, &z](const SiegelPoint& w) {
        return f(w) * std::pow(bergman_distance(z, w), delta_exp) *
               std::pow(std::abs(rho_pair(z, w)), -k.c);
    };
    return scaled(mc_integrate_siegel(n, k.b, h, cfg), std::pow(rho(z), k.a));
}

Complex apply_S_delta(const KernelParams& k, double delta_exp,
                      const SiegelIntegrand& f, const SiegelPoint& z,
                      const MCConfig& cfg) {
    return apply_S_delta_estimate(k, delta_exp, f, z, cfg).value;
}

Complex t_on_test_family(const KernelParams& k, const TestFamilyParams& tf,
                         const SiegelPoint& z) {
    const int n = z.n();
    std::vector<std::string> bad;
    require(bad, tf.s > 0.0, "C.1: s > 0");
    require(bad, tf.t > -1.0 - k.b, "C.2: t > -1-b");
    require(bad, tf.s - tf.t > n + 1 + k.b - k.c, "C.3: s-t > n+1+b-c");
    require(bad, k.c > 0.0, "c > 0");
    require(bad, tf.beta > 0.0, "beta > 0");
    if (!bad.empty()) fail("t_on_test_family", bad);
    const double e = k.c - k.b - n - 1.0 + tf.s - tf.t;
    const double c4 = std::exp(kLog4 + n * kLogPi + ln_gamma(k.b + tf.t + 1.0) +
                               ln_gamma(e) - ln_gamma(k.c) - ln_gamma(tf.s));
    const Complex rp = rho_pair(z, SiegelPoint::base(n, tf.beta));
    return c4 * std::pow(rho(z), k.a) * std::pow(rp, -e);
}

TestFamilyNorms test_family_norms(int n, const SpaceParams& sp,
                                  const KernelParams& k,
                                  const TestFamilyParams& tf) {
    if (!(tf.beta > 0.0)) fail("test_family_norms", {"beta > 0"});
    const TestFamilyConstants cc = test_family_constants(
        n, sp.alpha, sp.p, k.a, k.b, k.c, tf.s, tf.t);
    const double ef = n + 1 + sp.alpha - sp.p * (tf.s - tf.t);
    TestFamilyNorms norms;
    norms.norm_f_p = cc.C3 * std::pow(tf.beta, ef);
    norms.norm_Tf_p =
        cc.C5 * std::pow(tf.beta, ef + sp.p * (n + 1 + k.a + k.b - k.c));
    return norms;
}

double scaling_exponent(int n, const SpaceParams&, const KernelParams& k,
                        const TestFamilyParams&) {
    return n + 1 + k.a + k.b - k.c;
}

KernelParams adjoint_params(const SpaceParams& sp, const KernelParams& k) {
    return {k.b - sp.alpha, k.a + sp.alpha, k.c};
}

Verdict boundedness_verdict(int n, const SpaceParams& sp, const KernelParams& k) {
    std::vector<std::string> bad;
    require(bad, n >= 1, "n >= 1");
    require(bad, sp.p >= 1.0, "p >= 1");
    if (!bad.empty()) fail("boundedness_verdict", bad);

    Verdict v;
    bool lower, upper;
    if (is_inf(sp.p)) {
        lower = k.a > 0.0;
        upper = k.b > -1.0;
    } else {
        lower = -sp.p * k.a < sp.alpha + 1.0;
        upper = sp.alpha + 1.0 < sp.p * (k.b + 1.0);
    }
    if (!lower) v.failed.push_back(FailedCondition::LowerWeightCondition);
    if (!upper) v.failed.push_back(FailedCondition::UpperWeightCondition);
    if (k.c != n + 1 + k.a + k.b)
        v.failed.push_back(FailedCondition::HomogeneityCondition);
    v.bounded = v.failed.empty();
    if (v.bounded && !is_inf(sp.p) && sp.p > 1.0)
        v.schur_bound = schur_norm_bound(n, sp.p, sp.alpha, k.a, k.b);
    return v;
}

SchurCertificate schur_certificate(int n, const SpaceParams& sp,
                                   const KernelParams& k) {
    std::vector<std::string> bad;
    require(bad, sp.p > 1.0 && !is_inf(sp.p), "1 < p < inf");
    if (bad.empty()) {
        const Verdict v = boundedness_verdict(n, sp, k);
        for (FailedCondition f : v.failed) bad.push_back(failed_condition_name(f));
    }
    if (!bad.empty()) fail("schur_certificate", bad);
    SchurCertificate cert;
    cert.g_exponent = -(1.0 + sp.alpha) / (sp.p * sp.q());
    cert.bound = schur_norm_bound(n, sp.p, sp.alpha, k.a, k.b);
    return cert;
}

SiegelIntegrand test_family_fn(int n, const TestFamilyParams& tf) {
    if (!(tf.beta > 0.0)) fail("test_family_fn", {"beta > 0"});
    const SiegelPoint pole = SiegelPoint::base(n, tf.beta);
    return [pole, s = tf.s, t = tf.t](const SiegelPoint& w) {
        return std::pow(rho(w), t) * std::pow(rho_pair(w, pole), -s);
    };
}

SiegelIntegrand unimodular_test_fn(const SiegelPoint& z, double c) {
    return [z, c](const SiegelPoint& w) {
        return std::polar(1.0, c * std::arg(rho_pair(z, w)));
    };
}

Complex partial_n_closed_form(double s, int N, const SiegelPoint& z,
                              const SiegelPoint& u) {
    std::vector<std::string> bad;
    require(bad, s > 0.0, "s > 0");
    require(bad, N >= 0, "N >= 0");
    if (!bad.empty()) fail("partial_n_closed_form", bad);
    const Complex half_i(0.0, 0.5);
    return std::pow(half_i, static_cast<double>(N)) * pochhammer(s, N) *
           std::pow(rho_pair(z, u), -s - N);
}

IntegralEstimate two_center_integral(const SiegelPoint& z, const SiegelPoint& u,
                                     double r, double s, double t,
                                     const MCConfig& cfg) {
    const int n = z.n();
    std::vector<std::string> bad;
    require(bad, z.n() == u.n(), "dim(z) == dim(u)");
    require(bad, t > -1.0, "t > -1");
    require(bad, r + s - t > n + 1, "r+s-t > n+1");
    if (!bad.empty()) fail("two_center_integral", bad);

    std::vector<KernelSampler> comps;
    for (const SiegelPoint& c : bridge_centers(z, u))
        comps.emplace_back(c, t, r + s);
    // Off-exponent component: keeps the estimate genuinely random even when
    // z = u, r = s would make the matched kernel exactly proportional to the
    // integrand.
    comps.emplace_back(z, t + 0.4, r + s + 0.8);
    MixtureSampler mix(std::move(comps));
    mix.set_allocation(cfg.samples);
    return run_mc(cfg, [&](RngStream& rng, long long i) {
        const SiegelSample smp = mix.draw(i, rng);
        const Complex f = std::pow(smp.rho, t) *
                          std::pow(rho_pair(z, smp.w), -r) *
                          std::pow(rho_pair(smp.w, u), -s);
        return weight_ratio(f, mix.density(smp));
    });
}

ReproducingResidual reproducing_residual(int n, double alpha, double s,
                                         const SiegelPoint& z,
                                         const SiegelPoint& u,
                                         const MCConfig& cfg) {
    std::vector<std::string> bad;
    require(bad, alpha > -1.0, "alpha > -1");
    require(bad, s > 0.0, "s > 0");
    require(bad, z.n() == n && u.n() == n, "dim(z) == dim(u) == n");
    if (!bad.empty()) fail("reproducing_residual", bad);

    const double calpha = bergman_const_c_alpha(n, alpha);
    ReproducingResidual res;
    res.exact_constant_residual =
        std::abs(calpha * const_C1(n, n + 1 + alpha, s, alpha) - 1.0);

    const IntegralEstimate est =
        two_center_integral(z, u, n + 1 + alpha, s, alpha, cfg);
    const Complex truth = std::pow(rho_pair(z, u), -s);
    res.mc_residual = std::abs(calpha * est.value - truth) / std::abs(truth);
    return res;
}

}  // namespace siegel
