#pragma once

#include <optional>
#include <vector>

#include "siegel/geometry.hpp"
#include "siegel/quadrature.hpp"
#include "siegel/specfun.hpp"

namespace siegel {

struct KernelParams {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

struct SpaceParams {
    double p = 2.0;  // extended real in [1, inf]
    double alpha = 0.0;

    double q() const { return conjugate_exponent(p); }
};

/// Parameters of the test family f_beta(z) = rho(z)^t / rho(z, beta*i)^s.
struct TestFamilyParams {
    double s = 2.0;
    double t = 0.0;
    double beta = 1.0;
};

enum class FailedCondition {
    LowerWeightCondition,  // -pa < alpha+1 (p = inf: a > 0)
    UpperWeightCondition,  // alpha+1 < p(b+1) (p = inf: b > -1)
    HomogeneityCondition,  // c = n+1+a+b
};

const char* failed_condition_name(FailedCondition f);

struct Verdict {
    bool bounded = false;
    std::vector<FailedCondition> failed;
    std::optional<double> schur_bound;  // present when bounded and 1 < p < inf
};

struct TestFamilyNorms {
    double norm_f_p;   // ||f_beta||^p
    double norm_Tf_p;  // ||T f_beta||^p
};

struct SchurCertificate {
    double g_exponent;  // -(1+alpha)/(pq)
    double bound;
};

struct ReproducingResidual {
    double exact_constant_residual;
    double mc_residual;
};

/// T_{a,b,c} f(z) = rho(z)^a int_U rho(w)^b / rho(z,w)^c f(w) dV(w),
/// estimated with mc_integrate_siegel at weight exponent b. Convergence for
/// f is the caller's responsibility; divergence surfaces as exploding stderr.
IntegralEstimate apply_T_estimate(const KernelParams& k, const SiegelIntegrand& f,
                                  const SiegelPoint& z, const MCConfig& cfg);
Complex apply_T(const KernelParams& k, const SiegelIntegrand& f,
                const SiegelPoint& z, const MCConfig& cfg);

/// S_{a,b,c}: as T with |rho(z,w)|^c in the denominator.
IntegralEstimate apply_S_estimate(const KernelParams& k, const SiegelIntegrand& f,
                                  const SiegelPoint& z, const MCConfig& cfg);
Complex apply_S(const KernelParams& k, const SiegelIntegrand& f,
                const SiegelPoint& z, const MCConfig& cfg);

/// S^c_{a,b} f(z) = rho(z)^a int rho(w)^b delta(z,w)^delta_exp
/// / |rho(z,w)|^{n+1+a+b} f(w) dV(w), with delta the Bergman distance.
/// Requires delta_exp >= 0 and k.c == n+1+a+b. At delta_exp = 0 this equals
/// apply_S bit for bit at the same seed.
IntegralEstimate apply_S_delta_estimate(const KernelParams& k, double delta_exp,
                                        const SiegelIntegrand& f,
                                        const SiegelPoint& z, const MCConfig& cfg);
Complex apply_S_delta(const KernelParams& k, double delta_exp,
                      const SiegelIntegrand& f, const SiegelPoint& z,
                      const MCConfig& cfg);

/// Closed form (T f_beta)(z) = C4 rho(z)^a / rho(z, beta*i)^{c-b-n-1+s-t}.
/// Requires the integral's own conditions: s > 0, t > -1-b, s-t > n+1+b-c,
/// c > 0. (The p-dependent parts of (C.2)-(C.3) govern norms, not this
/// pointwise formula.)
Complex t_on_test_family(const KernelParams& k, const TestFamilyParams& tf,
                         const SiegelPoint& z);

/// Closed forms for ||f_beta||^p and ||T f_beta||^p in L^p(dV_alpha).
/// Finite p only; all test-family conditions are enforced by name.
TestFamilyNorms test_family_norms(int n, const SpaceParams& sp,
                                  const KernelParams& k,
                                  const TestFamilyParams& tf);

/// n+1+a+b-c: the per-unit-p slope of log(||Tf_beta||/||f_beta||) in log beta.
/// Zero iff the homogeneity condition holds. Never throws.
double scaling_exponent(int n, const SpaceParams& sp, const KernelParams& k,
                        const TestFamilyParams& tf);

/// Kernel parameters of the adjoint of T_{a,b,c} on L^p(dV_alpha):
/// (b - alpha, a + alpha, c).
KernelParams adjoint_params(const SpaceParams& sp, const KernelParams& k);

/// The boundedness trichotomy for T_{a,b,c} on L^p(dV_alpha):
/// bounded iff -pa < alpha+1 < p(b+1) and c = n+1+a+b exactly, with the
/// p = inf reading a > 0, b > -1 (no weight). Attaches the Schur bound when
/// bounded and 1 < p < inf.
Verdict boundedness_verdict(int n, const SpaceParams& sp, const KernelParams& k);

/// The Schur-test witness g(z) = rho(z)^{-(1+alpha)/(pq)} and the resulting
/// norm bound. Requires 1 < p < inf and a bounded verdict.
SchurCertificate schur_certificate(int n, const SpaceParams& sp,
                                   const KernelParams& k);

/// The test function f_beta(w) = rho(w)^t / rho(w, beta*i)^s in dimension n.
SiegelIntegrand test_family_fn(int n, const TestFamilyParams& tf);

/// f_z(w) = rho(z,w)^c / |rho(z,w)|^c; unimodular everywhere.
SiegelIntegrand unimodular_test_fn(const SiegelPoint& z, double c);

/// partial_n^N applied to w -> rho(.,u)^{-s}, evaluated at z:
/// (i/2)^N (s)_N rho(z,u)^{-s-N}. Requires s > 0.
Complex partial_n_closed_form(double s, int N, const SiegelPoint& z,
                              const SiegelPoint& u);

/// MC estimate of int rho(w)^t rho(z,w)^{-r} rho(w,u)^{-s} dV(w) with a
/// bridge-mixture importance sampler adapted to both centers. Requires
/// t > -1 and r+s-t > n+1.
IntegralEstimate two_center_integral(const SiegelPoint& z, const SiegelPoint& u,
                                     double r, double s, double t,
                                     const MCConfig& cfg);

/// Reproducing-formula residuals for the kernel rho(.,u)^{-s}:
/// exact_constant_residual = |c_alpha C1(n,n+1+alpha,s,alpha) - 1| and
/// mc_residual = relative deviation of c_alpha * (MC integral) from
/// rho(z,u)^{-s}. Requires alpha > -1 and s > 0.
ReproducingResidual reproducing_residual(int n, double alpha, double s,
                                         const SiegelPoint& z,
                                         const SiegelPoint& u,
                                         const MCConfig& cfg);

}  // namespace siegel
