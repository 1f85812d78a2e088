#include "siegel/specfun.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace siegel {

namespace {

constexpr double kLogPi = 1.1447298858494001741;  // log(pi)
constexpr double kLog4 = 1.3862943611198906188;   // log(4)

[[noreturn]] void fail(const std::string& who, std::vector<std::string> violated) {
    std::ostringstream msg;
    msg << who << ": violated";
    for (const auto& v : violated) msg << " [" << v << "]";
    throw ConstraintError(msg.str(), std::move(violated));
}

void require(std::vector<std::string>& violated, bool ok, const std::string& name) {
    if (!ok) violated.push_back(name);
}

}  // namespace

double ln_gamma(double x) {
    if (!(x > 0.0))
        throw ConstraintError("ln_gamma: argument must be positive", {"x > 0"});
    return std::lgamma(x);
}

double pochhammer(double a, int j) {
    double r = 1.0;
    for (int k = 0; k < j; ++k) r *= a + k;
    return r;
}

double gauss_2f1(double a, double b, double c, double x) {
    std::vector<std::string> violated;
    require(violated, !(c <= 0.0 && c == std::floor(c)), "c not a nonpositive integer");
    require(violated, x >= 0.0 && x <= 1.0, "x in [0,1]");
    if (!violated.empty()) fail("gauss_2f1", violated);

    if (x == 1.0) {
        if (!(c - a - b > 0.0))
            fail("gauss_2f1", {"c-a-b > 0 at x = 1"});
        return std::exp(ln_gamma(c) + ln_gamma(c - a - b) - ln_gamma(c - a) - ln_gamma(c - b));
    }

    double sum = 1.0, term = 1.0;
    int small_streak = 0;
    for (long j = 0; j < 1000000; ++j) {
        term *= (a + j) * (b + j) / ((c + j) * (j + 1)) * x;
        sum += term;
        if (std::abs(term) < 1e-16 * std::abs(sum)) {
            if (++small_streak >= 3) return sum;
        } else {
            small_streak = 0;
        }
    }
    throw std::runtime_error("gauss_2f1: series did not converge within 1e6 terms");
}

double const_C1(int n, double r, double s, double t) {
    std::vector<std::string> violated;
    require(violated, r > 0.0, "r > 0");
    require(violated, s > 0.0, "s > 0");
    require(violated, t > -1.0, "t > -1");
    require(violated, r + s - t > n + 1.0, "r+s-t > n+1");
    if (!violated.empty()) fail("const_C1", violated);
    return std::exp(kLog4 + n * kLogPi + ln_gamma(1.0 + t) + ln_gamma(r + s - t - n - 1.0) -
                    ln_gamma(r) - ln_gamma(s));
}

double const_C2(int n, double s, double t) {
    std::vector<std::string> violated;
    require(violated, t > -1.0, "t > -1");
    require(violated, s - t > n + 1.0, "s-t > n+1");
    if (!violated.empty()) fail("const_C2", violated);
    return std::exp(kLog4 + n * kLogPi + ln_gamma(1.0 + t) + ln_gamma(s - t - n - 1.0) -
                    2.0 * ln_gamma(0.5 * s));
}

TestFamilyConstants test_family_constants(int n, double alpha, double p, double a,
                                          double b, double c, double s, double t) {
    std::vector<std::string> violated;
    require(violated, std::isfinite(p) && p >= 1.0, "p finite, p >= 1");
    if (!violated.empty()) fail("test_family_constants", violated);

    require(violated, s > 0.0, "C.1: s > 0");
    require(violated, t > -(1.0 + alpha) / p, "C.2: t > -(1+alpha)/p");
    require(violated, t > -1.0 - b, "C.2: t > -1-b");
    require(violated, s - t > (n + 1.0 + alpha) / p, "C.3: s-t > (n+1+alpha)/p");
    require(violated, s - t > n + 1.0 + b - c, "C.3: s-t > n+1+b-c");
    require(violated, p * a + alpha > -1.0, "pa+alpha > -1");
    require(violated, c > 0.0, "c > 0");
    double e = c - b - n - 1.0 + s - t;  // exponent of rho(z, beta i) in T f_beta
    require(violated, p * (e - a) - n - 1.0 - alpha > 0.0,
            "C5: p(c-a-b-n-1+s-t) > n+1+alpha");
    if (!violated.empty()) fail("test_family_constants", violated);

    TestFamilyConstants out;
    out.C3 = std::exp(kLog4 + n * kLogPi + ln_gamma(p * t + 1.0 + alpha) +
                      ln_gamma(p * (s - t) - n - 1.0 - alpha) - 2.0 * ln_gamma(0.5 * p * s));
    out.C4 = std::exp(kLog4 + n * kLogPi + ln_gamma(b + t + 1.0) + ln_gamma(e) -
                      ln_gamma(c) - ln_gamma(s));
    out.C5 = std::exp(p * std::log(out.C4) + kLog4 + n * kLogPi +
                      ln_gamma(1.0 + p * a + alpha) +
                      ln_gamma(p * (e - a) - n - 1.0 - alpha) - 2.0 * ln_gamma(0.5 * p * e));
    return out;
}

double schur_norm_bound(int n, double p, double alpha, double a, double b) {
    std::vector<std::string> violated;
    require(violated, p > 1.0 && std::isfinite(p), "1 < p < infinity");
    if (violated.empty()) {
        require(violated, -p * a < alpha + 1.0, "-pa < alpha+1");
        require(violated, alpha + 1.0 < p * (b + 1.0), "alpha+1 < p(b+1)");
    }
    if (!violated.empty()) fail("schur_norm_bound", violated);
    double g = (1.0 + alpha) / p;
    return std::exp(kLog4 + n * kLogPi + ln_gamma(a + g) + ln_gamma(1.0 + b - g) -
                    2.0 * ln_gamma(0.5 * (n + 1.0 + a + b)));
}

double bergman_const_c_alpha(int n, double alpha) {
    if (!(alpha > -1.0)) fail("bergman_const_c_alpha", {"alpha > -1"});
    return std::exp(ln_gamma(n + 1.0 + alpha) - kLog4 - n * kLogPi - ln_gamma(1.0 + alpha));
}

double conjugate_exponent(double p) {
    if (!(p >= 1.0)) fail("conjugate_exponent", {"p >= 1"});
    return 1.0 + 1.0 / (p - 1.0);
}

double over_p(double x, double p) {
    if (std::isinf(p)) return 0.0;
    return x / p;
}

}  // namespace siegel
