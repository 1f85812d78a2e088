#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>

#include "siegel/specfun.hpp"

using namespace siegel;

namespace {

const double kPi = 3.14159265358979323846;
const double kInf = std::numeric_limits<double>::infinity();

bool rel_close(double got, double want, double tol = 1e-12) {
    return std::abs(got - want) <= tol * std::max(1.0, std::abs(want));
}

bool throws_with(const std::function<void()>& f, const std::string& name) {
    try {
        f();
    } catch (const ConstraintError& e) {
        for (const auto& v : e.violations())
            if (v == name) return true;
        return false;
    }
    return false;
}

}  // namespace

TEST_CASE("ln_gamma matches std::lgamma over a wide grid") {
    for (double x : {0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 25.5, 100.0, 170.0}) {
        CAPTURE(x);
        CHECK(rel_close(ln_gamma(x), std::lgamma(x), 1e-13));
    }
    CHECK(throws_with([] { ln_gamma(0.0); }, "x > 0"));
    CHECK(throws_with([] { ln_gamma(-2.5); }, "x > 0"));
}

TEST_CASE("pochhammer rising factorial") {
    CHECK(pochhammer(3.7, 0) == 1.0);
    CHECK(pochhammer(2.0, 3) == doctest::Approx(24.0));
    CHECK(pochhammer(0.5, 2) == doctest::Approx(0.75));
    CHECK(pochhammer(-1.0, 3) == doctest::Approx(0.0));
    // (a)_{j+1} = (a)_j (a+j)
    const double a = 1.3;
    for (int j = 0; j < 6; ++j)
        CHECK(rel_close(pochhammer(a, j + 1), pochhammer(a, j) * (a + j)));
}

TEST_CASE("gauss_2f1 against closed forms") {
    // 2F1(a,b;b;x) = (1-x)^{-a}
    CHECK(rel_close(gauss_2f1(2.0, 3.0, 3.0, 0.25), std::pow(0.75, -2.0), 1e-12));
    // 2F1(1,1;2;x) = -log(1-x)/x
    CHECK(rel_close(gauss_2f1(1.0, 1.0, 2.0, 0.5), 2.0 * std::log(2.0), 1e-12));
    // Gauss summation at x = 1: Gamma(c)Gamma(c-a-b)/(Gamma(c-a)Gamma(c-b))
    CHECK(rel_close(gauss_2f1(1.0, 1.0, 3.0, 1.0), 2.0, 1e-12));
    CHECK(gauss_2f1(0.7, -0.2, 1.9, 0.0) == 1.0);
    // 2F1(1,1;3;x) = 2(x + (1-x)log(1-x))/x^2
    const double x = 0.9;
    CHECK(rel_close(gauss_2f1(1.0, 1.0, 3.0, x),
                    2.0 * (x + (1.0 - x) * std::log(1.0 - x)) / (x * x), 1e-12));

    CHECK(throws_with([] { gauss_2f1(1.0, 1.0, -2.0, 0.5); },
                      "c not a nonpositive integer"));
    CHECK(throws_with([] { gauss_2f1(1.0, 1.0, 2.0, 1.5); }, "x in [0,1]"));
}

TEST_CASE("const_C1 frozen values") {
    CHECK(rel_close(const_C1(1, 2, 2, 0), 4.0 * kPi));
    CHECK(rel_close(const_C1(1, 3, 3, 0), 6.0 * kPi));
    CHECK(rel_close(const_C1(2, 4, 3, 1), 2.0 * kPi * kPi / 3.0));

    CHECK(throws_with([] { const_C1(1, -1, 3, 0); }, "r > 0"));
    CHECK(throws_with([] { const_C1(1, 3, 0, 0); }, "s > 0"));
    CHECK(throws_with([] { const_C1(1, 3, 3, -1); }, "t > -1"));
    CHECK(throws_with([] { const_C1(1, 1, 1, 0.5); }, "r+s-t > n+1"));
}

TEST_CASE("const_C2 equals C1 at the symmetric point") {
    CHECK(rel_close(const_C2(1, 4, 0), 4.0 * kPi));
    CHECK(rel_close(const_C2(1, 5, 1), 64.0 / 9.0));
    for (int n : {1, 2, 3})
        for (double s : {5.5, 7.0, 9.25})
            for (double t : {-0.5, 0.0, 1.25}) {
                CAPTURE(n);
                CAPTURE(s);
                CAPTURE(t);
                CHECK(rel_close(const_C2(n, s, t), const_C1(n, s / 2, s / 2, t)));
            }
    CHECK(throws_with([] { const_C2(1, 2, 0); }, "s-t > n+1"));
    CHECK(throws_with([] { const_C2(1, 5, -1.5); }, "t > -1"));
}

TEST_CASE("test_family_constants frozen values") {
    // n=1, alpha=0, p=2, (a,b,c)=(0,0,2), (s,t)=(2,0)
    const auto tc = test_family_constants(1, 0, 2, 0, 0, 2, 2, 0);
    CHECK(rel_close(tc.C3, 4.0 * kPi));
    CHECK(rel_close(tc.C4, 4.0 * kPi));
    // C5 = 4 pi^n Gamma(pt+1+alpha) Gamma(p(e-a)-n-1-alpha) / Gamma(p e / ...)
    // pinned numerically instead: the scaling-law check cross-verifies it.
    CHECK(tc.C5 > 0.0);
    CHECK(std::isfinite(tc.C5));

    CHECK(throws_with([] { test_family_constants(1, 0, kInf, 0, 0, 2, 2, 0); },
                      "p finite, p >= 1"));
    CHECK(throws_with([] { test_family_constants(1, 0, 2, 0, 0, 2, -1, 0); },
                      "C.1: s > 0"));
    CHECK(throws_with([] { test_family_constants(1, 0, 2, 0, 0, 2, 2, -0.6); },
                      "C.2: t > -(1+alpha)/p"));
    CHECK(throws_with([] { test_family_constants(1, 0, 2, 0, -1.5, 2, 2, 0); },
                      "C.2: t > -1-b"));
    CHECK(throws_with([] { test_family_constants(1, 0, 2, 0, 0, 2, 0.9, 0); },
                      "C.3: s-t > (n+1+alpha)/p"));
    CHECK(throws_with([] { test_family_constants(1, 0, 2, 0, 4, 2, 2, 0); },
                      "C.3: s-t > n+1+b-c"));
    CHECK(throws_with([] { test_family_constants(1, 0, 2, -1, 0, 2, 2, 0); },
                      "pa+alpha > -1"));
}

TEST_CASE("schur_norm_bound frozen values") {
    CHECK(rel_close(schur_norm_bound(1, 2, 0, 0.5, 0.5), 16.0));
    CHECK(rel_close(schur_norm_bound(1, 2, 0, 0, 0), 4.0 * kPi * kPi));
    CHECK(rel_close(schur_norm_bound(3, 2, 0, 0, 0), 4.0 * std::pow(kPi, 4)));
}

TEST_CASE("bergman_const_c_alpha and the normalization identity") {
    CHECK(rel_close(bergman_const_c_alpha(1, 0), 1.0 / (4.0 * kPi)));
    CHECK(rel_close(bergman_const_c_alpha(2, 1), 3.0 / (2.0 * kPi * kPi)));
    // c_alpha * C1(n, n+1+alpha, s, alpha) = 1 for every s > 0
    for (int n : {1, 2, 3})
        for (double alpha : {-0.5, 0.0, 1.0, 2.5})
            for (double s : {0.5, 2.0, 7.0}) {
                CAPTURE(n);
                CAPTURE(alpha);
                CAPTURE(s);
                const double prod = bergman_const_c_alpha(n, alpha) *
                                    const_C1(n, n + 1 + alpha, s, alpha);
                CHECK(rel_close(prod, 1.0));
            }
    CHECK(throws_with([] { bergman_const_c_alpha(1, -1.0); }, "alpha > -1"));
}

TEST_CASE("conjugate_exponent extended conventions") {
    CHECK(conjugate_exponent(2.0) == doctest::Approx(2.0));
    CHECK(rel_close(conjugate_exponent(4.0), 4.0 / 3.0));
    CHECK(conjugate_exponent(1.0) == kInf);
    CHECK(conjugate_exponent(kInf) == doctest::Approx(1.0));
    // 1/p + 1/q = 1
    for (double p : {1.2, 1.5, 3.0, 10.0})
        CHECK(rel_close(1.0 / p + 1.0 / conjugate_exponent(p), 1.0));
}

TEST_CASE("over_p handles the p = inf reading") {
    CHECK(over_p(3.0, 2.0) == doctest::Approx(1.5));
    CHECK(over_p(3.0, kInf) == 0.0);
    CHECK(over_p(-2.0, kInf) == 0.0);
}
