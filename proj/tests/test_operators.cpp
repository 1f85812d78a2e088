#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "siegel/operators.hpp"

using namespace siegel;

namespace {

const double kPi = 3.14159265358979323846;

bool within_3se(const IntegralEstimate& est, Complex want) {
    return std::abs(est.value - want) <= 3.0 * est.std_error + 1e-12;
}

bool names(const ConstraintError& e, const std::string& v) {
    for (const auto& s : e.violations())
        if (s == v) return true;
    return false;
}

MCConfig quick(uint64_t seed = 0) {
    MCConfig cfg;
    cfg.samples = 200000;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("apply_S reproduces the absolute-kernel integral") {
    const KernelParams k{0.0, 0.0, 4.0};
    const auto one = [](const SiegelPoint&) { return Complex(1.0, 0.0); };
    const auto est = apply_S_estimate(k, one, SiegelPoint::base(1), quick(5));
    CHECK(est.std_error > 0.0);
    CHECK(within_3se(est, Complex(4.0 * kPi, 0.0)));

    // rho(z)^a prefactor and the rho(w)^b weight both engage
    const KernelParams k2{1.0, 1.0, 5.0};
    const auto est2 = apply_S_estimate(k2, one, SiegelPoint::base(1, 2.0), quick(6));
    // 2^1 * C2(1,5,1) * rho(2i)^{1-5+2}
    const double want = 2.0 * (64.0 / 9.0) * std::pow(2.0, -2.0);
    CHECK(within_3se(est2, Complex(want, 0.0)));
}

TEST_CASE("apply_T agrees with the closed form on the test family") {
    const KernelParams k{0.5, 0.5, 3.0};
    const TestFamilyParams tf{2.0, 0.0, 1.0};
    CVector zp(0);
    const SiegelPoint z(zp, Complex(0.4, 1.7));
    const auto est =
        apply_T_estimate(k, test_family_fn(1, tf), z, quick(11));
    CHECK(within_3se(est, t_on_test_family(k, tf, z)));

    // frozen value at the base point with the Bergman-type kernel
    const Complex at_base = t_on_test_family(KernelParams{0.0, 0.0, 2.0},
                                             TestFamilyParams{2.0, 0.0, 1.0},
                                             SiegelPoint::base(1));
    CHECK(at_base.real() == doctest::Approx(4.0 * kPi));
    CHECK(at_base.imag() == doctest::Approx(0.0));
}

TEST_CASE("T is dominated by S on the same kernel data") {
    const KernelParams k{0.0, 0.5, 4.0};
    const TestFamilyParams tf{2.0, 0.0, 1.0};
    const auto f = test_family_fn(1, tf);
    const auto fabs = [&](const SiegelPoint& w) {
        return Complex(std::abs(f(w)), 0.0);
    };
    const SiegelPoint z = SiegelPoint::base(1, 0.5);
    const Complex tv = apply_T(k, f, z, quick(21));
    const Complex sv = apply_S(k, fabs, z, quick(21));
    CHECK(std::abs(tv) <= sv.real() + 1e-12);
}

TEST_CASE("apply_S_delta at zero exponent is apply_S bit for bit") {
    const KernelParams k{0.5, 0.5, 3.0};  // c = n+1+a+b for n = 1
    const auto one = [](const SiegelPoint&) { return Complex(1.0, 0.0); };
    const SiegelPoint z = SiegelPoint::base(1);
    MCConfig cfg = quick(13);
    cfg.samples = 50000;
    const auto plain = apply_S_estimate(k, one, z, cfg);
    const auto delta0 = apply_S_delta_estimate(k, 0.0, one, z, cfg);
    CHECK(plain.value.real() == delta0.value.real());
    CHECK(plain.value.imag() == delta0.value.imag());
    CHECK(plain.std_error == delta0.std_error);

    const auto weighted = apply_S_delta_estimate(k, 1.0, one, z, cfg);
    CHECK(std::isfinite(weighted.value.real()));
    CHECK(weighted.value.real() > 0.0);

    try {
        apply_S_delta_estimate(KernelParams{0.5, 0.5, 4.0}, 1.0, one, z, cfg);
        FAIL("homogeneity mismatch not rejected");
    } catch (const ConstraintError& e) {
        CHECK(names(e, "c = n+1+a+b"));
    }
    try {
        apply_S_delta_estimate(k, -0.5, one, z, cfg);
        FAIL("negative delta exponent not rejected");
    } catch (const ConstraintError& e) {
        CHECK(names(e, "delta_exp >= 0"));
    }
}

TEST_CASE("adjoint parameters swap the weights and are involutive") {
    const SpaceParams sp{2.0, 1.0};
    const KernelParams k{2.0, 3.0, 7.0};
    const KernelParams adj = adjoint_params(sp, k);
    CHECK(adj.a == doctest::Approx(2.0));
    CHECK(adj.b == doctest::Approx(3.0));
    CHECK(adj.c == doctest::Approx(7.0));

    const SpaceParams sp2{1.5, -0.3};
    const KernelParams k2{0.7, 1.2, 4.0};
    const SpaceParams sp2q{sp2.q(), sp2.alpha};
    const KernelParams back = adjoint_params(sp2q, adjoint_params(sp2, k2));
    CHECK(back.a == doctest::Approx(k2.a));
    CHECK(back.b == doctest::Approx(k2.b));
    CHECK(back.c == doctest::Approx(k2.c));
}

TEST_CASE("boundedness_verdict trichotomy") {
    // Bergman projection parameters: bounded, with the Schur bound attached
    const Verdict ok = boundedness_verdict(1, SpaceParams{2.0, 0.0},
                                           KernelParams{0.0, 0.0, 2.0});
    CHECK(ok.bounded);
    CHECK(ok.failed.empty());
    REQUIRE(ok.schur_bound.has_value());
    CHECK(*ok.schur_bound == doctest::Approx(4.0 * kPi * kPi));

    const double inf = std::numeric_limits<double>::infinity();
    const Verdict sup = boundedness_verdict(1, SpaceParams{inf, 0.0},
                                            KernelParams{0.0, 0.0, 2.0});
    CHECK(!sup.bounded);
    REQUIRE(sup.failed.size() == 1);
    CHECK(sup.failed[0] == FailedCondition::LowerWeightCondition);
    CHECK(std::string(failed_condition_name(sup.failed[0])) ==
          "LowerWeightCondition");
    CHECK(!sup.schur_bound.has_value());

    const Verdict inhom = boundedness_verdict(1, SpaceParams{2.0, 0.0},
                                              KernelParams{0.0, 0.0, 2.5});
    CHECK(!inhom.bounded);
    REQUIRE(inhom.failed.size() == 1);
    CHECK(inhom.failed[0] == FailedCondition::HomogeneityCondition);

    const Verdict upper = boundedness_verdict(1, SpaceParams{2.0, 3.0},
                                              KernelParams{0.0, 0.5, 2.5});
    CHECK(!upper.bounded);
    REQUIRE(upper.failed.size() == 1);
    CHECK(upper.failed[0] == FailedCondition::UpperWeightCondition);

    // p = 1 boundary works without a Schur bound
    const Verdict p1 = boundedness_verdict(1, SpaceParams{1.0, -0.5},
                                           KernelParams{0.2, 0.0, 2.2});
    CHECK(p1.bounded);
    CHECK(!p1.schur_bound.has_value());
}

TEST_CASE("schur_certificate witness exponent and bound") {
    const SchurCertificate cert = schur_certificate(
        1, SpaceParams{2.0, 0.0}, KernelParams{0.5, 0.5, 3.0});
    CHECK(cert.g_exponent == doctest::Approx(-0.25));
    CHECK(cert.bound == doctest::Approx(16.0));

    try {
        schur_certificate(1, SpaceParams{1.0, 0.0}, KernelParams{0.5, 0.5, 3.0});
        FAIL("p = 1 not rejected");
    } catch (const ConstraintError& e) {
        CHECK(names(e, "1 < p < inf"));
    }
}

TEST_CASE("unimodular_test_fn has modulus one") {
    const SiegelPoint z = SiegelPoint::base(2, 1.5);
    const auto f = unimodular_test_fn(z, 2.7);
    CVector wp(1);
    wp << Complex(0.4, 0.2);
    const SiegelPoint w(wp, Complex(-0.3, 1.1));
    CHECK(std::abs(f(w)) == doctest::Approx(1.0));
    CHECK(std::abs(f(z)) == doctest::Approx(1.0));

    const auto trivial = unimodular_test_fn(z, 0.0);
    CHECK(trivial(w) == Complex(1.0, 0.0));
}

TEST_CASE("partial_n_closed_form") {
    const SiegelPoint i1 = SiegelPoint::base(1);
    // N = 0 is the kernel itself
    const Complex plain = partial_n_closed_form(2.0, 0, i1, SiegelPoint::base(1, 2.0));
    CHECK(std::abs(plain - std::pow(rho_pair(i1, SiegelPoint::base(1, 2.0)), -2.0)) <
          1e-15);
    // (i/2)^1 (2)_1 rho^{-3} = i at rho(i,i) = 1
    const Complex first = partial_n_closed_form(2.0, 1, i1, i1);
    CHECK(first.real() == doctest::Approx(0.0));
    CHECK(first.imag() == doctest::Approx(1.0));

    try {
        partial_n_closed_form(-1.0, 1, i1, i1);
        FAIL("s <= 0 not rejected");
    } catch (const ConstraintError& e) {
        CHECK(names(e, "s > 0"));
    }
}

TEST_CASE("test_family_norms closed form, scaling, and MC cross-check") {
    const SpaceParams sp{2.0, 0.0};
    const KernelParams k{0.0, 0.0, 2.0};
    const TestFamilyParams tf{2.0, 0.0, 1.0};
    const TestFamilyNorms n1 = test_family_norms(1, sp, k, tf);
    CHECK(n1.norm_f_p == doctest::Approx(4.0 * kPi));

    // beta-scaling: ||f_beta||_p^p = C3 beta^{n+1+alpha+p(t-s)}
    const TestFamilyNorms n2 =
        test_family_norms(1, sp, k, TestFamilyParams{2.0, 0.0, 2.0});
    CHECK(n2.norm_f_p / n1.norm_f_p == doctest::Approx(std::pow(2.0, 2.0 - 4.0)));
    // ||Tf|| picks up the homogeneity defect as an extra beta power
    const KernelParams off{0.0, 0.0, 1.75};
    const TestFamilyNorms m1 = test_family_norms(1, sp, off, tf);
    const TestFamilyNorms m2 =
        test_family_norms(1, sp, off, TestFamilyParams{2.0, 0.0, 2.0});
    const double slope =
        std::log2(m2.norm_Tf_p / m1.norm_Tf_p) - std::log2(m2.norm_f_p / m1.norm_f_p);
    CHECK(slope == doctest::Approx(sp.p * (2.0 - 1.75)));
    CHECK(scaling_exponent(1, sp, off, tf) == doctest::Approx(0.25));

    // MC: int |f_1|^2 dV = int rho^{2t} |rho(w,i)|^{-2s} dV = C2(1,4,0)
    const auto f = test_family_fn(1, tf);
    const auto mc = mc_integrate_siegel(
        1, 0.0, [&](const SiegelPoint& w) { return Complex(std::norm(f(w)), 0.0); },
        quick(17));
    CHECK(within_3se(mc, Complex(n1.norm_f_p, 0.0)));

    try {
        test_family_norms(1, SpaceParams{
                                 std::numeric_limits<double>::infinity(), 0.0},
                          k, tf);
        FAIL("p = inf not rejected");
    } catch (const ConstraintError& e) {
        CHECK(!e.violations().empty());
    }
}

TEST_CASE("two_center_integral frozen values and hypotheses") {
    const SiegelPoint i1 = SiegelPoint::base(1);
    const SiegelPoint i2 = SiegelPoint::base(1, 2.0);

    const auto diag = two_center_integral(i1, i1, 3.0, 3.0, 0.0, quick(29));
    CHECK(diag.std_error > 0.0);
    CHECK(within_3se(diag, Complex(6.0 * kPi, 0.0)));

    // C1(1,3,3,0) rho(i,2i)^{-(r+s-t-n-1)} = 6pi (3/2)^{-4} = 32pi/27
    const auto split = two_center_integral(i1, i2, 3.0, 3.0, 0.0, quick(31));
    CHECK(within_3se(split, Complex(32.0 * kPi / 27.0, 0.0)));

    try {
        two_center_integral(i1, i2, 3.0, 3.0, -1.0, quick());
        FAIL("t <= -1 not rejected");
    } catch (const ConstraintError& e) {
        CHECK(names(e, "t > -1"));
    }
    try {
        two_center_integral(i1, i2, 1.0, 1.0, 0.5, quick());
        FAIL("r+s-t <= n+1 not rejected");
    } catch (const ConstraintError& e) {
        CHECK(names(e, "r+s-t > n+1"));
    }
    try {
        two_center_integral(i1, SiegelPoint::base(2), 3.0, 3.0, 0.0, quick());
        FAIL("dimension mismatch not rejected");
    } catch (const ConstraintError& e) {
        CHECK(names(e, "dim(z) == dim(u)"));
    }
}

TEST_CASE("reproducing_residual") {
    const auto rr = reproducing_residual(1, 0.0, 2.0, SiegelPoint::base(1),
                                         SiegelPoint::base(1, 2.0), quick(37));
    CHECK(rr.exact_constant_residual < 1e-12);
    CHECK(rr.mc_residual < 0.02);

    try {
        reproducing_residual(1, -1.5, 2.0, SiegelPoint::base(1),
                             SiegelPoint::base(1, 2.0), quick());
        FAIL("alpha <= -1 not rejected");
    } catch (const ConstraintError& e) {
        CHECK(names(e, "alpha > -1"));
    }
}
