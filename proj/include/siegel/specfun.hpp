#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace siegel {

/// Thrown when a closed-form constant or operator is evaluated outside its
/// domain of validity. Carries the violated conditions by name so callers can
/// report them without parsing the message.
class ConstraintError : public std::domain_error {
public:
    ConstraintError(const std::string& what, std::vector<std::string> violated)
        : std::domain_error(what), violated_(std::move(violated)) {}

    const std::vector<std::string>& violations() const { return violated_; }

private:
    std::vector<std::string> violated_;
};

/// log Gamma(x) for x > 0. All constants below are assembled in log space and
/// exponentiated once.
double ln_gamma(double x);

/// Rising factorial (a)_j = a(a+1)...(a+j-1), (a)_0 = 1.
double pochhammer(double a, int j);

/// Gauss hypergeometric 2F1(a,b;c;x) for x in [0,1]. Power series for x < 1
/// (terms summed until three consecutive terms fall below 1e-16 of the partial
/// sum, capped at 1e6 terms); Gauss closed form at x = 1, which requires
/// c - a - b > 0.
double gauss_2f1(double a, double b, double c, double x);

/// C1(n,r,s,t) = 4 pi^n Gamma(1+t) Gamma(r+s-t-n-1) / (Gamma(r) Gamma(s)).
/// Requires r > 0, s > 0, t > -1, r+s-t > n+1.
double const_C1(int n, double r, double s, double t);

/// C2(n,s,t) = 4 pi^n Gamma(1+t) Gamma(s-t-n-1) / Gamma(s/2)^2
///           = C1(n, s/2, s/2, t). Requires t > -1, s-t > n+1.
double const_C2(int n, double s, double t);

struct TestFamilyConstants {
    double C3;  // |f_beta| norm constant
    double C4;  // T f_beta pointwise constant
    double C5;  // |T f_beta| norm constant
};

/// The three closed-form constants of the test-family calculus.
/// Note: the defining display for C5 involves the kernel exponent a even
/// though the surrounding text labels the constant C5(n,alpha,p,b,c,s,t);
/// a is therefore part of the argument list here.
/// Preconditions (violations reported by name): s > 0; t > -(1+alpha)/p;
/// t > -1-b; s-t > (n+1+alpha)/p; s-t > n+1+b-c; pa+alpha > -1;
/// p(c-a-b-n-1+s-t) > n+1+alpha; c > 0; finite p.
TestFamilyConstants test_family_constants(int n, double alpha, double p,
                                          double a, double b, double c,
                                          double s, double t);

/// Schur-test bound 4 pi^n Gamma(a+(1+alpha)/p) Gamma(1+b-(1+alpha)/p)
/// / Gamma((n+1+a+b)/2)^2 for 1 < p < infinity and -pa < alpha+1 < p(b+1).
double schur_norm_bound(int n, double p, double alpha, double a, double b);

/// c_alpha = Gamma(n+1+alpha) / (4 pi^n Gamma(1+alpha)), alpha > -1.
/// Satisfies c_alpha * C1(n, n+1+alpha, s, alpha) = 1 for every s > 0.
double bergman_const_c_alpha(int n, double alpha);

/// Conjugate exponent q with the extended-p conventions: q = 1 + 1/(p-1),
/// so q = infinity at p = 1 and q = 1 at p = infinity.
double conjugate_exponent(double p);

/// x/p with the p = infinity reading (returns 0 there).
double over_p(double x, double p);

}  // namespace siegel
