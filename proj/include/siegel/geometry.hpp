#pragma once

#include <Eigen/Core>
#include <complex>
#include <optional>
#include <string>

namespace siegel {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;

/// Hermitian pairing <z,w> = sum_i z_i conj(w_i).
inline Complex hermitian(const CVector& z, const CVector& w) {
    return z.size() ? Complex(w.dot(z)) : Complex(0.0);
}

/// A point of the Siegel upper half-space U = { Im z_n > |z'|^2 } in C^n.
/// zprime holds the first n-1 coordinates; n = 1 means zprime is empty.
class SiegelPoint {
public:
    /// Strict-interior constructor; throws ConstraintError unless rho(z) > 0.
    SiegelPoint(CVector zprime, Complex zn);

    /// Closure-tolerant factory (rho >= -1e-12), for boundary evaluation and
    /// for sampler-constructed points whose rho is carried separately.
    static SiegelPoint closure(CVector zprime, Complex zn);

    /// The base point beta * i = (0', i beta).
    static SiegelPoint base(int n, double beta = 1.0);

    /// No membership check. For samplers whose construction guarantees an
    /// interior point even when the coordinates round onto the boundary.
    static SiegelPoint unchecked(CVector zprime, Complex zn);

    const CVector& zprime() const { return zprime_; }
    Complex zn() const { return zn_; }
    int n() const { return static_cast<int>(zprime_.size()) + 1; }

private:
    SiegelPoint() = default;
    CVector zprime_;
    Complex zn_;
};

/// A point of the unit ball B = { |xi| < 1 } in C^n.
class BallPoint {
public:
    /// Strict-interior constructor; throws ConstraintError unless |xi| < 1.
    explicit BallPoint(CVector xi);

    /// Closure-tolerant factory (|xi|^2 <= 1 + 1e-12), for sphere points.
    static BallPoint closure(CVector xi);

    static BallPoint origin(int n);

    const CVector& xi() const { return xi_; }
    Complex xn() const { return xi_(xi_.size() - 1); }
    int n() const { return static_cast<int>(xi_.size()); }

private:
    BallPoint() = default;
    CVector xi_;
};

/// rho(z) = Im z_n - |z'|^2.
double rho(const SiegelPoint& z);

/// rho(z,w) = (i/2)(conj(w_n) - z_n) - <z',w'>. Satisfies
/// rho(w,z) = conj(rho(z,w)) and Re rho(z,w) >= (rho(z)+rho(w))/2 > 0.
Complex rho_pair(const SiegelPoint& z, const SiegelPoint& w);

/// Cayley transform B -> U: xi -> (xi'/(1+xi_n), i(1-xi_n)/(1+xi_n)).
SiegelPoint cayley(const BallPoint& xi);

/// Inverse Cayley: xi_n = (i-z_n)/(i+z_n), xi' = 2i z'/(i+z_n).
BallPoint cayley_inv(const SiegelPoint& z);

/// Real Jacobian of the Cayley transform: 4/|1+xi_n|^{2(n+1)}.
double cayley_jacobian(const BallPoint& xi);

/// Mobius transformation of the ball swapping 0 and eta:
/// phi_eta(xi) = (eta - P xi - sqrt(1-|eta|^2) Q xi) / (1 - <xi,eta>), where
/// P projects onto span{eta} and Q = I - P. Involutive.
class MobiusMap {
public:
    explicit MobiusMap(BallPoint eta);

    BallPoint operator()(const BallPoint& xi) const;

    CVector project(const CVector& v) const;     // P_eta v
    CVector complement(const CVector& v) const;  // Q_eta v
    const BallPoint& center() const { return eta_; }

private:
    BallPoint eta_;
    double eta_sq_;    // |eta|^2
    double s_eta_;     // sqrt(1 - |eta|^2)
};

/// Heisenberg group element [zeta, t] in C^{n-1} x R, acting on U by
/// z -> (z' + zeta, z_n + t + 2i<z',zeta> + i|zeta|^2).
struct HeisenbergElement {
    CVector zeta;
    double t = 0.0;

    static HeisenbergElement identity(int n);
    /// Group law [zeta,t].[eta,s] = [zeta+eta, t+s+2 Im<zeta,eta>].
    HeisenbergElement compose(const HeisenbergElement& other) const;
    HeisenbergElement inverse() const;
};

/// The affine action of h on U; preserves rho(z,w).
SiegelPoint heisenberg_act(const HeisenbergElement& h, const SiegelPoint& z);

/// Anisotropic dilation z -> (lambda z', lambda^2 z_n), lambda > 0; satisfies
/// rho(dz, dw) = lambda^2 rho(z,w) and has volume Jacobian lambda^{2n+2}.
SiegelPoint dilate(double lambda, const SiegelPoint& z);

/// Bergman distance tanh^{-1} sqrt(1 - rho(z)rho(w)/|rho(z,w)|^2); the
/// square-root argument is clamped to [0, 1-1e-16] against round-off.
double bergman_distance(const SiegelPoint& z, const SiegelPoint& w);

// --- text encoding shared with the CLI: "a+bi", coordinates ";"-separated ---

/// Parse "a+bi" / "a-bi" (no spaces). Returns nullopt on malformed input.
std::optional<Complex> parse_complex(const std::string& text);

/// Parse "c1;c2;...;cn" into a coordinate vector.
std::optional<CVector> parse_coords(const std::string& text);

/// Shortest round-trippable decimal form ("%.17g").
std::string format_double(double v);
std::string format_complex(Complex v);
std::string format_point(const CVector& zprime, Complex zn);

}  // namespace siegel
