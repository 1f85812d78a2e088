#include "siegel/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "siegel/specfun.hpp"

namespace siegel {

namespace {
constexpr double kClosureMargin = 1e-12;
const Complex kI(0.0, 1.0);
}  // namespace

SiegelPoint::SiegelPoint(CVector zprime, Complex zn) {
    zprime_ = std::move(zprime);
    zn_ = zn;
    if (!(zn_.imag() - zprime_.squaredNorm() > 0.0))
        throw ConstraintError("SiegelPoint: Im z_n - |z'|^2 must be positive",
                              {"Im z_n > |z'|^2"});
}

SiegelPoint SiegelPoint::closure(CVector zprime, Complex zn) {
    if (!(zn.imag() - zprime.squaredNorm() >= -kClosureMargin))
        throw ConstraintError("SiegelPoint::closure: point is outside the closure of U",
                              {"Im z_n >= |z'|^2 - 1e-12"});
    SiegelPoint p;
    p.zprime_ = std::move(zprime);
    p.zn_ = zn;
    return p;
}

SiegelPoint SiegelPoint::base(int n, double beta) {
    return SiegelPoint(CVector::Zero(n - 1), Complex(0.0, beta));
}

SiegelPoint SiegelPoint::unchecked(CVector zprime, Complex zn) {
    SiegelPoint z;
    z.zprime_ = std::move(zprime);
    z.zn_ = zn;
    return z;
}

BallPoint::BallPoint(CVector xi) {
    xi_ = std::move(xi);
    if (!(xi_.squaredNorm() < 1.0))
        throw ConstraintError("BallPoint: |xi| must be < 1", {"|xi| < 1"});
}

BallPoint BallPoint::closure(CVector xi) {
    if (!(xi.squaredNorm() <= 1.0 + kClosureMargin))
        throw ConstraintError("BallPoint::closure: point is outside the closed ball",
                              {"|xi|^2 <= 1 + 1e-12"});
    BallPoint p;
    p.xi_ = std::move(xi);
    return p;
}

BallPoint BallPoint::origin(int n) { return BallPoint(CVector::Zero(n)); }

double rho(const SiegelPoint& z) { return z.zn().imag() - z.zprime().squaredNorm(); }

Complex rho_pair(const SiegelPoint& z, const SiegelPoint& w) {
    if (z.n() != w.n())
        throw ConstraintError("rho_pair: dimension mismatch", {"dim(z) == dim(w)"});
    return 0.5 * kI * (std::conj(w.zn()) - z.zn()) - hermitian(z.zprime(), w.zprime());
}

SiegelPoint cayley(const BallPoint& xi) {
    Complex d = 1.0 + xi.xn();
    CVector zp = xi.xi().head(xi.n() - 1) / d;
    Complex zn = kI * (1.0 - xi.xn()) / d;
    return SiegelPoint::closure(std::move(zp), zn);
}

BallPoint cayley_inv(const SiegelPoint& z) {
    Complex d = kI + z.zn();
    CVector xi(z.n());
    xi.head(z.n() - 1) = 2.0 * kI * z.zprime() / d;
    xi(z.n() - 1) = (kI - z.zn()) / d;
    return BallPoint::closure(std::move(xi));
}

double cayley_jacobian(const BallPoint& xi) {
    return 4.0 / std::pow(std::norm(1.0 + xi.xn()), xi.n() + 1);
}

MobiusMap::MobiusMap(BallPoint eta) : eta_(std::move(eta)) {
    eta_sq_ = eta_.xi().squaredNorm();
    s_eta_ = std::sqrt(1.0 - eta_sq_);
}

CVector MobiusMap::project(const CVector& v) const {
    if (eta_sq_ == 0.0) return CVector::Zero(v.size());
    return (hermitian(v, eta_.xi()) / eta_sq_) * eta_.xi();
}

CVector MobiusMap::complement(const CVector& v) const { return v - project(v); }

BallPoint MobiusMap::operator()(const BallPoint& xi) const {
    if (xi.n() != eta_.n())
        throw ConstraintError("MobiusMap: dimension mismatch", {"dim(xi) == dim(eta)"});
    CVector p = project(xi.xi());
    CVector q = xi.xi() - p;
    Complex denom = 1.0 - hermitian(xi.xi(), eta_.xi());
    return BallPoint::closure((eta_.xi() - p - s_eta_ * q) / denom);
}

HeisenbergElement HeisenbergElement::identity(int n) {
    return {CVector::Zero(n - 1), 0.0};
}

HeisenbergElement HeisenbergElement::compose(const HeisenbergElement& other) const {
    return {zeta + other.zeta,
            t + other.t + 2.0 * hermitian(zeta, other.zeta).imag()};
}

HeisenbergElement HeisenbergElement::inverse() const { return {-zeta, -t}; }

SiegelPoint heisenberg_act(const HeisenbergElement& h, const SiegelPoint& z) {
    if (static_cast<int>(h.zeta.size()) != z.n() - 1)
        throw ConstraintError("heisenberg_act: dimension mismatch", {"dim(h) == dim(z)"});
    Complex zn = z.zn() + h.t + 2.0 * kI * hermitian(z.zprime(), h.zeta) +
                 kI * h.zeta.squaredNorm();
    return SiegelPoint::closure(z.zprime() + h.zeta, zn);
}

SiegelPoint dilate(double lambda, const SiegelPoint& z) {
    return SiegelPoint::closure(lambda * z.zprime(), lambda * lambda * z.zn());
}

double bergman_distance(const SiegelPoint& z, const SiegelPoint& w) {
    double arg = 1.0 - rho(z) * rho(w) / std::norm(rho_pair(z, w));
    arg = std::min(std::max(arg, 0.0), 1.0 - 1e-16);
    return std::atanh(std::sqrt(arg));
}

std::optional<Complex> parse_complex(const std::string& text) {
    const char* s = text.c_str();
    char* end = nullptr;
    double re = std::strtod(s, &end);
    if (end == s) return std::nullopt;
    if (*end == '\0') return std::nullopt;  // grammar requires the "bi" part
    const char* imag_start = end;
    if (*imag_start != '+' && *imag_start != '-') return std::nullopt;
    double im = std::strtod(imag_start, &end);
    if (end == imag_start || *end != 'i' || *(end + 1) != '\0') return std::nullopt;
    return Complex(re, im);
}

std::optional<CVector> parse_coords(const std::string& text) {
    std::vector<Complex> coords;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t sep = text.find(';', pos);
        std::string piece = text.substr(pos, sep == std::string::npos ? sep : sep - pos);
        auto c = parse_complex(piece);
        if (!c) return std::nullopt;
        coords.push_back(*c);
        if (sep == std::string::npos) break;
        pos = sep + 1;
    }
    if (coords.empty()) return std::nullopt;
    CVector v(coords.size());
    for (size_t i = 0; i < coords.size(); ++i) v(i) = coords[i];
    return v;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_complex(Complex v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", v.real(), v.imag());
    return buf;
}

std::string format_point(const CVector& zprime, Complex zn) {
    std::string out;
    for (Eigen::Index i = 0; i < zprime.size(); ++i) {
        out += format_complex(zprime(i));
        out += ';';
    }
    out += format_complex(zn);
    return out;
}

}  // namespace siegel
