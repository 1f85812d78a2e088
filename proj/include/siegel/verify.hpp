#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "siegel/operators.hpp"

namespace siegel {

enum class IdentityKind {
    KeyLemma,
    Lemma33Finite,
    Lemma33Divergent,
    BallLemma31,
    BallLemma32,
    CayleyIdentity,
    CayleyJacobian,
    MobiusIdentities,
    HeisenbergInvariance,
    ReproducingFormula,
    SchurCertificate,
    ScalingLaw,
    DeltaDomination,
    DerivativeCheck,
};

/// Stable kebab-case name (CLI flag value and JSON "kind" field).
const char* identity_kind_name(IdentityKind k);
std::optional<IdentityKind> parse_identity_kind(const std::string& name);

/// True for kinds whose estimate carries MC noise; their pass rule is
/// rel_error <= max(tolerance, 3 stderr/|reference|). Exact kinds use
/// rel_error <= tolerance.
bool identity_is_mc(IdentityKind k);

/// Default tolerance per kind: 1e-2 for MC kinds, 1e-12 for exact identity
/// sweeps, 1e-6 for the finite-difference kinds, 1e-10 for the scaling law.
double identity_default_tolerance(IdentityKind k);

using ParamList = std::vector<std::pair<std::string, std::string>>;

struct CheckReport {
    IdentityKind kind = IdentityKind::KeyLemma;
    ParamList params;  // fully resolved, in a fixed per-kind order
    Complex estimate{0.0, 0.0};
    double std_error = 0.0;
    Complex reference{0.0, 0.0};
    double rel_error = 0.0;
    bool pass = false;
    long long samples = 0;
    uint64_t seed = 0;
    long long wall_ms = 0;  // filled by callers that opt into timing
};

/// Optional knobs for run_check; absent fields take per-kind defaults.
/// For pointwise sweeps the estimate is the worst per-point deviation and the
/// reference is 0. For Lemma33Divergent the reference is fixed at 1
/// (divergence expected), the estimate is 1 or 0 as flagged, and the
/// rel_error is 0 (pass) or infinity (fail).
struct VerifyParams {
    int n = 1;
    std::optional<double> r, s, t;
    std::optional<double> p, alpha, a, b, c;
    std::optional<double> beta;
    std::optional<int> points;  // pointwise-sweep count
    std::optional<int> order;   // derivative order N
    std::optional<int> levels;  // divergence truncation levels
    std::optional<SiegelPoint> z, u;
    std::optional<BallPoint> eta;
    std::optional<CVector> zeta;  // sphere point (BallLemma31) or ball point (BallLemma32)
};

CheckReport run_check(IdentityKind kind, const VerifyParams& params,
                      const MCConfig& cfg,
                      std::optional<double> tolerance = std::nullopt);

struct GridSpec {
    std::vector<double> n, p, alpha, a, b;
    std::vector<double> c;  // ignored when derive_c
    bool derive_c = false;  // c := n+1+a+b per cell
};

struct RayleighPoint {
    double beta = 0.0;
    double ratio = 0.0;
    double rel_std_error = 0.0;
    bool converged = false;
};

struct RayleighResult {
    double max_ratio = 0.0;
    std::vector<RayleighPoint> per_beta;
    double s = 0.0, t = 0.0;  // internally chosen test-family exponents
    double bound = 0.0;
};

struct ScanRow {
    double n = 0, p = 0, alpha = 0, a = 0, b = 0, c = 0;
    bool ok = false;  // cell evaluated; otherwise `errors` names the violations
    Verdict verdict;
    double slope = 0.0;
    std::vector<std::string> errors;
    std::vector<RayleighPoint> ratios;  // beta in {0.1, 1, 10} when requested
};

/// One row per cell, iterated n, p, alpha, a, b, c (c innermost). Cell errors
/// are recorded in-row and never abort the scan. When with_ratios is set,
/// bounded cells with 1 < p < inf also carry empirical_rayleigh ratios.
std::vector<ScanRow> scan_grid(const GridSpec& grid, bool with_ratios,
                               const MCConfig& cfg);

/// MC estimates of ||S f_beta|| / ||f_beta|| across betas, against the Schur
/// bound. The test-family exponents (s, t) are chosen internally from the
/// admissible region; the outer integral runs cfg.samples/8192 (>= 64) points
/// with 8192-sample inner integrals. Requires 1 < p < inf and a bounded
/// verdict.
RayleighResult empirical_rayleigh(int n, const SpaceParams& sp,
                                  const KernelParams& k,
                                  const std::vector<double>& betas,
                                  const MCConfig& cfg);

/// "start:stop:step" (inclusive), comma list, or single value; "inf" allowed.
/// nullopt on malformed input or more than 10000 values.
std::optional<std::vector<double>> parse_range(const std::string& text);

/// Random interior point with |Re|, |Im| <= 2 in every coordinate and
/// rho(z) >= 0.1.
SiegelPoint random_box_point(int n, RngStream& rng);

/// Uniform point of the ball |xi| <= rmax.
BallPoint random_ball_point(int n, RngStream& rng, double rmax = 0.9);

/// Uniform point of the unit sphere in C^n.
CVector random_sphere_point(int n, RngStream& rng);

/// Random Heisenberg translation with |Re|, |Im| <= 2 entries.
HeisenbergElement random_heisenberg(int n, RngStream& rng);

}  // namespace siegel
