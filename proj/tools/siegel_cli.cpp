#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"

#include "siegel/report.hpp"

namespace {

using namespace siegel;

int write_out(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream f(path, std::ios::binary);
    f << text;
    if (!f.good()) {
        std::cerr << "cannot write output file: " << path << '\n';
        return 2;
    }
    return 0;
}

int bad_usage(const std::string& msg) {
    std::cerr << msg << '\n';
    return 2;
}

std::optional<SiegelPoint> parse_point(const std::string& text, const char* flag,
                                       std::string& err) {
    const auto coords = parse_coords(text);
    if (!coords || coords->size() < 1) {
        err = std::string("malformed point for ") + flag + ": \"" + text + '"';
        return std::nullopt;
    }
    const auto n = coords->size();
    return SiegelPoint(coords->head(n - 1), (*coords)(n - 1));
}

struct VerifyOpts {
    std::string identity;
    int n = 1;
    double r = 0, s = 0, t = 0, p = 0, alpha = 0, a = 0, b = 0, c = 0, beta = 0;
    double tolerance = 0;
    int points = 0, order = 0, levels = 0;
    std::string z, u, eta, zeta;
    long long samples = 1000000;
    uint64_t seed = 0;
    long long batch = 65536;
    std::string format = "text", output;
    bool timings = false;
};

struct BoundedOpts {
    int n = 1;
    double p = 2, alpha = 0, a = 0, b = 0, c = 0;
    std::string format = "text", output;
};

struct ScanOpts {
    std::string n = "1", p = "2", alpha = "0", a = "0", b = "0", c;
    bool derive_c = false, with_ratios = false;
    long long samples = 1000000;
    uint64_t seed = 0;
    long long batch = 65536;
    std::string format = "text", output;
};

struct NormOpts {
    int n = 1;
    double p = 2, alpha = 0, a = 0, b = 0, s = 2, t = 0, beta = 1;
    double c = 0;
    bool c_set = false;
    std::string format = "text", output;
};

struct DistanceOpts {
    std::string z, w;
    std::string format = "text", output;
};

int check_format(const std::string& fmt, bool csv_ok) {
    if (fmt == "text" || fmt == "json") return 0;
    if (fmt == "csv") {
        if (csv_ok) return 0;
        return bad_usage("--format csv is only available for scan");
    }
    return bad_usage("unknown --format \"" + fmt + "\" (text, json" +
                     (csv_ok ? ", csv)" : ")"));
}

// Flags that only some identities consume; setting one for the wrong
// identity is a usage error rather than a silent ignore.
const std::map<std::string, std::set<std::string>> kApplicable = {
    {"key-lemma", {"r", "s", "t", "z", "u"}},
    {"lemma33-finite", {"s", "t", "z"}},
    {"lemma33-divergent", {"s", "t", "z", "levels"}},
    {"ball-lemma31", {"r", "s", "t", "eta", "zeta"}},
    {"ball-lemma32", {"r", "s", "t", "eta", "zeta"}},
    {"cayley-identity", {"points"}},
    {"cayley-jacobian", {"points"}},
    {"mobius-identities", {"points"}},
    {"heisenberg-invariance", {"points"}},
    {"reproducing-formula", {"alpha", "s", "z", "u"}},
    {"schur-certificate", {"p", "alpha", "a", "b", "c", "z", "u"}},
    {"scaling-law", {"p", "alpha", "a", "b", "c", "s", "t", "beta"}},
    {"delta-domination", {"points"}},
    {"derivative-check", {"s", "order", "z", "u"}},
};

int run_verify(const VerifyOpts& vo, const std::map<std::string, CLI::Option*>& opts) {
    if (int rc = check_format(vo.format, false)) return rc;
    const auto kind = parse_identity_kind(vo.identity);
    if (!kind) return bad_usage("unknown identity \"" + vo.identity + '"');
    const auto& allowed = kApplicable.at(vo.identity);
    for (const auto& [name, opt] : opts)
        if (name != "tolerance" && opt->count() > 0 && allowed.find(name) == allowed.end())
            return bad_usage("--" + name + " does not apply to identity " + vo.identity);

    VerifyParams vp;
    vp.n = vo.n;
    const auto set_if = [&](const char* name, std::optional<double>& dst, double v) {
        if (opts.at(name)->count() > 0) dst = v;
    };
    set_if("r", vp.r, vo.r);
    set_if("s", vp.s, vo.s);
    set_if("t", vp.t, vo.t);
    set_if("p", vp.p, vo.p);
    set_if("alpha", vp.alpha, vo.alpha);
    set_if("a", vp.a, vo.a);
    set_if("b", vp.b, vo.b);
    set_if("c", vp.c, vo.c);
    set_if("beta", vp.beta, vo.beta);
    if (opts.at("points")->count() > 0) vp.points = vo.points;
    if (opts.at("order")->count() > 0) vp.order = vo.order;
    if (opts.at("levels")->count() > 0) vp.levels = vo.levels;

    std::string err;
    if (opts.at("z")->count() > 0) {
        vp.z = parse_point(vo.z, "--z", err);
        if (!vp.z) return bad_usage(err);
    }
    if (opts.at("u")->count() > 0) {
        vp.u = parse_point(vo.u, "--u", err);
        if (!vp.u) return bad_usage(err);
    }
    if (opts.at("eta")->count() > 0) {
        const auto coords = parse_coords(vo.eta);
        if (!coords) return bad_usage("malformed point for --eta: \"" + vo.eta + '"');
        vp.eta = BallPoint(*coords);
    }
    if (opts.at("zeta")->count() > 0) {
        const auto coords = parse_coords(vo.zeta);
        if (!coords) return bad_usage("malformed point for --zeta: \"" + vo.zeta + '"');
        vp.zeta = *coords;
    }
    std::optional<double> tol;
    if (opts.at("tolerance")->count() > 0) tol = vo.tolerance;

    const MCConfig cfg{vo.samples, vo.seed, vo.batch};
    const auto t0 = std::chrono::steady_clock::now();
    CheckReport rep = run_check(*kind, vp, cfg, tol);
    if (vo.timings)
        rep.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
    rep.params.emplace_back("batch", std::to_string(vo.batch));

    const std::string out =
        vo.format == "json" ? emit_check_json(rep) : emit_check_text(rep);
    if (int rc = write_out(out, vo.output)) return rc;
    if (identity_is_mc(*kind) && rep.std_error > std::abs(rep.estimate)) return 3;
    return rep.pass ? 0 : 1;
}

int run_bounded(const BoundedOpts& bo) {
    if (int rc = check_format(bo.format, false)) return rc;
    const SpaceParams sp{bo.p, bo.alpha};
    const KernelParams k{bo.a, bo.b, bo.c};
    const Verdict v = boundedness_verdict(bo.n, sp, k);
    const double slope = bo.n + 1.0 + bo.a + bo.b - bo.c;
    const ParamList params{{"n", std::to_string(bo.n)},    {"p", format_double(bo.p)},
                           {"alpha", format_double(bo.alpha)}, {"a", format_double(bo.a)},
                           {"b", format_double(bo.b)},     {"c", format_double(bo.c)}};
    const std::string out = bo.format == "json" ? emit_verdict_json(v, params, slope)
                                                : emit_verdict_text(v, params, slope);
    return write_out(out, bo.output);
}

int run_scan(const ScanOpts& so, bool c_given) {
    if (int rc = check_format(so.format, true)) return rc;
    if (so.derive_c && c_given)
        return bad_usage("--c conflicts with --derive-c");
    if (!so.derive_c && !c_given) return bad_usage("--c is required unless --derive-c");

    GridSpec grid;
    grid.derive_c = so.derive_c;
    const auto fill = [](const std::string& text, const char* flag,
                         std::vector<double>& dst) -> int {
        const auto vals = parse_range(text);
        if (!vals) return bad_usage(std::string("malformed range for ") + flag + ": \"" +
                                    text + '"');
        dst = *vals;
        return 0;
    };
    if (int rc = fill(so.n, "--n", grid.n)) return rc;
    if (int rc = fill(so.p, "--p", grid.p)) return rc;
    if (int rc = fill(so.alpha, "--alpha", grid.alpha)) return rc;
    if (int rc = fill(so.a, "--a", grid.a)) return rc;
    if (int rc = fill(so.b, "--b", grid.b)) return rc;
    if (!so.derive_c) {
        if (int rc = fill(so.c, "--c", grid.c)) return rc;
    }

    const MCConfig cfg{so.samples, so.seed, so.batch};
    const auto rows = scan_grid(grid, so.with_ratios, cfg);

    const ParamList params{{"n", so.n},
                           {"p", so.p},
                           {"alpha", so.alpha},
                           {"a", so.a},
                           {"b", so.b},
                           {"c", so.derive_c ? "derived" : so.c},
                           {"derive_c", so.derive_c ? "true" : "false"},
                           {"with_ratios", so.with_ratios ? "true" : "false"},
                           {"samples", std::to_string(so.samples)},
                           {"seed", std::to_string(so.seed)},
                           {"batch", std::to_string(so.batch)}};
    std::string out;
    if (so.format == "csv")
        out = emit_scan_csv(rows, so.with_ratios);
    else if (so.format == "json")
        out = emit_scan_json(rows, so.with_ratios, params);
    else
        out = emit_scan_text(rows, so.with_ratios);
    if (int rc = write_out(out, so.output)) return rc;
    for (const auto& row : rows)
        for (const auto& pt : row.ratios)
            if (!pt.converged) return 3;
    return 0;
}

int run_norm(const NormOpts& no) {
    if (int rc = check_format(no.format, false)) return rc;
    const double c = no.c_set ? no.c : no.n + 1.0 + no.a + no.b;
    const SpaceParams sp{no.p, no.alpha};
    const KernelParams k{no.a, no.b, c};
    const TestFamilyParams tf{no.s, no.t, no.beta};
    const TestFamilyNorms nm = test_family_norms(no.n, sp, k, tf);
    const double norm_f = std::pow(nm.norm_f_p, 1.0 / no.p);
    const double norm_tf = std::pow(nm.norm_Tf_p, 1.0 / no.p);
    Record rec;
    rec.kind = "norm";
    rec.params = {{"n", std::to_string(no.n)}, {"p", format_double(no.p)},
                  {"alpha", format_double(no.alpha)}, {"a", format_double(no.a)},
                  {"b", format_double(no.b)},     {"c", format_double(c)},
                  {"s", format_double(no.s)},     {"t", format_double(no.t)},
                  {"beta", format_double(no.beta)}};
    rec.values = {{"norm_f_p", nm.norm_f_p},
                  {"norm_Tf_p", nm.norm_Tf_p},
                  {"norm_f", norm_f},
                  {"norm_Tf", norm_tf},
                  {"ratio", norm_tf / norm_f},
                  {"slope", scaling_exponent(no.n, sp, k, tf)}};
    const std::string out =
        no.format == "json" ? emit_record_json(rec) : emit_record_text(rec);
    return write_out(out, no.output);
}

int run_distance(const DistanceOpts& dopts) {
    if (int rc = check_format(dopts.format, false)) return rc;
    std::string err;
    const auto z = parse_point(dopts.z, "--z", err);
    if (!z) return bad_usage(err);
    const auto w = parse_point(dopts.w, "--w", err);
    if (!w) return bad_usage(err);
    if (z->n() != w->n()) return bad_usage("--z and --w must have equal dimension");

    const double delta = bergman_distance(*z, *w);
    const double log_bound =
        std::log(4.0 * std::norm(rho_pair(*z, *w)) / (rho(*z) * rho(*w)));
    Record rec;
    rec.kind = "distance";
    rec.params = {{"z", format_point(z->zprime(), z->zn())},
                  {"w", format_point(w->zprime(), w->zn())}};
    rec.values = {{"delta", delta},
                  {"rho_z", rho(*z)},
                  {"rho_w", rho(*w)},
                  {"abs_rho_pair", std::abs(rho_pair(*z, *w))},
                  {"log_bound", log_bound},
                  {"dominated", delta <= log_bound ? 1.0 : 0.0}};
    const std::string out =
        dopts.format == "json" ? emit_record_json(rec) : emit_record_text(rec);
    return write_out(out, dopts.output);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Integral operators on the Siegel upper half-space: identity checks, "
                 "boundedness verdicts, grid scans, test-family norms, and the "
                 "invariant distance."};
    app.name("siegel");
    app.require_subcommand(1);

    VerifyOpts vo;
    std::map<std::string, CLI::Option*> vopts;
    auto* sv = app.add_subcommand("verify", "Run one named identity check");
    sv->add_option("--identity", vo.identity,
                   "Identity kind: key-lemma, lemma33-finite, lemma33-divergent, "
                   "ball-lemma31, ball-lemma32, cayley-identity, cayley-jacobian, "
                   "mobius-identities, heisenberg-invariance, reproducing-formula, "
                   "schur-certificate, scaling-law, delta-domination, derivative-check")
        ->required();
    sv->add_option("--n", vo.n, "Complex dimension")->capture_default_str();
    vopts["r"] = sv->add_option("--r", vo.r, "Exponent r");
    vopts["s"] = sv->add_option("--s", vo.s, "Exponent s");
    vopts["t"] = sv->add_option("--t", vo.t, "Weight exponent t");
    vopts["p"] = sv->add_option("--p", vo.p, "Lebesgue exponent p");
    vopts["alpha"] = sv->add_option("--alpha", vo.alpha, "Measure weight alpha");
    vopts["a"] = sv->add_option("--a", vo.a, "Kernel exponent a");
    vopts["b"] = sv->add_option("--b", vo.b, "Kernel exponent b");
    vopts["c"] = sv->add_option("--c", vo.c, "Kernel exponent c");
    vopts["beta"] = sv->add_option("--beta", vo.beta, "Test-family scale beta");
    vopts["points"] = sv->add_option("--points", vo.points, "Sweep point count");
    vopts["order"] = sv->add_option("--order", vo.order, "Derivative order N");
    vopts["levels"] = sv->add_option("--levels", vo.levels, "Truncation levels");
    vopts["z"] = sv->add_option("--z", vo.z, "Point z, e.g. \"0.5+0i;0+1.5i\"");
    vopts["u"] = sv->add_option("--u", vo.u, "Point u");
    vopts["eta"] = sv->add_option("--eta", vo.eta, "Ball point eta");
    vopts["zeta"] = sv->add_option("--zeta", vo.zeta, "Ball/sphere point zeta");
    vopts["tolerance"] =
        sv->add_option("--tolerance", vo.tolerance, "Override the per-kind tolerance");
    sv->add_option("--samples", vo.samples, "MC sample count")->capture_default_str();
    sv->add_option("--seed", vo.seed, "RNG seed")->capture_default_str();
    sv->add_option("--batch", vo.batch, "MC batch size")->capture_default_str();
    sv->add_option("--format", vo.format, "Output format: text, json")
        ->capture_default_str();
    sv->add_option("--output", vo.output, "Write the report to a file");
    sv->add_flag("--timings", vo.timings, "Fill wall_ms in the report");

    BoundedOpts bo;
    auto* sb = app.add_subcommand("bounded", "Boundedness verdict for T_{a,b,c}");
    sb->add_option("--n", bo.n, "Complex dimension")->capture_default_str();
    sb->add_option("--p", bo.p, "Lebesgue exponent p (inf allowed)")
        ->capture_default_str();
    sb->add_option("--alpha", bo.alpha, "Measure weight alpha")->capture_default_str();
    sb->add_option("--a", bo.a, "Kernel exponent a")->capture_default_str();
    sb->add_option("--b", bo.b, "Kernel exponent b")->capture_default_str();
    sb->add_option("--c", bo.c, "Kernel exponent c")->required();
    sb->add_option("--format", bo.format, "Output format: text, json")
        ->capture_default_str();
    sb->add_option("--output", bo.output, "Write the report to a file");

    ScanOpts so;
    auto* ss = app.add_subcommand("scan", "Verdict table over a parameter grid");
    ss->add_option("--n", so.n, "n values (x, x,y,..., or start:stop:step)")
        ->capture_default_str();
    ss->add_option("--p", so.p, "p values")->capture_default_str();
    ss->add_option("--alpha", so.alpha, "alpha values")->capture_default_str();
    ss->add_option("--a", so.a, "a values")->capture_default_str();
    ss->add_option("--b", so.b, "b values")->capture_default_str();
    auto* scan_c = ss->add_option("--c", so.c, "c values");
    ss->add_flag("--derive-c", so.derive_c, "Set c = n+1+a+b per cell");
    ss->add_flag("--with-ratios", so.with_ratios,
                 "Empirical norm-ratio estimates for bounded cells");
    ss->add_option("--samples", so.samples, "MC sample count")->capture_default_str();
    ss->add_option("--seed", so.seed, "RNG seed")->capture_default_str();
    ss->add_option("--batch", so.batch, "MC batch size")->capture_default_str();
    ss->add_option("--format", so.format, "Output format: text, json, csv")
        ->capture_default_str();
    ss->add_option("--output", so.output, "Write the report to a file");

    NormOpts no;
    auto* sn = app.add_subcommand("norm", "Closed-form test-family norms");
    sn->add_option("--n", no.n, "Complex dimension")->capture_default_str();
    sn->add_option("--p", no.p, "Lebesgue exponent p")->capture_default_str();
    sn->add_option("--alpha", no.alpha, "Measure weight alpha")->capture_default_str();
    sn->add_option("--a", no.a, "Kernel exponent a")->capture_default_str();
    sn->add_option("--b", no.b, "Kernel exponent b")->capture_default_str();
    auto* norm_c = sn->add_option("--c", no.c, "Kernel exponent c (default n+1+a+b)");
    sn->add_option("--s", no.s, "Test-family exponent s")->capture_default_str();
    sn->add_option("--t", no.t, "Test-family exponent t")->capture_default_str();
    sn->add_option("--beta", no.beta, "Test-family scale beta")->capture_default_str();
    sn->add_option("--format", no.format, "Output format: text, json")
        ->capture_default_str();
    sn->add_option("--output", no.output, "Write the report to a file");

    DistanceOpts dopts;
    auto* sd = app.add_subcommand("distance", "Bergman distance and its kernel bound");
    sd->add_option("--z", dopts.z, "Point z")->required();
    sd->add_option("--w", dopts.w, "Point w")->required();
    sd->add_option("--format", dopts.format, "Output format: text, json")
        ->capture_default_str();
    sd->add_option("--output", dopts.output, "Write the report to a file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (app.got_subcommand(sv)) return run_verify(vo, vopts);
        if (app.got_subcommand(sb)) return run_bounded(bo);
        if (app.got_subcommand(ss)) return run_scan(so, scan_c->count() > 0);
        if (app.got_subcommand(sn)) {
            no.c_set = norm_c->count() > 0;
            return run_norm(no);
        }
        if (app.got_subcommand(sd)) return run_distance(dopts);
    } catch (const ConstraintError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    return 2;
}
