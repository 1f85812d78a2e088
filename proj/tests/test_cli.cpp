#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "siegel/report.hpp"
#include "siegel/verify.hpp"

using namespace siegel;

namespace {

struct CliResult {
    int code = -1;
    std::string out;
};

std::string cli_path() {
    const char* p = std::getenv("SIEGEL_CLI_PATH");
    REQUIRE_MESSAGE(p != nullptr, "SIEGEL_CLI_PATH must point at the binary");
    return p;
}

std::string golden_dir() {
    const char* p = std::getenv("SIEGEL_GOLDEN_DIR");
    REQUIRE_MESSAGE(p != nullptr, "SIEGEL_GOLDEN_DIR must point at tests/golden");
    return p;
}

CliResult run_cli(const std::string& args, bool merge_stderr = false) {
    const std::string cmd =
        cli_path() + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult res;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        res.out.append(buf.data(), got);
    const int status = pclose(pipe);
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int count_lines(const std::string& text) {
    int n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("help output matches the golden files") {
    CHECK(run_cli("--help").out == slurp(golden_dir() + "/help_app.txt"));
    for (const std::string sc : {"verify", "bounded", "scan", "norm", "distance"}) {
        CAPTURE(sc);
        const auto res = run_cli(sc + " --help");
        CHECK(res.code == 0);
        CHECK(res.out == slurp(golden_dir() + "/help_" + sc + ".txt"));
    }
}

TEST_CASE("verify passes the canonical identity and reports in JSON") {
    const auto res = run_cli(
        "verify --identity key-lemma --n 1 --r 3 --s 3 --t 0 "
        "--z \"0+1i\" --u \"0+1i\" --samples 200000 --seed 42 --format json");
    CHECK(res.code == 0);
    const auto j = nlohmann::json::parse(res.out);
    CHECK(j["kind"] == "key-lemma");
    CHECK(j["pass"] == true);
    CHECK(j["seed"] == 42);
    CHECK(j["samples"] == 200000);
    const double est = j["estimate"]["re"].get<double>();
    CHECK(std::abs(est - 6.0 * 3.14159265358979323846) < 0.05);
    CHECK(j["params"]["batch"] == "65536");
}

TEST_CASE("verify text format prints one status line plus diagnostics") {
    const auto res = run_cli("verify --identity cayley-identity --points 500");
    CHECK(res.code == 0);
    CHECK(res.out.rfind("PASS cayley-identity", 0) == 0);
    CHECK(res.out.find("rel_error") != std::string::npos);
    CHECK(res.out.find("params:") != std::string::npos);
}

TEST_CASE("exit code 1 on a failed check") {
    const auto res = run_cli("verify --identity derivative-check --tolerance 1e-12");
    CHECK(res.code == 1);
    CHECK(res.out.rfind("FAIL derivative-check", 0) == 0);
}

TEST_CASE("exit code 2 on usage and parameter errors") {
    CHECK(run_cli("verify --identity no-such-thing").code == 2);
    CHECK(run_cli("verify --identity key-lemma --bogus 1").code == 2);
    CHECK(run_cli("verify --identity key-lemma --z \"abc\"").code == 2);
    CHECK(run_cli("verify --identity key-lemma --points 7").code == 2);
    CHECK(run_cli("verify --identity key-lemma --format csv").code == 2);
    CHECK(run_cli("verify --identity lemma33-finite --s 2").code == 2);
    CHECK(run_cli("scan --n 1 --p 2 --alpha 0 --a 0 --b 0 --c 2 --derive-c").code ==
          2);
    CHECK(run_cli("scan --n 1 --p 2 --alpha 0 --a 0 --b 0").code == 2);
    CHECK(run_cli("bounded --n 1 --p 0.5 --a 0 --b 0 --c 2").code == 2);
    CHECK(run_cli("distance --z \"0+1i\" --w \"0+0i;0+1i\"").code == 2);
    CHECK(run_cli("nonsense").code == 2);

    // the offending flag is named on stderr
    const auto msg = run_cli("verify --identity key-lemma --points 7", true);
    CHECK(msg.out.find("--points") != std::string::npos);
}

TEST_CASE("exit code 3 when the estimate is statistical noise") {
    const auto res = run_cli(
        "verify --identity key-lemma --z \"0+1i\" --u \"0+40000i\" "
        "--samples 64 --seed 1 --format json");
    CHECK(res.code == 3);
    // the report is still emitted
    const auto j = nlohmann::json::parse(res.out);
    CHECK(j["kind"] == "key-lemma");
}

TEST_CASE("bounded spec examples") {
    const auto ok = run_cli(
        "bounded --n 3 --p 2 --alpha 0 --a 0 --b 0 --c 4 --format json");
    CHECK(ok.code == 0);
    auto j = nlohmann::json::parse(ok.out);
    CHECK(j["kind"] == "verdict");
    CHECK(j["bounded"] == true);
    CHECK(j["failed"].empty());
    CHECK(j["schur_bound"].get<double>() > 0.0);

    const auto sup =
        run_cli("bounded --n 1 --p inf --a 0 --b 0 --c 2 --format json");
    CHECK(sup.code == 0);
    j = nlohmann::json::parse(sup.out);
    CHECK(j["bounded"] == false);
    REQUIRE(j["failed"].size() == 1);
    CHECK(j["failed"][0] == "LowerWeightCondition");
    CHECK(j["schur_bound"].is_null());
}

TEST_CASE("scan emits csv with one header and one row per cell") {
    const auto res = run_cli(
        "scan --n 1 --p 1.5,2,4 --alpha 0 --a 0,0.5,1 --b 0 --derive-c "
        "--format csv");
    CHECK(res.code == 0);
    CHECK(count_lines(res.out) == 10);
    std::istringstream lines(res.out);
    std::string header;
    std::getline(lines, header);
    CHECK(header == "n,p,alpha,a,b,c,verdict,failed,slope,bound");
    std::string row;
    std::getline(lines, row);
    CHECK(row.rfind("1,1.5,0,0,0,2,bounded,,0,", 0) == 0);
}

TEST_CASE("scan json carries verdict rows") {
    const auto res = run_cli(
        "scan --n 1 --p 2 --alpha 0 --a 0 --b 0 --c 1:3:1 --format json");
    CHECK(res.code == 0);
    const auto j = nlohmann::json::parse(res.out);
    CHECK(j["kind"] == "scan");
    REQUIRE(j["rows"].size() == 3);
    CHECK(j["rows"][0]["verdict"] == "unbounded");
    CHECK(j["rows"][1]["verdict"] == "bounded");
    CHECK(j["rows"][1]["slope"] == 0.0);
    CHECK(j["rows"][0]["bound"].is_null());
}

TEST_CASE("norm and distance emit closed-form records") {
    const auto nr = run_cli(
        "norm --n 1 --p 2 --alpha 0 --a 0 --b 0 --s 2 --t 0 --beta 1 "
        "--format json");
    CHECK(nr.code == 0);
    auto j = nlohmann::json::parse(nr.out);
    CHECK(j["kind"] == "norm");
    CHECK(j["norm_f_p"].get<double>() ==
          doctest::Approx(4.0 * 3.14159265358979323846));
    CHECK(j["params"]["c"] == "2");  // defaulted to n+1+a+b

    const auto dr = run_cli("distance --z \"0+1i\" --w \"0+2i\" --format json");
    CHECK(dr.code == 0);
    j = nlohmann::json::parse(dr.out);
    CHECK(j["kind"] == "distance");
    CHECK(j["delta"].get<double>() == doctest::Approx(0.5 * std::log(2.0)));
    CHECK(j["dominated"] == 1.0);
}

TEST_CASE("json reports are byte-identical across repeats and thread counts") {
    const std::string args =
        "verify --identity schur-certificate --samples 100000 --seed 9 "
        "--format json";
    const auto first = run_cli(args);
    const auto second = run_cli(args);
    CHECK(first.code == 0);
    CHECK(first.out == second.out);

    setenv("SIEGEL_THREADS", "1", 1);
    const auto one = run_cli(args);
    setenv("SIEGEL_THREADS", "3", 1);
    const auto three = run_cli(args);
    unsetenv("SIEGEL_THREADS");
    CHECK(one.out == three.out);
    CHECK(first.out == one.out);
}

TEST_CASE("check reports round-trip losslessly through json") {
    const auto res = run_cli(
        "verify --identity reproducing-formula --samples 50000 --seed 4 "
        "--format json");
    CHECK(res.code == 0);
    const auto j = nlohmann::ordered_json::parse(res.out);

    CheckReport rep;
    rep.kind = *parse_identity_kind(j["kind"].get<std::string>());
    for (const auto& [key, val] : j["params"].items())
        rep.params.emplace_back(key, val.get<std::string>());
    rep.estimate = Complex(j["estimate"]["re"].get<double>(),
                           j["estimate"]["im"].get<double>());
    rep.std_error = j["stderr"].get<double>();
    rep.reference = Complex(j["reference"]["re"].get<double>(),
                            j["reference"]["im"].get<double>());
    rep.rel_error = j["rel_error"].get<double>();
    rep.pass = j["pass"].get<bool>();
    rep.samples = j["samples"].get<long long>();
    rep.seed = j["seed"].get<uint64_t>();
    rep.wall_ms = j["wall_ms"].get<long long>();

    CHECK(emit_check_json(rep) == res.out);
}

TEST_CASE("--output writes the report to a file") {
    const std::string path = "/tmp/siegel_cli_out.json";
    std::remove(path.c_str());
    const auto res = run_cli("bounded --n 1 --p 2 --alpha 0 --a 0 --b 0 --c 2 "
                             "--format json --output " +
                             path);
    CHECK(res.code == 0);
    CHECK(res.out.empty());
    const auto j = nlohmann::json::parse(slurp(path));
    CHECK(j["bounded"] == true);
    std::remove(path.c_str());
}
