// SPDX-License-Identifier: Apache-2.0
//
// End-to-end command-line tests: exit codes, deterministic byte-identical
// output, golden files, and structural validation of the JSON reports
// against the shipped schema files.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "choquard/bubbles.hpp"
#include "choquard/grid.hpp"
#include "choquard/io.hpp"
#include "doctest.h"

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(CLI_BIN_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, got);
    const int status = pclose(pipe);
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return {code, out};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing file: ", path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Light structural validation: every key the schema marks required must be
// present in the emitted object.
void check_schema_required(const std::string& schema_name, const std::string& body) {
    const auto schema =
        nlohmann::json::parse(read_file(std::string(SCHEMA_DIR) + "/" + schema_name));
    const auto doc = nlohmann::json::parse(body);
    REQUIRE(doc.is_object());
    for (const auto& key : schema.at("required")) {
        CAPTURE(schema_name);
        CAPTURE(key.get<std::string>());
        CHECK(doc.contains(key.get<std::string>()));
    }
}

std::string golden_path(const char* name) {
    return std::string(GOLDEN_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("constants: exit code, schema, golden bytes, reruns identical") {
    auto r = run_cli("constants --dim 4 --mu 2");
    CHECK(r.exit_code == 0);
    check_schema_required("constants.schema.json", r.out);
    CHECK(r.out.find("\"S_hl\":6.54785520418") != std::string::npos);
    CHECK(r.out == read_file(golden_path("constants_4_2.json")));

    auto r2 = run_cli("constants --dim 4 --mu 2");
    CHECK(r.out == r2.out);
}

TEST_CASE("invalid arguments exit 1") {
    CHECK(run_cli("constants --dim 2 --mu 1").exit_code == 1);
    CHECK(run_cli("constants --dim 4 --mu 9").exit_code == 1);
    CHECK(run_cli("no-such-command").exit_code == 1);
    CHECK(run_cli("").exit_code == 1);
    CHECK(run_cli("deficit /no/such/profile.csv").exit_code == 1);
    CHECK(run_cli("fit --lambda 1 --dim 4 --mu 2 --kappa 0").exit_code == 1);
}

TEST_CASE("global --seed is accepted everywhere") {
    CHECK(run_cli("constants --dim 4 --mu 2 --seed 7").exit_code == 0);
}

TEST_CASE("deficit and residual on an inline bubble are near zero") {
    auto r = run_cli("deficit --lambda 1 --dim 4 --mu 2 --n 1024");
    CHECK(r.exit_code == 0);
    check_schema_required("deficit.schema.json", r.out);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(std::abs(doc.at("deficit_relative").get<double>()) < 1e-5);

    auto res = run_cli("residual --lambda 1 --dim 4 --mu 2 --n 1024");
    CHECK(res.exit_code == 0);
    check_schema_required("residual.schema.json", res.out);
    CHECK(nlohmann::json::parse(res.out).at("dual_norm").get<double>() < 1e-4);
}

TEST_CASE("fit recovers an inline two-bubble family, golden bytes") {
    auto r = run_cli("fit --lambda 1 --lambda 100 --dim 4 --mu 2 --kappa 2");
    CHECK(r.exit_code == 0);
    check_schema_required("fit.schema.json", r.out);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.at("converged").get<bool>());
    CHECK(doc.at("lambda").size() == 2);
    CHECK(r.out == read_file(golden_path("fit_two_bubble.json")));
}

TEST_CASE("spectrum report has the leading eigenvalue 1") {
    auto r = run_cli("spectrum --dim 4 --mu 2 --l 0 --count 2 --n 512");
    CHECK(r.exit_code == 0);
    check_schema_required("spectrum.schema.json", r.out);
    const auto doc = nlohmann::json::parse(r.out);
    REQUIRE(doc.at("eigenvalues").size() >= 2);
    CHECK(std::abs(doc.at("eigenvalues")[0].get<double>() - 1.0) < 1e-2);
    CHECK(std::abs(doc.at("eigenvalues")[1].get<double>() - 3.0) < 5e-2);
}

TEST_CASE("kernel-test passes and matches golden bytes") {
    auto r = run_cli("kernel-test --dim 4 --mu 2 --n 512");
    CHECK(r.exit_code == 0);
    check_schema_required("kernel-test.schema.json", r.out);
    CHECK(nlohmann::json::parse(r.out).at("pass").get<bool>());
    CHECK(r.out == read_file(golden_path("kernel_test_4_2_n512.json")));
}

TEST_CASE("interaction point and slope regressions") {
    auto r = run_cli("interaction --dim 4 --p 3 --q 1 --lambda-ratio 100");
    CHECK(r.exit_code == 0);
    check_schema_required("interaction.schema.json", r.out);
    CHECK(r.out == read_file(golden_path("interaction_point.json")));

    auto s = run_cli(
        "interaction --dim 3 --p 5 --q 1 --ratio-grid 10 --ratio-grid 100 "
        "--ratio-grid 1000 --ratio-grid 10000");
    CHECK(s.exit_code == 0);
    check_schema_required("slope.schema.json", s.out);
    const auto doc = nlohmann::json::parse(s.out);
    CHECK(std::abs(doc.at("slope").get<double>() - 1.0) < 0.05);

    // Missing both --lambda-ratio and --ratio-grid is a usage error.
    CHECK(run_cli("interaction --dim 4 --p 3 --q 1").exit_code == 1);
}

TEST_CASE("sweep: config file, determinism, csv artifact, envelope holds") {
    const char* cfg_path = "/tmp/chq_cli_sweep_cfg.json";
    {
        std::ofstream cfg(cfg_path, std::ios::trunc);
        cfg << R"({"N":4,"mu":2.0,"scenario":"single","eps":[0.01,0.1],)"
            << R"("perturbations":["bump","slow_decay"],"grid":{"n":512}})";
    }
    const std::string csv_path = "/tmp/chq_cli_sweep_out.csv";
    auto r = run_cli(std::string("sweep ") + cfg_path + " --csv " + csv_path);
    CHECK(r.exit_code == 0);
    check_schema_required("sweep.schema.json", r.out);

    const auto doc = nlohmann::json::parse(r.out);
    const double K = doc.at("K_hat").get<double>();
    const double L = doc.at("L_hat").get<double>();
    const auto row_schema = nlohmann::json::parse(
        read_file(std::string(SCHEMA_DIR) + "/sweep.schema.json"));
    const auto& row_required = row_schema.at("$defs").at("row").at("required");
    for (const auto& row : doc.at("rows")) {
        for (const auto& key : row_required) {
            CHECK(row.contains(key.get<std::string>()));
        }
        const double lhs = row.at("lhs").get<double>();
        const double d = row.at("deficit").get<double>();
        const double n = row.at("nlprod").get<double>();
        CHECK(lhs <= K * d + L * n);
    }

    // Byte-identical rerun, also under --jobs.
    auto r2 = run_cli(std::string("sweep ") + cfg_path + " --jobs 4");
    CHECK(r.out == r2.out);

    // The flat CSV exists and has a header plus one line per row.
    const std::string csv = read_file(csv_path);
    CHECK(csv.find("scenario") != std::string::npos);
    int lines = 0;
    for (char c : csv) lines += (c == '\n');
    CHECK(lines == 1 + static_cast<int>(doc.at("rows").size()));
    std::remove(cfg_path);
    std::remove(csv_path.c_str());
}

TEST_CASE("numerical failures exit 2") {
    // A profile whose outer tail grows has no finite nonlocal integral.
    auto g = std::make_shared<const choquard::RadialGrid>(4, 256, 1e-4, 1e4);
    std::vector<double> vals(g->n(), 1.0);
    choquard::RadialProfile bad(g, vals, choquard::Tail{0.0, true},
                                choquard::Tail{1.0, true});
    const char* path = "/tmp/chq_cli_bad_profile.csv";
    {
        std::ofstream out(path, std::ios::trunc);
        out << choquard::profile_to_csv(bad, 2.0);
    }
    auto r = run_cli(std::string("deficit ") + path);
    CHECK(r.exit_code == 2);
    std::remove(path);
}

TEST_CASE("--output writes the same bytes as stdout plus newline") {
    const char* path = "/tmp/chq_cli_out.json";
    auto direct = run_cli("constants --dim 3 --mu 1");
    auto filed = run_cli(std::string("constants --dim 3 --mu 1 --output ") + path);
    CHECK(filed.exit_code == 0);
    CHECK(filed.out.empty());
    CHECK(read_file(path) == direct.out);
    std::remove(path);
}

TEST_CASE("profile CSV written by the library feeds back through the CLI") {
    auto g = std::make_shared<const choquard::RadialGrid>(4, 1024, 1e-4, 1e4);
    auto W = choquard::bubble_profile(g, choquard::Bubble(4, 2.0, 1.0));
    const char* path = "/tmp/chq_cli_bubble.csv";
    {
        std::ofstream out(path, std::ios::trunc);
        out << choquard::profile_to_csv(W, 2.0);
    }
    auto r = run_cli(std::string("deficit ") + path);
    CHECK(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(std::abs(doc.at("deficit_relative").get<double>()) < 1e-5);
    std::remove(path);
}
