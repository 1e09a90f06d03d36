// SPDX-License-Identifier: Apache-2.0
//
// choquard-cli: command-line front end over the C API of the choquard
// library. Prints JSON reports (12 significant digits) to stdout or
// --output; exit status 0 = success, 1 = invalid input, 2 = numerical
// failure (including fit non-convergence).
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "choquard/capi.h"

namespace {

int report_failure(int rc) {
    std::fprintf(stderr, "error: %s\n", chq_last_error());
    return rc;
}

int emit(const std::string& text, const std::string& output) {
    if (output.empty()) {
        std::fputs(text.c_str(), stdout);
        std::fputc('\n', stdout);
        return 0;
    }
    std::ofstream out(output, std::ios::binary | std::ios::trunc);
    if (!out) {
        std::fprintf(stderr, "error: cannot write file: %s\n", output.c_str());
        return 1;
    }
    out << text << '\n';
    return out.good() ? 0 : 1;
}

std::string g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string family_json(int dim, double mu, const std::vector<double>& lambdas,
                        const std::vector<double>& alphas) {
    std::string s = "{\"N\":" + std::to_string(dim) + ",\"mu\":" + g17(mu) +
                    ",\"bubbles\":[";
    for (size_t i = 0; i < lambdas.size(); ++i) {
        if (i) s += ',';
        s += "{\"lambda\":" + g17(lambdas[i]) + ",\"xi\":[]}";
    }
    s += "]";
    if (!alphas.empty()) {
        s += ",\"alpha\":[";
        for (size_t i = 0; i < alphas.size(); ++i) {
            if (i) s += ',';
            s += g17(alphas[i]);
        }
        s += "]";
    }
    s += "}";
    return s;
}

// Owns a chq_profile from either a CSV file or inline bubble flags.
struct ProfileSource {
    std::string file;
    std::vector<double> lambdas;
    std::vector<double> alphas;
    int dim = 0;
    double mu = 0.0;
    int n = 2048;
    double r_min = 1e-4;
    double r_max = 1e4;

    int acquire(chq_profile** out) const {
        if (!file.empty()) return chq_profile_read(file.c_str(), out);
        if (lambdas.empty()) {
            std::fprintf(stderr,
                         "error: provide a profile file or --lambda values\n");
            return CHQ_EINVAL;
        }
        const std::string fam = family_json(dim, mu, lambdas, alphas);
        return chq_family_profile(fam.c_str(), n, r_min, r_max, out);
    }
};

void add_grid_flags(CLI::App* cmd, int& n, double& rmin, double& rmax) {
    cmd->add_option("--n", n, "grid nodes")->check(CLI::PositiveNumber);
    cmd->add_option("--rmin", rmin, "smallest radius")->check(CLI::PositiveNumber);
    cmd->add_option("--rmax", rmax, "largest radius")->check(CLI::PositiveNumber);
}

void add_profile_flags(CLI::App* cmd, ProfileSource& src, bool file_arg = true) {
    if (file_arg)
        cmd->add_option("profile", src.file, "radial profile CSV file");
    cmd->add_option("--lambda", src.lambdas,
                    "inline bubble scales (instead of a profile file)");
    cmd->add_option("--alpha", src.alphas, "inline bubble coefficients");
    cmd->add_option("--dim", src.dim, "dimension N (inline bubbles)");
    cmd->add_option("--mu", src.mu, "kernel exponent mu (inline bubbles)");
    add_grid_flags(cmd, src.n, src.r_min, src.r_max);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Nonlocal Sobolev inequality laboratory: sharp constants, bubble "
        "profiles, deficits, manifold fits, linearized spectra, and "
        "stability sweeps on log-radial grids."};
    app.require_subcommand(1);
    unsigned long long seed = 0;
    app.add_option("--seed", seed,
                   "seed for any randomized scenario (current commands are "
                   "deterministic; accepted for config capture)");

    // constants
    auto* c_cmd = app.add_subcommand("constants", "sharp constants at (N, mu)");
    int c_dim = 4;
    double c_mu = 2.0;
    std::string c_out;
    c_cmd->add_option("--dim", c_dim, "dimension N")->required();
    c_cmd->add_option("--mu", c_mu, "kernel exponent mu")->required();
    c_cmd->add_option("--output", c_out, "write JSON here instead of stdout");

    // deficit
    auto* d_cmd = app.add_subcommand("deficit", "Sobolev deficit of a profile");
    ProfileSource d_src;
    std::string d_out;
    add_profile_flags(d_cmd, d_src);
    d_cmd->add_option("--output", d_out, "write JSON here instead of stdout");

    // residual
    auto* r_cmd = app.add_subcommand(
        "residual", "Euler-Lagrange residual dual norm of a profile");
    ProfileSource r_src;
    std::string r_out;
    add_profile_flags(r_cmd, r_src);
    r_cmd->add_option("--output", r_out, "write JSON here instead of stdout");

    // fit
    auto* f_cmd = app.add_subcommand(
        "fit", "distance to the kappa-bubble manifold (Gauss-Newton)");
    ProfileSource f_src;
    std::string f_out;
    int f_kappa = 1;
    add_profile_flags(f_cmd, f_src);
    f_cmd->add_option("--kappa", f_kappa, "number of bubbles")
        ->check(CLI::PositiveNumber);
    f_cmd->add_option("--output", f_out, "write JSON here instead of stdout");

    // spectrum
    auto* s_cmd = app.add_subcommand(
        "spectrum", "linearized eigenvalues at the unit bubble, sector l");
    int s_dim = 4, s_l = 0, s_count = 3, s_n = 1024;
    double s_mu = 2.0, s_rmin = 1e-4, s_rmax = 1e4;
    std::string s_out, s_vectors;
    s_cmd->add_option("--dim", s_dim, "dimension N")->required();
    s_cmd->add_option("--mu", s_mu, "kernel exponent mu")->required();
    s_cmd->add_option("--l", s_l, "angular sector (0 or 1)");
    s_cmd->add_option("--count", s_count, "number of eigenvalues (<= 10)");
    add_grid_flags(s_cmd, s_n, s_rmin, s_rmax);
    s_cmd->add_option("--vectors", s_vectors,
                      "dump eigenvectors to <prefix><k>.csv");
    s_cmd->add_option("--output", s_out, "write JSON here instead of stdout");

    // sweep
    auto* w_cmd = app.add_subcommand("sweep", "stability sweep from a config");
    std::string w_config, w_out, w_csv, w_format = "json";
    int w_jobs = 1;
    w_cmd->add_option("config", w_config, "sweep config JSON file")->required();
    w_cmd->add_option("--jobs", w_jobs, "concurrent rows")
        ->check(CLI::PositiveNumber);
    w_cmd->add_option("--format", w_format, "json|csv (stdout format)")
        ->check(CLI::IsMember({"json", "csv"}));
    w_cmd->add_option("--csv", w_csv, "also write the flat CSV here");
    w_cmd->add_option("--output", w_out, "write the report here instead of stdout");

    // interaction
    auto* i_cmd = app.add_subcommand(
        "interaction", "two-bubble integral int W1^p W2^q vs interaction Q");
    int i_dim = 4;
    double i_p = 3.0, i_q = 1.0, i_ratio = 0.0;
    std::vector<double> i_grid;
    std::string i_out;
    i_cmd->add_option("--dim", i_dim, "dimension N")->required();
    i_cmd->add_option("--p", i_p, "first exponent")->required();
    i_cmd->add_option("--q", i_q, "second exponent")->required();
    i_cmd->add_option("--lambda-ratio", i_ratio,
                      "single concentric scale ratio (>= 1)");
    i_cmd->add_option("--ratio-grid", i_grid,
                      "ratio grid for slope regression (>= 3 decades)");
    i_cmd->add_option("--output", i_out, "write JSON here instead of stdout");

    // kernel-test
    auto* k_cmd = app.add_subcommand(
        "kernel-test", "Riesz quadrature self-check against the closed form");
    int k_dim = 4, k_n = 2048;
    double k_mu = 2.0;
    std::string k_out;
    k_cmd->add_option("--dim", k_dim, "dimension N")->required();
    k_cmd->add_option("--mu", k_mu, "kernel exponent mu")->required();
    k_cmd->add_option("--n", k_n, "grid nodes")->check(CLI::PositiveNumber);
    k_cmd->add_option("--output", k_out, "write JSON here instead of stdout");

    // Let global options (--seed) appear after the subcommand name too.
    for (CLI::App* sc : {c_cmd, d_cmd, r_cmd, f_cmd, s_cmd, w_cmd, i_cmd, k_cmd}) {
        sc->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    char* json = nullptr;
    int rc = CHQ_OK;

    if (c_cmd->parsed()) {
        rc = chq_constants_json(c_dim, c_mu, &json);
        if (rc != CHQ_OK) return report_failure(rc);
        const int erc = emit(json, c_out);
        chq_string_free(json);
        return erc;
    }

    if (d_cmd->parsed() || r_cmd->parsed()) {
        const ProfileSource& src = d_cmd->parsed() ? d_src : r_src;
        const std::string& outpath = d_cmd->parsed() ? d_out : r_out;
        chq_profile* p = nullptr;
        rc = src.acquire(&p);
        if (rc != CHQ_OK) return report_failure(rc);
        rc = d_cmd->parsed() ? chq_deficit_json(p, &json)
                             : chq_residual_json(p, &json);
        chq_profile_free(p);
        if (rc != CHQ_OK) return report_failure(rc);
        const int erc = emit(json, outpath);
        chq_string_free(json);
        return erc;
    }

    if (f_cmd->parsed()) {
        chq_profile* p = nullptr;
        rc = f_src.acquire(&p);
        if (rc != CHQ_OK) return report_failure(rc);
        int converged = 1;
        rc = chq_fit_json(p, f_kappa, &json, &converged);
        chq_profile_free(p);
        if (rc != CHQ_OK) return report_failure(rc);
        const int erc = emit(json, f_out);
        chq_string_free(json);
        if (erc != 0) return erc;
        if (!converged) {
            std::fprintf(stderr, "error: fit did not converge\n");
            return 2;
        }
        return 0;
    }

    if (s_cmd->parsed()) {
        rc = chq_spectrum_json(s_dim, s_mu, s_l, s_count, s_n, s_rmin, s_rmax,
                               s_vectors.empty() ? nullptr : s_vectors.c_str(),
                               &json);
        if (rc != CHQ_OK) return report_failure(rc);
        const int erc = emit(json, s_out);
        chq_string_free(json);
        return erc;
    }

    if (w_cmd->parsed()) {
        std::ifstream in(w_config, std::ios::binary);
        if (!in) {
            std::fprintf(stderr, "error: cannot open file: %s\n",
                         w_config.c_str());
            return 1;
        }
        std::string cfg((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
        char* csv = nullptr;
        rc = chq_sweep_json(cfg.c_str(), w_jobs, &json, &csv);
        if (rc != CHQ_OK) return report_failure(rc);
        int erc = emit(w_format == "csv" ? csv : json, w_out);
        if (erc == 0 && !w_csv.empty()) {
            std::ofstream co(w_csv, std::ios::binary | std::ios::trunc);
            if (!co) {
                std::fprintf(stderr, "error: cannot write file: %s\n",
                             w_csv.c_str());
                erc = 1;
            } else {
                co << csv;
            }
        }
        chq_string_free(json);
        chq_string_free(csv);
        return erc;
    }

    if (i_cmd->parsed()) {
        if (!i_grid.empty()) {
            rc = chq_interaction_slopes_json(i_dim, i_p, i_q, i_grid.data(),
                                             static_cast<int>(i_grid.size()),
                                             &json);
        } else if (i_ratio > 0.0) {
            rc = chq_interaction_point_json(i_dim, i_p, i_q, i_ratio, &json);
        } else {
            std::fprintf(stderr,
                         "error: provide --lambda-ratio or --ratio-grid\n");
            return 1;
        }
        if (rc != CHQ_OK) return report_failure(rc);
        const int erc = emit(json, i_out);
        chq_string_free(json);
        return erc;
    }

    if (k_cmd->parsed()) {
        rc = chq_kernel_test_json(k_dim, k_mu, k_n, &json);
        if (rc != CHQ_OK) return report_failure(rc);
        const int erc = emit(json, k_out);
        chq_string_free(json);
        return erc;
    }

    std::fprintf(stderr, "%s\n", app.help().c_str());
    return 1;
}
