// SPDX-License-Identifier: Apache-2.0
#include "choquard/capi.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <memory>
#include <string>
#include <vector>

#include "choquard/bubbles.hpp"
#include "choquard/errors.hpp"
#include "choquard/experiments.hpp"
#include "choquard/fit.hpp"
#include "choquard/functionals.hpp"
#include "choquard/grid.hpp"
#include "choquard/io.hpp"
#include "choquard/radial.hpp"
#include "choquard/riesz.hpp"
#include "choquard/spectrum.hpp"

struct chq_profile {
    choquard::RadialProfile profile;
    double mu;
};

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* what) {
    g_last_error = what;
    return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return CHQ_OK;
    } catch (const choquard::ValidationError& e) {
        return fail(CHQ_EINVAL, e.what());
    } catch (const choquard::NumericsError& e) {
        return fail(CHQ_ENUMERIC, e.what());
    } catch (const std::exception& e) {
        return fail(CHQ_ENUMERIC, e.what());
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

int require(bool ok, const char* what) {
    return ok ? CHQ_OK : fail(CHQ_EINVAL, what);
}

choquard::GridPtr make_grid(int dim, int n, double r_min, double r_max) {
    return std::make_shared<const choquard::RadialGrid>(dim, n, r_min, r_max);
}

}  // namespace

extern "C" {

const char* chq_last_error(void) { return g_last_error.c_str(); }

int chq_profile_read(const char* path, chq_profile** out) {
    if (int rc = require(path && out, "chq_profile_read: null argument")) return rc;
    return guarded([&] {
        auto [p, mu] = choquard::profile_from_csv(choquard::read_text_file(path));
        *out = new chq_profile{std::move(p), mu};
    });
}

int chq_profile_from_csv(const char* text, chq_profile** out) {
    if (int rc = require(text && out, "chq_profile_from_csv: null argument")) return rc;
    return guarded([&] {
        auto [p, mu] = choquard::profile_from_csv(text);
        *out = new chq_profile{std::move(p), mu};
    });
}

int chq_profile_write(const chq_profile* p, const char* path) {
    if (int rc = require(p && path, "chq_profile_write: null argument")) return rc;
    return guarded([&] {
        choquard::write_text_file(path, choquard::profile_to_csv(p->profile, p->mu));
    });
}

int chq_profile_free(chq_profile* p) {
    delete p;
    return CHQ_OK;
}

int chq_profile_dim(const chq_profile* p, int* out) {
    if (int rc = require(p && out, "chq_profile_dim: null argument")) return rc;
    *out = p->profile.grid().dim();
    return CHQ_OK;
}

int chq_profile_mu(const chq_profile* p, double* out) {
    if (int rc = require(p && out, "chq_profile_mu: null argument")) return rc;
    *out = p->mu;
    return CHQ_OK;
}

int chq_profile_size(const chq_profile* p, int* out) {
    if (int rc = require(p && out, "chq_profile_size: null argument")) return rc;
    *out = p->profile.grid().n();
    return CHQ_OK;
}

int chq_family_profile(const char* family_json, int n, double r_min,
                       double r_max, chq_profile** out) {
    if (int rc = require(family_json && out, "chq_family_profile: null argument"))
        return rc;
    return guarded([&] {
        const choquard::BubbleFamily fam = choquard::family_from_json(family_json);
        const auto grid = make_grid(fam.bubbles.front().dim, n, r_min, r_max);
        *out = new chq_profile{choquard::family_profile(grid, fam),
                               fam.bubbles.front().mu};
    });
}

int chq_constants_json(int dim, double mu, char** out_json) {
    if (int rc = require(out_json, "chq_constants_json: null output")) return rc;
    return guarded([&] {
        *out_json = dup_string(choquard::constants_report_json(dim, mu));
    });
}

int chq_deficit_json(const chq_profile* p, char** out_json) {
    if (int rc = require(p && out_json, "chq_deficit_json: null argument")) return rc;
    return guarded([&] {
        *out_json = dup_string(choquard::deficit_report_json(
            choquard::deficit(p->profile, p->mu)));
    });
}

int chq_residual_json(const chq_profile* p, char** out_json) {
    if (int rc = require(p && out_json, "chq_residual_json: null argument")) return rc;
    return guarded([&] {
        const double dual =
            choquard::dual_norm(choquard::el_residual(p->profile, p->mu));
        const double gn = std::sqrt(choquard::grad_norm_sq(p->profile));
        *out_json = dup_string(choquard::residual_report_json(
            p->profile.grid().dim(), p->mu, dual, gn));
    });
}

int chq_fit_json(const chq_profile* p, int kappa, char** out_json,
                 int* out_converged) {
    if (int rc = require(p && out_json, "chq_fit_json: null argument")) return rc;
    return guarded([&] {
        const choquard::FitResult fit =
            choquard::fit_sum(p->profile, p->mu, kappa);
        *out_json = dup_string(choquard::fit_report_json(fit));
        if (out_converged) *out_converged = fit.converged ? 1 : 0;
    });
}

int chq_spectrum_json(int dim, double mu, int l, int count, int n,
                      double r_min, double r_max, const char* dump_prefix,
                      char** out_json) {
    if (int rc = require(out_json, "chq_spectrum_json: null output")) return rc;
    return guarded([&] {
        const auto grid = make_grid(dim, n, r_min, r_max);
        const choquard::Bubble b{dim, mu, 1.0, {}};
        const choquard::SectorOperator op = choquard::assemble(grid, b, l);
        const choquard::SpectrumResult sp = choquard::eigenpairs(op, count);
        if (dump_prefix) {
            for (std::size_t k = 0; k < sp.eigenvectors.size(); ++k) {
                choquard::write_text_file(
                    dump_prefix + std::to_string(k + 1) + ".csv",
                    choquard::profile_to_csv(sp.eigenvectors[k], mu));
            }
        }
        *out_json = dup_string(choquard::spectrum_report_json(dim, mu, sp));
    });
}

int chq_sweep_json(const char* config_json, int jobs, char** out_json,
                   char** out_csv) {
    if (int rc = require(config_json && out_json, "chq_sweep_json: null argument"))
        return rc;
    return guarded([&] {
        const choquard::SweepConfig cfg = choquard::parse_sweep_config(config_json);
        const auto grid = make_grid(cfg.dim, cfg.n, cfg.r_min, cfg.r_max);
        choquard::SweepResult res;
        if (cfg.scenario == "multi") {
            res = choquard::sweep_multi_stability(cfg.dim, cfg.mu, cfg.kappa,
                                                  cfg.ratios, cfg.eps, grid,
                                                  cfg.delta, jobs);
        } else {
            res = choquard::sweep_single_stability(cfg.dim, cfg.mu,
                                                   cfg.perturbations, cfg.eps,
                                                   grid, jobs);
        }
        *out_json = dup_string(choquard::sweep_report_json(res));
        if (out_csv) *out_csv = dup_string(choquard::sweep_report_csv(res));
    });
}

int chq_interaction_point_json(int dim, double p, double q,
                               double lambda_ratio, char** out_json) {
    if (int rc = require(out_json, "chq_interaction_point_json: null output"))
        return rc;
    return guarded([&] {
        if (!(lambda_ratio >= 1.0))
            throw choquard::ValidationError(
                "interaction: lambda ratio must be >= 1");
        const choquard::Bubble b1{dim, 1.0, 1.0, {}};
        const choquard::Bubble b2{dim, 1.0, lambda_ratio, {}};
        const double I = choquard::two_center_integral(p, q, b1, b2);
        const double Q = choquard::interaction_Q(b1, b2);
        std::string s = "{\"N\":" + std::to_string(dim) +
                        ",\"p\":" + choquard::fmt_g12(p) +
                        ",\"q\":" + choquard::fmt_g12(q) +
                        ",\"lambda_ratio\":" + choquard::fmt_g12(lambda_ratio) +
                        ",\"Q\":" + choquard::fmt_g12(Q) +
                        ",\"integral\":" + choquard::fmt_g12(I) + "}";
        *out_json = dup_string(s);
    });
}

int chq_interaction_slopes_json(int dim, double p, double q,
                                const double* ratios, int n_ratios,
                                char** out_json) {
    if (int rc = require(ratios && out_json && n_ratios > 0,
                         "chq_interaction_slopes_json: null argument"))
        return rc;
    return guarded([&] {
        const std::vector<double> grid_ratios(ratios, ratios + n_ratios);
        *out_json = dup_string(choquard::slope_report_json(
            choquard::interaction_slopes(dim, p, q, grid_ratios)));
    });
}

int chq_kernel_test_json(int dim, double mu, int n, char** out_json) {
    if (int rc = require(out_json, "chq_kernel_test_json: null output")) return rc;
    return guarded([&] {
        const auto grid = make_grid(dim, n, 1e-4, 1e4);
        const choquard::Bubble b{dim, mu, 1.0, {}};
        const double err = choquard::riesz_identity_error(grid, b);
        *out_json = dup_string(
            choquard::kernel_test_report_json(dim, mu, n, err, 1e-4));
    });
}

void chq_string_free(char* s) { delete[] s; }

}  // extern "C"
