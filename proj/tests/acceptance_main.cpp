// SPDX-License-Identifier: Apache-2.0
//
// Acceptance gate: one line per criterion, PASS or FAIL with the measured
// numbers, nonzero exit if anything fails. Each criterion states its own
// tolerance; nothing here is loosened to make a run green.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "choquard/bubbles.hpp"
#include "choquard/capi.h"
#include "choquard/constants.hpp"
#include "choquard/experiments.hpp"
#include "choquard/fit.hpp"
#include "choquard/functionals.hpp"
#include "choquard/io.hpp"
#include "choquard/radial.hpp"
#include "choquard/riesz.hpp"
#include "choquard/spectrum.hpp"

using namespace choquard;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& detail) {
    std::printf("%s criterion-%d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof(buf), f, ap);
    va_end(ap);
    return buf;
}

const std::vector<std::pair<int, double>> kPairs{{3, 1.0}, {3, 2.0}, {4, 2.0}, {5, 2.0}};

GridPtr grid_for(int dim, int n) {
    return std::make_shared<const RadialGrid>(dim, n, 1e-4, 1e4);
}

// ---- criterion 1: equality case ------------------------------------------
void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        double worst_rel = 0.0, worst_dual = 0.0;
        for (const auto& [N, mu] : kPairs) {
            auto g = grid_for(N, 2048);
            for (double lam : {0.5, 1.0, 4.0}) {
                auto W = bubble_profile(g, Bubble(N, mu, lam));
                const DeficitReport rep = deficit(W, mu);
                worst_rel = std::max(worst_rel, std::fabs(rep.deficit) / rep.grad_sq);
                worst_dual = std::max(worst_dual, dual_norm(el_residual(W, mu)));
            }
        }
        const double dt = seconds_since(t0);
        const bool ok = worst_rel < 1e-5 && worst_dual < 1e-4 && dt < 30.0;
        report(1, ok,
               fmt("extremal equality case: max relative deficit %.3g (tol 1e-5), "
                   "max residual dual norm %.3g (tol 1e-4), %.1f s (limit 30 s)",
                   worst_rel, worst_dual, dt));
    } catch (const std::exception& e) {
        report(1, false, fmt("extremal equality case: exception: %s", e.what()));
    }
}

// ---- criterion 2: closed-form potential of the critical power -------------
void criterion_2() {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        double worst = 0.0;
        for (const auto& [N, mu] : kPairs) {
            auto g = grid_for(N, 2048);
            for (double lam : {1.0, 4.0}) {
                worst = std::max(worst, riesz_identity_error(g, Bubble(N, mu, lam)));
            }
        }
        const double dt = seconds_since(t0);
        const bool ok = worst < 1e-4 && dt < 60.0;
        report(2, ok,
               fmt("potential of the critical bubble power vs closed form on "
                   "[1e-2,1e2]: max relative error %.3g (tol 1e-4), %.1f s (limit 60 s)",
                   worst, dt));
    } catch (const std::exception& e) {
        report(2, false, fmt("potential self-check: exception: %s", e.what()));
    }
}

// ---- criterion 3: classical sharp constant vs quadrature ------------------
void criterion_3() {
    try {
        double worst = 0.0;
        for (int N = 3; N <= 6; ++N) {
            auto g = grid_for(N, 2048);
            const double kappa = std::pow(N * (N - 2.0), 0.25 * (N - 2.0));
            std::vector<double> vals(g->n());
            for (int i = 0; i < g->n(); ++i) {
                vals[i] = kappa * std::pow(1.0 + g->r()[i] * g->r()[i], -0.5 * (N - 2.0));
            }
            RadialProfile U(g, vals, Tail{0.0, true}, Tail{2.0 - N, true});
            const double ts = two_star(N);
            const double quad = grad_norm_sq(U) / std::pow(lp_norm(U, ts), 2.0);
            const double closed = best_sobolev_constant(N);
            worst = std::max(worst, std::fabs(quad / closed - 1.0));
        }
        report(3, worst < 1e-6,
               fmt("classical sharp constant, closed form vs quadrature, N=3..6: "
                   "max relative gap %.3g (tol 1e-6)",
                   worst));
    } catch (const std::exception& e) {
        report(3, false, fmt("sharp-constant cross-check: exception: %s", e.what()));
    }
}

// ---- criterion 4: spectrum and kernel residuals ---------------------------
void criterion_4() {
    const auto t0 = std::chrono::steady_clock::now();
    try {
        double worst_nu1 = 0.0, worst_nu2 = 0.0, worst_l1 = 0.0, worst_res = 0.0;
        for (const auto& [N, mu] : kPairs) {
            auto g = grid_for(N, 1024);
            const Bubble b(N, mu, 1.0);
            const double tsm = two_star_mu(N, mu);

            auto sp0 = eigenpairs(assemble(g, b, 0), 2);
            worst_nu1 = std::max(worst_nu1, std::fabs(sp0.eigenvalues.at(0) - 1.0));
            worst_nu2 = std::max(worst_nu2, std::fabs(sp0.eigenvalues.at(1) - tsm));

            auto sp1 = eigenpairs(assemble(g, b, 1), 1);
            worst_l1 = std::max(worst_l1, std::fabs(sp1.eigenvalues.at(0) - tsm));

            worst_res = std::max(worst_res,
                                 nondegeneracy_residual(b, d_lambda_profile(g, b), 0));
            worst_res = std::max(worst_res,
                                 nondegeneracy_residual(b, d_xi_radial_factor(g, b), 1));
        }
        const double dt = seconds_since(t0);
        const bool ok = worst_nu1 < 1e-3 && worst_nu2 < 1e-2 && worst_l1 < 1e-2 &&
                        worst_res < 1e-3 && dt < 120.0;
        report(4, ok,
               fmt("linearized spectrum at n=1024: |nu1-1| %.2g (tol 1e-3), "
                   "|nu2-exponent| %.2g (tol 1e-2), sector-1 gap %.2g (tol 1e-2), "
                   "kernel residuals %.2g (tol 1e-3), %.1f s (limit 120 s)",
                   worst_nu1, worst_nu2, worst_l1, worst_res, dt));
    } catch (const std::exception& e) {
        report(4, false, fmt("linearized spectrum: exception: %s", e.what()));
    }
}

// ---- criterion 5: interaction-integral slopes -----------------------------
void criterion_5() {
    try {
        const std::vector<double> ratios{10.0, 31.622776601683793, 100.0,
                                         316.22776601683796, 1000.0,
                                         3162.2776601683795, 10000.0};
        bool ok = true;
        std::string detail = "interaction-integral slopes:";

        for (const auto& [N, p, q] :
             std::vector<std::tuple<int, double, double>>{{3, 5.0, 1.0}, {4, 3.0, 1.0}}) {
            const SlopeRecord rec = interaction_slopes(N, p, q, ratios);
            const double rel = std::fabs(rec.slope / rec.expected - 1.0);
            ok = ok && rel < 0.05 && !rec.log_case;
            detail += fmt(" (N=%d,p=%g,q=%g) slope %.4f vs %.1f (%.1f%%, tol 5%%);",
                          N, p, q, rec.slope, rec.expected, 100.0 * rel);
        }

        const SlopeRecord eq = interaction_slopes(4, 2.0, 2.0, ratios);
        const double rel_eq = std::fabs(eq.slope / eq.expected - 1.0);
        const bool eq_ok = eq.log_case && eq.expected == 2.0 && rel_eq < 0.15 &&
                           eq.log_coefficient > 0.5 && eq.log_coefficient < 1.5;
        ok = ok && eq_ok;
        detail += fmt(" equal-exponent case slope %.4f -> %g with log weight %.3f "
                      "(expect ~1, positive)",
                      eq.slope, eq.expected, eq.log_coefficient);
        report(5, ok, detail);
    } catch (const std::exception& e) {
        report(5, false, fmt("interaction slopes: exception: %s", e.what()));
    }
}

// ---- criterion 6: fit recovery under a small orthogonal perturbation ------
void criterion_6() {
    try {
        auto g = grid_for(4, 2048);
        const double mu = 2.0;
        auto u = axpy(1.0, bubble_profile(g, Bubble(4, mu, 1.0)), 1.0,
                      bubble_profile(g, Bubble(4, mu, 100.0)));
        auto rho = make_perturbation(g, "bump", Bubble(4, mu, 1.0), true);
        u = axpy(1.0, u, 1e-3, rho);

        const FitResult fit = fit_sum(u, mu, 2);
        const double l1 = fit.config.bubbles.at(0).lambda;
        const double l2 = fit.config.bubbles.at(1).lambda;
        const double a1 = fit.config.coefficient(0);
        const double a2 = fit.config.coefficient(1);
        double worst_orth = 0.0;
        for (const auto& row : fit.orth_residuals) {
            worst_orth = std::max({worst_orth, std::fabs(row[0]), std::fabs(row[1]),
                                   std::fabs(row[2])});
        }
        const bool ok = fit.converged && std::fabs(l1 - 1.0) < 0.01 &&
                        std::fabs(l2 - 100.0) / 100.0 < 0.01 &&
                        std::fabs(a1 - 1.0) < 1e-3 && std::fabs(a2 - 1.0) < 1e-3 &&
                        worst_orth < 1e-6;
        report(6, ok,
               fmt("perturbed two-bubble recovery: scales (%.6f, %.4f) vs (1, 100) "
                   "(tol 1%%), coefficients (%.6f, %.6f) vs (1, 1) (tol 1e-3), "
                   "max tangency residual %.2g (tol 1e-6)",
                   l1, l2, a1, a2, worst_orth));
    } catch (const std::exception& e) {
        report(6, false, fmt("fit recovery: exception: %s", e.what()));
    }
}

// ---- criterion 7: stability sweeps ----------------------------------------
void criterion_7() {
    try {
        const std::vector<double> ratios{1e2, 1e3, 1e4};
        const std::vector<double> eps{1e-3, 1e-2, 1e-1};

        auto multi_c = sweep_multi_stability(3, 1.0, 2, ratios, eps,
                                             grid_for(3, 1024), 0.1, 4);
        auto multi_f = sweep_multi_stability(3, 1.0, 2, ratios, eps,
                                             grid_for(3, 2048), 0.1, 4);
        const bool finite = std::isfinite(multi_c.C_hat) && multi_c.C_hat > 0.0 &&
                            std::isfinite(multi_f.C_hat) && multi_f.C_hat > 0.0;
        const double drift =
            std::max(multi_c.C_hat / multi_f.C_hat, multi_f.C_hat / multi_c.C_hat);

        auto single = sweep_single_stability(4, 2.0, perturbation_ids(), eps,
                                             grid_for(4, 2048), 4);
        bool envelope_ok = std::isfinite(single.K_hat) && std::isfinite(single.L_hat);
        for (const auto& row : single.rows) {
            envelope_ok = envelope_ok &&
                          row.lhs <= single.K_hat * row.deficit + single.L_hat * row.nlprod;
        }

        const bool ok = finite && drift < 2.0 && envelope_ok;
        report(7, ok,
               fmt("stability sweeps: multi-bubble C = %.4g (n=1024) vs %.4g (n=2048), "
                   "drift x%.3f (limit x2); single-bubble envelope K=%.4g L=%.4g "
                   "covers all %zu rows: %s",
                   multi_c.C_hat, multi_f.C_hat, drift, single.K_hat, single.L_hat,
                   single.rows.size(), envelope_ok ? "yes" : "no"));
    } catch (const std::exception& e) {
        report(7, false, fmt("stability sweeps: exception: %s", e.what()));
    }
}

// ---- criterion 8: parallelogram identity on random pairs ------------------
void criterion_8() {
    try {
        auto g = grid_for(4, 512);
        std::mt19937_64 rng(20260825ULL);
        auto unif = [&rng](double lo, double hi) {
            const double x = ((rng() >> 11) + 0.5) * 0x1.0p-53;
            return lo + (hi - lo) * x;
        };
        auto random_profile = [&]() {
            const double c = unif(-2.0, 2.0), w = unif(0.5, 1.5), a = unif(-1.0, 1.0);
            std::vector<double> v(g->n());
            for (int i = 0; i < g->n(); ++i) {
                const double t = g->t()[i];
                v[i] = a * std::exp(-0.5 * std::pow((t - c) / w, 2));
            }
            return RadialProfile(g, v, Tail::none(), Tail::none());
        };
        double worst = 0.0;
        bool ordered = true;
        for (int trial = 0; trial < 1000; ++trial) {
            auto u = random_profile();
            auto v = random_profile();
            const auto [lhs, rhs] = clarkson_check(u, v);
            ordered = ordered && lhs <= rhs + 1e-10;
            worst = std::max(worst, std::fabs(lhs - rhs));
        }
        const bool ok = ordered && worst < 1e-10;
        report(8, ok,
               fmt("parallelogram identity on 1000 seeded random gradient pairs: "
                   "max |lhs-rhs| %.3g (tol 1e-10), ordering holds: %s",
                   worst, ordered ? "yes" : "no"));
    } catch (const std::exception& e) {
        report(8, false, fmt("parallelogram check: exception: %s", e.what()));
    }
}

// ---- criterion 9: byte-identical reports ----------------------------------
void criterion_9() {
    try {
        const char* cfg =
            R"({"N":4,"mu":2.0,"scenario":"single","eps":[0.001,0.01],)"
            R"("perturbations":["bump","slow_decay"],"grid":{"n":512}})";
        std::string json1, json2, csv1, csv2;
        for (int pass = 0; pass < 2; ++pass) {
            char* json = nullptr;
            char* csv = nullptr;
            if (chq_sweep_json(cfg, 2, &json, &csv) != CHQ_OK) {
                throw std::runtime_error(chq_last_error());
            }
            (pass == 0 ? json1 : json2) = json;
            (pass == 0 ? csv1 : csv2) = csv;
            chq_string_free(json);
            chq_string_free(csv);
        }
        char* c1 = nullptr;
        char* c2 = nullptr;
        if (chq_constants_json(3, 1.0, &c1) != CHQ_OK ||
            chq_constants_json(3, 1.0, &c2) != CHQ_OK) {
            throw std::runtime_error(chq_last_error());
        }
        const bool consts_same = std::string(c1) == std::string(c2);
        chq_string_free(c1);
        chq_string_free(c2);

        const bool ok = json1 == json2 && csv1 == csv2 && consts_same &&
                        !json1.empty() && !csv1.empty();
        report(9, ok,
               fmt("repeated runs, identical configs: sweep report %s, sweep CSV %s, "
                   "constants report %s",
                   json1 == json2 ? "byte-identical" : "DIFFERS",
                   csv1 == csv2 ? "byte-identical" : "DIFFERS",
                   consts_same ? "byte-identical" : "DIFFERS"));
    } catch (const std::exception& e) {
        report(9, false, fmt("determinism: exception: %s", e.what()));
    }
}

}  // namespace

int main() {
    std::printf("acceptance gate: nonlocal Sobolev stability library\n");
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures == 0) {
        std::printf("all 9 criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
