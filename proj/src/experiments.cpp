// SPDX-License-Identifier: Apache-2.0
#include "choquard/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <thread>
#include <utility>

#include "choquard/constants.hpp"
#include "choquard/errors.hpp"
#include "choquard/fit.hpp"
#include "choquard/functionals.hpp"
#include "choquard/radial.hpp"
#include "choquard/riesz.hpp"

namespace choquard {

namespace {

RadialProfile log_bump(const GridPtr& g, double center, double width) {
    std::vector<double> v(static_cast<std::size_t>(g->n()));
    for (int i = 0; i < g->n(); ++i) {
        const double z = (g->t()[static_cast<std::size_t>(i)] - center) / width;
        v[static_cast<std::size_t>(i)] = std::exp(-z * z);
    }
    return RadialProfile(g, std::move(v), Tail::none(), Tail::none());
}

RadialProfile slow_decay(const GridPtr& g) {
    // (1 + r^2)^{p/2} with p between the bubble decay 2-N and the
    // gradient-integrability ceiling (2-N)/2.
    const double p = 2.0 - g->dim() + 0.4;
    std::vector<double> v(static_cast<std::size_t>(g->n()));
    for (int i = 0; i < g->n(); ++i) {
        const double r = g->r()[static_cast<std::size_t>(i)];
        v[static_cast<std::size_t>(i)] = std::pow(1.0 + r * r, 0.5 * p);
    }
    return RadialProfile(g, std::move(v), Tail{0.0, true}, Tail{p, true});
}

RadialProfile raw_perturbation(const GridPtr& g, const std::string& id) {
    if (id == "bump") return log_bump(g, 0.0, 0.8);
    if (id == "bump_wide") return log_bump(g, 0.0, 2.0);
    if (id == "bump_core") return log_bump(g, -2.0, 0.8);
    if (id == "slow_decay") return slow_decay(g);
    throw ValidationError("unknown perturbation id: " + id);
}

// Runs fn(0..nrows-1), possibly concurrently; outputs are index-addressed
// so the assembled result is schedule-independent.
void run_rows(int nrows, int jobs, const std::function<void(int)>& fn) {
    if (jobs <= 1 || nrows <= 1) {
        for (int i = 0; i < nrows; ++i) fn(i);
        return;
    }
    const int nt = std::min(jobs, nrows);
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nt));
    for (int t = 0; t < nt; ++t) {
        pool.emplace_back([&]() {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= nrows) return;
                fn(i);
            }
        });
    }
    for (auto& th : pool) th.join();
}

double pair_interaction_integral(const GridPtr& g, const Bubble& bi,
                                 const Bubble& bj) {
    // iint (I_mu * W_i^{2*_mu}) W_i^{2*_mu - 1} W_j, concentric closed-form
    // Riesz factor.
    const double tsm = two_star_mu(bi.dim, bi.mu);
    const RadialProfile P = exact_riesz_of_bubble(g, bi);
    const RadialProfile Wi = bubble_power_profile(g, bi, tsm - 1.0);
    const RadialProfile Wj = bubble_profile(g, bj);
    std::vector<double> v(static_cast<std::size_t>(g->n()));
    for (int k = 0; k < g->n(); ++k) {
        const std::size_t u = static_cast<std::size_t>(k);
        v[u] = P.values()[u] * Wi.values()[u] * Wj.values()[u];
    }
    const Tail tin = tail_mul(tail_mul(P.inner(), Wi.inner()), Wj.inner());
    const Tail tout = tail_mul(tail_mul(P.outer(), Wi.outer()), Wj.outer());
    return sphere_area(g->dim()) * weighted_integral(*g, v, tin, tout);
}

double regression_slope(const std::vector<double>& x,
                        const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw ValidationError("regression needs spread in x");
    return sxy / sxx;
}

}  // namespace

std::vector<std::string> perturbation_ids() {
    return {"bump", "bump_wide", "bump_core", "slow_decay"};
}

RadialProfile make_perturbation(const GridPtr& grid, const std::string& id,
                                const Bubble& ref, bool tangent_orthogonal) {
    RadialProfile rho = raw_perturbation(grid, id);
    if (tangent_orthogonal) {
        const RadialProfile W = bubble_profile(grid, ref);
        const RadialProfile D = d_lambda_profile(grid, ref);
        // Project out span{W, D} in the gradient inner product (2x2 Gram).
        const double g11 = dot_grad(W, W);
        const double g12 = dot_grad(W, D);
        const double g22 = dot_grad(D, D);
        const double b1 = dot_grad(rho, W);
        const double b2 = dot_grad(rho, D);
        const double det = g11 * g22 - g12 * g12;
        if (det <= 0.0)
            throw NumericsError("make_perturbation: singular tangent Gram");
        const double c1 = (g22 * b1 - g12 * b2) / det;
        const double c2 = (g11 * b2 - g12 * b1) / det;
        rho = axpy(1.0, rho, -c1, W);
        rho = axpy(1.0, rho, -c2, D);
    }
    const double gn = std::sqrt(grad_norm_sq(rho));
    if (!(gn > 0.0)) throw NumericsError("make_perturbation: zero gradient");
    return scale(1.0 / gn, rho);
}

std::pair<double, double> envelope_lp(const std::vector<double>& lhs,
                                      const std::vector<double>& a,
                                      const std::vector<double>& b) {
    if (lhs.size() != a.size() || lhs.size() != b.size())
        throw ValidationError("envelope_lp: size mismatch");
    // Active constraints: K a_i + L b_i >= lhs_i with lhs_i > 0.
    std::vector<std::size_t> act;
    for (std::size_t i = 0; i < lhs.size(); ++i) {
        if (lhs[i] > 0.0) {
            if (a[i] <= 0.0 && b[i] <= 0.0)
                throw NumericsError("envelope_lp: infeasible row");
            act.push_back(i);
        }
    }
    if (act.empty()) return {0.0, 0.0};

    const auto feasible = [&](double K, double L) {
        for (const std::size_t i : act)
            if (K * a[i] + L * b[i] < lhs[i] * (1.0 - 1e-12)) return false;
        return true;
    };

    std::vector<std::pair<double, double>> cand;
    double kmax = 0.0;
    bool k_ok = true;
    double lmax = 0.0;
    bool l_ok = true;
    for (const std::size_t i : act) {
        if (a[i] > 0.0)
            kmax = std::max(kmax, lhs[i] / a[i]);
        else
            k_ok = false;
        if (b[i] > 0.0)
            lmax = std::max(lmax, lhs[i] / b[i]);
        else
            l_ok = false;
    }
    if (k_ok) cand.emplace_back(kmax, 0.0);
    if (l_ok) cand.emplace_back(0.0, lmax);
    for (std::size_t ii = 0; ii < act.size(); ++ii) {
        for (std::size_t jj = ii + 1; jj < act.size(); ++jj) {
            const std::size_t i = act[ii], j = act[jj];
            const double det = a[i] * b[j] - a[j] * b[i];
            if (det == 0.0) continue;
            const double K = (lhs[i] * b[j] - lhs[j] * b[i]) / det;
            const double L = (a[i] * lhs[j] - a[j] * lhs[i]) / det;
            if (K >= 0.0 && L >= 0.0) cand.emplace_back(K, L);
        }
    }

    double bestK = 0.0, bestL = 0.0;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& [K, L] : cand) {
        if (K + L < best && feasible(K, L)) {
            best = K + L;
            bestK = K;
            bestL = L;
        }
    }
    if (!std::isfinite(best))
        throw NumericsError("envelope_lp: no feasible vertex");

    // Inflate by the worst violation so every row holds with a true <=.
    for (int pass = 0; pass < 8; ++pass) {
        double s = 1.0;
        for (const std::size_t i : act) {
            const double denom = bestK * a[i] + bestL * b[i];
            if (denom > 0.0) s = std::max(s, lhs[i] / denom);
        }
        if (s <= 1.0) break;
        const double f = s * (1.0 + 8.0 * std::numeric_limits<double>::epsilon());
        bestK *= f;
        bestL *= f;
    }
    return {bestK, bestL};
}

SweepResult sweep_single_stability(int dim, double mu,
                                   const std::vector<std::string>& pert_ids,
                                   const std::vector<double>& eps_list,
                                   const GridPtr& grid, int jobs) {
    validate_dim_mu(dim, mu);
    if (!grid || grid->dim() != dim)
        throw ValidationError("sweep_single_stability: grid dimension mismatch");
    for (const double e : eps_list)
        if (!(e >= 0.0 && e <= 0.3))
            throw ValidationError("sweep_single_stability: eps must lie in [0, 0.3]");
    if (pert_ids.empty() || eps_list.empty())
        throw ValidationError("sweep_single_stability: empty sweep");

    const Bubble base{dim, mu, 1.0, {}};
    const RadialProfile W = bubble_profile(grid, base);
    std::vector<RadialProfile> perts;
    perts.reserve(pert_ids.size());
    for (const auto& id : pert_ids)
        perts.push_back(make_perturbation(grid, id, base, true));

    const int np = static_cast<int>(pert_ids.size());
    const int ne = static_cast<int>(eps_list.size());
    SweepResult out;
    out.scenario = "single";
    out.dim = dim;
    out.mu = mu;
    out.kappa = 1;
    out.rows.resize(static_cast<std::size_t>(np * ne));

    run_rows(np * ne, jobs, [&](int idx) {
        const int ip = idx / ne;
        const int ie = idx % ne;
        const double eps = eps_list[static_cast<std::size_t>(ie)];
        StabilityReport row;
        row.scenario = "single";
        row.dim = dim;
        row.mu = mu;
        row.perturbation = pert_ids[static_cast<std::size_t>(ip)];
        row.eps = eps;
        row.lambdas = {1.0};
        row.q_max = 0.0;
        row.delta_interacting = true;

        const RadialProfile u =
            (eps == 0.0) ? W
                         : axpy(1.0, W, eps, perts[static_cast<std::size_t>(ip)]);
        row.grad_sq = grad_norm_sq(u);
        const FitResult fit = project_single(u, mu);
        row.converged = fit.converged;
        row.dist_single = fit.distance;
        row.dist_kappa = fit.distance;
        row.lambdas_fit = {fit.config.bubbles.front().lambda};

        const RadialProfile v = family_profile(grid, fit.config);
        const RadialProfile vm = match_nl_norm(v, mu, nl_norm(u, mu));
        const StabilitySides sides = stability_sides(u, vm, mu);
        row.lhs = sides.lhs;
        row.deficit = sides.deficit;
        row.nlprod = sides.nlprod;
        row.residual_dual_norm = dual_norm(el_residual(u, mu));
        out.rows[static_cast<std::size_t>(idx)] = std::move(row);
    });

    std::vector<double> ls, as, bs;
    for (const auto& row : out.rows) {
        ls.push_back(row.lhs);
        as.push_back(row.deficit);
        bs.push_back(row.nlprod);
    }
    const auto [K, L] = envelope_lp(ls, as, bs);
    out.K_hat = K;
    out.L_hat = L;
    return out;
}

SweepResult sweep_multi_stability(int dim, double mu, int kappa,
                                  const std::vector<double>& lambda_ratios,
                                  const std::vector<double>& eps_list,
                                  const GridPtr& grid, double delta, int jobs) {
    validate_dim_mu(dim, mu);
    if (kappa < 1) throw ValidationError("sweep_multi_stability: kappa >= 1");
    if (kappa >= 2 && !(dim >= 3 && dim < 6.0 - mu))
        throw ValidationError(
            "sweep_multi_stability: multi-bubble stability requires 3 <= N < 6 - mu");
    if (!grid || grid->dim() != dim)
        throw ValidationError("sweep_multi_stability: grid dimension mismatch");
    if (lambda_ratios.empty() || eps_list.empty())
        throw ValidationError("sweep_multi_stability: empty sweep");
    for (const double r : lambda_ratios)
        if (!(r >= 1.0))
            throw ValidationError("sweep_multi_stability: ratios must be >= 1");
    if (!(delta > 0.0))
        throw ValidationError("sweep_multi_stability: delta must be positive");

    const Bubble base{dim, mu, 1.0, {}};
    const RadialProfile pert = make_perturbation(grid, "bump", base, false);

    const int nr = static_cast<int>(lambda_ratios.size());
    const int ne = static_cast<int>(eps_list.size());
    SweepResult out;
    out.scenario = "multi";
    out.dim = dim;
    out.mu = mu;
    out.kappa = kappa;
    out.rows.resize(static_cast<std::size_t>(nr * ne));

    run_rows(nr * ne, jobs, [&](int idx) {
        const int ir = idx / ne;
        const int ie = idx % ne;
        const double ratio = lambda_ratios[static_cast<std::size_t>(ir)];
        const double eps = eps_list[static_cast<std::size_t>(ie)];

        // Scales spread symmetrically about 1 in log r so every core stays
        // well inside the grid.
        std::vector<Bubble> bl;
        std::vector<double> lam;
        for (int i = 0; i < kappa; ++i) {
            const double e = static_cast<double>(i) - 0.5 * (kappa - 1);
            const double l = std::pow(ratio, e);
            lam.push_back(l);
            bl.push_back(Bubble{dim, mu, l, {}});
        }
        const BubbleFamily fam{bl, std::vector<double>(bl.size(), 1.0)};

        StabilityReport row;
        row.scenario = "multi";
        row.dim = dim;
        row.mu = mu;
        row.perturbation = (eps == 0.0) ? "" : "bump";
        row.eps = eps;
        row.lambdas = lam;
        row.delta_interacting = is_delta_interacting(fam, delta);
        double qmax = 0.0;
        for (std::size_t i = 0; i < bl.size(); ++i)
            for (std::size_t j = i + 1; j < bl.size(); ++j)
                qmax = std::max(qmax, interaction_Q(bl[i], bl[j]));
        row.q_max = qmax;

        RadialProfile u = family_profile(grid, fam);
        if (eps != 0.0) u = axpy(1.0, u, eps, pert);
        row.grad_sq = grad_norm_sq(u);
        row.deficit = deficit(u, mu).deficit;

        const FitResult fit = fit_sum(u, mu, kappa);
        row.converged = fit.converged;
        row.dist_kappa = fit.distance;
        for (const auto& bb : fit.config.bubbles)
            row.lambdas_fit.push_back(bb.lambda);
        row.residual_dual_norm = dual_norm(el_residual(u, mu));

        for (std::size_t i = 0; i < bl.size(); ++i)
            for (std::size_t j = i + 1; j < bl.size(); ++j)
                row.interaction_integrals.push_back(
                    pair_interaction_integral(grid, bl[i], bl[j]));
        out.rows[static_cast<std::size_t>(idx)] = std::move(row);
    });

    double chat = 0.0;
    for (const auto& row : out.rows)
        if (row.residual_dual_norm > 0.0)
            chat = std::max(chat, row.dist_kappa / row.residual_dual_norm);
    out.C_hat = chat;
    return out;
}

StabilityReport profile_decomposition_demo(int dim, double mu, int kappa,
                                           std::uint64_t seed,
                                           const GridPtr& grid) {
    validate_dim_mu(dim, mu);
    if (kappa < 1)
        throw ValidationError("profile_decomposition_demo: kappa >= 1");
    if (kappa >= 2 && !(dim >= 3 && dim < 6.0 - mu))
        throw ValidationError(
            "profile_decomposition_demo: multi-bubble region requires 3 <= N < 6 - mu");
    if (!grid || grid->dim() != dim)
        throw ValidationError("profile_decomposition_demo: grid dimension mismatch");

    std::vector<Bubble> bl;
    std::vector<double> lam;
    for (int i = 0; i < kappa; ++i) {
        const double e = static_cast<double>(i) - 0.5 * (kappa - 1);
        const double l = std::pow(100.0, e);
        lam.push_back(l);
        bl.push_back(Bubble{dim, mu, l, {}});
    }
    const BubbleFamily fam{bl, std::vector<double>(bl.size(), 1.0)};
    RadialProfile u = family_profile(grid, fam);

    // Seeded smooth remainder: fixed bump dictionary with Box-Muller
    // coefficients from a portable 64-bit Mersenne Twister.
    std::mt19937_64 rng(seed);
    const auto uniform = [&rng]() {
        return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
    };
    const double centers[4] = {-3.0, -1.0, 1.0, 3.0};
    RadialProfile rho = RadialProfile::zero(grid);
    for (const double c : centers) {
        const double g =
            std::sqrt(-2.0 * std::log(uniform())) *
            std::cos(2.0 * 3.14159265358979323846 * uniform());
        rho = axpy(1.0, rho, g, log_bump(grid, c, 0.7));
    }
    const double gn = std::sqrt(grad_norm_sq(rho));
    if (gn > 0.0) rho = scale(0.05 / gn, rho);
    u = axpy(1.0, u, 1.0, rho);

    StabilityReport row;
    row.scenario = "decomposition";
    row.dim = dim;
    row.mu = mu;
    row.perturbation = "seeded";
    row.eps = 0.05;
    row.lambdas = lam;
    double qmax = 0.0;
    for (std::size_t i = 0; i < bl.size(); ++i)
        for (std::size_t j = i + 1; j < bl.size(); ++j)
            qmax = std::max(qmax, interaction_Q(bl[i], bl[j]));
    row.q_max = qmax;
    row.delta_interacting = is_delta_interacting(fam, 0.1);
    row.grad_sq = grad_norm_sq(u);
    const double unit = bubble_grad_norm_sq(dim, mu);
    row.window_lo = (kappa - 0.5) * unit;
    row.window_hi = (kappa + 0.5) * unit;
    row.deficit = deficit(u, mu).deficit;

    const FitResult fit = fit_sum(u, mu, kappa);
    row.converged = fit.converged;
    row.dist_kappa = fit.distance;
    for (const auto& bb : fit.config.bubbles)
        row.lambdas_fit.push_back(bb.lambda);
    row.residual_dual_norm = dual_norm(el_residual(u, mu));
    return row;
}

SlopeRecord interaction_slopes(int dim, double p, double q,
                               const std::vector<double>& ratio_grid) {
    if (dim < 3) throw ValidationError("interaction_slopes: dimension must be >= 3");
    if (ratio_grid.size() < 3)
        throw ValidationError("interaction_slopes: need at least 3 ratios");
    const double lo = *std::min_element(ratio_grid.begin(), ratio_grid.end());
    const double hi = *std::max_element(ratio_grid.begin(), ratio_grid.end());
    if (!(lo >= 1.0))
        throw ValidationError("interaction_slopes: ratios must be >= 1");
    if (!(hi / lo >= 1e3 * (1.0 - 1e-9)))
        throw ValidationError("interaction_slopes: ratio grid must span >= 3 decades");

    SlopeRecord rec;
    rec.dim = dim;
    rec.p = p;
    rec.q = q;
    rec.ratios = ratio_grid;
    rec.log_case = std::abs(p - q) < 0.5;
    rec.expected = rec.log_case ? dim / (dim - 2.0) : std::min(p, q);

    std::vector<double> lq, li;
    for (const double ratio : ratio_grid) {
        const Bubble b1{dim, 1.0, 1.0, {}};
        const Bubble b2{dim, 1.0, ratio, {}};
        const double I = two_center_integral(p, q, b1, b2);
        const double Q = interaction_Q(b1, b2);
        rec.q_values.push_back(Q);
        rec.integrals.push_back(I);
        lq.push_back(std::log(Q));
        li.push_back(std::log(I));
    }
    rec.slope = regression_slope(lq, li);
    if (rec.log_case) {
        // Weight of the log enhancement: regress
        // log I - expected*log Q on log log(1/Q); ~1 for a clean Q^s log(1/Q).
        std::vector<double> x, y;
        for (std::size_t i = 0; i < lq.size(); ++i) {
            x.push_back(std::log(-lq[i]));
            y.push_back(li[i] - rec.expected * lq[i]);
        }
        rec.log_coefficient = regression_slope(x, y);
    }
    return rec;
}

}  // namespace choquard
