// SPDX-License-Identifier: Apache-2.0

#include "choquard/fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "choquard/constants.hpp"
#include "choquard/errors.hpp"
#include "choquard/functionals.hpp"
#include "choquard/kernel.hpp"
#include "choquard/radial.hpp"
#include "choquard/riesz.hpp"

namespace choquard {

namespace {

// Shared state of one variable-projection fit: u fixed, scales vary.
struct Engine {
    const RadialProfile& u;
    double mu;
    GridPtr g;
    int N, n;
    double ts, beta, A, Qt, sphere;
    double u_grad_sq, u_grad_norm;

    Engine(const RadialProfile& u_, double mu_)
        : u(u_), mu(mu_), g(u_.grid_ptr()), N(g->dim()), n(g->n()),
          ts(two_star(N)), beta((N - 2) / 2.0), A(bubble_prefactor(N, mu_)),
          Qt(riesz_prefactor(N, mu_)), sphere(sphere_area(N)),
          u_grad_sq(grad_norm_sq(u_)), u_grad_norm(std::sqrt(std::max(grad_norm_sq(u_), 0.0))) {}

    // W[0, lambda] values.
    std::vector<double> bubble(double lam) const {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) {
            const double lr2 = lam * lam * g->r()[i] * g->r()[i];
            v[i] = A * std::pow(lam / (1.0 + lr2), beta);
        }
        return v;
    }

    // d/d(log lambda) of W[0, lambda] (= lambda * d/d lambda).
    std::vector<double> bubble_dt(double lam) const {
        std::vector<double> v(n);
        for (int i = 0; i < n; ++i) {
            const double lr2 = lam * lam * g->r()[i] * g->r()[i];
            v[i] = A * beta * std::pow(lam, beta) * (1.0 - lr2) * std::pow(1.0 + lr2, -beta - 1.0);
        }
        return v;
    }

    double wint(const std::vector<double>& vals, const Tail& tin, const Tail& tout) const {
        return sphere * weighted_integral(*g, vals, tin, tout);
    }

    // State at one scale vector.
    struct Point {
        std::vector<double> t;                    // log scales
        std::vector<std::vector<double>> W, Dt;   // bubble values and t-derivatives
        Eigen::MatrixXd H;                        // <grad W_i, grad W_j>
        Eigen::VectorXd b;                        // <grad u, grad W_i>
        Eigen::VectorXd alpha;                    // optimal coefficients
        double F;                                 // squared distance
        std::vector<double> rho;                  // u - sum alpha_i W_i (values)
        Tail rho_in, rho_out;
    };

    Point eval(const std::vector<double>& t) const {
        Point pt;
        pt.t = t;
        const int k = static_cast<int>(t.size());
        pt.W.resize(k);
        pt.Dt.resize(k);
        for (int i = 0; i < k; ++i) {
            const double lam = std::exp(t[i]);
            pt.W[i] = bubble(lam);
            pt.Dt[i] = bubble_dt(lam);
        }
        pt.H.resize(k, k);
        pt.b.resize(k);
        const Tail t0{0.0, true};
        const Tail tsum{(2.0 - N) * ts, true};
        std::vector<double> prod(n);
        for (int i = 0; i < k; ++i) {
            for (int j = i; j < k; ++j) {
                for (int m = 0; m < n; ++m) prod[m] = std::pow(pt.W[i][m], ts - 1.0) * pt.W[j][m];
                pt.H(i, j) = pt.H(j, i) = Qt * wint(prod, t0, tsum);
            }
            for (int m = 0; m < n; ++m) prod[m] = std::pow(pt.W[i][m], ts - 1.0) * u.values()[m];
            pt.b(i) = Qt * wint(prod, tail_mul(t0, u.inner()),
                                tail_mul(Tail{(2.0 - N) * (ts - 1.0), true}, u.outer()));
        }
        pt.alpha = pt.H.ldlt().solve(pt.b);
        pt.F = u_grad_sq - pt.b.dot(pt.alpha);
        pt.rho.assign(u.values().begin(), u.values().end());
        for (int i = 0; i < k; ++i) {
            for (int m = 0; m < n; ++m) pt.rho[m] -= pt.alpha(i) * pt.W[i][m];
        }
        // Tail bookkeeping for rho = u - sigma: bubbles carry tails {0, 2-N}.
        auto comb = [](const Tail& a, double bpow, bool outer) {
            if (!a.present) return Tail{bpow, true};
            return Tail{outer ? std::max(a.power, bpow) : std::min(a.power, bpow), true};
        };
        pt.rho_in = comb(u.inner(), 0.0, false);
        pt.rho_out = comb(u.outer(), 2.0 - N, true);
        return pt;
    }

    // Objective gradient dF/dt_i = -2 alpha_i <grad rho, grad Dt_i>, with the
    // pairing computed through the closed-form source of the scale derivative.
    Eigen::VectorXd gradient(const Point& pt) const {
        const int k = static_cast<int>(pt.t.size());
        Eigen::VectorXd grad(k);
        std::vector<double> prod(n);
        for (int i = 0; i < k; ++i) {
            for (int m = 0; m < n; ++m) {
                prod[m] = std::pow(pt.W[i][m], ts - 2.0) * pt.Dt[i][m] * pt.rho[m];
            }
            const Tail tout = tail_mul(Tail{(2.0 - N) * (ts - 1.0), true}, pt.rho_out);
            const Tail tin = tail_mul(Tail{0.0, true}, pt.rho_in);
            const double pair = Qt * (ts - 1.0) * wint(prod, tin, tout);
            grad(i) = -2.0 * pt.alpha(i) * pair;
        }
        return grad;
    }

    // Gauss-Newton model Hessian of the projected objective.
    Eigen::MatrixXd gn_hessian(const Point& pt) const {
        const int k = static_cast<int>(pt.t.size());
        Eigen::MatrixXd G(k, k), C(k, k);
        std::vector<double> prod(n);
        const Tail t0{0.0, true};
        const Tail tsum{(2.0 - N) * ts, true};
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) {
                for (int m = 0; m < n; ++m) {
                    prod[m] = std::pow(pt.W[i][m], ts - 2.0) * pt.Dt[i][m] * pt.Dt[j][m];
                }
                G(i, j) = Qt * (ts - 1.0) * wint(prod, t0, tsum);
                // C(j, i) = <grad W_j, grad Dt_i>
                for (int m = 0; m < n; ++m) prod[m] = std::pow(pt.W[j][m], ts - 1.0) * pt.Dt[i][m];
                C(j, i) = Qt * wint(prod, t0, tsum);
            }
        }
        G = 0.5 * (G + G.transpose()).eval();
        const Eigen::MatrixXd S = G - C.transpose() * pt.H.ldlt().solve(C);
        Eigen::MatrixXd M(k, k);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < k; ++j) M(i, j) = 2.0 * pt.alpha(i) * pt.alpha(j) * S(i, j);
        }
        return M;
    }
};

struct RunOutcome {
    std::vector<double> t;
    double F = 0.0;
    int iterations = 0;
    double gradient_norm = 0.0;
};

RunOutcome run_gauss_newton(const Engine& eng, std::vector<double> t0, int max_iter) {
    RunOutcome out;
    Engine::Point pt = eng.eval(t0);
    const double gtol_hard = 1e-13 * std::max(1.0, eng.u_grad_sq);
    int iter = 0;
    double gnorm = 0.0;
    while (iter < max_iter) {
        const Eigen::VectorXd grad = eng.gradient(pt);
        gnorm = grad.cwiseAbs().maxCoeff();
        if (gnorm <= gtol_hard) break;
        const Eigen::MatrixXd M = eng.gn_hessian(pt);
        const double scale = std::max(M.diagonal().cwiseAbs().maxCoeff(), 1e-300);
        double damping = 0.0;
        bool accepted = false;
        for (int attempt = 0; attempt < 12 && !accepted; ++attempt) {
            Eigen::MatrixXd Md = M;
            if (damping > 0.0) Md.diagonal().array() += damping;
            Eigen::VectorXd p = Md.ldlt().solve(-grad);
            if (!p.allFinite() || grad.dot(p) >= 0.0) {
                damping = std::max(damping * 10.0, 1e-10 * scale);
                continue;
            }
            // Backtracking line search; the objective never increases across
            // accepted steps.
            double step = 1.0;
            const double slope = grad.dot(p);
            for (int ls = 0; ls < 45; ++ls) {
                std::vector<double> tn(pt.t);
                for (size_t q = 0; q < tn.size(); ++q) tn[q] += step * p(q);
                Engine::Point cand = eng.eval(tn);
                if (cand.F <= pt.F + 1e-4 * step * slope) {
                    pt = std::move(cand);
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if (!accepted) damping = std::max(damping * 10.0, 1e-10 * scale);
        }
        ++iter;
        if (!accepted) break;  // stalled; best iterate is kept
        // Stop when the step no longer moves the scales.
        double move = 0.0;
        for (size_t q = 0; q < pt.t.size(); ++q) move = std::max(move, std::fabs(pt.t[q] - t0[q]));
        t0 = pt.t;
        if (move < 1e-14) break;
    }
    const Eigen::VectorXd grad = eng.gradient(pt);
    out.t = pt.t;
    out.F = pt.F;
    out.iterations = iter;
    out.gradient_norm = grad.cwiseAbs().maxCoeff();
    return out;
}

FitResult finish(const Engine& eng, const RadialProfile& u, double mu, RunOutcome best,
                 int hits, bool degenerate_flag) {
    const int k = static_cast<int>(best.t.size());
    // Sort scales ascending.
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return best.t[a] < best.t[b]; });
    std::vector<double> tsorted(k);
    for (int i = 0; i < k; ++i) tsorted[i] = best.t[order[i]];

    Engine::Point pt = eng.eval(tsorted);
    std::vector<Bubble> bubbles;
    std::vector<double> alpha(k);
    for (int i = 0; i < k; ++i) {
        bubbles.emplace_back(eng.N, mu, std::exp(tsorted[i]));
        alpha[i] = pt.alpha(i);
    }
    bool collision = false;
    for (int i = 0; i + 1 < k; ++i) {
        if (tsorted[i + 1] - tsorted[i] < std::log(1.05)) collision = true;
    }
    BubbleFamily fam(bubbles, alpha);

    RadialProfile rho(u.grid_ptr(), pt.rho, pt.rho_in, pt.rho_out);
    // Report the distance from the actual residual profile rather than the
    // variable-projection objective: for inputs lying on the manifold the
    // residual vanishes node-by-node, so the reported distance is exactly zero
    // instead of carrying the mismatch between two quadrature routes.
    const double dist = std::sqrt(std::max(grad_norm_sq(rho), 0.0));
    FitResult res{fam,
                  dist,
                  best.iterations,
                  best.gradient_norm < 1e-8 * std::max(eng.u_grad_norm, 1e-300),
                  degenerate_flag || collision,
                  hits,
                  best.gradient_norm,
                  {}};
    res.orth_residuals = orthogonality_residuals(rho, fam);
    return res;
}

FitResult degenerate_zero(const RadialProfile& u, double mu) {
    const int N = u.grid().dim();
    BubbleFamily fam({Bubble(N, mu, 1.0)}, {0.0});
    const double gn = std::sqrt(std::max(grad_norm_sq(u), 0.0));
    FitResult res{fam, gn, 0, true, true, 0, 0.0, {}};
    res.orth_residuals.assign(1, {0.0, 0.0, 0.0});
    return res;
}

}  // namespace

FitResult project_single(const RadialProfile& u, double mu) {
    validate_dim_mu(u.grid().dim(), mu);
    Engine eng(u, mu);
    if (eng.u_grad_sq < 1e-280) return degenerate_zero(u, mu);
    RunOutcome best;
    bool have = false;
    int hits = 0;
    for (int k = -8; k <= 8; ++k) {
        RunOutcome r = run_gauss_newton(eng, {k * std::log(2.0)}, 200);
        if (!have || r.F < best.F - 1e-9 * (1.0 + std::fabs(best.F))) {
            best = r;
            have = true;
            hits = 1;
        } else if (std::fabs(r.F - best.F) <= 1e-9 * (1.0 + std::fabs(best.F))) {
            ++hits;
            if (r.gradient_norm < best.gradient_norm) best = r;
        }
    }
    return finish(eng, u, mu, best, hits, false);
}

FitResult fit_sum(const RadialProfile& u, double mu, int kappa) {
    validate_dim_mu(u.grid().dim(), mu);
    if (kappa < 1) throw ValidationError("fit_sum: kappa >= 1 required");
    Engine eng(u, mu);
    if (eng.u_grad_sq < 1e-280) return degenerate_zero(u, mu);
    const RadialGrid& g = u.grid();
    const int n = g.n();
    const double beta = (g.dim() - 2) / 2.0;

    // Bubble-core detector: local maxima of r^{(N-2)/2} |u|.
    std::vector<double> m(n);
    for (int i = 0; i < n; ++i) m[i] = std::pow(g.r()[i], beta) * std::fabs(u.values()[i]);
    std::vector<std::pair<double, double>> peaks;  // (height, t at peak)
    for (int i = 1; i + 1 < n; ++i) {
        if (m[i] > m[i - 1] && m[i] >= m[i + 1]) peaks.emplace_back(m[i], g.t()[i]);
    }
    std::sort(peaks.begin(), peaks.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<double> seeds;  // log lambda = -t_peak
    for (const auto& [h, tp] : peaks) {
        (void)h;
        const double cand = -tp;
        bool close = false;
        for (double s : seeds) close = close || std::fabs(s - cand) < 0.5;
        if (!close) seeds.push_back(cand);
        if (static_cast<int>(seeds.size()) == kappa) break;
    }
    while (static_cast<int>(seeds.size()) < kappa) {
        seeds.push_back(seeds.empty() ? 0.0 : seeds.back() + std::log(10.0));
    }

    RunOutcome best;
    bool have = false;
    int hits = 0;
    for (double shift : {0.0, std::log(2.0), -std::log(2.0)}) {
        std::vector<double> t0(seeds);
        for (double& t : t0) t += shift;
        RunOutcome r = run_gauss_newton(eng, t0, 200);
        if (!have || r.F < best.F - 1e-9 * (1.0 + std::fabs(best.F))) {
            best = r;
            have = true;
            hits = 1;
        } else if (std::fabs(r.F - best.F) <= 1e-9 * (1.0 + std::fabs(best.F))) {
            ++hits;
            if (r.gradient_norm < best.gradient_norm) best = r;
        }
    }
    return finish(eng, u, mu, best, hits, false);
}

std::vector<std::array<double, 3>> orthogonality_residuals(const RadialProfile& rho,
                                                           const BubbleFamily& fam) {
    const GridPtr& g = rho.grid_ptr();
    const int N = g->dim();
    const int n = g->n();
    const double mu = fam.mu();
    if (N != fam.dim()) throw ValidationError("orthogonality_residuals: dimension mismatch");
    const double tsm = two_star_mu(N, mu);
    auto kern = get_kernel(g, mu, 0);
    const double sphere = sphere_area(N);

    std::vector<std::array<double, 3>> out;
    out.reserve(fam.bubbles.size());
    for (const Bubble& b : fam.bubbles) {
        const RadialProfile W = bubble_profile(g, b);
        const RadialProfile Wtsm = bubble_power_profile(g, b, tsm);
        const RadialProfile DW = d_lambda_profile(g, b);

        // rho-weighted critical density W^{2*_mu - 1} rho.
        std::vector<double> dens(n);
        for (int i = 0; i < n; ++i) dens[i] = std::pow(W.values()[i], tsm - 1.0) * rho.values()[i];
        const Tail dens_in = tail_mul(Tail{0.0, true}, rho.inner());
        const Tail dens_out = tail_mul(Tail{(2.0 - N) * (tsm - 1.0), true}, rho.outer());
        const std::vector<double> Pd = kern->apply_values(dens, dens_in, dens_out);
        const Tail pd_in = fit_tail(*g, Pd, 0);
        const Tail pd_out = fit_tail(*g, Pd, 1);

        // Pairing against W: int (I * (W^{2*_mu-1} rho)) W^{2*_mu}.
        std::vector<double> prod(n);
        for (int i = 0; i < n; ++i) prod[i] = Pd[i] * Wtsm.values()[i];
        const double ep1 = sphere * weighted_integral(*g, prod, tail_mul(pd_in, Wtsm.inner()),
                                                      tail_mul(pd_out, Wtsm.outer()));

        // Pairing against the scale derivative: the nonlocal combination
        // 2*_mu int (I*(W^{2*_mu-1} rho)) W^{2*_mu-1} dW/dlambda
        //   + (2*_mu - 1) int (I*W^{2*_mu}) W^{2*_mu-2} (dW/dlambda) rho.
        for (int i = 0; i < n; ++i) {
            prod[i] = Pd[i] * std::pow(W.values()[i], tsm - 1.0) * DW.values()[i];
        }
        const Tail mid_out = tail_mul(pd_out, Tail{(2.0 - N) * tsm, true});
        const double term1 = sphere * weighted_integral(*g, prod, tail_mul(pd_in, Tail{0.0, true}), mid_out);

        const std::vector<double> PW = kern->apply_values(Wtsm.values(), Wtsm.inner(), Wtsm.outer());
        const Tail pw_in = fit_tail(*g, PW, 0);
        const Tail pw_out = fit_tail(*g, PW, 1);
        for (int i = 0; i < n; ++i) {
            prod[i] = PW[i] * std::pow(W.values()[i], tsm - 2.0) * DW.values()[i] * rho.values()[i];
        }
        const Tail t2_in = tail_mul(tail_mul(pw_in, Tail{0.0, true}), rho.inner());
        const Tail t2_out =
            tail_mul(tail_mul(pw_out, Tail{(2.0 - N) * (tsm - 1.0), true}), rho.outer());
        const double term2 = sphere * weighted_integral(*g, prod, t2_in, t2_out);

        const double ep2 = tsm * term1 + (tsm - 1.0) * term2;

        // Pairing against the translation mode: an l=1 harmonic integrated
        // against radial fields vanishes identically.
        out.push_back({ep1, ep2, 0.0});
    }
    return out;
}

RadialProfile match_nl_norm(const RadialProfile& v, double mu, double target) {
    if (!(target >= 0.0)) throw ValidationError("match_nl_norm: target >= 0 required");
    const double nv = nl_norm(v, mu);
    if (nv <= 0.0) throw ValidationError("match_nl_norm: input has zero nonlocal norm");
    return scale(target / nv, v);
}

}  // namespace choquard
