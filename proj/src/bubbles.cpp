// SPDX-License-Identifier: Apache-2.0

#include "choquard/bubbles.hpp"

#include <algorithm>
#include <cmath>

#include "choquard/constants.hpp"
#include "choquard/errors.hpp"
#include "choquard/radial.hpp"

namespace choquard {

namespace {

double center_distance_sq(const std::vector<double>& a, const std::vector<double>& b) {
    const size_t n = std::max(a.size(), b.size());
    double d2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const double ai = i < a.size() ? a[i] : 0.0;
        const double bi = i < b.size() ? b[i] : 0.0;
        d2 += (ai - bi) * (ai - bi);
    }
    return d2;
}

void require_concentric(const Bubble& b, const char* who) {
    if (!b.concentric()) {
        throw ValidationError(std::string(who) + ": requires a bubble centered at the origin");
    }
}

void require_grid(const GridPtr& g, const Bubble& b, const char* who) {
    if (!g) throw ValidationError(std::string(who) + ": null grid");
    if (g->dim() != b.dim) throw ValidationError(std::string(who) + ": grid/bubble dimension mismatch");
}

}  // namespace

Bubble::Bubble(int dim_, double mu_, double lambda_, std::vector<double> xi_)
    : dim(dim_), mu(mu_), lambda(lambda_), xi(std::move(xi_)) {
    validate_dim_mu(dim, mu);
    if (!(lambda > 0.0)) throw ValidationError("Bubble: scale lambda > 0 required");
    if (!xi.empty() && static_cast<int>(xi.size()) != dim) {
        throw ValidationError("Bubble: center must have N components (or be empty for the origin)");
    }
}

bool Bubble::concentric() const {
    for (double c : xi) {
        if (c != 0.0) return false;
    }
    return true;
}

BubbleFamily::BubbleFamily(std::vector<Bubble> bubbles_, std::vector<double> alpha_)
    : bubbles(std::move(bubbles_)), alpha(std::move(alpha_)) {
    if (bubbles.empty()) throw ValidationError("BubbleFamily: at least one bubble required");
    for (const Bubble& b : bubbles) {
        if (b.dim != bubbles.front().dim || b.mu != bubbles.front().mu) {
            throw ValidationError("BubbleFamily: all bubbles must share (N, mu)");
        }
    }
    if (!alpha.empty() && alpha.size() != bubbles.size()) {
        throw ValidationError("BubbleFamily: coefficient count must match bubble count");
    }
}

double eval_W(const Bubble& b, double rho) {
    const double A = bubble_prefactor(b.dim, b.mu);
    const double beta = (b.dim - 2) / 2.0;
    return A * std::pow(b.lambda / (1.0 + b.lambda * b.lambda * rho * rho), beta);
}

double eval_W_at(const Bubble& b, const std::vector<double>& x) {
    return eval_W(b, std::sqrt(center_distance_sq(x, b.xi)));
}

double eval_U(int N, double lambda, const std::vector<double>& xi, const std::vector<double>& x) {
    if (N < 3) throw ValidationError("eval_U: dimension N >= 3 required");
    if (!(lambda > 0.0)) throw ValidationError("eval_U: scale lambda > 0 required");
    const double beta = (N - 2) / 2.0;
    const double rho2 = center_distance_sq(x, xi);
    return std::pow(static_cast<double>(N) * (N - 2), (N - 2) / 4.0) *
           std::pow(lambda / (1.0 + lambda * lambda * rho2), beta);
}

RadialProfile bubble_profile(const GridPtr& g, const Bubble& b) {
    require_grid(g, b, "bubble_profile");
    require_concentric(b, "bubble_profile");
    std::vector<double> vals(g->n());
    for (int i = 0; i < g->n(); ++i) vals[i] = eval_W(b, g->r()[i]);
    return RadialProfile(g, std::move(vals), Tail{0.0, true}, Tail{2.0 - g->dim(), true});
}

RadialProfile bubble_power_profile(const GridPtr& g, const Bubble& b, double power) {
    require_grid(g, b, "bubble_power_profile");
    require_concentric(b, "bubble_power_profile");
    std::vector<double> vals(g->n());
    for (int i = 0; i < g->n(); ++i) vals[i] = std::pow(eval_W(b, g->r()[i]), power);
    return RadialProfile(g, std::move(vals), Tail{0.0, true}, Tail{(2.0 - g->dim()) * power, true});
}

RadialProfile d_lambda_profile(const GridPtr& g, const Bubble& b) {
    require_grid(g, b, "d_lambda_profile");
    require_concentric(b, "d_lambda_profile");
    const double A = bubble_prefactor(b.dim, b.mu);
    const double beta = (b.dim - 2) / 2.0;
    const double lam = b.lambda;
    std::vector<double> vals(g->n());
    for (int i = 0; i < g->n(); ++i) {
        const double lr2 = lam * lam * g->r()[i] * g->r()[i];
        vals[i] = A * beta * std::pow(lam, beta - 1.0) * (1.0 - lr2) * std::pow(1.0 + lr2, -beta - 1.0);
    }
    return RadialProfile(g, std::move(vals), Tail{0.0, true}, Tail{2.0 - g->dim(), true});
}

RadialProfile d_xi_radial_factor(const GridPtr& g, const Bubble& b) {
    require_grid(g, b, "d_xi_radial_factor");
    require_concentric(b, "d_xi_radial_factor");
    const double A = bubble_prefactor(b.dim, b.mu);
    const double beta = (b.dim - 2) / 2.0;
    const double lam = b.lambda;
    std::vector<double> vals(g->n());
    for (int i = 0; i < g->n(); ++i) {
        const double r = g->r()[i];
        const double lr2 = lam * lam * r * r;
        // -W'(r) = 2 A beta lambda^{beta+2} r (1 + lambda^2 r^2)^{-beta-1}
        vals[i] = 2.0 * A * beta * std::pow(lam, beta + 2.0) * r * std::pow(1.0 + lr2, -beta - 1.0);
    }
    return RadialProfile(g, std::move(vals), Tail{1.0, true}, Tail{1.0 - g->dim(), true});
}

RadialProfile exact_riesz_of_bubble(const GridPtr& g, const Bubble& b) {
    require_grid(g, b, "exact_riesz_of_bubble");
    require_concentric(b, "exact_riesz_of_bubble");
    const double Qt = riesz_prefactor(b.dim, b.mu);
    const double expo = two_star(b.dim) - two_star_mu(b.dim, b.mu);  // = mu/(N-2)
    std::vector<double> vals(g->n());
    for (int i = 0; i < g->n(); ++i) vals[i] = Qt * std::pow(eval_W(b, g->r()[i]), expo);
    return RadialProfile(g, std::move(vals), Tail{0.0, true}, Tail{-b.mu, true});
}

RadialProfile family_profile(const GridPtr& g, const BubbleFamily& fam) {
    RadialProfile sum = bubble_profile(g, fam.bubbles.front());
    if (fam.coefficient(0) != 1.0) sum = scale(fam.coefficient(0), sum);
    for (std::size_t i = 1; i < fam.bubbles.size(); ++i) {
        sum = axpy(1.0, sum, fam.coefficient(i),
                   bubble_profile(g, fam.bubbles[i]));
    }
    return sum;
}

double interaction_Q(const Bubble& b1, const Bubble& b2) {
    if (b1.dim != b2.dim || b1.mu != b2.mu) {
        throw ValidationError("interaction_Q: bubbles must share (N, mu)");
    }
    const double ratio = b1.lambda / b2.lambda + b2.lambda / b1.lambda;
    const double sep = b1.lambda * b2.lambda * center_distance_sq(b1.xi, b2.xi);
    return std::pow(ratio + sep, -(b1.dim - 2) / 2.0);
}

bool is_delta_interacting(const BubbleFamily& fam, double delta) {
    if (!(delta > 0.0)) throw ValidationError("is_delta_interacting: delta > 0 required");
    for (size_t i = 0; i < fam.bubbles.size(); ++i) {
        for (size_t j = i + 1; j < fam.bubbles.size(); ++j) {
            if (interaction_Q(fam.bubbles[i], fam.bubbles[j]) >= delta) return false;
        }
    }
    for (double a : fam.alpha) {
        if (std::fabs(a - 1.0) > delta) return false;
    }
    return true;
}

}  // namespace choquard
