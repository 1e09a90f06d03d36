// SPDX-License-Identifier: Apache-2.0

#include "choquard/functionals.hpp"

#include <algorithm>
#include <cmath>

#include "choquard/errors.hpp"
#include "choquard/kernel.hpp"
#include "choquard/radial.hpp"
#include "choquard/riesz.hpp"

namespace choquard {

namespace {

// |u|^{2*_mu} with the tail powers scaled accordingly.
RadialProfile critical_power(const RadialProfile& u, double tsm) {
    std::vector<double> v(u.grid().n());
    for (int i = 0; i < u.grid().n(); ++i) v[i] = std::pow(std::fabs(u.values()[i]), tsm);
    return RadialProfile(u.grid_ptr(), std::move(v), tail_pow(u.inner(), tsm), tail_pow(u.outer(), tsm));
}

}  // namespace

double nl_norm(const RadialProfile& u, double mu) {
    const double tsm = two_star_mu(u.grid().dim(), mu);
    const RadialProfile up = critical_power(u, tsm);
    const double dd = double_integral(up, up, mu);
    if (dd < 0.0) return 0.0;  // quadrature noise around zero
    return std::pow(dd, 1.0 / (2.0 * tsm));
}

DeficitReport deficit(const RadialProfile& u, double mu) {
    const int N = u.grid().dim();
    DeficitReport rep;
    rep.constants = sharp_constants(N, mu);
    rep.grad_sq = grad_norm_sq(u);
    const RadialProfile up = critical_power(u, rep.constants.two_star_mu);
    rep.nl_integral = double_integral(up, up, mu);
    const double tsm = rep.constants.two_star_mu;
    rep.nl_norm = rep.nl_integral > 0.0 ? std::pow(rep.nl_integral, 1.0 / (2.0 * tsm)) : 0.0;
    rep.deficit = rep.grad_sq -
                  rep.constants.S_hl * (rep.nl_integral > 0.0 ? std::pow(rep.nl_integral, 1.0 / tsm) : 0.0);
    return rep;
}

RadialProfile el_residual(const RadialProfile& u, double mu) {
    const RadialGrid& g = u.grid();
    const double tsm = two_star_mu(g.dim(), mu);
    const RadialProfile up = critical_power(u, tsm);
    const std::vector<double> P =
        get_kernel(u.grid_ptr(), mu, 0)->apply_values(up.values(), up.inner(), up.outer());
    const RadialProfile lap = laplacian(u);
    std::vector<double> res(g.n());
    for (int i = 0; i < g.n(); ++i) {
        const double ui = u.values()[i];
        res[i] = lap.values()[i] + P[i] * std::pow(std::fabs(ui), tsm - 2.0) * ui;
    }
    const Tail tin = fit_tail(g, res, 0);
    const Tail tout = fit_tail(g, res, 1);
    return RadialProfile(u.grid_ptr(), std::move(res), tin, tout);
}

double energy(const RadialProfile& u, double mu) {
    const double tsm = two_star_mu(u.grid().dim(), mu);
    const RadialProfile up = critical_power(u, tsm);
    return 0.5 * grad_norm_sq(u) - double_integral(up, up, mu) / (2.0 * tsm);
}

std::pair<double, double> clarkson_check(const RadialProfile& u, const RadialProfile& v) {
    const double lhs = grad_norm_sq(axpy(0.5, u, 0.5, v)) + grad_norm_sq(axpy(0.5, u, -0.5, v));
    const double rhs = 0.5 * grad_norm_sq(u) + 0.5 * grad_norm_sq(v);
    return {lhs, rhs};
}

StabilitySides stability_sides(const RadialProfile& u, const RadialProfile& v, double mu) {
    const double nu = nl_norm(u, mu);
    const double nv = nl_norm(v, mu);
    if (std::fabs(nu - nv) > 1e-8 * std::max(nu, 1e-300)) {
        throw ValidationError("stability_sides: ||v||_NL must match ||u||_NL within 1e-8 relative");
    }
    StabilitySides out;
    const RadialProfile diff = axpy(1.0, u, -1.0, v);
    out.lhs = grad_norm_sq(diff);
    out.deficit = deficit(u, mu).deficit;
    out.nlprod = nu * nl_norm(diff, mu);
    return out;
}

}  // namespace choquard
