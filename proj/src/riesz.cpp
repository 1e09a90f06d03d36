// SPDX-License-Identifier: Apache-2.0

#include "choquard/riesz.hpp"

#include <algorithm>
#include <cmath>

#include "choquard/constants.hpp"
#include "choquard/errors.hpp"
#include "choquard/gauss.hpp"
#include "choquard/kernel.hpp"
#include "choquard/radial.hpp"

namespace choquard {

RadialProfile riesz_potential(const RadialProfile& f, double mu, int l) {
    return get_kernel(f.grid_ptr(), mu, l)->apply(f);
}

double double_integral(const RadialProfile& f, const RadialProfile& g, double mu) {
    const RadialGrid& gr = f.grid();
    if (!gr.same_layout(g.grid())) throw ValidationError("double_integral: profiles on different grids");
    auto kern = get_kernel(f.grid_ptr(), mu, 0);
    const std::vector<double> Pf = kern->apply_values(f.values(), f.inner(), f.outer());
    const std::vector<double> Pg = kern->apply_values(g.values(), g.inner(), g.outer());
    const Tail pf_in = fit_tail(gr, Pf, 0), pf_out = fit_tail(gr, Pf, 1);
    const Tail pg_in = fit_tail(gr, Pg, 0), pg_out = fit_tail(gr, Pg, 1);
    std::vector<double> prod1(gr.n()), prod2(gr.n());
    for (int i = 0; i < gr.n(); ++i) {
        prod1[i] = Pf[i] * g.values()[i];
        prod2[i] = Pg[i] * f.values()[i];
    }
    const double v1 = weighted_integral(gr, prod1, tail_mul(pf_in, g.inner()), tail_mul(pf_out, g.outer()));
    const double v2 = weighted_integral(gr, prod2, tail_mul(pg_in, f.inner()), tail_mul(pg_out, f.outer()));
    return sphere_area(gr.dim()) * 0.5 * (v1 + v2);
}

namespace {

double concentric_integral(double p, double q, const Bubble& b1, const Bubble& b2) {
    const int N = b1.dim;
    // Dedicated fine log grid spanning both cores with analytic tails.
    const double rlo = 1e-7 * std::min(1.0 / b1.lambda, 1.0 / b2.lambda);
    const double rhi = 1e7 * std::max(1.0 / b1.lambda, 1.0 / b2.lambda);
    const int n = 4096;
    RadialGrid g(N, n, rlo, rhi);
    std::vector<double> vals(n);
    for (int i = 0; i < n; ++i) {
        vals[i] = std::pow(eval_W(b1, g.r()[i]), p) * std::pow(eval_W(b2, g.r()[i]), q);
    }
    const Tail inner{0.0, true};
    const Tail outer{(2.0 - N) * (p + q), true};
    return sphere_area(N) * weighted_integral(g, vals, inner, outer);
}

double cylindrical_integral(double p, double q, const Bubble& b1, const Bubble& b2, double d) {
    const int N = b1.dim;
    const double core = std::min(1.0 / b1.lambda, 1.0 / b2.lambda);
    const double big = std::max({1.0 / b1.lambda, 1.0 / b2.lambda, d});

    const int ns = 400;
    const int nz = 133;
    const auto [xs, ws] = gauss_legendre(ns);
    const auto [xz, wz] = gauss_legendre(nz);

    // Transverse radius rho = e^s.
    const double smin = std::log(1e-7 * std::min(core, d));
    const double smax = std::log(1e5 * big);
    std::vector<double> rho(ns), wrho(ns);
    for (int i = 0; i < ns; ++i) {
        const double s = 0.5 * (smin + smax) + 0.5 * (smax - smin) * xs[i];
        rho[i] = std::exp(s);
        wrho[i] = 0.5 * (smax - smin) * ws[i] * std::exp((N - 1) * s);
    }

    // Axial panels, log-stretched toward each core along the center axis.
    std::vector<double> z, wzv;
    auto add_log_panel = [&](double tmin, double tmax, double origin, double sign) {
        if (!(tmax > tmin)) return;
        for (int i = 0; i < nz; ++i) {
            const double t = 0.5 * (tmin + tmax) + 0.5 * (tmax - tmin) * xz[i];
            z.push_back(origin + sign * std::exp(t));
            wzv.push_back(0.5 * (tmax - tmin) * wz[i] * std::exp(t));
        }
    };
    const double tmin = std::log(1e-7 * core);
    const double tmax = std::log(1e5 * big);
    add_log_panel(tmin, tmax, 0.0, -1.0);  // z < 0
    add_log_panel(tmin, tmax, d, +1.0);    // z > d
    add_log_panel(tmin, std::log(0.5 * d), 0.0, +1.0);  // (0, d/2)
    add_log_panel(tmin, std::log(0.5 * d), d, -1.0);    // (d/2, d)

    const double beta1 = p;
    const double beta2 = q;
    double total = 0.0;
    for (size_t iz = 0; iz < z.size(); ++iz) {
        const double zz = z[iz];
        double row = 0.0;
        for (int is = 0; is < ns; ++is) {
            const double r1 = std::sqrt(zz * zz + rho[is] * rho[is]);
            const double r2 = std::sqrt((zz - d) * (zz - d) + rho[is] * rho[is]);
            row += wrho[is] * std::pow(eval_W(b1, r1), beta1) * std::pow(eval_W(b2, r2), beta2);
        }
        total += wzv[iz] * row;
    }
    return sphere_area_sub(N) * total;
}

}  // namespace

double riesz_identity_error(const GridPtr& grid, const Bubble& b) {
    if (!grid || grid->dim() != b.dim) {
        throw ValidationError("riesz_identity_error: grid dimension mismatch");
    }
    const double tsm = two_star_mu(b.dim, b.mu);
    const RadialProfile crit = bubble_power_profile(grid, b, tsm);
    const RadialProfile quad = riesz_potential(crit, b.mu);
    const RadialProfile exact = exact_riesz_of_bubble(grid, b);
    double worst = 0.0;
    for (int i = 0; i < grid->n(); ++i) {
        const double r = grid->r()[static_cast<size_t>(i)];
        if (r < 1e-2 || r > 1e2) continue;
        const double e = exact.values()[static_cast<size_t>(i)];
        worst = std::max(worst, std::fabs(quad.values()[static_cast<size_t>(i)] / e - 1.0));
    }
    return worst;
}

double two_center_integral(double p, double q, const Bubble& b1, const Bubble& b2) {
    if (b1.dim != b2.dim || b1.mu != b2.mu) {
        throw ValidationError("two_center_integral: bubbles must share (N, mu)");
    }
    if (!(p >= 0.0) || !(q >= 0.0)) throw ValidationError("two_center_integral: p, q >= 0 required");
    const double ts = two_star(b1.dim);
    if (std::fabs(p + q - ts) > 1e-12) {
        throw ValidationError("two_center_integral: p + q must equal the critical exponent 2N/(N-2)");
    }
    double d2 = 0.0;
    {
        const size_t n = std::max(b1.xi.size(), b2.xi.size());
        for (size_t i = 0; i < n; ++i) {
            const double a = i < b1.xi.size() ? b1.xi[i] : 0.0;
            const double b = i < b2.xi.size() ? b2.xi[i] : 0.0;
            d2 += (a - b) * (a - b);
        }
    }
    const double d = std::sqrt(d2);
    // Separations far below both core scales are numerically concentric.
    if (d < 1e-6 * std::min(1.0 / b1.lambda, 1.0 / b2.lambda)) {
        return concentric_integral(p, q, b1, b2);
    }
    return cylindrical_integral(p, q, b1, b2, d);
}

}  // namespace choquard
