// SPDX-License-Identifier: Apache-2.0

#include "choquard/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "choquard/constants.hpp"
#include "choquard/errors.hpp"

namespace choquard {

namespace {

// Cumulative trapezoid with uniform spacing h; c[0] = 0.
std::vector<double> cum_trapezoid(const std::vector<double>& vals, double h) {
    std::vector<double> c(vals.size(), 0.0);
    for (size_t i = 1; i < vals.size(); ++i) {
        c[i] = c[i - 1] + 0.5 * (vals[i] + vals[i - 1]) * h;
    }
    return c;
}

}  // namespace

std::vector<double> diff_log(const std::vector<double>& f, double h) {
    const int n = static_cast<int>(f.size());
    if (n < 6) throw ValidationError("diff_log: need at least 6 nodes");
    std::vector<double> d(n);
    for (int i = 2; i < n - 2; ++i) {
        d[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    }
    d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
    d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] + 3.0 * f[n - 5]) / (12.0 * h);
    d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] - f[n - 5]) / (12.0 * h);
    return d;
}

std::vector<double> diff2_log(const std::vector<double>& f, double h) {
    const int n = static_cast<int>(f.size());
    if (n < 6) throw ValidationError("diff2_log: need at least 6 nodes");
    std::vector<double> d(n);
    const double h2 = h * h;
    for (int i = 2; i < n - 2; ++i) {
        d[i] = (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h2);
    }
    d[0] = (45.0 * f[0] - 154.0 * f[1] + 214.0 * f[2] - 156.0 * f[3] + 61.0 * f[4] - 10.0 * f[5]) / (12.0 * h2);
    d[1] = (10.0 * f[0] - 15.0 * f[1] - 4.0 * f[2] + 14.0 * f[3] - 6.0 * f[4] + f[5]) / (12.0 * h2);
    d[n - 1] =
        (45.0 * f[n - 1] - 154.0 * f[n - 2] + 214.0 * f[n - 3] - 156.0 * f[n - 4] + 61.0 * f[n - 5] - 10.0 * f[n - 6]) /
        (12.0 * h2);
    d[n - 2] =
        (10.0 * f[n - 1] - 15.0 * f[n - 2] - 4.0 * f[n - 3] + 14.0 * f[n - 4] - 6.0 * f[n - 5] + f[n - 6]) /
        (12.0 * h2);
    return d;
}

double trapezoid(const std::vector<double>& vals, double h) {
    double s = 0.5 * (vals.front() + vals.back());
    for (size_t i = 1; i + 1 < vals.size(); ++i) s += vals[i];
    return s * h;
}

double weighted_integral(const RadialGrid& g, const std::vector<double>& vals,
                         const Tail& inner, const Tail& outer) {
    const int N = g.dim();
    std::vector<double> integ(vals.size());
    for (int i = 0; i < g.n(); ++i) integ[i] = vals[i] * std::pow(g.r()[i], N);
    double total = trapezoid(integ, g.h());
    if (inner.present) {
        if (N + inner.power <= 0.0) throw NumericsError("weighted_integral: inner tail not integrable");
        total += vals.front() * std::pow(g.r_min(), N) / (N + inner.power);
    }
    if (outer.present) {
        if (N + outer.power >= 0.0) throw NumericsError("weighted_integral: outer tail not integrable");
        total -= vals.back() * std::pow(g.r_max(), N) / (N + outer.power);
    }
    return total;
}

Tail fit_tail(const RadialGrid& g, const std::vector<double>& vals, int side) {
    const int n = g.n();
    const int m = std::max(n / 20, 8);
    const int lo = (side == 0) ? 0 : n - m;
    double vmax_all = 0.0;
    for (double v : vals) vmax_all = std::max(vmax_all, std::fabs(v));
    double vmax = 0.0, vmin = std::numeric_limits<double>::infinity();
    bool pos = false, neg = false;
    for (int i = lo; i < lo + m; ++i) {
        const double a = std::fabs(vals[i]);
        vmax = std::max(vmax, a);
        vmin = std::min(vmin, a);
        if (vals[i] > 0) pos = true;
        if (vals[i] < 0) neg = true;
    }
    if (vmax < 1e-13 * vmax_all || vmin < 1e-250 || (pos && neg)) return Tail::none();
    // least squares slope of log|v| against t
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = lo; i < lo + m; ++i) {
        const double x = g.t()[i];
        const double y = std::log(std::fabs(vals[i]));
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    return Tail{slope, true};
}

double grad_norm_sq(const RadialProfile& f) {
    const RadialGrid& g = f.grid();
    const int N = g.dim();
    const std::vector<double> ft = diff_log(f.values(), g.h());
    std::vector<double> integ(g.n());
    for (int i = 0; i < g.n(); ++i) integ[i] = ft[i] * ft[i] * std::exp((N - 2) * g.t()[i]);
    double total = trapezoid(integ, g.h());
    if (f.inner().present && f.inner().power != 0.0) {
        const double p = f.inner().power;
        if (2 * p + N - 2 <= 0.0) throw NumericsError("grad_norm_sq: inner tail gradient not integrable");
        total += p * p * f.first() * f.first() * std::pow(g.r_min(), N - 2) / (2 * p + N - 2);
    }
    if (f.outer().present && f.outer().power != 0.0) {
        const double p = f.outer().power;
        if (2 * p + N - 2 >= 0.0) throw NumericsError("grad_norm_sq: outer tail gradient not integrable");
        total -= p * p * f.last() * f.last() * std::pow(g.r_max(), N - 2) / (2 * p + N - 2);
    }
    return sphere_area(N) * total;
}

double dot_grad(const RadialProfile& f, const RadialProfile& g) {
    const RadialGrid& gr = f.grid();
    if (!gr.same_layout(g.grid())) throw ValidationError("dot_grad: profiles on different grids");
    const int N = gr.dim();
    const std::vector<double> ft = diff_log(f.values(), gr.h());
    const std::vector<double> gt = diff_log(g.values(), gr.h());
    std::vector<double> integ(gr.n());
    for (int i = 0; i < gr.n(); ++i) integ[i] = ft[i] * gt[i] * std::exp((N - 2) * gr.t()[i]);
    double total = trapezoid(integ, gr.h());
    if (f.inner().present && g.inner().present) {
        const double pf = f.inner().power, pg = g.inner().power;
        if (pf != 0.0 && pg != 0.0) {
            if (pf + pg + N - 2 <= 0.0) throw NumericsError("dot_grad: inner tail not integrable");
            total += pf * pg * f.first() * g.first() * std::pow(gr.r_min(), N - 2) / (pf + pg + N - 2);
        }
    }
    if (f.outer().present && g.outer().present) {
        const double pf = f.outer().power, pg = g.outer().power;
        if (pf != 0.0 && pg != 0.0) {
            if (pf + pg + N - 2 >= 0.0) throw NumericsError("dot_grad: outer tail not integrable");
            total -= pf * pg * f.last() * g.last() * std::pow(gr.r_max(), N - 2) / (pf + pg + N - 2);
        }
    }
    return sphere_area(N) * total;
}

double lp_norm(const RadialProfile& f, double p) {
    if (!(p >= 1.0)) throw ValidationError("lp_norm: p >= 1 required");
    const RadialGrid& g = f.grid();
    std::vector<double> vp(g.n());
    for (int i = 0; i < g.n(); ++i) vp[i] = std::pow(std::fabs(f.values()[i]), p);
    const double integral =
        weighted_integral(g, vp, tail_pow(f.inner(), p), tail_pow(f.outer(), p));
    return std::pow(sphere_area(g.dim()) * integral, 1.0 / p);
}

RadialProfile radial_derivative(const RadialProfile& f) {
    const RadialGrid& g = f.grid();
    std::vector<double> d = diff_log(f.values(), g.h());
    for (int i = 0; i < g.n(); ++i) d[i] /= g.r()[i];
    Tail in = f.inner(), out = f.outer();
    in.power -= 1.0;
    out.power -= 1.0;
    return RadialProfile(f.grid_ptr(), std::move(d), in, out);
}

RadialProfile laplacian(const RadialProfile& f) {
    const RadialGrid& g = f.grid();
    const int N = g.dim();
    // conservative form: e^{-Nt} d/dt ( e^{(N-2)t} df/dt )
    std::vector<double> w = diff_log(f.values(), g.h());
    for (int i = 0; i < g.n(); ++i) w[i] *= std::exp((N - 2) * g.t()[i]);
    std::vector<double> z = diff_log(w, g.h());
    for (int i = 0; i < g.n(); ++i) z[i] *= std::exp(-N * g.t()[i]);
    Tail in = f.inner(), out = f.outer();
    in.power -= 2.0;
    out.power -= 2.0;
    return RadialProfile(f.grid_ptr(), std::move(z), in, out);
}

RadialProfile poisson_solve(const RadialProfile& q) {
    const RadialGrid& g = q.grid();
    const int N = g.dim();
    const auto& v = q.values();

    double m_in = 0.0;
    if (q.inner().present) {
        if (N + q.inner().power <= 0.0) throw NumericsError("poisson_solve: inner source tail not integrable");
        m_in = v.front() * std::pow(g.r_min(), N) / (N + q.inner().power);
    }
    std::vector<double> integ(g.n());
    for (int i = 0; i < g.n(); ++i) integ[i] = v[i] * std::exp(N * g.t()[i]);
    std::vector<double> m = cum_trapezoid(integ, g.h());
    for (double& x : m) x += m_in;

    double phi_max;
    if (q.outer().present) {
        const double p = q.outer().power;
        if (p + 2.0 >= 0.0) throw NumericsError("poisson_solve: source tail too heavy for a decaying potential");
        // Continue the source past r_max analytically: the potential at r_max
        // is M0 r^{2-N}/(N-2) - M1 r^{p+2}/(p+2) with the split below.
        const double M0 = m.back() - v.back() * std::pow(g.r_max(), N) / (N + p);
        const double M1 = v.back() * std::pow(g.r_max(), -p) / (N + p);
        phi_max = M0 * std::pow(g.r_max(), 2.0 - N) / (N - 2.0) -
                  M1 * std::pow(g.r_max(), p + 2.0) / (p + 2.0);
    } else {
        phi_max = m.back() * std::pow(g.r_max(), 2.0 - N) / (N - 2.0);
    }

    std::vector<double> inner_int(g.n());
    for (int i = 0; i < g.n(); ++i) inner_int[i] = m[i] * std::exp((2 - N) * g.t()[i]);
    std::vector<double> I = cum_trapezoid(inner_int, g.h());
    std::vector<double> phi(g.n());
    for (int i = 0; i < g.n(); ++i) phi[i] = phi_max + (I.back() - I[i]);

    RadialProfile out(q.grid_ptr(), std::move(phi), Tail{0.0, true}, Tail{2.0 - N, true});
    out.set_inner(fit_tail(g, out.values(), 0));
    out.set_outer(fit_tail(g, out.values(), 1));
    // Physical expectation: phi flattens at the origin and decays at the far
    // end; keep fitted powers only if they refine that picture.
    if (!out.inner().present) out.set_inner(Tail{0.0, true});
    return out;
}

double dual_norm(const RadialProfile& q) {
    const RadialGrid& g = q.grid();
    const int N = g.dim();
    const auto& v = q.values();
    const RadialProfile phi = poisson_solve(q);

    std::vector<double> integ(g.n());
    for (int i = 0; i < g.n(); ++i) integ[i] = phi.values()[i] * v[i] * std::exp(N * g.t()[i]);
    double total = trapezoid(integ, g.h());

    if (q.inner().present) {
        total += phi.first() * v.front() * std::pow(g.r_min(), N) / (N + q.inner().power);
    }
    if (q.outer().present) {
        // Tail of int phi q r^{N-1}: phi ~ M0 r^{2-N}/(N-2) - M1 r^{p+2}/(p+2),
        // q ~ qn r^p beyond r_max.
        const double p = q.outer().power;
        double m_in = 0.0;
        if (q.inner().present) m_in = v.front() * std::pow(g.r_min(), N) / (N + q.inner().power);
        std::vector<double> mi(g.n());
        for (int i = 0; i < g.n(); ++i) mi[i] = v[i] * std::exp(N * g.t()[i]);
        std::vector<double> m = cum_trapezoid(mi, g.h());
        const double mtot = m.back() + m_in;
        const double M0 = mtot - v.back() * std::pow(g.r_max(), N) / (N + p);
        const double M1 = v.back() * std::pow(g.r_max(), -p) / (N + p);
        const double qn = v.back() * std::pow(g.r_max(), -p);
        total -= (M0 / (N - 2.0) * qn) * std::pow(g.r_max(), p + 2.0) / (p + 2.0);
        if (2.0 * p + 2.0 + N < 0.0) {
            total += (M1 / (p + 2.0) * qn) * std::pow(g.r_max(), 2.0 * p + 2.0 + N) / (2.0 * p + 2.0 + N);
        }
    }
    return std::sqrt(std::max(sphere_area(N) * total, 0.0));
}

double dual_norm_sector(const RadialProfile& q, int l) {
    if (l < 1) throw ValidationError("dual_norm_sector: sector l >= 1 required (use dual_norm for l=0)");
    const RadialGrid& g = q.grid();
    const int N = g.dim();
    const auto& v = q.values();
    const double wronskian = 2.0 * l + N - 2.0;

    // m1(r) = int_0^r q s^{l+N-1} ds
    double m1_in = 0.0;
    if (q.inner().present) {
        if (l + N + q.inner().power <= 0.0) throw NumericsError("dual_norm_sector: inner source tail not integrable");
        m1_in = v.front() * std::pow(g.r_min(), l + N) / (l + N + q.inner().power);
    }
    std::vector<double> i1(g.n());
    for (int i = 0; i < g.n(); ++i) i1[i] = v[i] * std::exp((l + N) * g.t()[i]);
    std::vector<double> m1 = cum_trapezoid(i1, g.h());
    for (double& x : m1) x += m1_in;

    // m2(r) = int_r^inf q s^{1-l} ds
    std::vector<double> i2(g.n());
    for (int i = 0; i < g.n(); ++i) i2[i] = v[i] * std::exp((2 - l) * g.t()[i]);
    std::vector<double> T = cum_trapezoid(i2, g.h());
    double m2_out = 0.0;
    if (q.outer().present) {
        const double p = q.outer().power;
        if (p + 2.0 - l >= 0.0) throw NumericsError("dual_norm_sector: outer source tail too heavy");
        m2_out = -v.back() * std::pow(g.r_max(), 2.0 - l) / (p + 2.0 - l);
    }
    std::vector<double> phi(g.n());
    for (int i = 0; i < g.n(); ++i) {
        const double m2 = (T.back() - T[i]) + m2_out;
        phi[i] = (m1[i] * std::pow(g.r()[i], -(l + N - 2.0)) + m2 * std::pow(g.r()[i], l)) / wronskian;
    }

    std::vector<double> integ(g.n());
    for (int i = 0; i < g.n(); ++i) integ[i] = phi[i] * v[i] * std::exp(N * g.t()[i]);
    double total = trapezoid(integ, g.h());
    if (q.inner().present) {
        // phi ~ phi(r_min) (r/r_min)^l near the origin (regular branch)
        const double p = q.inner().power;
        total += phi.front() * v.front() * std::pow(g.r_min(), N) / (N + p + l);
    }
    if (q.outer().present) {
        // phi ~ amp * r^{-(l+N-2)} in the far field, q ~ q_n (r/r_max)^p, so the
        // missing piece of int phi q r^{N-1} dr is amp * q_n * r_max^{2-l}/(l-2-p).
        const double p = q.outer().power;
        const double m1_tot = m1.back() - v.back() * std::pow(g.r_max(), l + N) / (l + N + p);
        const double amp = m1_tot / wronskian;
        total += amp * v.back() * std::pow(g.r_max(), 2.0 - l) / (l - 2.0 - p);
    }
    return std::sqrt(std::max(sphere_area(N) * total, 0.0));
}

RadialProfile axpy(double a, const RadialProfile& x, double b, const RadialProfile& y) {
    const RadialGrid& g = x.grid();
    if (!g.same_layout(y.grid())) throw ValidationError("axpy: profiles on different grids");
    std::vector<double> v(g.n());
    for (int i = 0; i < g.n(); ++i) v[i] = a * x.values()[i] + b * y.values()[i];
    auto combine = [](const Tail& s, const Tail& t, bool outer) {
        if (!s.present && !t.present) return Tail::none();
        if (!s.present) return t;
        if (!t.present) return s;
        return Tail{outer ? std::max(s.power, t.power) : std::min(s.power, t.power), true};
    };
    return RadialProfile(x.grid_ptr(), std::move(v),
                         combine(x.inner(), y.inner(), false),
                         combine(x.outer(), y.outer(), true));
}

RadialProfile scale(double a, const RadialProfile& x) {
    std::vector<double> v(x.values());
    for (double& t : v) t *= a;
    return RadialProfile(x.grid_ptr(), std::move(v), x.inner(), x.outer());
}

}  // namespace choquard
