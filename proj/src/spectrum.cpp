// SPDX-License-Identifier: Apache-2.0
#include "choquard/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "choquard/constants.hpp"
#include "choquard/errors.hpp"
#include "choquard/kernel.hpp"
#include "choquard/radial.hpp"

namespace choquard {

namespace {

// Rows of the fourth-order log-derivative stencil, matching diff_log.
// row i of D has entries cols[j] -> coef[j] / h.
struct StencilRow {
    int cols[5];
    double coef[5];
};

std::vector<StencilRow> derivative_rows(int n, double h) {
    static const double c0[5] = {-25.0 / 12, 48.0 / 12, -36.0 / 12, 16.0 / 12,
                                 -3.0 / 12};
    static const double c1[5] = {-3.0 / 12, -10.0 / 12, 18.0 / 12, -6.0 / 12,
                                 1.0 / 12};
    static const double ci[5] = {1.0 / 12, -8.0 / 12, 0.0, 8.0 / 12,
                                 -1.0 / 12};
    std::vector<StencilRow> rows(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        StencilRow& row = rows[static_cast<std::size_t>(i)];
        if (i == 0 || i == 1) {
            const double* c = (i == 0) ? c0 : c1;
            for (int j = 0; j < 5; ++j) {
                row.cols[j] = j;
                row.coef[j] = c[j] / h;
            }
        } else if (i == n - 2 || i == n - 1) {
            const double* c = (i == n - 1) ? c0 : c1;
            for (int j = 0; j < 5; ++j) {
                row.cols[j] = n - 1 - j;
                row.coef[j] = -c[j] / h;
            }
        } else {
            for (int j = 0; j < 5; ++j) {
                row.cols[j] = i - 2 + j;
                row.coef[j] = ci[j] / h;
            }
        }
    }
    return rows;
}

std::vector<double> trapezoid_weights(int n, double h) {
    std::vector<double> tw(static_cast<std::size_t>(n), h);
    tw.front() = 0.5 * h;
    tw.back() = 0.5 * h;
    return tw;
}

}  // namespace

SectorOperator assemble(const GridPtr& grid, const Bubble& b, int l) {
    if (!grid) throw ValidationError("assemble: null grid");
    if (grid->dim() != b.dim)
        throw ValidationError("assemble: grid and bubble dimension mismatch");
    if (!b.concentric())
        throw ValidationError("assemble: bubble must be centered");
    if (l < 0) throw ValidationError("assemble: sector index must be >= 0");
    const int N = b.dim;
    if (!(b.mu < std::min(4.0, static_cast<double>(N))))
        throw ValidationError("assemble: requires mu < min(4, N)");

    const int n = grid->n();
    const double h = grid->h();
    const double ts = two_star(N);
    const double tsm = two_star_mu(N, b.mu);
    const double qt = riesz_prefactor(N, b.mu);

    std::vector<double> W(static_cast<std::size_t>(n));
    std::vector<double> a(static_cast<std::size_t>(n));
    std::vector<double> V(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double w = eval_W(b, grid->r()[static_cast<std::size_t>(i)]);
        W[static_cast<std::size_t>(i)] = w;
        a[static_cast<std::size_t>(i)] = std::pow(w, tsm - 1.0);
        V[static_cast<std::size_t>(i)] = qt * std::pow(w, ts - 2.0);
    }

    const std::vector<double> tw = trapezoid_weights(n, h);
    std::vector<double> eNm2(static_cast<std::size_t>(n));
    std::vector<double> eN(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        eNm2[static_cast<std::size_t>(i)] =
            std::exp((N - 2.0) * grid->t()[static_cast<std::size_t>(i)]);
        eN[static_cast<std::size_t>(i)] =
            std::exp(static_cast<double>(N) * grid->t()[static_cast<std::size_t>(i)]);
    }

    // A = D^T diag(tw e^{(N-2)t}) D  (+ centrifugal)  + diag(tw V e^{Nt}).
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    const std::vector<StencilRow> rows = derivative_rows(n, h);
    for (int i = 0; i < n; ++i) {
        const double m = tw[static_cast<std::size_t>(i)] *
                         eNm2[static_cast<std::size_t>(i)];
        const StencilRow& row = rows[static_cast<std::size_t>(i)];
        for (int p = 0; p < 5; ++p) {
            if (row.coef[p] == 0.0) continue;
            const double mp = m * row.coef[p];
            for (int q = 0; q < 5; ++q) {
                if (row.coef[q] == 0.0) continue;
                A(row.cols[p], row.cols[q]) += mp * row.coef[q];
            }
        }
    }
    const double cent = static_cast<double>(l) * (l + N - 2.0);
    for (int i = 0; i < n; ++i) {
        const double mv = tw[static_cast<std::size_t>(i)] *
                          V[static_cast<std::size_t>(i)] *
                          eN[static_cast<std::size_t>(i)];
        A(i, i) += mv;
        if (l > 0)
            A(i, i) += cent * tw[static_cast<std::size_t>(i)] *
                       eNm2[static_cast<std::size_t>(i)];
    }
    A = 0.5 * (A + A.transpose()).eval();

    // B = sym(diag(tw e^{Nt} a) K diag(a)) + diag(tw V e^{Nt}), where
    // K[i][j] quadratures the sector-l Riesz kernel row at r_i.
    const auto ker = get_kernel(grid, b.mu, l);
    const std::vector<double>& w = ker->weights();
    const int off0 = ker->off0();
    const int wlen = static_cast<int>(w.size());
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double ci = tw[static_cast<std::size_t>(i)] *
                          eN[static_cast<std::size_t>(i)] *
                          a[static_cast<std::size_t>(i)] *
                          std::pow(grid->r()[static_cast<std::size_t>(i)],
                                   static_cast<double>(N) - b.mu);
        for (int j = 0; j < n; ++j) {
            const int s = (j - i) + off0;
            if (s < 0 || s >= wlen) continue;
            B(i, j) += ci * w[static_cast<std::size_t>(s)] *
                       a[static_cast<std::size_t>(j)];
        }
    }
    B = 0.5 * (B + B.transpose()).eval();
    for (int i = 0; i < n; ++i)
        B(i, i) += tw[static_cast<std::size_t>(i)] *
                   V[static_cast<std::size_t>(i)] *
                   eN[static_cast<std::size_t>(i)];

    return SectorOperator{grid, b, l, std::move(A), std::move(B)};
}

double rayleigh_quotient(const SectorOperator& op, const RadialProfile& omega) {
    if (!omega.grid().same_layout(*op.grid))
        throw ValidationError("rayleigh_quotient: grid mismatch");
    const int n = op.grid->n();
    Eigen::Map<const Eigen::VectorXd> v(omega.values().data(), n);
    const double den = v.dot(op.B * v);
    if (den == 0.0)
        throw NumericsError("rayleigh_quotient: zero B-norm");
    return v.dot(op.A * v) / den;
}

static std::vector<double> mid_interpolate(const std::vector<double>& v) {
    const std::size_t m = v.size();
    if (m < 4)
        throw ValidationError("mid_interpolate: need at least 4 nodes");
    std::vector<double> out(2 * m - 1);
    for (std::size_t i = 0; i < m; ++i) out[2 * i] = v[i];
    out[1] = (5.0 * v[0] + 15.0 * v[1] - 5.0 * v[2] + v[3]) / 16.0;
    out[2 * m - 3] =
        (5.0 * v[m - 1] + 15.0 * v[m - 2] - 5.0 * v[m - 3] + v[m - 4]) / 16.0;
    for (std::size_t i = 1; i + 2 < m; ++i)
        out[2 * i + 1] =
            (-v[i - 1] + 9.0 * v[i] + 9.0 * v[i + 1] - v[i + 2]) / 16.0;
    return out;
}

double roughness_measure(const std::vector<double>& omega) {
    const std::size_t n = omega.size();
    if (n < 9) throw ValidationError("roughness_measure: profile too short");
    std::vector<double> dec;
    dec.reserve((n + 1) / 2);
    for (std::size_t i = 0; i < n; i += 2) dec.push_back(omega[i]);
    const std::vector<double> rec = mid_interpolate(dec);
    const std::size_t m = std::min(rec.size(), n);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double d = omega[i] - rec[i];
        num += d * d;
    }
    for (std::size_t i = 0; i < n; ++i) den += omega[i] * omega[i];
    return std::sqrt(num / std::max(den, 1e-300));
}

SpectrumResult eigenpairs(const SectorOperator& op, int k) {
    if (k < 1 || k > 10)
        throw ValidationError("eigenpairs: k must be between 1 and 10");
    const int n = op.grid->n();
    const int i0 = (op.sector >= 1) ? 1 : 0;  // Dirichlet at r_min for l >= 1
    const int nr = (n - 1) - i0;              // Dirichlet at r_max always
    if (nr < 16) throw ValidationError("eigenpairs: grid too coarse");

    const Eigen::MatrixXd As = op.A.block(i0, i0, nr, nr);
    const Eigen::MatrixXd Bs = op.B.block(i0, i0, nr, nr);

    // Solve B x = eta A x with A positive definite; nu = 1/eta so the
    // largest eta give the low end of the spectrum.
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(Bs, As);
    if (es.info() != Eigen::Success)
        throw NumericsError("eigenpairs: generalized eigensolve failed");
    const Eigen::VectorXd eta = es.eigenvalues();
    const double eta_max = eta.cwiseAbs().maxCoeff();
    const double defl_tol = 1e-12 * eta_max;

    SpectrumResult res;
    res.sector = op.sector;
    res.filtered = 0;
    res.deflated = 0;
    const double rough_tol = 1e-2;
    for (int j = nr - 1; j >= 0 && static_cast<int>(res.eigenvalues.size()) < k;
         --j) {
        if (!(eta(j) > defl_tol)) {
            ++res.deflated;
            continue;
        }
        Eigen::VectorXd v = es.eigenvectors().col(j);
        std::vector<double> full(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < nr; ++i)
            full[static_cast<std::size_t>(i + i0)] = v(i);
        if (roughness_measure(full) > rough_tol) {
            ++res.filtered;
            continue;
        }
        const double bnorm = std::sqrt(v.dot(Bs * v));
        if (!(bnorm > 0.0)) {
            ++res.deflated;
            continue;
        }
        for (double& x : full) x /= bnorm;
        res.eigenvalues.push_back(1.0 / eta(j));
        res.eigenvectors.emplace_back(op.grid, std::move(full), Tail::none(),
                                      Tail::none());
    }
    return res;
}

double nondegeneracy_residual(const Bubble& b, const RadialProfile& phi,
                              int l) {
    if (phi.grid().dim() != b.dim)
        throw ValidationError("nondegeneracy_residual: dimension mismatch");
    if (!b.concentric())
        throw ValidationError("nondegeneracy_residual: bubble must be centered");
    if (l < 0)
        throw ValidationError("nondegeneracy_residual: sector must be >= 0");
    const GridPtr g = phi.grid_ptr();
    const int N = b.dim;
    const int n = g->n();
    const double ts = two_star(N);
    const double tsm = two_star_mu(N, b.mu);
    const double qt = riesz_prefactor(N, b.mu);
    const double sn1 = sphere_area(N);

    // Normalize in the sector gradient norm
    // |S^{N-1}| int (phi'^2 + l(l+N-2) phi^2 / r^2) r^{N-1} dr.
    const std::vector<double> dphi = diff_log(phi.values(), g->h());
    const double cent = static_cast<double>(l) * (l + N - 2.0);
    std::vector<double> gint(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t u = static_cast<std::size_t>(i);
        double val = dphi[u] * dphi[u];
        if (l > 0) val += cent * phi.values()[u] * phi.values()[u];
        gint[u] = val * std::exp((N - 2.0) * g->t()[u]);
    }
    const double gn = std::sqrt(sn1 * trapezoid(gint, g->h()));
    if (!(gn > 0.0))
        throw ValidationError("nondegeneracy_residual: zero profile");

    std::vector<double> W(static_cast<std::size_t>(n));
    std::vector<double> a(static_cast<std::size_t>(n));
    std::vector<double> V(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t u = static_cast<std::size_t>(i);
        const double w = eval_W(b, g->r()[u]);
        W[u] = w;
        a[u] = std::pow(w, tsm - 1.0);
        V[u] = qt * std::pow(w, ts - 2.0);
    }

    std::vector<double> f(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t u = static_cast<std::size_t>(i);
        f[u] = a[u] * phi.values()[u] / gn;
    }
    Tail fin = fit_tail(*g, f, 0);
    Tail fout = fit_tail(*g, f, 1);
    if (!fin.present) fin = Tail{0.0, true};
    if (!fout.present) fout = Tail{(2.0 - N) * tsm, true};
    const auto ker = get_kernel(g, b.mu, l);
    const std::vector<double> P = ker->apply_values(f, fin, fout);

    // res = -lap_l(phi) - 2*_mu P a - (2*_mu - 1) V phi, with phi scaled.
    const std::vector<double> d1 = diff_log(phi.values(), g->h());
    const std::vector<double> d2 = diff2_log(phi.values(), g->h());
    std::vector<double> resv(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const std::size_t u = static_cast<std::size_t>(i);
        const double e2t = std::exp(2.0 * g->t()[u]);
        double lap = (d2[u] + (N - 2.0) * d1[u]) / e2t / gn;
        if (l > 0) lap -= cent * (phi.values()[u] / gn) / e2t;
        resv[u] = -lap - tsm * P[u] * a[u] -
                  (tsm - 1.0) * V[u] * phi.values()[u] / gn;
    }
    Tail rin = fit_tail(*g, resv, 0);
    Tail rout = fit_tail(*g, resv, 1);
    RadialProfile res(g, std::move(resv), rin, rout);
    return (l == 0) ? dual_norm(res) : dual_norm_sector(res, l);
}

}  // namespace choquard
