// SPDX-License-Identifier: Apache-2.0
//
// The variational objects of the inequality: nonlocal (Coulomb) norm,
// deficit, Euler-Lagrange residual, energy, the Clarkson/parallelogram
// check, and the three quantities of the gradient-stability bound.
#pragma once

#include <utility>

#include "choquard/constants.hpp"
#include "choquard/grid.hpp"

namespace choquard {

/// Everything the deficit evaluation produces for one profile.
struct DeficitReport {
    double grad_sq;      // ||grad u||^2
    double nl_integral;  // double integral of |u|^{2*_mu} against the kernel
    double nl_norm;      // nl_integral^{1/(2 * 2*_mu)}
    double deficit;      // grad_sq - S_hl * nl_integral^{1/2*_mu}
    SharpConstants constants;
};

/// Coulomb norm ||u||_NL = (int int |u|^{2*_mu}(x) |u|^{2*_mu}(y) |x-y|^{-mu})^{1/(2 2*_mu)}.
double nl_norm(const RadialProfile& u, double mu);

/// Deficit report; the inequality itself guarantees deficit >= 0 up to
/// quadrature error (the experiments assert >= -1e-6 relative).
DeficitReport deficit(const RadialProfile& u, double mu);

/// Euler-Lagrange residual Delta u + (|x|^{-mu} * |u|^{2*_mu}) |u|^{2*_mu - 2} u,
/// with output tails fitted (and used by the Poisson solve in dual_norm).
RadialProfile el_residual(const RadialProfile& u, double mu);

/// Energy E0(u) = 1/2 ||grad u||^2 - 1/(2 * 2*_mu) * nl_integral.
double energy(const RadialProfile& u, double mu);

/// Parallelogram/Clarkson pair for the gradient fields X = grad u, Y = grad v:
/// lhs = ||(X+Y)/2||^2 + ||(X-Y)/2||^2, rhs = (||X||^2 + ||Y||^2)/2.
/// In L^2 these agree; the inequality lhs <= rhs is its sharp form.
std::pair<double, double> clarkson_check(const RadialProfile& u, const RadialProfile& v);

/// The three measured sides of the gradient-stability bound.
struct StabilitySides {
    double lhs;      // ||grad(u - v)||^2
    double deficit;  // deficit of u
    double nlprod;   // ||u||_NL * ||u - v||_NL
};

/// Requires ||v||_NL = ||u||_NL within 1e-8 relative (use match_nl_norm).
StabilitySides stability_sides(const RadialProfile& u, const RadialProfile& v, double mu);

}  // namespace choquard
