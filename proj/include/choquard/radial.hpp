// SPDX-License-Identifier: Apache-2.0
//
// Radial calculus on the log grid: finite differences, weighted quadrature
// with analytic tail corrections, gradient norms, Lp norms, the radial
// Poisson solve and the dual (negative-order) norm it induces.
//
// Conventions: integrals named *_rN1 are int f(r) r^{N-1} dr without the
// sphere-area factor; public norms include |S^{N-1}|.
#pragma once

#include <optional>
#include <vector>

#include "choquard/grid.hpp"

namespace choquard {

/// 4th-order first derivative with respect to t = log r (one-sided stencils
/// at the ends).
std::vector<double> diff_log(const std::vector<double>& f, double h);

/// 4th-order second derivative with respect to t = log r.
std::vector<double> diff2_log(const std::vector<double>& f, double h);

/// Trapezoid rule with uniform spacing h.
double trapezoid(const std::vector<double>& vals, double h);

/// int vals(r) r^{N-1} dr over (0, infinity): trapezoid in log r on the grid
/// plus analytic power-law tail corrections. Tails describe the integrand
/// itself. Throws NumericsError when a requested tail is non-integrable.
double weighted_integral(const RadialGrid& g, const std::vector<double>& vals,
                         const Tail& inner, const Tail& outer);

/// Least-squares power-law fit of the first (side=0) or last (side=1) 5% of
/// nodes. Returns an absent tail when the edge values sit at noise level or
/// change sign (the tail is then treated as zero).
Tail fit_tail(const RadialGrid& g, const std::vector<double>& vals, int side);

/// ||grad f||_{L^2(R^N)}^2 with tail corrections from the profile's powers.
double grad_norm_sq(const RadialProfile& f);

/// <grad f, grad g>_{L^2} for profiles on the same grid.
double dot_grad(const RadialProfile& f, const RadialProfile& g);

/// (|S^{N-1}| int |f|^p r^{N-1} dr)^{1/p}, p >= 1.
double lp_norm(const RadialProfile& f, double p);

/// d/dr on the grid (derivative in log r divided by r); tail powers shift
/// down by one.
RadialProfile radial_derivative(const RadialProfile& f);

/// Laplacian of a radial function in conservative form,
/// e^{-Nt} d/dt( e^{(N-2)t} df/dt ).
RadialProfile laplacian(const RadialProfile& f);

/// Solves -Delta phi = q radially with phi -> 0 at infinity:
/// phi'(r) = -r^{1-N} int_0^r q s^{N-1} ds. Returns phi (tails fitted).
RadialProfile poisson_solve(const RadialProfile& q);

/// ||q||_{(D^{1,2})^{-1}} = ||grad phi||_{L^2} where -Delta phi = q,
/// evaluated as (|S^{N-1}| int phi q r^{N-1} dr)^{1/2}.
double dual_norm(const RadialProfile& q);

/// Dual norm in the angular sector l >= 1 (vector spherical harmonics):
/// solves the sector ODE -phi'' - (N-1)/r phi' + l(l+N-2)/r^2 phi = q with
/// the sector Green kernel and returns (|S^{N-1}| int phi q r^{N-1} dr)^{1/2}.
double dual_norm_sector(const RadialProfile& q, int l);

/// a*x + b*y nodewise on a shared grid. Tail rule: absent only if both are
/// absent; one present wins; both present combine as inner min / outer max
/// (the branch that dominates toward that end), with the amplitude tied to
/// the combined edge value as for any profile.
RadialProfile axpy(double a, const RadialProfile& x, double b, const RadialProfile& y);

/// a*x nodewise (tails unchanged).
RadialProfile scale(double a, const RadialProfile& x);

}  // namespace choquard
