// SPDX-License-Identifier: Apache-2.0
//
// Riesz potentials of radial profiles, the symmetric double integral
// underlying the nonlocal norm, and the two-center interaction integral
// for bubble pairs with distinct centers.
#pragma once

#include "choquard/bubbles.hpp"
#include "choquard/grid.hpp"

namespace choquard {

/// (|x|^{-mu} * f)(r) per angular sector l, on f's grid; output tails fitted.
RadialProfile riesz_potential(const RadialProfile& f, double mu, int l = 0);

/// int int f(x) g(y) |x-y|^{-mu} dx dy, evaluated in the symmetrized form
/// |S^{N-1}|/2 * [ int (I_mu f) g r^{N-1} dr + int (I_mu g) f r^{N-1} dr ].
double double_integral(const RadialProfile& f, const RadialProfile& g, double mu);

/// Self-check of the closed-form potential of the critical bubble power:
/// max over grid nodes with r in [1e-2, 1e2] of the relative difference
/// between the quadrature I_mu(W^{2*_mu}) and Qt * W^{2* - 2*_mu}.
double riesz_identity_error(const GridPtr& grid, const Bubble& b);

/// int W[b1]^p W[b2]^q dx for p, q >= 0 with p + q = 2*. Coincident centers
/// reduce to an exact radial quadrature; distinct centers use a tensor
/// Gauss rule in cylindrical coordinates (log-stretched toward both cores).
double two_center_integral(double p, double q, const Bubble& b1, const Bubble& b2);

}  // namespace choquard
