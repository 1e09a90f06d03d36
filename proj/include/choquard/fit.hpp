// SPDX-License-Identifier: Apache-2.0
//
// Distance to the bubble manifolds: best single bubble c*W[0,lambda] and
// best concentric sum sum_i alpha_i W[0,lambda_i]. The coefficients are
// eliminated exactly (variable projection); scales are optimized by a
// damped Gauss-Newton iteration in log lambda with multistart.
#pragma once

#include <array>
#include <vector>

#include "choquard/bubbles.hpp"
#include "choquard/grid.hpp"

namespace choquard {

struct FitResult {
    BubbleFamily config;    // scales sorted ascending, coefficients aligned
    double distance;        // ||grad(u - sigma)||
    int iterations;         // Gauss-Newton iterations of the winning start
    bool converged;         // objective gradient < 1e-8 * ||grad u||
    bool degenerate;        // near-zero input or colliding scales
    int multistart_hits;    // starts that reached the winning optimum
    double gradient_norm;   // final sup-norm of the objective gradient
    // Per bubble: the three tangency pairings of the remainder rho = u - sigma
    // (against W, against the scale derivative, against the translation mode).
    std::vector<std::array<double, 3>> orth_residuals;
};

/// Best c * W[0, lambda] approximation of u in the gradient norm; multistart
/// over lambda in powers of two, coefficient free (may be negative).
FitResult project_single(const RadialProfile& u, double mu);

/// Best concentric kappa-bubble sum; scale seeds come from the kappa largest
/// local maxima of r^{(N-2)/2} |u(r)| (bubble cores are maxima of that
/// rescaling). Non-convergence after 200 iterations is flagged, best
/// iterate returned.
FitResult fit_sum(const RadialProfile& u, double mu, int kappa);

/// The tangency pairings of rho against each bubble of the family, in the
/// nonlocal (kernel-weighted) form; the first two entries equal
/// <grad rho, grad W_i> and <grad rho, grad d_lambda W_i> up to quadrature,
/// the third (the translation pairing) vanishes identically for radial rho.
std::vector<std::array<double, 3>> orthogonality_residuals(const RadialProfile& rho,
                                                           const BubbleFamily& fam);

/// Rescales v so its nonlocal norm equals target.
RadialProfile match_nl_norm(const RadialProfile& v, double mu, double target);

}  // namespace choquard
