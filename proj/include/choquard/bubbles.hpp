// SPDX-License-Identifier: Apache-2.0
//
// Extremal bubbles of the nonlocal Sobolev inequality: evaluation, analytic
// derivatives, the closed-form Riesz potential of the critical bubble power,
// and the pairwise interaction quantity.
#pragma once

#include <vector>

#include "choquard/grid.hpp"

namespace choquard {

/// One bubble W[xi, lambda] in dimension N with kernel exponent mu:
///   W(x) = A(N,mu) * (lambda / (1 + lambda^2 |x - xi|^2))^{(N-2)/2}.
struct Bubble {
    int dim;
    double mu;
    double lambda;
    std::vector<double> xi;  // center; empty means the origin

    Bubble(int dim_, double mu_, double lambda_, std::vector<double> xi_ = {});

    bool concentric() const;  // center at the origin
};

/// A finite family sum sigma = sum_i alpha_i W_i with shared (N, mu).
struct BubbleFamily {
    std::vector<Bubble> bubbles;
    std::vector<double> alpha;  // empty means all ones

    BubbleFamily(std::vector<Bubble> bubbles_, std::vector<double> alpha_ = {});

    int dim() const { return bubbles.front().dim; }
    double mu() const { return bubbles.front().mu; }
    double coefficient(size_t i) const { return alpha.empty() ? 1.0 : alpha[i]; }
};

/// W[b] at distance rho from the bubble center.
double eval_W(const Bubble& b, double rho);
/// W[b] at the point x (dimension must match; xi padded with zeros).
double eval_W_at(const Bubble& b, const std::vector<double>& x);

/// The classical Sobolev extremal U[xi,lambda](x) =
/// [N(N-2)]^{(N-2)/4} (lambda/(1+lambda^2|x-xi|^2))^{(N-2)/2}.
double eval_U(int N, double lambda, const std::vector<double>& xi, const std::vector<double>& x);

/// W[0, lambda] sampled on a grid (requires a concentric bubble); exact tail
/// powers 0 and 2-N.
RadialProfile bubble_profile(const GridPtr& g, const Bubble& b);

/// W^{power} sampled on a grid with exact tail powers 0 and (2-N)*power.
RadialProfile bubble_power_profile(const GridPtr& g, const Bubble& b, double power);

/// d/d lambda of W[0, lambda]: A beta lambda^{beta-1} (1 - lambda^2 r^2)
/// (1 + lambda^2 r^2)^{-beta-1}, beta = (N-2)/2; tails 0 and 2-N.
RadialProfile d_lambda_profile(const GridPtr& g, const Bubble& b);

/// Radial factor of the translation derivative of W: the component of
/// grad W along a coordinate direction is (-W'(rho)) * (x_1/rho), an l=1
/// mode. Returns -W'(rho); tails 1 and 1-N.
RadialProfile d_xi_radial_factor(const GridPtr& g, const Bubble& b);

/// Closed form of the Riesz potential of the critical bubble power:
/// (|x|^{-mu} * W^{2*_mu}) = Qt(N,mu) W^{2* - 2*_mu}; tails 0 and -mu.
/// Holds exactly at every scale lambda.
RadialProfile exact_riesz_of_bubble(const GridPtr& g, const Bubble& b);

/// Coefficient-weighted sum of a concentric family's bubbles on a grid.
RadialProfile family_profile(const GridPtr& g, const BubbleFamily& fam);

/// Pairwise interaction
///   Q = (l1/l2 + l2/l1 + l1*l2*|xi1-xi2|^2)^{-(N-2)/2}.
double interaction_Q(const Bubble& b1, const Bubble& b2);

/// True iff all pairwise interactions are < delta and, when coefficients are
/// present, max |alpha_i - 1| <= delta.
bool is_delta_interacting(const BubbleFamily& fam, double delta);

}  // namespace choquard
