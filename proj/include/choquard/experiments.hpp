// SPDX-License-Identifier: Apache-2.0
//
// Measurement sweeps: perturb bubble families, measure deficit, manifold
// distance, and Euler-Lagrange residual, and extract empirical stability
// constants (envelope (K, L) for the single-bubble inequality, worst-case
// ratio C for multi-bubble families) plus interaction-integral slopes.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "choquard/bubbles.hpp"
#include "choquard/grid.hpp"

namespace choquard {

/// One measured row of a stability sweep.
struct StabilityReport {
    std::string scenario;     // "single" | "multi" | "decomposition"
    int dim = 0;
    double mu = 0.0;
    std::string perturbation; // dictionary id ("" when unused)
    double eps = 0.0;
    std::vector<double> lambdas;      // input family scales
    std::vector<double> lambdas_fit;  // recovered scales (multi fits)
    double q_max = 0.0;               // largest pairwise interaction
    bool delta_interacting = false;
    double deficit = 0.0;
    double dist_single = 0.0;
    double dist_kappa = 0.0;
    double residual_dual_norm = 0.0;
    double lhs = 0.0;      // ||grad u - grad v||^2 against matched fit v
    double nlprod = 0.0;   // ||u||_NL * ||u - v||_NL
    double grad_sq = 0.0;
    double window_lo = 0.0;  // energy window bounds (decomposition demo)
    double window_hi = 0.0;
    std::vector<double> interaction_integrals;  // pairwise, row-major i<j
    bool converged = true;
};

/// A full sweep: ordered rows plus the sweep-level empirical constants.
struct SweepResult {
    std::string scenario;
    int dim = 0;
    double mu = 0.0;
    int kappa = 1;
    std::vector<StabilityReport> rows;
    double K_hat = 0.0;  // lhs <= K_hat * deficit + L_hat * nlprod on all rows
    double L_hat = 0.0;
    double C_hat = 0.0;  // max over rows of dist_kappa / residual_dual_norm
};

/// Interaction-integral slope regression against the interaction Q.
struct SlopeRecord {
    int dim = 0;
    double p = 0.0;
    double q = 0.0;
    std::vector<double> ratios;
    std::vector<double> q_values;
    std::vector<double> integrals;
    double slope = 0.0;           // free log-log slope
    double expected = 0.0;        // min(p,q), or N/(N-2) when p == q
    bool log_case = false;        // p == q: power law carries a log factor
    double log_coefficient = 0.0; // fitted weight of log log(1/Q) (p == q)
};

/// Names of the built-in perturbation profiles.
std::vector<std::string> perturbation_ids();

/// Builds the named perturbation on the grid; optionally projects out the
/// manifold tangent directions {W, d/dlambda W} at `ref` in the gradient
/// inner product. Always returned with ||grad rho|| = 1.
RadialProfile make_perturbation(const GridPtr& grid, const std::string& id,
                                const Bubble& ref, bool tangent_orthogonal);

/// Smallest nonnegative (K, L) with lhs_i <= K*a_i + L*b_i for every row,
/// minimizing K + L (vertex enumeration of the two-variable LP); the
/// returned pair satisfies every constraint exactly (<=, no slack needed).
std::pair<double, double> envelope_lp(const std::vector<double>& lhs,
                                      const std::vector<double>& a,
                                      const std::vector<double>& b);

/// Single-bubble stability sweep: u = W + eps*g over the perturbation ids
/// and epsilon list; rows record deficit, distance, and the two sides of
/// the stability inequality; (K_hat, L_hat) is the LP envelope.
SweepResult sweep_single_stability(int dim, double mu,
                                   const std::vector<std::string>& pert_ids,
                                   const std::vector<double>& eps_list,
                                   const GridPtr& grid, int jobs = 1);

/// Multi-bubble stability sweep over concentric families with scale ratios
/// from `lambda_ratios`: u = sum_i W[0, ratio^i] + eps*g. Requires
/// 3 <= N < 6 - mu when kappa >= 2. C_hat = max dist/residual; each row
/// also carries the pairwise interaction integrals
/// iint (I_mu * W_i^{2*_mu}) W_i^{2*_mu - 1} W_j.
SweepResult sweep_multi_stability(int dim, double mu, int kappa,
                                  const std::vector<double>& lambda_ratios,
                                  const std::vector<double>& eps_list,
                                  const GridPtr& grid, double delta = 0.1,
                                  int jobs = 1);

/// Builds a synthetic kappa-bubble profile with a seeded random smooth
/// remainder, checks the energy-window arithmetic
/// (kappa - 1/2) S_hl^{(2N-mu)/(N+2-mu)} <= ||grad u||^2 <= (kappa + 1/2)...
/// and runs the kappa-fit; the row records window bounds and recovery.
StabilityReport profile_decomposition_demo(int dim, double mu, int kappa,
                                           std::uint64_t seed,
                                           const GridPtr& grid);

/// Regresses log of the two-bubble integral int W_1^p W_2^q against log Q
/// over concentric scale ratios. Expected slope min(p, q) for |p - q| >=
/// 0.5, and N/(N-2) with a positive log-correction weight when p == q.
SlopeRecord interaction_slopes(int dim, double p, double q,
                               const std::vector<double>& ratio_grid);

}  // namespace choquard
