// SPDX-License-Identifier: Apache-2.0
//
// Gamma function and the sharp constants of the nonlocal Sobolev /
// Hardy-Littlewood-Sobolev family, plus the bubble normalization and the
// closed-form constant of the Riesz identity for bubble powers. Every
// closed form here is cross-checked by a quadrature oracle in the tests.
#pragma once

#include <string>

namespace choquard {

/// Gamma function for x > 0 (Lanczos approximation, >= 12 significant
/// digits on [0.1, 50]). Throws ValidationError for x <= 0.
double gamma_fn(double x);

/// Critical Sobolev exponent 2* = 2N/(N-2).
double two_star(int N);

/// Nonlocal critical exponent 2*_mu = (2N - mu)/(N-2).
double two_star_mu(int N, double mu);

/// Surface area of the unit (N-1)-sphere in R^N.
double sphere_area(int N);

/// Surface area of the unit (N-2)-sphere in R^{N-1} (angular reduction).
double sphere_area_sub(int N);

/// Sharp Hardy-Littlewood-Sobolev constant
///   C(N,mu) = Gamma((N-mu)/2) pi^{mu/2} / Gamma(N - mu/2)
///             * (Gamma(N)/Gamma(N/2))^{1 - mu/N}.
double hls_constant(int N, double mu);

/// Best classical Sobolev constant S(N) = pi N(N-2) (Gamma(N/2)/Gamma(N))^{2/N}.
double best_sobolev_constant(int N);

/// Sharp constant of the nonlocal Sobolev inequality,
///   S_hl = S(N) * C(N,mu)^{(2-N)/(2N-mu)}.
double nonlocal_sobolev_constant(int N, double mu);

/// The Riesz-identity constant I(gamma) = pi^{N/2} Gamma((N-2gamma)/2) / Gamma(N-gamma),
/// defined for 0 < gamma < N/2.
double riesz_identity_constant(int N, double gamma);

/// Normalization prefactor A(N,mu) of the extremal bubble:
/// W[0,1](x) = A * (1+|x|^2)^{-(N-2)/2}.
double bubble_prefactor(int N, double mu);

/// Constant Qt(N,mu) in the bubble Riesz identity
///   (|x|^{-mu} * W^{2*_mu}) = Qt * W^{2* - 2*_mu}.
/// Closed form Qt = N(N-2) A^{2-2*} = I(mu/2) A^{2*2*_mu - 2*}; this is the
/// value validated by the independent quadrature oracle.
double riesz_prefactor(int N, double mu);

/// Squared gradient norm of the unit bubble, S_hl^{(2N-mu)/(N+2-mu)}.
double bubble_grad_norm_sq(int N, double mu);

/// All sharp constants for one (N, mu), as reported by the CLI.
struct SharpConstants {
    int dim;
    double mu;
    double C_hls;
    double S_sob;
    double S_hl;
    double two_star;
    double two_star_mu;
};

/// Validates N >= 3 and mu in (0, N); names the violated constraint on error.
SharpConstants sharp_constants(int N, double mu);

/// Throws ValidationError unless N >= 3 and 0 < mu < N.
void validate_dim_mu(int N, double mu);

}  // namespace choquard
