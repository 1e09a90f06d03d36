// SPDX-License-Identifier: Apache-2.0

#include "choquard/constants.hpp"

#include <cmath>
#include <numbers>

#include "choquard/errors.hpp"

namespace choquard {

namespace {

// Lanczos coefficients (g = 7, n = 9), double-precision set.
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

}  // namespace

double gamma_fn(double x) {
    if (!(x > 0.0)) {
        throw ValidationError("gamma_fn: argument must be positive, got " + std::to_string(x));
    }
    // Forward shift keeps the Lanczos series in its accurate range.
    if (x < 0.5) {
        // Reflection: Gamma(x) = pi / (sin(pi x) Gamma(1-x)).
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
    }
    const double z = x - 1.0;
    double acc = kLanczos[0];
    for (int i = 1; i < 9; ++i) acc += kLanczos[i] / (z + i);
    const double t = z + kLanczosG + 0.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

double two_star(int N) { return 2.0 * N / (N - 2.0); }

double two_star_mu(int N, double mu) { return (2.0 * N - mu) / (N - 2.0); }

double sphere_area(int N) {
    return 2.0 * std::pow(std::numbers::pi, N / 2.0) / gamma_fn(N / 2.0);
}

double sphere_area_sub(int N) {
    return 2.0 * std::pow(std::numbers::pi, (N - 1) / 2.0) / gamma_fn((N - 1) / 2.0);
}

void validate_dim_mu(int N, double mu) {
    if (N < 3) throw ValidationError("dimension constraint violated: N >= 3 required, got N=" + std::to_string(N));
    if (!(mu > 0.0) || !(mu < N)) {
        throw ValidationError("mu constraint violated: 0 < mu < N required, got mu=" + std::to_string(mu) +
                              " with N=" + std::to_string(N));
    }
}

double hls_constant(int N, double mu) {
    validate_dim_mu(N, mu);
    return gamma_fn((N - mu) / 2.0) * std::pow(std::numbers::pi, mu / 2.0) / gamma_fn(N - mu / 2.0) *
           std::pow(gamma_fn(static_cast<double>(N)) / gamma_fn(N / 2.0), 1.0 - mu / N);
}

double best_sobolev_constant(int N) {
    if (N < 3) throw ValidationError("dimension constraint violated: N >= 3 required, got N=" + std::to_string(N));
    return std::numbers::pi * N * (N - 2.0) *
           std::pow(gamma_fn(N / 2.0) / gamma_fn(static_cast<double>(N)), 2.0 / N);
}

double nonlocal_sobolev_constant(int N, double mu) {
    validate_dim_mu(N, mu);
    return best_sobolev_constant(N) * std::pow(hls_constant(N, mu), (2.0 - N) / (2.0 * N - mu));
}

double riesz_identity_constant(int N, double gamma) {
    if (N < 3) throw ValidationError("dimension constraint violated: N >= 3 required, got N=" + std::to_string(N));
    if (!(gamma > 0.0) || !(gamma < N / 2.0)) {
        throw ValidationError("gamma constraint violated: 0 < gamma < N/2 required, got gamma=" +
                              std::to_string(gamma));
    }
    return std::pow(std::numbers::pi, N / 2.0) * gamma_fn((N - 2.0 * gamma) / 2.0) / gamma_fn(N - gamma);
}

double bubble_prefactor(int N, double mu) {
    validate_dim_mu(N, mu);
    const double S = best_sobolev_constant(N);
    const double C = hls_constant(N, mu);
    return std::pow(S, (N - mu) * (2.0 - N) / (4.0 * (N - mu + 2.0))) *
           std::pow(C, (2.0 - N) / (2.0 * (N - mu + 2.0))) *
           std::pow(N * (N - 2.0), (N - 2.0) / 4.0);
}

double riesz_prefactor(int N, double mu) {
    const double A = bubble_prefactor(N, mu);
    return N * (N - 2.0) * std::pow(A, 2.0 - two_star(N));
}

double bubble_grad_norm_sq(int N, double mu) {
    const double shl = nonlocal_sobolev_constant(N, mu);
    return std::pow(shl, (2.0 * N - mu) / (N + 2.0 - mu));
}

SharpConstants sharp_constants(int N, double mu) {
    validate_dim_mu(N, mu);
    return SharpConstants{
        N,
        mu,
        hls_constant(N, mu),
        best_sobolev_constant(N),
        nonlocal_sobolev_constant(N, mu),
        two_star(N),
        two_star_mu(N, mu),
    };
}

}  // namespace choquard
