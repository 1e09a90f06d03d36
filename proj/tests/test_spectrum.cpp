// SPDX-License-Identifier: Apache-2.0
//
// Linearized spectrum at the extremal: known eigenvalues per sector, the
// Rayleigh quotient at the extremal itself, artifact filtering, kernel
// residuals, and refinement stability.

#include <cmath>
#include <memory>
#include <vector>

#include "choquard/bubbles.hpp"
#include "choquard/constants.hpp"
#include "choquard/errors.hpp"
#include "choquard/radial.hpp"
#include "choquard/spectrum.hpp"
#include "doctest.h"

using namespace choquard;

namespace {
GridPtr make_grid(int dim, int n = 768) {
    return std::make_shared<const RadialGrid>(dim, n, 1e-4, 1e4);
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        num += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    return std::fabs(num) / std::sqrt(na * nb);
}
}  // namespace

TEST_CASE("radial sector eigenvalues for N=4, mu=2 are {1, 3, 6}") {
    auto g = make_grid(4);
    const Bubble b(4, 2.0, 1.0);
    auto op = assemble(g, b, 0);
    auto sp = eigenpairs(op, 3);
    REQUIRE(sp.eigenvalues.size() >= 3);
    CHECK(std::fabs(sp.eigenvalues[0] - 1.0) < 1e-3);
    CHECK(std::fabs(sp.eigenvalues[1] - 3.0) < 1e-2);  // = 2*_mu
    CHECK(std::fabs(sp.eigenvalues[2] - 6.0) < 5e-2);

    // First eigenvector is the extremal itself, second the scale derivative.
    auto W = bubble_profile(g, b);
    auto D = d_lambda_profile(g, b);
    CHECK(cosine_similarity(sp.eigenvectors[0].values(), W.values()) > 0.999);
    CHECK(cosine_similarity(sp.eigenvectors[1].values(), D.values()) > 0.99);
}

TEST_CASE("radial sector eigenvalues for N=3, mu=1 are (2k+1)(2k+3)/3") {
    auto g = make_grid(3);
    const Bubble b(3, 1.0, 1.0);
    auto op = assemble(g, b, 0);
    auto sp = eigenpairs(op, 3);
    REQUIRE(sp.eigenvalues.size() >= 3);
    CHECK(std::fabs(sp.eigenvalues[0] - 1.0) < 1e-3);
    CHECK(std::fabs(sp.eigenvalues[1] - 5.0) < 1e-2);  // = 2*_mu for (3,1)
    CHECK(std::fabs(sp.eigenvalues[2] - 35.0 / 3.0) < 0.1);
}

TEST_CASE("first translation-sector eigenvalue equals the nonlocal exponent") {
    for (auto [N, mu] : std::vector<std::pair<int, double>>{{4, 2.0}, {3, 1.0}}) {
        auto g = make_grid(N);
        const Bubble b(N, mu, 1.0);
        auto op = assemble(g, b, 1);
        auto sp = eigenpairs(op, 1);
        REQUIRE(!sp.eigenvalues.empty());
        CHECK(std::fabs(sp.eigenvalues[0] - two_star_mu(N, mu)) < 1e-2);
        // Its eigenvector is the translation mode -W'.
        auto T = d_xi_radial_factor(g, b);
        CHECK(cosine_similarity(sp.eigenvectors[0].values(), T.values()) > 0.99);
    }
}

TEST_CASE("rayleigh quotient of the extremal is 1") {
    auto g = make_grid(4);
    const Bubble b(4, 2.0, 1.0);
    auto op = assemble(g, b, 0);
    auto W = bubble_profile(g, b);
    CHECK(std::fabs(rayleigh_quotient(op, W) - 1.0) < 1e-3);

    // Scale invariance of the quotient.
    CHECK(rayleigh_quotient(op, scale(2.5, W)) ==
          doctest::Approx(rayleigh_quotient(op, W)).epsilon(1e-12));

    // Zero input is rejected.
    CHECK_THROWS_AS(rayleigh_quotient(op, RadialProfile::zero(g)), NumericsError);
}

TEST_CASE("eigenvalues are stable under refinement") {
    const Bubble b(4, 2.0, 1.0);
    auto sp_c = eigenpairs(assemble(make_grid(4, 512), b, 0), 2);
    auto sp_f = eigenpairs(assemble(make_grid(4, 768), b, 0), 2);
    CHECK(std::fabs(sp_c.eigenvalues[0] - sp_f.eigenvalues[0]) < 1e-3);
    CHECK(std::fabs(sp_c.eigenvalues[1] - sp_f.eigenvalues[1]) < 1e-2);
}

TEST_CASE("roughness measure separates smooth modes from sawtooth") {
    auto g = make_grid(4, 256);
    std::vector<double> smooth(g->n()), saw(g->n());
    for (int i = 0; i < g->n(); ++i) {
        smooth[i] = std::exp(-0.1 * g->t()[i] * g->t()[i]);
        saw[i] = (i % 2 == 0) ? 1.0 : -1.0;
    }
    CHECK(roughness_measure(smooth) < 1e-2);
    CHECK(roughness_measure(saw) > 1.0);
}

TEST_CASE("eigenvector roughness is at genuine-mode level") {
    auto g = make_grid(4, 512);
    auto sp = eigenpairs(assemble(g, Bubble(4, 2.0, 1.0), 0), 2);
    for (const auto& v : sp.eigenvectors) {
        CHECK(roughness_measure(v.values()) < 1e-2);
    }
}

TEST_CASE("nondegeneracy residuals vanish exactly on the kernel directions") {
    for (auto [N, mu] : std::vector<std::pair<int, double>>{{4, 2.0}, {3, 1.0}}) {
        auto g = std::make_shared<const RadialGrid>(N, 1024, 1e-4, 1e4);
        const Bubble b(N, mu, 1.0);

        // Scale derivative spans the radial kernel.
        auto D = d_lambda_profile(g, b);
        CHECK(nondegeneracy_residual(b, D, 0) < 1e-3);

        // Translation mode spans the sector-1 kernel.
        auto T = d_xi_radial_factor(g, b);
        CHECK(nondegeneracy_residual(b, T, 1) < 1e-3);

        // The extremal itself is NOT in the kernel: L[W] = (2*_mu - ...)
        // leaves a residual of order one after normalization.
        auto W = bubble_profile(g, b);
        CHECK(nondegeneracy_residual(b, W, 0) > 0.1);
    }
}

TEST_CASE("assembly validates its inputs") {
    auto g = make_grid(4, 256);
    const Bubble b(4, 2.0, 1.0);
    CHECK_THROWS_AS(assemble(g, b, -1), ValidationError);
    CHECK_THROWS_AS(assemble(g, Bubble(4, 2.0, 1.0, {1.0, 0, 0, 0}), 0), ValidationError);
    CHECK_THROWS_AS(assemble(std::make_shared<const RadialGrid>(3, 256, 1e-4, 1e4), b, 0),
                    ValidationError);
    // The nondegeneracy hypothesis mu < min(4, N) is enforced.
    CHECK_THROWS_AS(assemble(std::make_shared<const RadialGrid>(5, 256, 1e-4, 1e4),
                             Bubble(5, 4.5, 1.0), 0),
                    ValidationError);

    auto op = assemble(g, b, 0);
    CHECK_THROWS_AS(eigenpairs(op, 0), ValidationError);
    CHECK_THROWS_AS(eigenpairs(op, 11), ValidationError);
}
