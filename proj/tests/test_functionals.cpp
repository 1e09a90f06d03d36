// SPDX-License-Identifier: Apache-2.0
//
// Variational objects: deficit at the extremal, scaling homogeneity, energy
// closed form, Euler-Lagrange pairing identity, the parallelogram check,
// and the three-sided stability quantities.

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "choquard/bubbles.hpp"
#include "choquard/constants.hpp"
#include "choquard/errors.hpp"
#include "choquard/fit.hpp"
#include "choquard/functionals.hpp"
#include "choquard/radial.hpp"
#include "doctest.h"

using namespace choquard;

namespace {
GridPtr make_grid(int dim, int n = 1024) {
    return std::make_shared<const RadialGrid>(dim, n, 1e-4, 1e4);
}

RadialProfile gaussian_like(const GridPtr& g, double center, double width) {
    std::vector<double> v(g->n());
    for (int i = 0; i < g->n(); ++i) {
        const double t = g->t()[i];
        v[i] = std::exp(-0.5 * std::pow((t - center) / width, 2));
    }
    return RadialProfile(g, v, Tail{2.0, true}, Tail{2.0 - g->dim() - 1.0, true});
}
}  // namespace

TEST_CASE("deficit vanishes on extremals at every scale") {
    for (auto [N, mu] : std::vector<std::pair<int, double>>{{3, 1.0}, {4, 2.0}}) {
        auto g = make_grid(N, 2048);
        for (double lam : {0.5, 1.0, 4.0}) {
            auto W = bubble_profile(g, Bubble(N, mu, lam));
            const DeficitReport rep = deficit(W, mu);
            CHECK(std::fabs(rep.deficit) / rep.grad_sq < 1e-5);
            // grad_sq matches the closed form of the extremal's energy norm.
            CHECK(rep.grad_sq ==
                  doctest::Approx(bubble_grad_norm_sq(N, mu)).epsilon(1e-7));
        }
    }
}

TEST_CASE("deficit scales quadratically, nonlocal norm linearly") {
    auto g = make_grid(4);
    auto u = gaussian_like(g, 0.0, 1.0);
    const double mu = 2.0;
    const DeficitReport r1 = deficit(u, mu);
    const DeficitReport r2 = deficit(scale(2.0, u), mu);
    CHECK(r2.grad_sq == doctest::Approx(4.0 * r1.grad_sq).epsilon(1e-12));
    CHECK(r2.deficit == doctest::Approx(4.0 * r1.deficit).epsilon(1e-10));
    CHECK(nl_norm(scale(2.0, u), mu) == doctest::Approx(2.0 * nl_norm(u, mu)).epsilon(1e-12));
    // A generic profile sits strictly above the sharp constant.
    CHECK(r1.deficit > 0.0);
}

TEST_CASE("energy of the extremal has a closed form") {
    for (auto [N, mu] : std::vector<std::pair<int, double>>{{3, 1.0}, {4, 2.0}, {5, 2.0}}) {
        auto g = make_grid(N, 2048);
        auto W = bubble_profile(g, Bubble(N, mu, 1.0));
        const double tsm = two_star_mu(N, mu);
        const double expected = (0.5 - 0.5 / tsm) * bubble_grad_norm_sq(N, mu);
        CHECK(energy(W, mu) == doctest::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("euler-lagrange residual vanishes on the extremal") {
    auto g = make_grid(4, 2048);
    auto W = bubble_profile(g, Bubble(4, 2.0, 1.0));
    auto res = el_residual(W, 2.0);
    CHECK(dual_norm(res) < 1e-4);
}

TEST_CASE("euler-lagrange pairing identity") {
    // <el_residual(u), u> = -||grad u||^2 + nl_integral for any profile.
    auto g = make_grid(4);
    const double mu = 2.0;
    auto u = gaussian_like(g, 0.5, 0.8);
    auto res = el_residual(u, mu);
    std::vector<double> prod(g->n());
    for (int i = 0; i < g->n(); ++i) prod[i] = res.values()[i] * u.values()[i];
    const Tail ti = tail_mul(res.inner(), u.inner());
    const Tail to = tail_mul(res.outer(), u.outer());
    const double paired = sphere_area(4) * weighted_integral(*g, prod, ti, to);
    const DeficitReport rep = deficit(u, mu);
    const double expected = -rep.grad_sq + rep.nl_integral;
    CHECK(paired == doctest::Approx(expected).epsilon(1e-6));
}

TEST_CASE("parallelogram identity holds to machine precision") {
    auto g = make_grid(4, 512);
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double c1 = unif(rng), w1 = 0.5 + 0.5 * std::fabs(unif(rng));
        const double c2 = unif(rng), w2 = 0.5 + 0.5 * std::fabs(unif(rng));
        auto u = scale(unif(rng), gaussian_like(g, c1, w1));
        auto v = scale(unif(rng), gaussian_like(g, c2, w2));
        const auto [lhs, rhs] = clarkson_check(u, v);
        CHECK(lhs <= rhs + 1e-10);
        CHECK(std::fabs(lhs - rhs) < 1e-10 * std::max(1.0, rhs));
    }
}

TEST_CASE("stability sides require matched nonlocal norms") {
    auto g = make_grid(4);
    const double mu = 2.0;
    auto W = bubble_profile(g, Bubble(4, mu, 1.0));
    auto u = axpy(1.0, W, 0.05, gaussian_like(g, 0.0, 1.0));

    // Mismatched norms are rejected.
    CHECK_THROWS_AS(stability_sides(u, scale(2.0, W), mu), ValidationError);

    // Matched: lhs is the squared gradient distance, deficit matches deficit().
    auto v = match_nl_norm(W, mu, nl_norm(u, mu));
    const StabilitySides s = stability_sides(u, v, mu);
    CHECK(s.lhs == doctest::Approx(grad_norm_sq(axpy(1.0, u, -1.0, v))).epsilon(1e-10));
    CHECK(s.deficit == doctest::Approx(deficit(u, mu).deficit).epsilon(1e-10));
    CHECK(s.nlprod == doctest::Approx(nl_norm(u, mu) *
                                      nl_norm(axpy(1.0, u, -1.0, v), mu)).epsilon(1e-8));
    CHECK(s.lhs > 0.0);
    CHECK(s.nlprod > 0.0);
}

TEST_CASE("match_nl_norm rescales exactly") {
    auto g = make_grid(4, 512);
    const double mu = 2.0;
    auto u = gaussian_like(g, 0.0, 1.0);
    auto v = match_nl_norm(u, mu, 3.0);
    CHECK(nl_norm(v, mu) == doctest::Approx(3.0).epsilon(1e-10));
}
