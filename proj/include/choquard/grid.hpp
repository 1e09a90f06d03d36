// SPDX-License-Identifier: Apache-2.0
//
// Log-uniform radial grid and the radial profile carrier type. A profile is
// a nodal sampling on [r_min, r_max] plus analytic power-law tails on both
// sides; every norm and integral in the library consumes the tails so that
// slowly decaying fields (bubbles decay like r^{2-N}) keep their mass.
#pragma once

#include <memory>
#include <vector>

namespace choquard {

class RadialGrid {
public:
    /// Log-uniform nodes r_i = exp(t_i), t_i equally spaced on
    /// [log r_min, log r_max]. Requires n >= 64 and 0 < r_min < r_max.
    RadialGrid(int dim, int n = 2048, double r_min = 1e-4, double r_max = 1e4);

    int dim() const { return dim_; }
    int n() const { return n_; }
    double r_min() const { return r_min_; }
    double r_max() const { return r_max_; }
    /// Uniform spacing in log r.
    double h() const { return h_; }
    const std::vector<double>& t() const { return t_; }
    const std::vector<double>& r() const { return r_; }

    bool same_layout(const RadialGrid& other) const;

private:
    int dim_;
    int n_;
    double r_min_, r_max_, h_;
    std::vector<double> t_, r_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Power-law continuation f(r) ~ f(edge) * (r/edge)^{power} beyond one end
/// of the grid. present=false means the profile is treated as identically
/// zero beyond that end.
struct Tail {
    double power = 0.0;
    bool present = true;

    static Tail none() { return Tail{0.0, false}; }
};

/// Combined tail of a pointwise product (absent factor annihilates).
Tail tail_mul(const Tail& a, const Tail& b);
/// Tail of |f|^p for positive-power p.
Tail tail_pow(const Tail& a, double p);

class RadialProfile {
public:
    RadialProfile(GridPtr grid, std::vector<double> values, Tail inner, Tail outer);

    /// Zero profile on a grid (tails absent).
    static RadialProfile zero(GridPtr grid);

    const RadialGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }
    const Tail& inner() const { return inner_; }
    const Tail& outer() const { return outer_; }
    void set_inner(Tail t) { inner_ = t; }
    void set_outer(Tail t) { outer_ = t; }

    /// Value at the first/last node (tail amplitudes).
    double first() const { return values_.front(); }
    double last() const { return values_.back(); }

private:
    GridPtr grid_;
    std::vector<double> values_;
    Tail inner_, outer_;
};

}  // namespace choquard
