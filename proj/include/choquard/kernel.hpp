// SPDX-License-Identifier: Apache-2.0
//
// Radial reduction of the kernel |x-y|^{-mu} per angular sector, and the
// log-grid convolution weights that evaluate sector potentials. The weights
// are product-integration coefficients on the uniform log grid: the kernel
// factor is integrated exactly against a cubic interpolant of the density,
// which keeps the integrable diagonal singularity under control.
#pragma once

#include <memory>
#include <vector>

#include "choquard/grid.hpp"

namespace choquard {

/// Direct kernel entry
///   k_l(r,s) = |S^{N-2}| int_0^pi (r^2 - 2rs cos t + s^2)^{-mu/2}
///              P_l(cos t) sin^{N-2} t dt,
/// with P_l the degree-l Gegenbauer polynomial of index (N-2)/2 normalized to
/// P_l(1) = 1. The sector potential is (I_mu^{(l)} f)(r) = int k_l(r,s) f(s)
/// s^{N-1} ds. For mu >= N-1 the diagonal r = s is not integrable pointwise;
/// the returned value is then the fixed dyadic-panel quadrature (truncated at
/// theta ~ pi*2^{-48}), which is the regularization the potential weights use.
double angular_kernel(double r, double s, double mu, int N, int l);

/// Reduced kernel khat(gap) = x^{mu/2} |S^{N-2}| int (1 - 2x cos t + x^2)^{-mu/2}
/// P_l sin^{N-2} t dt at x = exp(-gap); even in the log ratio gap = |log(s/r)|,
/// so that k_l(r,s) = khat(|log(s/r)|) (rs)^{-mu/2}.
double reduced_kernel(double gap, double mu, int N, int l);

/// Convolution weights and application of the sector-l Riesz potential on one
/// grid layout. Construction is O(n) kernel quadratures; apply is O(n^2).
class AngularKernel {
public:
    /// Builds the weights (or loads them from the cache directory named by
    /// the CHOQUARD_LAB_CACHE environment variable, if set).
    AngularKernel(GridPtr grid, double mu, int l);

    const RadialGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    double mu() const { return mu_; }
    int sector() const { return l_; }

    /// Number of integration cells per side; weight offsets run over
    /// m = -(cells()+1) .. cells()+3.
    int cells() const { return M_; }
    /// Array index of offset zero inside weights().
    int off0() const { return off0_; }
    const std::vector<double>& weights() const { return w_; }

    /// Potential values (I_mu^{(l)} f)(r_i) = r_i^{N-mu} sum_m w_m f(t_i + mh),
    /// with f continued past the grid by its power-law tails (an absent tail
    /// continues by zero). Throws NumericsError on non-integrable tails.
    std::vector<double> apply_values(const std::vector<double>& f,
                                     const Tail& inner, const Tail& outer) const;

    /// Potential of a profile; the output tails are fitted from the result.
    RadialProfile apply(const RadialProfile& f) const;

private:
    GridPtr grid_;
    double mu_;
    int l_;
    int M_, off0_;
    std::vector<double> w_;
};

/// Process-wide kernel cache keyed by (grid layout, mu, l); thread-safe.
std::shared_ptr<const AngularKernel> get_kernel(const GridPtr& grid, double mu, int l);

}  // namespace choquard
