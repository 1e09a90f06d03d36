// SPDX-License-Identifier: Apache-2.0

#include "choquard/grid.hpp"

#include <cmath>
#include <string>

#include "choquard/errors.hpp"

namespace choquard {

RadialGrid::RadialGrid(int dim, int n, double r_min, double r_max)
    : dim_(dim), n_(n), r_min_(r_min), r_max_(r_max) {
    if (dim < 3) throw ValidationError("RadialGrid: dimension constraint violated, N >= 3 required");
    if (n < 64) throw ValidationError("RadialGrid: node count constraint violated, n >= 64 required");
    if (!(r_min > 0.0) || !(r_min < r_max)) {
        throw ValidationError("RadialGrid: radius constraint violated, 0 < r_min < r_max required");
    }
    t_.resize(n);
    r_.resize(n);
    const double t0 = std::log(r_min), t1 = std::log(r_max);
    h_ = (t1 - t0) / (n - 1);
    for (int i = 0; i < n; ++i) {
        t_[i] = t0 + i * h_;
        r_[i] = std::exp(t_[i]);
    }
    t_[n - 1] = t1;
    r_[n - 1] = r_max;
}

bool RadialGrid::same_layout(const RadialGrid& other) const {
    return dim_ == other.dim_ && n_ == other.n_ && r_min_ == other.r_min_ && r_max_ == other.r_max_;
}

Tail tail_mul(const Tail& a, const Tail& b) {
    if (!a.present || !b.present) return Tail::none();
    return Tail{a.power + b.power, true};
}

Tail tail_pow(const Tail& a, double p) {
    if (!a.present) return Tail::none();
    return Tail{a.power * p, true};
}

RadialProfile::RadialProfile(GridPtr grid, std::vector<double> values, Tail inner, Tail outer)
    : grid_(std::move(grid)), values_(std::move(values)), inner_(inner), outer_(outer) {
    if (!grid_) throw ValidationError("RadialProfile: null grid");
    if (static_cast<int>(values_.size()) != grid_->n()) {
        throw ValidationError("RadialProfile: value count does not match grid (" +
                              std::to_string(values_.size()) + " vs " + std::to_string(grid_->n()) + ")");
    }
}

RadialProfile RadialProfile::zero(GridPtr grid) {
    std::vector<double> v(grid->n(), 0.0);
    return RadialProfile(std::move(grid), std::move(v), Tail::none(), Tail::none());
}

}  // namespace choquard
