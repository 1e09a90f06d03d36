// SPDX-License-Identifier: Apache-2.0
//
// Gauss-Legendre nodes and weights on [-1, 1].
#pragma once

#include <utility>
#include <vector>

namespace choquard {

/// Returns (nodes, weights) of the n-point Gauss-Legendre rule on [-1, 1],
/// computed by Newton iteration on the Legendre polynomial.
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n);

}  // namespace choquard
