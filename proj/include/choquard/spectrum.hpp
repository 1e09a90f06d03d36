// SPDX-License-Identifier: Apache-2.0
//
// Linearized eigenvalue problem at a bubble, per angular sector: the
// quadratic forms A (local energy) and B (nonlocal pairing), their
// generalized eigenpairs, and the dual-norm residual of the linearized
// operator on candidate kernel directions.
#pragma once

#include <vector>

#include <Eigen/Dense>

#include "choquard/bubbles.hpp"
#include "choquard/grid.hpp"

namespace choquard {

/// Discrete quadratic forms of the sector-l linearization at W:
///   omega^T A omega = int |grad_l omega|^2 + int (I*W^{2*_mu}) W^{2*_mu-2} omega^2
///   omega^T B omega = int (I*(W^{2*_mu-1} omega)) W^{2*_mu-1} omega
///                     + int (I*W^{2*_mu}) W^{2*_mu-2} omega^2
/// on nodal values over the log grid (trapezoid weights folded in).
struct SectorOperator {
    GridPtr grid;
    Bubble bubble;
    int sector;
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
};

/// Eigenvalues and B-orthonormal eigenvectors of A omega = nu B omega,
/// ascending, with discretization artifacts filtered out.
struct SpectrumResult {
    int sector;
    std::vector<double> eigenvalues;
    std::vector<RadialProfile> eigenvectors;  // zero at Dirichlet nodes
    int filtered;  // refinement-unstable (sawtooth) modes removed
    int deflated;  // near-null directions of B skipped
};

/// Assembles the sector forms. Sectors 0 and 1 carry the validated
/// eigenvalue statements; higher sectors are assembled identically for
/// exploration. Requires mu < min(4, N) (the nondegeneracy hypothesis).
SectorOperator assemble(const GridPtr& grid, const Bubble& b, int l);

/// Matrix-form Rayleigh quotient (omega' A omega)/(omega' B omega) of a
/// full-grid profile.
double rayleigh_quotient(const SectorOperator& op, const RadialProfile& omega);

/// k smallest genuine eigenvalues (1 <= k <= 10). Dense symmetric-definite
/// solve; eigenvectors are discarded when a decimate-reinterpolate roughness
/// measure flags them as grid-scale sawtooth artifacts (threshold 1e-2;
/// genuine modes sit below 1e-5, artifacts near sqrt(2)).
SpectrumResult eigenpairs(const SectorOperator& op, int k);

/// Energy fraction of omega lost by decimating to every second node and
/// reinterpolating (cubic midpoints). Near zero for resolved modes, order
/// one for Nyquist sawtooth artifacts.
double roughness_measure(const std::vector<double>& omega);

/// Dual-norm residual of the linearized operator
///   L[phi] = -Delta_l phi - 2*_mu (I*(W^{2*_mu-1} phi)) W^{2*_mu-1}
///            - (2*_mu - 1)(I*W^{2*_mu}) W^{2*_mu-2} phi
/// in sector l; phi is normalized internally in the sector gradient norm.
/// Near zero exactly on the kernel directions (scale derivative in l=0,
/// translation mode in l=1).
double nondegeneracy_residual(const Bubble& b, const RadialProfile& phi, int l);

}  // namespace choquard
