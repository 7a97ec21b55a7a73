// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include "rydarray/core.hpp"
#include "rydarray/hilbert.hpp"

namespace rydarray
{

/// Sector-2 amplitudes in matrix form.
///
/// ee(i,j) = amplitude of |e_i e_j> (symmetric, zero diagonal), es(i,j) of
/// |e_i s_j> (zero diagonal), ss(i,j) of |s_i s_j> (empty under full blockade).
struct PairAmplitudes
{
  MatrixXc ee;
  MatrixXc es;
  MatrixXc ss;

  /// Column j is σ_ge^(j) applied to the pair state, in sector-1 layout.
  MatrixXc lowered() const;
  VectorXc flatten(const TruncatedBasis &basis) const;
  static PairAmplitudes unflatten(const TruncatedBasis &basis, const VectorXc &c2);
};

/// Direct solver for the sector-2 block without van der Waals shifts.
///
/// Works in the eigenbasis of the exchange matrix, where the block splits
/// into independent 3x3 (full blockade) or 4x4 (no blockade) systems per
/// mode pair. Same-atom double excitations are then projected out with a
/// 2N (or 3N) dimensional capacitance correction.
class PairSolver
{
public:
  explicit PairSolver(const EffectiveOperator &op);

  /// Solves H2 c2 = rhs with rhs given in matrix form (rhs.ss ignored
  /// under full blockade or without control field).
  PairAmplitudes solve(const PairAmplitudes &rhs) const;

private:
  PairAmplitudes solve_extended(const MatrixXc &rx, const MatrixXc &ry, const MatrixXc &rz) const;
  VectorXc diagonals(const PairAmplitudes &p) const;

  Eigen::Index n_ = 0;
  int block_ = 3;
  bool rydberg_pairs_ = false;
  MatrixXc modes_;
  MatrixXc modes_inv_;
  // Per ordered mode pair (p, q), the inverse of the small block.
  std::vector<Eigen::Matrix4cd> pair_inverse_;
  Eigen::PartialPivLU<MatrixXc> capacitance_;
  std::vector<PairAmplitudes> unit_responses_;
};

/// c2 = −H2⁻¹ D12 c1. Uses PairSolver unless van der Waals shifts are
/// present, then a sparse LU factorization of the assembled block.
PairAmplitudes solve_pair_amplitudes(const EffectiveOperator &op, const VectorXc &c1);

/// Same solve through the assembled sparse block regardless of mode.
PairAmplitudes solve_pair_amplitudes_sparse(const EffectiveOperator &op, const VectorXc &c1);

}  // namespace rydarray
