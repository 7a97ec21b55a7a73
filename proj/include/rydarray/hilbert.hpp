// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "rydarray/core.hpp"
#include "rydarray/dipole_kernel.hpp"
#include "rydarray/geometry.hpp"

namespace rydarray
{

using SparseMatrixXc = Eigen::SparseMatrix<Complex>;

enum class BlockadeMode
{
  full,  // at most one Rydberg excitation in the whole array
  vdw,   // |s_i s_j> kept with shift C6/r^6
  off    // |s_i s_j> kept, no interaction
};

BlockadeMode blockade_from_name(std::string_view name);
std::string_view name_of(BlockadeMode mode);

struct BlockadeParams
{
  BlockadeMode mode = BlockadeMode::full;
  Real c6 = 0.0;
};

/// Atom-photon coupling g with g² = 3/(8π) in units Γ = c = λ = 1.
Real atom_photon_coupling();

/// Excitation-number sectored basis, at most two excitations.
///
/// Sector 1 is laid out as [e_0 .. e_{N-1}, s_0 .. s_{N-1}]. Sector 2 lists
/// |e_i e_j> (i<j), then |e_i s_j> (i != j), then |s_i s_j> (i<j) when kept.
struct TruncatedBasis
{
  Eigen::Index atoms = 0;
  BlockadeMode mode = BlockadeMode::full;
  std::vector<std::pair<int, int>> ee;
  std::vector<std::pair<int, int>> es;
  std::vector<std::pair<int, int>> ss;

  Eigen::Index dim(int sector) const;
  Eigen::Index total_dim() const { return dim(0) + dim(1) + dim(2); }
  /// Sector-2 offsets; -1 for absent states.
  Eigen::Index ee_index(int i, int j) const;
  Eigen::Index es_index(int i, int j) const;
  Eigen::Index ss_index(int i, int j) const;
  bool has_double_rydberg() const { return mode != BlockadeMode::full; }
};

TruncatedBasis enumerate_basis(Eigen::Index atoms, BlockadeMode mode);

/// Detunings and control coupling of one operating point.
struct DriveParams
{
  Real detuning = 0.0;            // probe detuning Δ
  Real control = 0.0;             // control Rabi frequency Ω
  Real reference_detuning = 0.0;  // Δ at which the control is two-photon resonant
  Real two_photon_detuning = 0.0;
  Real rydberg_loss = 0.0;        // optional |s> width

  /// Energy of |s> in the rotating frame.
  Complex rydberg_energy() const
  {
    return {detuning - reference_detuning + two_photon_detuning, -0.5 * rydberg_loss};
  }
};

/// Pair shifts V_ij = C6 / r_ij^6 (zero diagonal).
MatrixXd rydberg_pair_shifts(const Lattice &lattice, Real c6);

/// Non-Hermitian generator H − (i/2)Σ Γ_ij σ_eg^i σ_ge^j, split by sector.
///
/// Sign conventions: the probe enters as −(b_j σ_eg^j + h.c.) and the
/// control as −Ω(σ_es + σ_se), so D01 = −b on the e components.
struct EffectiveOperator
{
  TruncatedBasis basis;
  DriveParams drive_params;
  MatrixXc exchange;  // A = −J − (i/2)Γ
  VectorXc drive;     // b_j = g E(r_j)
  Real probe_power = 1.0;
  MatrixXd pair_shift;
  MatrixXc h1;
  VectorXc d01;

  Eigen::Index atoms() const { return basis.atoms; }
};

EffectiveOperator assemble_effective(const TruncatedBasis &basis, const CouplingMatrix &coupling,
                                     const DriveParams &drive, const VectorXc &drive_vector,
                                     const MatrixXd &pair_shift = MatrixXd());

/// Sector-2 block of the generator.
SparseMatrixXc two_excitation_block(const EffectiveOperator &op);

/// Drive coupling from sector 1 into sector 2 (rows: sector 2).
SparseMatrixXc drive_up_block(const EffectiveOperator &op);

/// Full generator on the truncated space, ordered [sector 0, 1, 2].
SparseMatrixXc full_generator(const EffectiveOperator &op);

}  // namespace rydarray
