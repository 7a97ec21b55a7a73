// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#include "rydarray/hilbert.hpp"

#include <cmath>
#include <string>

namespace rydarray
{

BlockadeMode blockade_from_name(std::string_view name)
{
  if (name == "full")
  {
    return BlockadeMode::full;
  }
  if (name == "vdw")
  {
    return BlockadeMode::vdw;
  }
  if (name == "off")
  {
    return BlockadeMode::off;
  }
  throw DomainError("unknown blockade mode '" + std::string(name) + "'");
}

std::string_view name_of(BlockadeMode mode)
{
  switch (mode)
  {
    case BlockadeMode::full:
      return "full";
    case BlockadeMode::vdw:
      return "vdw";
    case BlockadeMode::off:
      return "off";
  }
  return "full";
}

Real atom_photon_coupling()
{
  return std::sqrt(3.0 / (8.0 * pi));
}

Eigen::Index TruncatedBasis::dim(int sector) const
{
  switch (sector)
  {
    case 0:
      return 1;
    case 1:
      return 2 * atoms;
    case 2:
      return static_cast<Eigen::Index>(ee.size() + es.size() + ss.size());
    default:
      throw DomainError("sector index must be 0, 1 or 2");
  }
}

namespace
{

// Offset of the unordered pair (i<j) in the row-major upper triangle.
Eigen::Index triangle_offset(Eigen::Index n, Eigen::Index i, Eigen::Index j)
{
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

}  // namespace

Eigen::Index TruncatedBasis::ee_index(int i, int j) const
{
  if (i == j)
  {
    return -1;
  }
  if (i > j)
  {
    std::swap(i, j);
  }
  return triangle_offset(atoms, i, j);
}

Eigen::Index TruncatedBasis::es_index(int i, int j) const
{
  if (i == j)
  {
    return -1;
  }
  // Row i holds N-1 entries, skipping j == i.
  return static_cast<Eigen::Index>(ee.size()) + i * (atoms - 1) + (j < i ? j : j - 1);
}

Eigen::Index TruncatedBasis::ss_index(int i, int j) const
{
  if (i == j || !has_double_rydberg())
  {
    return -1;
  }
  if (i > j)
  {
    std::swap(i, j);
  }
  return static_cast<Eigen::Index>(ee.size() + es.size()) + triangle_offset(atoms, i, j);
}

TruncatedBasis enumerate_basis(Eigen::Index atoms, BlockadeMode mode)
{
  if (atoms < 1)
  {
    throw DomainError("basis needs at least one atom");
  }
  TruncatedBasis basis;
  basis.atoms = atoms;
  basis.mode = mode;
  const int n = static_cast<int>(atoms);
  for (int i = 0; i < n; ++i)
  {
    for (int j = i + 1; j < n; ++j)
    {
      basis.ee.emplace_back(i, j);
    }
  }
  for (int i = 0; i < n; ++i)
  {
    for (int j = 0; j < n; ++j)
    {
      if (i != j)
      {
        basis.es.emplace_back(i, j);
      }
    }
  }
  if (mode != BlockadeMode::full)
  {
    basis.ss = basis.ee;
  }
  return basis;
}

MatrixXd rydberg_pair_shifts(const Lattice &lattice, Real c6)
{
  const Eigen::Index n = lattice.size();
  MatrixXd v = MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    for (Eigen::Index j = i + 1; j < n; ++j)
    {
      const Real r = (lattice.site(i) - lattice.site(j)).norm();
      v(i, j) = v(j, i) = c6 / std::pow(r, 6);
    }
  }
  return v;
}

EffectiveOperator assemble_effective(const TruncatedBasis &basis, const CouplingMatrix &coupling,
                                     const DriveParams &drive, const VectorXc &drive_vector,
                                     const MatrixXd &pair_shift)
{
  const Eigen::Index n = basis.atoms;
  if (coupling.size() != n || drive_vector.size() != n)
  {
    throw DomainError("operator assembly: dimension mismatch");
  }
  if (!coupling.J.allFinite() || !coupling.G.allFinite() || !drive_vector.allFinite())
  {
    throw NumericError("operator assembly: non-finite couplings");
  }
  if (basis.mode == BlockadeMode::vdw && (pair_shift.rows() != n || pair_shift.cols() != n))
  {
    throw DomainError("operator assembly: van der Waals mode needs an N x N pair shift");
  }

  EffectiveOperator op;
  op.basis = basis;
  op.drive_params = drive;
  op.exchange = coupling.exchange();
  op.drive = drive_vector;
  op.pair_shift = (basis.mode == BlockadeMode::vdw) ? pair_shift : MatrixXd::Zero(n, n);

  op.h1 = MatrixXc::Zero(2 * n, 2 * n);
  op.h1.topLeftCorner(n, n) = op.exchange;
  op.h1.topLeftCorner(n, n).diagonal().array() += drive.detuning;
  op.h1.topRightCorner(n, n).diagonal().setConstant(-drive.control);
  op.h1.bottomLeftCorner(n, n).diagonal().setConstant(-drive.control);
  op.h1.bottomRightCorner(n, n).diagonal().setConstant(drive.rydberg_energy());

  op.d01 = VectorXc::Zero(2 * n);
  op.d01.head(n) = -drive_vector;
  return op;
}

SparseMatrixXc two_excitation_block(const EffectiveOperator &op)
{
  const TruncatedBasis &basis = op.basis;
  const int n = static_cast<int>(basis.atoms);
  const MatrixXc &a = op.exchange;
  const Real delta = op.drive_params.detuning;
  const Complex omega = -op.drive_params.control;
  const Complex es_energy = op.drive_params.rydberg_energy();
  const Eigen::Index dim = basis.dim(2);

  std::vector<Eigen::Triplet<Complex>> entries;
  entries.reserve(static_cast<std::size_t>(dim) * (2 * n + 3));

  for (const auto &[i, j] : basis.ee)
  {
    const Eigen::Index col = basis.ee_index(i, j);
    entries.emplace_back(col, col, a(i, i) + a(j, j) + 2.0 * delta);
    for (int k = 0; k < n; ++k)
    {
      if (k != i && k != j)
      {
        entries.emplace_back(basis.ee_index(k, j), col, a(k, i));
        entries.emplace_back(basis.ee_index(i, k), col, a(k, j));
      }
    }
    entries.emplace_back(basis.es_index(i, j), col, omega);
    entries.emplace_back(basis.es_index(j, i), col, omega);
  }
  for (const auto &[i, j] : basis.es)
  {
    const Eigen::Index col = basis.es_index(i, j);
    entries.emplace_back(col, col, a(i, i) + delta + es_energy);
    for (int k = 0; k < n; ++k)
    {
      if (k != i && k != j)
      {
        entries.emplace_back(basis.es_index(k, j), col, a(k, i));
      }
    }
    entries.emplace_back(basis.ee_index(i, j), col, omega);
    if (basis.has_double_rydberg())
    {
      entries.emplace_back(basis.ss_index(i, j), col, omega);
    }
  }
  for (const auto &[i, j] : basis.ss)
  {
    const Eigen::Index col = basis.ss_index(i, j);
    entries.emplace_back(col, col, 2.0 * es_energy + op.pair_shift(i, j));
    entries.emplace_back(basis.es_index(i, j), col, omega);
    entries.emplace_back(basis.es_index(j, i), col, omega);
  }

  SparseMatrixXc h2(dim, dim);
  h2.setFromTriplets(entries.begin(), entries.end());
  return h2;
}

SparseMatrixXc drive_up_block(const EffectiveOperator &op)
{
  const TruncatedBasis &basis = op.basis;
  const int n = static_cast<int>(basis.atoms);
  std::vector<Eigen::Triplet<Complex>> entries;
  // |e_j> -> |e_i e_j> and |s_j> -> |e_i s_j>, amplitude −b_i.
  for (int j = 0; j < n; ++j)
  {
    for (int i = 0; i < n; ++i)
    {
      if (i != j)
      {
        entries.emplace_back(basis.ee_index(i, j), j, -op.drive(i));
        entries.emplace_back(basis.es_index(i, j), n + j, -op.drive(i));
      }
    }
  }
  SparseMatrixXc d12(basis.dim(2), basis.dim(1));
  d12.setFromTriplets(entries.begin(), entries.end());
  return d12;
}

SparseMatrixXc full_generator(const EffectiveOperator &op)
{
  const Eigen::Index d1 = op.basis.dim(1);
  const Eigen::Index d2 = op.basis.dim(2);
  const Eigen::Index dim = 1 + d1 + d2;
  const SparseMatrixXc h2 = two_excitation_block(op);
  const SparseMatrixXc d12 = drive_up_block(op);

  std::vector<Eigen::Triplet<Complex>> entries;
  for (Eigen::Index r = 0; r < d1; ++r)
  {
    if (op.d01(r) != Complex(0.0))
    {
      entries.emplace_back(1 + r, 0, op.d01(r));
      entries.emplace_back(0, 1 + r, std::conj(op.d01(r)));
    }
    for (Eigen::Index c = 0; c < d1; ++c)
    {
      if (op.h1(r, c) != Complex(0.0))
      {
        entries.emplace_back(1 + r, 1 + c, op.h1(r, c));
      }
    }
  }
  for (Eigen::Index k = 0; k < d12.outerSize(); ++k)
  {
    for (SparseMatrixXc::InnerIterator it(d12, k); it; ++it)
    {
      entries.emplace_back(1 + d1 + it.row(), 1 + it.col(), it.value());
      entries.emplace_back(1 + it.col(), 1 + d1 + it.row(), std::conj(it.value()));
    }
  }
  for (Eigen::Index k = 0; k < h2.outerSize(); ++k)
  {
    for (SparseMatrixXc::InnerIterator it(h2, k); it; ++it)
    {
      entries.emplace_back(1 + d1 + it.row(), 1 + d1 + it.col(), it.value());
    }
  }
  SparseMatrixXc h(dim, dim);
  h.setFromTriplets(entries.begin(), entries.end());
  return h;
}

}  // namespace rydarray
