// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#include "rydarray/dipole_kernel.hpp"

namespace rydarray
{

MatrixXc CouplingMatrix::exchange() const
{
  MatrixXc a(J.rows(), J.cols());
  a.real() = -J;
  a.imag() = -0.5 * G;
  return a;
}

CouplingMatrix CouplingMatrix::without(Eigen::Index j) const
{
  const Eigen::Index n = size();
  if (j < 0 || j >= n)
  {
    throw DomainError("atom index out of range");
  }
  std::vector<Eigen::Index> keep;
  keep.reserve(n - 1);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    if (i != j)
    {
      keep.push_back(i);
    }
  }
  return {J(keep, keep), G(keep, keep)};
}

CouplingMatrix coupling_matrices(const Lattice &lattice)
{
  const Eigen::Index n = lattice.size();
  CouplingMatrix c{MatrixXd::Zero(n, n), MatrixXd::Identity(n, n)};
  for (Eigen::Index i = 0; i < n; ++i)
  {
    for (Eigen::Index j = i + 1; j < n; ++j)
    {
      const auto pc = pair_coupling<Real>(lattice.site(i), lattice.site(j), lattice.polarization);
      c.J(i, j) = c.J(j, i) = pc.coherent;
      c.G(i, j) = c.G(j, i) = pc.dissipative;
    }
  }
  return c;
}

CollectiveParams collective_params(const CouplingMatrix &coupling, const Lattice &lattice,
                                   const ProbeMode &mode)
{
  const VectorXc field = field_at_sites(lattice, mode);
  const Real norm = field.norm();
  if (!(norm > 0.0))
  {
    throw DomainError("drive mode has no overlap with the lattice");
  }
  const VectorXc v = field / norm;
  const Complex shift = v.dot(coupling.J.cast<Complex>() * v);
  const Complex width = v.dot(coupling.G.cast<Complex>() * v);
  return {shift.real(), width.real()};
}

}  // namespace rydarray
