// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#include "rydarray/pair_solver.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

namespace rydarray
{

MatrixXc PairAmplitudes::lowered() const
{
  const Eigen::Index n = ee.rows();
  MatrixXc b(2 * n, n);
  b.topRows(n) = ee;
  b.bottomRows(n) = es.transpose();
  return b;
}

VectorXc PairAmplitudes::flatten(const TruncatedBasis &basis) const
{
  VectorXc c2(basis.dim(2));
  for (const auto &[i, j] : basis.ee)
  {
    c2(basis.ee_index(i, j)) = ee(i, j);
  }
  for (const auto &[i, j] : basis.es)
  {
    c2(basis.es_index(i, j)) = es(i, j);
  }
  for (const auto &[i, j] : basis.ss)
  {
    c2(basis.ss_index(i, j)) = ss(i, j);
  }
  return c2;
}

PairAmplitudes PairAmplitudes::unflatten(const TruncatedBasis &basis, const VectorXc &c2)
{
  const Eigen::Index n = basis.atoms;
  PairAmplitudes p{MatrixXc::Zero(n, n), MatrixXc::Zero(n, n), MatrixXc()};
  for (const auto &[i, j] : basis.ee)
  {
    p.ee(i, j) = p.ee(j, i) = c2(basis.ee_index(i, j));
  }
  for (const auto &[i, j] : basis.es)
  {
    p.es(i, j) = c2(basis.es_index(i, j));
  }
  if (basis.has_double_rydberg())
  {
    p.ss = MatrixXc::Zero(n, n);
    for (const auto &[i, j] : basis.ss)
    {
      p.ss(i, j) = p.ss(j, i) = c2(basis.ss_index(i, j));
    }
  }
  return p;
}

PairSolver::PairSolver(const EffectiveOperator &op)
  : n_(op.atoms()),
    // Without a control field the |s s> pairs decouple and stay empty.
    block_(op.basis.has_double_rydberg() && op.drive_params.control != 0.0 ? 4 : 3),
    rydberg_pairs_(op.basis.has_double_rydberg())
{
  if (op.basis.mode == BlockadeMode::vdw)
  {
    throw DomainError("pair solver does not handle van der Waals shifts");
  }
  Eigen::ComplexEigenSolver<MatrixXc> eig(op.exchange);
  if (eig.info() != Eigen::Success)
  {
    throw NumericError("exchange matrix eigendecomposition failed");
  }
  modes_ = eig.eigenvectors();
  Eigen::PartialPivLU<MatrixXc> lu(modes_);
  modes_inv_ = lu.inverse();
  const VectorXc lambda = eig.eigenvalues().array() + op.drive_params.detuning;

  const Complex omega = op.drive_params.control;
  const Complex rydberg = op.drive_params.rydberg_energy();
  pair_inverse_.resize(static_cast<std::size_t>(n_ * n_));
  for (Eigen::Index p = 0; p < n_; ++p)
  {
    for (Eigen::Index q = 0; q < n_; ++q)
    {
      // Unknowns (X_pq, Y_pq, Y_qp, Z_pq).
      Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
      m(0, 0) = lambda(p) + lambda(q);
      m(0, 1) = m(0, 2) = -omega;
      m(1, 1) = lambda(p) + rydberg;
      m(1, 0) = -omega;
      m(2, 2) = lambda(q) + rydberg;
      m(2, 0) = -omega;
      if (block_ == 4)
      {
        m(1, 3) = m(2, 3) = -omega;
        m(3, 3) = 2.0 * rydberg;
        m(3, 1) = m(3, 2) = -omega;
      }
      else
      {
        m(3, 3) = 1.0;
      }
      pair_inverse_[static_cast<std::size_t>(p * n_ + q)] = m.inverse();
    }
  }

  // Response to a unit source on each same-atom state, and its diagonals.
  const Eigen::Index constraints = (block_ == 4 ? 3 : 2) * n_;
  MatrixXc cap(constraints, constraints);
  const MatrixXc zero = MatrixXc::Zero(n_, n_);
  unit_responses_.reserve(static_cast<std::size_t>(constraints));
  for (Eigen::Index c = 0; c < constraints; ++c)
  {
    MatrixXc unit = zero;
    unit(c % n_, c % n_) = 1.0;
    const int kind = static_cast<int>(c / n_);
    PairAmplitudes r = solve_extended(kind == 0 ? unit : zero, kind == 1 ? unit : zero,
                                      kind == 2 ? unit : zero);
    cap.col(c) = diagonals(r);
    unit_responses_.push_back(std::move(r));
  }
  capacitance_.compute(cap);
}

VectorXc PairSolver::diagonals(const PairAmplitudes &p) const
{
  VectorXc d((block_ == 4 ? 3 : 2) * n_);
  d.head(n_) = p.ee.diagonal();
  d.segment(n_, n_) = p.es.diagonal();
  if (block_ == 4)
  {
    d.tail(n_) = p.ss.diagonal();
  }
  return d;
}

PairAmplitudes PairSolver::solve_extended(const MatrixXc &rx, const MatrixXc &ry,
                                          const MatrixXc &rz) const
{
  const MatrixXc tx = modes_inv_ * rx * modes_inv_.transpose();
  const MatrixXc ty = modes_inv_ * ry * modes_inv_.transpose();
  MatrixXc tz;
  if (block_ == 4)
  {
    tz = modes_inv_ * rz * modes_inv_.transpose();
  }
  MatrixXc x(n_, n_);
  MatrixXc y(n_, n_);
  MatrixXc z = (block_ == 4) ? MatrixXc(n_, n_) : MatrixXc();
  for (Eigen::Index q = 0; q < n_; ++q)
  {
    for (Eigen::Index p = 0; p < n_; ++p)
    {
      const Eigen::Vector4cd rhs(tx(p, q), ty(p, q), ty(q, p), block_ == 4 ? tz(p, q) : Complex(0.0));
      const Eigen::Vector4cd u = pair_inverse_[static_cast<std::size_t>(p * n_ + q)] * rhs;
      x(p, q) = u(0);
      y(p, q) = u(1);
      if (block_ == 4)
      {
        z(p, q) = u(3);
      }
    }
  }
  PairAmplitudes out;
  out.ee = modes_ * x * modes_.transpose();
  out.es = modes_ * y * modes_.transpose();
  if (block_ == 4)
  {
    out.ss = modes_ * z * modes_.transpose();
  }
  return out;
}

PairAmplitudes PairSolver::solve(const PairAmplitudes &rhs) const
{
  const MatrixXc rz = (block_ == 4) ? rhs.ss : MatrixXc();
  PairAmplitudes sol = solve_extended(rhs.ee, rhs.es, rz);
  const VectorXc weights = capacitance_.solve(-diagonals(sol));
  for (std::size_t c = 0; c < unit_responses_.size(); ++c)
  {
    const Complex w = weights(static_cast<Eigen::Index>(c));
    sol.ee += w * unit_responses_[c].ee;
    sol.es += w * unit_responses_[c].es;
    if (block_ == 4)
    {
      sol.ss += w * unit_responses_[c].ss;
    }
  }
  if (rydberg_pairs_ && block_ == 3)
  {
    sol.ss = MatrixXc::Zero(n_, n_);
  }
  // Remove round-off on the excluded states.
  sol.ee.diagonal().setZero();
  sol.es.diagonal().setZero();
  if (block_ == 4)
  {
    sol.ss.diagonal().setZero();
  }
  return sol;
}

namespace
{

PairAmplitudes pair_source(const EffectiveOperator &op, const VectorXc &c1)
{
  // −D12 c1 in matrix form.
  const Eigen::Index n = op.atoms();
  const VectorXc ce = c1.head(n);
  const VectorXc cs = c1.tail(n);
  PairAmplitudes rhs;
  rhs.ee = ce * op.drive.transpose() + op.drive * ce.transpose();
  rhs.ee.diagonal().setZero();
  rhs.es = op.drive * cs.transpose();
  rhs.es.diagonal().setZero();
  if (op.basis.has_double_rydberg())
  {
    rhs.ss = MatrixXc::Zero(n, n);
  }
  return rhs;
}

}  // namespace

PairAmplitudes solve_pair_amplitudes(const EffectiveOperator &op, const VectorXc &c1)
{
  if (op.basis.mode == BlockadeMode::vdw)
  {
    return solve_pair_amplitudes_sparse(op, c1);
  }
  const PairSolver solver(op);
  PairAmplitudes c2 = solver.solve(pair_source(op, c1));
  if (!c2.ee.allFinite() || !c2.es.allFinite())
  {
    throw NumericError("two-excitation solve produced non-finite amplitudes");
  }
  return c2;
}

PairAmplitudes solve_pair_amplitudes_sparse(const EffectiveOperator &op, const VectorXc &c1)
{
  SparseMatrixXc h2 = two_excitation_block(op);
  h2.makeCompressed();
  const VectorXc rhs = -(drive_up_block(op) * c1);
  Eigen::SparseLU<SparseMatrixXc> lu;
  lu.compute(h2);
  if (lu.info() != Eigen::Success)
  {
    throw NumericError("two-excitation block is singular");
  }
  const VectorXc c2 = lu.solve(rhs);
  const Real residual = (h2 * c2 - rhs).norm();
  if (!c2.allFinite() || residual > 1e-10 * std::max(rhs.norm(), 1e-300))
  {
    throw NumericError("two-excitation solve did not reach the residual target");
  }
  return PairAmplitudes::unflatten(op.basis, c2);
}

}  // namespace rydarray
