// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Core>

#include "rydarray/core.hpp"
#include "rydarray/correlations.hpp"
#include "rydarray/dipole_kernel.hpp"
#include "rydarray/hilbert.hpp"
#include "rydarray/ode.hpp"

namespace rydarray
{

/// Diagonal Lindblad form of the collective decay: ĉ_m = √γ_m Σ_j u_jm σ_ge^(j).
struct JumpChannels
{
  VectorXd rates;
  MatrixXd vectors;  // column m is u_m

  Eigen::Index size() const { return rates.size(); }
};

JumpChannels diagonalize_dissipator(const MatrixXd &decay);
inline JumpChannels diagonalize_dissipator(const CouplingMatrix &coupling)
{
  return diagonalize_dissipator(coupling.G);
}

/// Σ_j w_j σ_ge^(j) applied to a state laid out as [sector 0, 1, 2].
VectorXc apply_lowering(const TruncatedBasis &basis, const VectorXc &weights, const VectorXc &psi);

struct McwfOptions
{
  Real t_end = 50.0;
  Real burn_in = 10.0;
  Real sample_dt = 0.25;
  Real pair_population_bound = 1e-2;
  OdeTolerance tolerance{1e-7, 1e-12, 1e-12, 0.5};
};

struct TrajectoryRecord
{
  std::uint64_t seed = 0;
  std::uint64_t index = 0;
  std::vector<Real> jump_times;
  std::vector<int> jump_channels;
  std::vector<Real> sample_times;
  std::vector<Real> reflection;
  std::vector<Real> transmission;
  Real duration = 0.0;
  int truncation_warnings = 0;

  Real mean_reflection() const;
  Real mean_transmission() const;
};

struct EnsembleSummary
{
  int trajectories = 0;
  long jumps = 0;
  Real reflection = 0.0;
  Real reflection_se = 0.0;
  Real transmission = 0.0;
  Real transmission_se = 0.0;
  int truncation_warnings = 0;
};

/// Quantum-jump unraveling of the truncated master equation.
///
/// Trajectories start from the perturbative no-jump steady state. Until a
/// trajectory's first jump its evolution is the common no-jump path, which
/// is integrated once and shared.
class McwfEngine
{
public:
  McwfEngine(const EffectiveOperator &op, McwfOptions options = {});

  const JumpChannels &channels() const { return channels_; }
  Eigen::Index dim() const { return generator_.rows(); }

  /// One trajectory keyed by (seed, index); bit-reproducible.
  TrajectoryRecord evolve(std::uint64_t seed, std::uint64_t index) const;

  /// Runs trajectories [0, count) on `workers` threads and aggregates in
  /// index order.
  EnsembleSummary ensemble(std::uint64_t seed, int count, int workers = 1,
                           std::vector<TrajectoryRecord> *records = nullptr) const;

private:
  VectorXc rhs(const VectorXc &psi) const;
  void build_no_jump_path();

  TruncatedBasis basis_;
  SparseMatrixXc generator_;
  JumpChannels channels_;
  VectorXc kappa_;
  Real power_ = 1.0;
  McwfOptions options_;
  VectorXc initial_;
  std::vector<DenseStep> no_jump_path_;
};

/// Exact master equation on the full 3^N space (N ≤ 3), with states holding
/// two or more Rydberg excitations removed under full blockade.
class DenseOracle
{
public:
  explicit DenseOracle(const EffectiveOperator &op);

  Eigen::Index levels() const { return hamiltonian_.rows(); }
  const MatrixXc &liouvillian() const { return liouvillian_; }

  /// Null vector of the Liouvillian with unit trace.
  MatrixXc steady_state() const;
  /// ρ(t) = exp(L t) ρ0.
  MatrixXc evolve(const MatrixXc &rho, Real t) const;
  /// Propagates |G><G| in unit steps until the change per step is below
  /// tol; throws NumericError past t_max.
  MatrixXc integrate_to_steady(Real tol = 1e-10, Real t_max = 1e5) const;

  Real flux(Channel channel, const MatrixXc &rho) const;
  Real excited_population(const MatrixXc &rho) const;
  std::vector<Real> g2(Channel first, Channel second, const std::vector<Real> &taus) const;
  std::vector<Complex> g1(Channel channel, const std::vector<Real> &taus) const;

  const MatrixXc &output(Channel channel) const
  {
    return channel == Channel::forward ? out_forward_ : out_backward_;
  }

private:
  MatrixXc hamiltonian_;
  MatrixXc liouvillian_;
  MatrixXc out_forward_;
  MatrixXc out_backward_;
  MatrixXc excited_;
};

}  // namespace rydarray
