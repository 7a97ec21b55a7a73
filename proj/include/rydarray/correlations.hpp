// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "rydarray/core.hpp"
#include "rydarray/hilbert.hpp"
#include "rydarray/linear_response.hpp"
#include "rydarray/pair_solver.hpp"

namespace rydarray
{

enum class Channel
{
  forward,   // transmitted
  backward   // reflected
};

std::string_view name_of(Channel channel);
Channel channel_from_name(std::string_view name);

/// Output-field weights κ_j = i g E*(r_j)/√P, so that
/// a_α = δ_{α,forward} √P + Σ_j κ_j σ_ge^(j).
VectorXc output_weights(const EffectiveOperator &op);

/// Fills sector 2 of a linear steady state.
SteadyAmplitudes solve_two_excitation_steady(const EffectiveOperator &op, SteadyAmplitudes amps);

/// a_α applied to the truncated steady state, kept through sector 1.
struct ConditionalState
{
  Complex vacuum;
  VectorXc sector1;
};

ConditionalState output_apply(Channel channel, const SteadyAmplitudes &amps,
                              const EffectiveOperator &op);

/// Steady-state photon statistics of one operating point.
///
/// Fluxes and mean fields come from the steady density matrix expanded
/// through fourth order in the probe amplitude, which keeps them finite
/// when a coherent output amplitude vanishes. Two-time functions use the
/// quantum regression theorem on the single-excitation sector.
class CorrelationEngine
{
public:
  explicit CorrelationEngine(const EffectiveOperator &op);

  const SteadyAmplitudes &amplitudes() const { return amps_; }
  Real power() const { return power_; }

  /// ⟨a_α†a_α⟩.
  Real flux(Channel channel) const;
  /// ⟨a_α⟩.
  Complex mean_field(Channel channel) const;

  /// Unnormalized two-time density ⟨a_α† a_β†(τ) a_β(τ) a_α⟩.
  Real pair_density(Channel first, Channel second, Real tau) const;
  std::vector<Real> g2(Channel first, Channel second, const std::vector<Real> &taus) const;
  /// ⟨a_α†(τ) a_α(0)⟩ / ⟨a_α†a_α⟩; taus must be sorted ascending.
  std::vector<Complex> g1(Channel channel, const std::vector<Real> &taus) const;

private:
  Real forward(Channel c) const { return c == Channel::forward ? 1.0 : 0.0; }
  Complex vacuum_amplitude(Channel c) const;
  VectorXc conditional_sector1(Channel c, Real tau) const;

  Eigen::Index n_ = 0;
  Eigen::Index dim_ = 0;  // active part of sector 1
  Real power_ = 1.0;
  SteadyAmplitudes amps_;
  VectorXc kappa_;
  VectorXc c1_;
  VectorXc drive_;
  MatrixXc h1_;
  MatrixXc lowered_;      // B, active rows
  VectorXc lowered_out_;  // B κ
  VectorXc drive_down_;   // V12 c2
  MatrixXd decay_;
  VectorXc rho10_;
  MatrixXc rho11_;
  VectorXc eigenvalues_;
  MatrixXc modes_;
  MatrixXc modes_inv_;
};

/// τ_d = Γc / (2Ω²).
Real delay_time(Real gamma_c, Real control);

/// 0 followed by count−1 log-spaced points up to τ_max.
std::vector<Real> default_tau_grid(Real tau_max, int count = 60);

/// Largest pairwise RMS difference between curves sampled on a common
/// rescaled grid, divided by the RMS value of the pair's mean curve.
Real collapse_check(const std::vector<std::vector<Real>> &curves);

/// ρ_{αβ}(z, z') with z = cτ: α at z and β at z'. Pairs are time-ordered,
/// so the density for z' < z is ρ_{βα}(z − z').
MatrixXd two_photon_density(const CorrelationEngine &engine, Channel first, Channel second,
                            const std::vector<Real> &z);

}  // namespace rydarray
