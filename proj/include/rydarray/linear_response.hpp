// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rydarray/core.hpp"
#include "rydarray/dipole_kernel.hpp"
#include "rydarray/geometry.hpp"
#include "rydarray/hilbert.hpp"
#include "rydarray/pair_solver.hpp"

namespace rydarray
{

/// Array, probe and blockade settings shared by every operating point.
struct ArraySetup
{
  Lattice lattice;
  ProbeMode mode;
  CouplingMatrix coupling;
  BlockadeParams blockade;

  static ArraySetup make(Lattice lattice, ProbeMode mode, BlockadeParams blockade = {});
  VectorXc field() const { return field_at_sites(lattice, mode); }
  EffectiveOperator effective(const DriveParams &drive) const;
};

/// Perturbative steady state: c0 ≈ 1, c1 ∝ √P, c2 ∝ P.
struct SteadyAmplitudes
{
  Complex c0{1.0, 0.0};
  VectorXc c1;
  std::optional<PairAmplitudes> c2;
  Real drive_scale = 0.0;  // √P
};

/// c1 = −H1⁻¹ D01 with iterative refinement.
SteadyAmplitudes solve_linear_steady(const EffectiveOperator &op);

struct Rtl
{
  Real reflection = 0.0;
  Real transmission = 1.0;
  Real loss = 0.0;
};

/// Normalized reflected amplitude s = i (g/P) Σ E*_j c_{e_j}.
Complex reflected_amplitude(const SteadyAmplitudes &amps, const VectorXc &field, Real power);

Rtl rtl_coefficients(const SteadyAmplitudes &amps, const VectorXc &field, Real power);
Rtl rtl_coefficients(const SteadyAmplitudes &amps, const Lattice &lattice, const ProbeMode &mode);

/// R, T, L of the two-level array (Ω = 0) at probe detuning Δ.
Rtl two_level_response(const ArraySetup &setup, Real detuning);

struct SpectrumRow
{
  Real detuning = 0.0;
  Rtl rtl;
  std::string error;
};

/// One row per detuning. The control field stays two-photon resonant at
/// drive.reference_detuning while the probe detuning is scanned.
std::vector<SpectrumRow> spectrum_scan(const ArraySetup &setup, const std::vector<Real> &detunings,
                                       const DriveParams &drive);

/// Full width of the region around the reference detuning with T ≥ 1/2.
Real transparency_window(const ArraySetup &setup, const DriveParams &drive);

struct DefectResponse
{
  Real d_reflection = 0.0;
  Real d_transmission = 0.0;
  Real d_loss = 0.0;
  int failures = 0;
};

/// Probability-weighted change of the two-level response when one site is
/// left empty, sites drawn with weight ∝ |E(r_j)|².
DefectResponse defect_average(const ArraySetup &setup, Real detuning);

struct ReflectionOptimum
{
  Real waist = 0.0;
  Real detuning = 0.0;
  Real reflection = 0.0;
};

/// Maximizes the two-level reflection over (w0, Δ) for a fixed lattice.
ReflectionOptimum optimize_reflection(const Lattice &lattice, const CouplingMatrix &coupling,
                                      Real waist_guess, Real detuning_guess);

/// Maximizes the two-level reflection over Δ ∈ [lo, hi] at the setup's waist.
ReflectionOptimum optimize_detuning(const ArraySetup &setup, Real lo, Real hi);

}  // namespace rydarray
