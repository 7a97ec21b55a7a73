// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "rydarray/linear_response.hpp"

namespace rydarray::testing
{

// Small irregular arrays for comparisons with the dense master equation.
inline ArraySetup small_array(int atoms, Real max_coupling = 1e-3, Real waist = 1.0)
{
  Eigen::Matrix3Xd p = Eigen::Matrix3Xd::Zero(3, atoms);
  for (int j = 0; j < atoms; ++j)
  {
    p(0, j) = 0.6 * (j - 0.5 * (atoms - 1));
  }
  if (atoms == 3)
  {
    p(1, 2) = 0.4;
  }
  ProbeMode mode;
  mode.waist = waist;
  ArraySetup setup = ArraySetup::make(custom_lattice(p, polarization::circular()), mode);
  const Real peak = (atom_photon_coupling() * setup.field()).cwiseAbs().maxCoeff();
  setup.mode.power *= (max_coupling / peak) * (max_coupling / peak);
  return setup;
}

inline DriveParams eit_drive(Real detuning, Real control, Real two_photon = 0.0)
{
  DriveParams d;
  d.detuning = detuning;
  d.control = control;
  d.reference_detuning = detuning;
  d.two_photon_detuning = two_photon;
  return d;
}

}  // namespace rydarray::testing
