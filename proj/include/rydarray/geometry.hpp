// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string_view>

#include <Eigen/Core>

#include "rydarray/core.hpp"

namespace rydarray
{

/// Unit dipole orientations for the |g>-|e> transition.
namespace polarization
{
CVec3 circular();  // (x + i y)/sqrt(2)
CVec3 linear_x();
CVec3 linear_y();
/// Parses "circular", "x" or "y".
CVec3 from_name(std::string_view name);
std::string_view name_of(const CVec3 &p);
}  // namespace polarization

/// Atom positions of a disc-shaped square array in the z = 0 plane.
///
/// Positions are stored column-wise (3 x N), in units of λ, ordered row-major
/// by y then x.
struct Lattice
{
  Eigen::Matrix3Xd positions;
  Real a = 0.0;
  int diameter_sites = 0;
  CVec3 polarization = polarization::circular();

  Eigen::Index size() const { return positions.cols(); }
  Vec3 site(Eigen::Index j) const { return positions.col(j); }
};

/// Builds all square-lattice sites within ℓ·a/2 of the disc center.
///
/// The disc is centered on a site for odd ℓ and on a plaquette center for
/// even ℓ, so that a principal-axis row holds exactly ℓ atoms.
Lattice build_disc_lattice(int diameter_sites, Real a, const CVec3 &polarization);

/// Same lattice with site j deleted (used for the vacancy/defect response).
Lattice remove_site(const Lattice &lattice, Eigen::Index j);

/// Lattice from explicit positions (few-atom validation systems).
Lattice custom_lattice(const Eigen::Matrix3Xd &positions, const CVec3 &polarization);

/// Fundamental paraxial Gaussian mode, E normalized so that ∫|E|² d²r⊥ = P.
struct ProbeMode
{
  Real power = 1.0;
  Real waist = 2.0;
  Real focus_z = 0.0;

  Real rayleigh_range() const { return pi * waist * waist; }
  /// w(z)² = w0² + λ²(z − z_f)²/(π² w0²).
  Real width(Real z) const;
};

Complex probe_amplitude(const ProbeMode &mode, const Vec3 &r);

/// E(r_j) for every site.
VectorXc field_at_sites(const Lattice &lattice, const ProbeMode &mode);

/// p_j = |E(r_j)|² / Σ_k |E(r_k)|².
VectorXd defect_weights(const Lattice &lattice, const ProbeMode &mode);

}  // namespace rydarray
