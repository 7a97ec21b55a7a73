// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Core>

#include "rydarray/core.hpp"
#include "rydarray/geometry.hpp"

namespace rydarray
{

template <typename Scalar>
struct PairCoupling
{
  Scalar coherent;     // J_ij
  Scalar dissipative;  // Γ_ij
};

/// Free-space dyadic Green tensor G(r) at wavenumber k = 2π (λ = 1).
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 3, 3> green_tensor(const Eigen::Matrix<Scalar, 3, 1> &r)
{
  using C = std::complex<Scalar>;
  const Scalar k = Scalar(2) * std::numbers::pi_v<Scalar>;
  const Scalar d = r.norm();
  const Scalar kr = k * d;
  const Eigen::Matrix<Scalar, 3, 1> n = r / d;
  const C phase = std::exp(C(0, kr)) / (Scalar(4) * std::numbers::pi_v<Scalar> * d);
  const C transverse = C(1, 1 / kr) - C(1 / (kr * kr), 0);
  const C longitudinal = C(-1 + 3 / (kr * kr), -3 / kr);
  return phase * (transverse * Eigen::Matrix<C, 3, 3>::Identity() +
                  longitudinal * (n * n.transpose()).template cast<C>());
}

/// Photon-mediated exchange J_ij and collective decay Γ_ij between two
/// dipoles with orientation p: J − iΓ/2 = −(3π/k) p*·G(r_i − r_j)·p.
template <typename Scalar>
PairCoupling<Scalar> pair_coupling(const Eigen::Matrix<Scalar, 3, 1> &ri,
                                   const Eigen::Matrix<Scalar, 3, 1> &rj,
                                   const Eigen::Matrix<std::complex<Scalar>, 3, 1> &p)
{
  const Eigen::Matrix<Scalar, 3, 1> r = ri - rj;
  if (!(r.norm() > Scalar(0)))
  {
    throw DomainError("pair coupling of coincident positions");
  }
  const Scalar k = Scalar(2) * std::numbers::pi_v<Scalar>;
  const std::complex<Scalar> contraction = p.dot(green_tensor<Scalar>(r) * p);  // p^† G p
  const Scalar scale = Scalar(3) * std::numbers::pi_v<Scalar> / k;
  return {-scale * contraction.real(), Scalar(2) * scale * contraction.imag()};
}

/// Coherent (J, zero diagonal) and dissipative (Γ, Γ_ii = 1) couplings.
struct CouplingMatrix
{
  MatrixXd J;
  MatrixXd G;

  Eigen::Index size() const { return J.rows(); }
  /// A = −J − (i/2)Γ, the single-excitation exchange generator.
  MatrixXc exchange() const;
  CouplingMatrix without(Eigen::Index j) const;
};

CouplingMatrix coupling_matrices(const Lattice &lattice);

/// Collective shift and linewidth of the drive-matched single-excitation
/// mode v_j = E(r_j)/‖E‖: Δc = v†Jv, Γc = v†Γv. The reflection resonance
/// sits at probe detuning Δ = Δc.
struct CollectiveParams
{
  Real delta_c = 0.0;
  Real gamma_c = 1.0;
};

CollectiveParams collective_params(const CouplingMatrix &coupling, const Lattice &lattice,
                                   const ProbeMode &mode);

}  // namespace rydarray
