// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "rydarray/dipole_kernel.hpp"
#include "rydarray/geometry.hpp"

namespace rydarray
{
namespace
{

Complex scalar_green(const Vec3 &r)
{
  const Real d = r.norm();
  return std::exp(I * wavenumber * d) / (4.0 * pi * d);
}

// (δ_ab + ∂a∂b/k²) e^{ikr}/(4πr) by fourth-order central differences.
Eigen::Matrix3cd finite_difference_green(const Vec3 &r)
{
  const Real h = 1e-3;
  Eigen::Matrix3cd out;
  auto f = [&](const Vec3 &x) { return scalar_green(x); };
  for (int a = 0; a < 3; ++a)
  {
    for (int b = 0; b < 3; ++b)
    {
      const Vec3 ea = Vec3::Unit(a) * h;
      const Vec3 eb = Vec3::Unit(b) * h;
      Complex d2;
      if (a == b)
      {
        d2 = (-f(r + 2 * ea) + 16.0 * f(r + ea) - 30.0 * f(r) + 16.0 * f(r - ea) - f(r - 2 * ea)) /
             (12.0 * h * h);
      }
      else
      {
        d2 = (f(r + ea + eb) - f(r + ea - eb) - f(r - ea + eb) + f(r - ea - eb)) / (4.0 * h * h);
      }
      out(a, b) = (a == b ? f(r) : Complex(0.0)) + d2 / (wavenumber * wavenumber);
    }
  }
  return out;
}

TEST(GreenTensor, MatchesFiniteDifferenceOfScalarGreen)
{
  for (const Vec3 &r : {Vec3(0.75, 0, 0), Vec3(0.3, 0.4, 0.1), Vec3(1.9, -0.6, 0.0)})
  {
    const Eigen::Matrix3cd exact = green_tensor<Real>(r);
    const Eigen::Matrix3cd fd = finite_difference_green(r);
    EXPECT_LT((exact - fd).norm(), 1e-5 * exact.norm()) << r.transpose();
  }
}

TEST(GreenTensor, IsSymmetric)
{
  const Eigen::Matrix3cd g = green_tensor<Real>(Vec3(0.2, -0.7, 0.33));
  EXPECT_LT((g - g.transpose()).norm(), 1e-15);
}

TEST(PairCoupling, ClosedFormsForInPlaneCircularDipoles)
{
  // Circular dipoles in the plane: p†Gp = e^{ikr}/(4πr)·[1 + i/kr − 1/(kr)² + ½(−1 + 3/(kr)² − 3i/kr)].
  for (const Real d : {0.3, 0.75, 1.4})
  {
    const Real kr = wavenumber * d;
    const Complex phase = std::exp(I * kr) / (4.0 * pi * d);
    const Complex c =
        phase * (Complex(1, 1 / kr) - 1 / (kr * kr) + 0.5 * Complex(-1 + 3 / (kr * kr), -3 / kr));
    const auto pc = pair_coupling<Real>(Vec3::Zero(), Vec3(d, 0, 0), polarization::circular());
    EXPECT_NEAR(pc.coherent, -3.0 * pi / wavenumber * c.real(), 1e-14);
    EXPECT_NEAR(pc.dissipative, 6.0 * pi / wavenumber * c.imag(), 1e-14);
  }
}

TEST(PairCoupling, KnownValuesOneWavelengthOnAxis)
{
  // Dipoles along the separation at kr = 2π: only the longitudinal part
  // survives: 2 e^{ikr}/(4πr)·(1/(kr)² − i/kr).
  const auto pc = pair_coupling<Real>(Vec3::Zero(), Vec3(0, 0, 1.0), CVec3(0, 0, 1));
  EXPECT_NEAR(pc.dissipative, -3.0 / (4.0 * pi * pi), 1e-14);
  EXPECT_NEAR(pc.coherent, -3.0 / (2.0 * std::pow(2.0 * pi, 3)), 1e-14);
}

TEST(PairCoupling, SelfLimitAndOrientations)
{
  // Γ_ij → Γ as r → 0 for any polarization.
  for (const CVec3 &p : {polarization::circular(), polarization::linear_x(), CVec3(0, 0, 1)})
  {
    const auto pc = pair_coupling<Real>(Vec3::Zero(), Vec3(1e-4, 0, 0), p);
    EXPECT_NEAR(pc.dissipative, 1.0, 1e-6);
  }
  // Dipoles transverse to the separation at kr = π.
  const Real d = 0.5;
  const Real kr = wavenumber * d;
  const auto pc = pair_coupling<Real>(Vec3::Zero(), Vec3(0, 0, d), polarization::linear_x());
  const Real expected_j =
      -0.75 * (std::cos(kr) / kr - std::sin(kr) / (kr * kr) - std::cos(kr) / (kr * kr * kr));
  const Real expected_g =
      1.5 * (std::sin(kr) / kr + std::cos(kr) / (kr * kr) - std::sin(kr) / (kr * kr * kr));
  EXPECT_NEAR(pc.coherent, expected_j, 1e-14);
  EXPECT_NEAR(pc.dissipative, expected_g, 1e-14);
}

TEST(PairCoupling, RejectsCoincidentPoints)
{
  EXPECT_THROW(pair_coupling<Real>(Vec3(1, 2, 3), Vec3(1, 2, 3), polarization::circular()),
               DomainError);
}

TEST(CouplingMatrix, SymmetricWithPositiveSemidefiniteDecay)
{
  const Lattice l = build_disc_lattice(8, 0.75, polarization::circular());
  const CouplingMatrix c = coupling_matrices(l);
  EXPECT_LT((c.J - c.J.transpose()).norm(), 1e-14);
  EXPECT_LT((c.G - c.G.transpose()).norm(), 1e-14);
  EXPECT_TRUE((c.G.diagonal().array() == 1.0).all());
  EXPECT_TRUE((c.J.diagonal().array() == 0.0).all());
  const Eigen::SelfAdjointEigenSolver<MatrixXd> es(c.G);
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-10);
  // Anti-Hermitian part of A is −Γ/2: every mode decays.
  const Eigen::ComplexEigenSolver<MatrixXc> ev(c.exchange());
  EXPECT_LT(ev.eigenvalues().imag().maxCoeff(), 1e-10);
}

TEST(CouplingMatrix, WithoutDropsRowAndColumn)
{
  const Lattice l = build_disc_lattice(4, 0.75, polarization::circular());
  const CouplingMatrix c = coupling_matrices(l);
  const CouplingMatrix r = c.without(3);
  const CouplingMatrix direct = coupling_matrices(remove_site(l, 3));
  EXPECT_LT((r.J - direct.J).norm(), 1e-15);
  EXPECT_LT((r.G - direct.G).norm(), 1e-15);
}

TEST(CollectiveParams, SubwavelengthArrayReflectsNearCollectiveShift)
{
  const Lattice l = build_disc_lattice(10, 0.75, polarization::circular());
  ProbeMode mode;
  mode.waist = 2.0;
  const CollectiveParams cp = collective_params(coupling_matrices(l), l, mode);
  EXPECT_NEAR(cp.delta_c, 0.05, 0.02);
  EXPECT_GT(cp.gamma_c, 0.0);
  EXPECT_LT(cp.gamma_c, 1.5);
}

}  // namespace
}  // namespace rydarray
