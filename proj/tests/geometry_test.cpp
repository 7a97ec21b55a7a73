// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "rydarray/geometry.hpp"

namespace rydarray
{
namespace
{

// Independent count: sites (m + 1/2 - l/2) a for m in [0, l) inside radius l a / 2.
int brute_force_count(int diameter)
{
  int count = 0;
  for (int m = 0; m < diameter; ++m)
  {
    for (int n = 0; n < diameter; ++n)
    {
      const double x = m + 0.5 - 0.5 * diameter;
      const double y = n + 0.5 - 0.5 * diameter;
      if (x * x + y * y <= 0.25 * diameter * diameter + 1e-9)
      {
        ++count;
      }
    }
  }
  return count;
}

TEST(DiscLattice, SiteCountsMatchEnumeration)
{
  const std::vector<std::pair<int, int>> known{{6, 32}, {8, 52}, {10, 80}, {12, 112}, {14, 156}};
  for (const auto &[diameter, atoms] : known)
  {
    EXPECT_EQ(brute_force_count(diameter), atoms);
    EXPECT_EQ(build_disc_lattice(diameter, 0.75, polarization::circular()).size(), atoms)
        << "diameter " << diameter;
  }
  for (int diameter = 1; diameter <= 20; ++diameter)
  {
    EXPECT_EQ(build_disc_lattice(diameter, 0.5, polarization::linear_x()).size(),
              brute_force_count(diameter));
  }
}

TEST(DiscLattice, SmallestEvenDiscIsASquare)
{
  const Lattice l = build_disc_lattice(2, 0.75, polarization::circular());
  ASSERT_EQ(l.size(), 4);
  for (Eigen::Index j = 0; j < 4; ++j)
  {
    EXPECT_NEAR(std::abs(l.site(j).x()), 0.375, 1e-15);
    EXPECT_NEAR(std::abs(l.site(j).y()), 0.375, 1e-15);
    EXPECT_EQ(l.site(j).z(), 0.0);
  }
}

TEST(DiscLattice, CenteredInversionSymmetricAndOnGrid)
{
  const Real a = 0.6;
  const Lattice l = build_disc_lattice(11, a, polarization::circular());
  EXPECT_NEAR(l.positions.rowwise().sum().norm(), 0.0, 1e-12);
  std::set<std::pair<long, long>> sites;
  for (Eigen::Index j = 0; j < l.size(); ++j)
  {
    const Real u = l.site(j).x() / a + 0.5 * 11 - 0.5;
    const Real v = l.site(j).y() / a + 0.5 * 11 - 0.5;
    EXPECT_NEAR(u, std::round(u), 1e-12);
    EXPECT_NEAR(v, std::round(v), 1e-12);
    EXPECT_LE(l.site(j).norm(), 0.5 * 11 * a + 1e-12);
    sites.insert({std::lround(u), std::lround(v)});
  }
  EXPECT_EQ(static_cast<Eigen::Index>(sites.size()), l.size());
  for (const auto &[u, v] : sites)
  {
    EXPECT_TRUE(sites.count({10 - u, 10 - v}));
  }
}

TEST(DiscLattice, RejectsBadInput)
{
  EXPECT_THROW(build_disc_lattice(0, 0.75, polarization::circular()), DomainError);
  EXPECT_THROW(build_disc_lattice(4, -1.0, polarization::circular()), DomainError);
  EXPECT_THROW(polarization::from_name("diagonal"), DomainError);
}

TEST(DiscLattice, RemoveSite)
{
  const Lattice l = build_disc_lattice(6, 0.75, polarization::circular());
  const Lattice r = remove_site(l, 5);
  ASSERT_EQ(r.size(), l.size() - 1);
  EXPECT_EQ(r.site(5), l.site(6));
  EXPECT_EQ(r.site(4), l.site(4));
}

TEST(Polarization, NamesRoundTripAndNormalized)
{
  for (const char *name : {"circular", "x", "y"})
  {
    const CVec3 p = polarization::from_name(name);
    EXPECT_NEAR(p.norm(), 1.0, 1e-15);
    EXPECT_EQ(polarization::name_of(p), name);
  }
}

TEST(Probe, GaussianProfileAtFocus)
{
  ProbeMode mode;
  mode.waist = 1.7;
  mode.power = 1.0;
  const Complex center = probe_amplitude(mode, Vec3::Zero());
  for (const Real rho : {0.3, 1.0, 2.2})
  {
    const Complex e = probe_amplitude(mode, Vec3(rho, 0.0, 0.0));
    EXPECT_NEAR(std::abs(e / center), std::exp(-rho * rho / (mode.waist * mode.waist)), 1e-12);
    EXPECT_NEAR(std::arg(e / center), 0.0, 1e-12);
    const Complex rotated = probe_amplitude(mode, Vec3(0.0, rho, 0.0));
    EXPECT_NEAR(std::abs(e - rotated), 0.0, 1e-14);
  }
}

TEST(Probe, PowerIntegratesToConfiguredValue)
{
  ProbeMode mode;
  mode.waist = 1.3;
  mode.power = 2.5;
  for (const Real z : {0.0, 0.7, -3.0})
  {
    // Radial quadrature of |E|² over the transverse plane.
    const int steps = 4000;
    const Real rmax = 8.0 * mode.width(z);
    const Real h = rmax / steps;
    Real flux = 0.0;
    for (int k = 0; k < steps; ++k)
    {
      const Real r = (k + 0.5) * h;
      flux += 2.0 * pi * r * std::norm(probe_amplitude(mode, Vec3(r, 0.0, z))) * h;
    }
    EXPECT_NEAR(flux, mode.power, 1e-5) << "z = " << z;
  }
}

TEST(Probe, SatisfiesParaxialEquation)
{
  // 2ik ∂z E + ∇⊥² E = 0 by central differences.
  ProbeMode mode;
  mode.waist = 1.5;
  mode.focus_z = 0.4;
  const Real h = 1e-3;
  for (const Vec3 &r : {Vec3(0.3, -0.2, 0.9), Vec3(1.1, 0.5, -2.0), Vec3(0.0, 0.0, 0.0)})
  {
    auto e = [&](Real dx, Real dy, Real dz) { return probe_amplitude(mode, r + Vec3(dx, dy, dz)); };
    const Complex lap = (e(h, 0, 0) + e(-h, 0, 0) + e(0, h, 0) + e(0, -h, 0) - 4.0 * e(0, 0, 0)) /
                        (h * h);
    const Complex dz = (e(0, 0, h) - e(0, 0, -h)) / (2.0 * h);
    const Complex residual = 2.0 * I * wavenumber * dz + lap;
    EXPECT_LT(std::abs(residual), 1e-4 * std::abs(wavenumber * e(0, 0, 0)) + 1e-6);
  }
}

TEST(Probe, DefectWeightsNormalized)
{
  const Lattice l = build_disc_lattice(8, 0.75, polarization::circular());
  ProbeMode mode;
  mode.waist = 2.0;
  const VectorXd w = defect_weights(l, mode);
  EXPECT_NEAR(w.sum(), 1.0, 1e-12);
  EXPECT_GE(w.minCoeff(), 0.0);
}

}  // namespace
}  // namespace rydarray
