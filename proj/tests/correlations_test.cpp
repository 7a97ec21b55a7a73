// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include <gtest/gtest.h>

#include "rydarray/correlations.hpp"
#include "rydarray/validation.hpp"
#include "test_support.hpp"

namespace rydarray
{
namespace
{

using testing::eit_drive;
using testing::small_array;

const Channel kChannels[] = {Channel::forward, Channel::backward};

TEST(Channels, Names)
{
  EXPECT_EQ(channel_from_name("fw"), Channel::forward);
  EXPECT_EQ(channel_from_name("R"), Channel::backward);
  EXPECT_EQ(channel_from_name(name_of(Channel::backward)), Channel::backward);
  EXPECT_THROW(channel_from_name("sideways"), DomainError);
}

TEST(TauGrid, StartsAtZeroEndsAtMaxAndIncreases)
{
  const std::vector<Real> t = default_tau_grid(12.5, 40);
  ASSERT_EQ(t.size(), 40u);
  EXPECT_EQ(t.front(), 0.0);
  EXPECT_EQ(t.back(), 12.5);
  for (std::size_t k = 1; k < t.size(); ++k)
  {
    EXPECT_GT(t[k], t[k - 1]);
  }
  EXPECT_THROW(default_tau_grid(0.0, 10), DomainError);
  EXPECT_THROW(delay_time(0.4, 0.0), DomainError);
}

TEST(Collapse, RelativeRmsOfPairs)
{
  EXPECT_EQ(collapse_check({{1, 2, 3}, {1, 2, 3}}), 0.0);
  const Real r = collapse_check({{1, 1, 1, 1}, {1.1, 1.1, 1.1, 1.1}});
  EXPECT_NEAR(r, 0.1 / 1.05, 1e-12);
  EXPECT_THROW(collapse_check({{1, 2}, {1}}), DomainError);
}

TEST(SingleAtom, ResonanceFluorescenceAntibunching)
{
  // A lone two-level atom scatters only one photon at a time; its
  // weak-drive fluorescence correlation is |1 − e^{−(iΔ + 1/2)τ}|².
  const ArraySetup setup = small_array(1, 1e-4);
  const Real delta = 0.4;
  DriveParams d;
  d.detuning = delta;
  const CorrelationEngine engine(setup.effective(d));
  const std::vector<Real> taus{0.0, 0.3, 1.0, 2.5, 6.0};
  const std::vector<Real> g2 = engine.g2(Channel::backward, Channel::backward, taus);
  for (std::size_t k = 0; k < taus.size(); ++k)
  {
    const Real expected = std::norm(1.0 - std::exp(-(I * delta + 0.5) * taus[k]));
    EXPECT_NEAR(g2[k], expected, 1e-6) << taus[k];
  }
}

class HierarchyVersusOracle : public ::testing::TestWithParam<BlockadeMode>
{
};

TEST_P(HierarchyVersusOracle, MatchesDenseMasterEquation)
{
  // Finite-drive corrections in the oracle scale like |b|². Without blockade
  // the pair correlations are weak and the oracle needs a stronger drive to
  // resolve them above round-off.
  const bool blockade = GetParam() == BlockadeMode::full;
  const std::vector<int> sizes = blockade ? std::vector<int>{2, 3} : std::vector<int>{2};
  for (const int atoms : sizes)
  {
    ArraySetup setup = small_array(atoms, blockade ? 3e-4 : 1e-2);
    setup.blockade.mode = GetParam();
    const EffectiveOperator op = setup.effective(eit_drive(0.05, 1.0, 0.1));
    const CorrelationEngine engine(op);
    const DenseOracle oracle(op);
    const MatrixXc rho = oracle.steady_state();
    for (const Channel c : kChannels)
    {
      EXPECT_NEAR(engine.flux(c) / oracle.flux(c, rho), 1.0, 1e-6) << atoms << name_of(c);
    }
    const std::vector<Real> taus{0.0, 0.2, 0.7, 2.0};
    for (const Channel a : kChannels)
    {
      for (const Channel b : kChannels)
      {
        const std::vector<Real> x = engine.g2(a, b, taus);
        const std::vector<Real> y = oracle.g2(a, b, taus);
        for (std::size_t k = 0; k < taus.size(); ++k)
        {
          EXPECT_NEAR(x[k] / y[k], 1.0, 1e-3)
              << atoms << " atoms " << name_of(a) << name_of(b) << " tau " << taus[k];
        }
      }
      const std::vector<Complex> g1a = engine.g1(a, taus);
      const std::vector<Complex> g1b = oracle.g1(a, taus);
      for (std::size_t k = 0; k < taus.size(); ++k)
      {
        EXPECT_LT(std::abs(g1a[k] - g1b[k]), 1e-4);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Blockade, HierarchyVersusOracle,
                         ::testing::Values(BlockadeMode::full, BlockadeMode::off));

TEST(Hierarchy, FirstOrderCoherenceIsOneAtZeroDelay)
{
  const ArraySetup setup = small_array(3, 1e-3, 1.3);
  const CorrelationEngine engine(setup.effective(eit_drive(0.05, 0.8)));
  for (const Channel c : kChannels)
  {
    EXPECT_NEAR(std::abs(engine.g1(c, {0.0})[0]), 1.0, 1e-9);
  }
}

TEST(Hierarchy, CrossCorrelationSymmetricAtZeroDelay)
{
  const ArraySetup setup = small_array(3, 1e-3, 1.3);
  const CorrelationEngine engine(setup.effective(eit_drive(0.05, 0.8, 0.05)));
  const Real fb = engine.g2(Channel::forward, Channel::backward, {0.0})[0];
  const Real bf = engine.g2(Channel::backward, Channel::forward, {0.0})[0];
  EXPECT_NEAR(fb, bf, 1e-9 * fb);
}

TEST(Hierarchy, ForwardCorrelationIndependentOfWeakDrive)
{
  auto g2_at = [&](Real power)
  {
    ProbeMode m;
    m.waist = 1.7;
    m.power = power;
    const ArraySetup setup =
        ArraySetup::make(build_disc_lattice(6, 0.75, polarization::circular()), m);
    const CorrelationEngine engine(setup.effective(eit_drive(0.05, 1.0)));
    return engine.g2(Channel::forward, Channel::forward, {0.0, 0.5, 3.0});
  };
  const std::vector<Real> a = g2_at(1e-4);
  const std::vector<Real> b = g2_at(1e-6);
  for (std::size_t k = 0; k < a.size(); ++k)
  {
    EXPECT_NEAR(a[k], b[k], 1e-3 * b[k]);
  }
}

TEST(Hierarchy, CorrelationsDecayToOneForCoherentChannels)
{
  // Holds in the weak-drive limit; the incoherent share of the flux is O(P).
  ProbeMode m;
  m.waist = 1.7;
  m.power = 1e-7;
  const ArraySetup setup =
      ArraySetup::make(build_disc_lattice(6, 0.75, polarization::circular()), m);
  for (const Real control : {0.0, 1.0})
  {
    const CorrelationEngine engine(setup.effective(eit_drive(0.05, control)));
    for (const Channel c : kChannels)
    {
      if (std::norm(engine.mean_field(c)) < 1e-3 * engine.flux(c))
      {
        continue;  // no coherent part to regress to
      }
      EXPECT_NEAR(engine.g2(c, c, {400.0})[0], 1.0, 1e-3) << name_of(c) << control;
    }
  }
}

TEST(Hierarchy, TwoPhotonDensityIsSymmetricForEqualChannels)
{
  const ArraySetup setup = small_array(3, 1e-3, 1.3);
  const CorrelationEngine engine(setup.effective(eit_drive(0.05, 0.8)));
  const MatrixXd rho = two_photon_density(engine, Channel::forward, Channel::forward,
                                          {0.0, 0.4, 1.1, 2.0});
  EXPECT_LT((rho - rho.transpose()).norm(), 1e-12 * rho.norm());
  EXPECT_GE(rho.minCoeff(), 0.0);
}

}  // namespace
}  // namespace rydarray
