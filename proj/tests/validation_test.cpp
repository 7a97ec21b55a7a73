// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "rydarray/correlations.hpp"
#include "rydarray/ode.hpp"
#include "rydarray/validation.hpp"
#include "test_support.hpp"

namespace rydarray
{
namespace
{

using testing::eit_drive;
using testing::small_array;

TEST(Dissipator, ReconstructsDecayMatrix)
{
  const CouplingMatrix c = coupling_matrices(build_disc_lattice(4, 0.75, polarization::circular()));
  const JumpChannels j = diagonalize_dissipator(c);
  const MatrixXd back = j.vectors * j.rates.asDiagonal() * j.vectors.transpose();
  EXPECT_LT((back - c.G).norm(), 1e-12);
  EXPECT_GE(j.rates.minCoeff(), 0.0);
  MatrixXd bad = MatrixXd::Identity(2, 2);
  bad(1, 1) = -0.5;
  EXPECT_THROW(diagonalize_dissipator(bad), NumericError);
}

TEST(Dissipator, SymmetricPairRates)
{
  Eigen::Matrix3Xd p = Eigen::Matrix3Xd::Zero(3, 2);
  p(0, 1) = 0.4;
  const CouplingMatrix c = coupling_matrices(custom_lattice(p, polarization::circular()));
  const JumpChannels j = diagonalize_dissipator(c);
  VectorXd rates = j.rates;
  std::sort(rates.data(), rates.data() + rates.size());
  const Real cross = std::abs(c.G(0, 1));
  EXPECT_NEAR(rates(0), 1.0 - cross, 1e-14);
  EXPECT_NEAR(rates(1), 1.0 + cross, 1e-14);
  EXPECT_NEAR(rates.sum(), 2.0, 1e-14);
}

TEST(Generator, UndrivenAtomDecaysExponentially)
{
  const ArraySetup setup = small_array(1, 1e-3);
  DriveParams d;
  EffectiveOperator op = setup.effective(d);
  op.drive.setZero();
  op.d01.setZero();
  const SparseMatrixXc h = full_generator(op);
  VectorXc psi = VectorXc::Zero(h.rows());
  psi(1) = 1.0;  // |e>
  Dopri5 ode([&](Real, const VectorXc &y) -> VectorXc { return -I * (h * y); }, 0.0, psi,
             OdeTolerance{1e-10, 1e-14, 1e-12, 0.5});
  for (const Real t : {0.5, 1.0, 3.0})
  {
    ode.advance_to(t);
    EXPECT_NEAR(ode.state().squaredNorm(), std::exp(-t), 1e-8);
  }
}

TEST(Lowering, ActsOnEachSector)
{
  const TruncatedBasis b = enumerate_basis(3, BlockadeMode::full);
  const VectorXc w = VectorXc::LinSpaced(3, 1.0, 3.0);
  VectorXc psi = VectorXc::Zero(b.total_dim());
  psi(1 + 1) = 2.0;                       // e_1
  psi(1 + 6 + b.es_index(2, 0)) = 1.0;    // e_2 s_0
  psi(1 + 6 + b.ee_index(0, 1)) = I;      // e_0 e_1
  const VectorXc out = apply_lowering(b, w, psi);
  EXPECT_EQ(out(0), 2.0 * w(1));
  EXPECT_EQ(out(1 + 3 + 0), w(2));
  EXPECT_EQ(out(1 + 0), I * w(1));
  EXPECT_EQ(out(1 + 1), I * w(0));
}

TEST(DenseOracle, SingleAtomSaturation)
{
  // Exact two-level steady state: ρ_ee = |b|² / (Δ² + 1/4 + 2|b|²).
  const ArraySetup setup = small_array(1, 0.2);
  DriveParams d;
  d.detuning = 0.3;
  const EffectiveOperator op = setup.effective(d);
  const DenseOracle oracle(op);
  const MatrixXc rho = oracle.steady_state();
  const Real b2 = std::norm(op.drive(0));
  EXPECT_NEAR(oracle.excited_population(rho), b2 / (0.09 + 0.25 + 2.0 * b2), 1e-12);
}

TEST(DenseOracle, SteadyStateIsADensityMatrix)
{
  const ArraySetup setup = small_array(2, 0.05);
  const DenseOracle oracle(setup.effective(eit_drive(0.1, 0.6, 0.05)));
  const MatrixXc rho = oracle.steady_state();
  EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
  EXPECT_LT((rho - rho.adjoint()).norm(), 1e-12);
  const Eigen::SelfAdjointEigenSolver<MatrixXc> es(rho);
  EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12);
  const MatrixXc later = oracle.evolve(rho, 3.0);
  EXPECT_LT((later - rho).norm(), 1e-9);
}

TEST(DenseOracle, TimeEvolutionPreservesTraceAndReachesSteadyState)
{
  const ArraySetup setup = small_array(2, 0.05);
  const DenseOracle oracle(setup.effective(eit_drive(0.0, 0.0)));
  MatrixXc rho = MatrixXc::Zero(oracle.levels(), oracle.levels());
  rho(1, 1) = 1.0;
  const MatrixXc later = oracle.evolve(rho, 1.7);
  EXPECT_NEAR(later.trace().real(), 1.0, 1e-12);
  EXPECT_LT((oracle.integrate_to_steady() - oracle.steady_state()).norm(), 1e-7);
}

TEST(Mcwf, TrajectoriesAreReproducible)
{
  const ArraySetup setup = small_array(3, 0.05, 1.2);
  McwfOptions opts;
  opts.t_end = 20.0;
  opts.burn_in = 2.0;
  const McwfEngine engine(setup.effective(eit_drive(0.05, 0.0)), opts);
  const TrajectoryRecord a = engine.evolve(7, 11);
  const TrajectoryRecord b = engine.evolve(7, 11);
  EXPECT_EQ(a.jump_times, b.jump_times);
  EXPECT_EQ(a.reflection, b.reflection);
  std::vector<TrajectoryRecord> serial;
  std::vector<TrajectoryRecord> threaded;
  const EnsembleSummary s1 = engine.ensemble(7, 24, 1, &serial);
  const EnsembleSummary s3 = engine.ensemble(7, 24, 3, &threaded);
  EXPECT_EQ(s1.jumps, s3.jumps);
  EXPECT_EQ(s1.reflection, s3.reflection);
  ASSERT_EQ(serial.size(), threaded.size());
  for (std::size_t k = 0; k < serial.size(); ++k)
  {
    EXPECT_EQ(serial[k].jump_times, threaded[k].jump_times);
  }
}

TEST(Mcwf, EnsembleAgreesWithDeterministicSteadyState)
{
  const ArraySetup setup = small_array(2, 0.05, 1.2);
  McwfOptions opts;
  opts.t_end = 40.0;
  opts.burn_in = 5.0;
  const EffectiveOperator op = setup.effective(eit_drive(0.0, 0.0));
  const McwfEngine engine(op, opts);
  const EnsembleSummary s = engine.ensemble(3, 400, 4);
  const CorrelationEngine reference(op);
  const Real r = reference.flux(Channel::backward) / reference.power();
  const Real t = reference.flux(Channel::forward) / reference.power();
  EXPECT_GT(s.jumps, 0);
  EXPECT_LT(std::abs(s.reflection - r), 4.0 * s.reflection_se + 1e-4 * r);
  EXPECT_LT(std::abs(s.transmission - t), 4.0 * s.transmission_se + 1e-4 * t);
}

}  // namespace
}  // namespace rydarray
