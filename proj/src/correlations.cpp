// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#include "rydarray/correlations.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "rydarray/ode.hpp"

namespace rydarray
{

std::string_view name_of(Channel channel)
{
  return channel == Channel::forward ? "forward" : "backward";
}

Channel channel_from_name(std::string_view name)
{
  if (name == "forward" || name == "fw" || name == "T")
  {
    return Channel::forward;
  }
  if (name == "backward" || name == "bw" || name == "R")
  {
    return Channel::backward;
  }
  throw DomainError("unknown channel '" + std::string(name) + "'");
}

VectorXc output_weights(const EffectiveOperator &op)
{
  // b = g E, so κ = i g E*/√P = i conj(b)/√P.
  return I * op.drive.conjugate() / std::sqrt(op.probe_power);
}

SteadyAmplitudes solve_two_excitation_steady(const EffectiveOperator &op, SteadyAmplitudes amps)
{
  if (amps.c1.size() != op.basis.dim(1))
  {
    throw DomainError("two-excitation solve needs the sector-1 solution");
  }
  amps.c2 = solve_pair_amplitudes(op, amps.c1);
  return amps;
}

ConditionalState output_apply(Channel channel, const SteadyAmplitudes &amps,
                              const EffectiveOperator &op)
{
  const Eigen::Index n = op.atoms();
  const VectorXc kappa = output_weights(op);
  const Real sqrt_p = std::sqrt(op.probe_power);
  const Real fw = channel == Channel::forward ? 1.0 : 0.0;
  ConditionalState out;
  out.vacuum = fw * sqrt_p * amps.c0 + (kappa.transpose() * amps.c1.head(n)).value();
  out.sector1 = fw * sqrt_p * amps.c1;
  if (amps.c2)
  {
    out.sector1 += amps.c2->lowered() * kappa;
  }
  return out;
}

CorrelationEngine::CorrelationEngine(const EffectiveOperator &op)
  : n_(op.atoms()), power_(op.probe_power)
{
  amps_ = solve_two_excitation_steady(op, solve_linear_steady(op));
  dim_ = (op.drive_params.control == 0.0) ? n_ : 2 * n_;

  kappa_ = output_weights(op);
  c1_ = amps_.c1.head(dim_);
  drive_ = op.d01.head(dim_);
  h1_ = op.h1.topLeftCorner(dim_, dim_);
  lowered_ = amps_.c2->lowered().topRows(dim_);
  lowered_out_ = lowered_ * kappa_;
  drive_down_ = -lowered_ * op.drive.conjugate();
  decay_ = -2.0 * op.exchange.imag();

  Eigen::ComplexEigenSolver<MatrixXc> eig(h1_);
  if (eig.info() != Eigen::Success)
  {
    throw NumericError("single-excitation eigendecomposition failed");
  }
  eigenvalues_ = eig.eigenvalues();
  modes_ = eig.eigenvectors();
  Eigen::PartialPivLU<MatrixXc> modes_lu(modes_);
  modes_inv_ = modes_lu.inverse();

  // Steady density matrix through fourth order: coherence between sectors
  // 1 and 0, then the sector-1 block from its Sylvester equation.
  const VectorXc ce = c1_.head(n_);
  const Real rho00 = 1.0 - c1_.squaredNorm();
  const VectorXc jump_fed = lowered_ * (decay_ * ce.conjugate());
  const VectorXc rhs10 = -drive_ * rho00 - drive_down_ + c1_ * c1_.dot(drive_) - I * jump_fed;
  Eigen::PartialPivLU<MatrixXc> h1_lu(h1_);
  rho10_ = h1_lu.solve(rhs10);

  const MatrixXc rhs11 = -drive_ * rho10_.adjoint() - drive_down_ * c1_.adjoint() +
                         rho10_ * drive_.adjoint() + c1_ * drive_down_.adjoint() -
                         I * lowered_ * decay_ * lowered_.adjoint();
  MatrixXc t = modes_inv_ * rhs11 * modes_inv_.adjoint();
  for (Eigen::Index l = 0; l < dim_; ++l)
  {
    for (Eigen::Index k = 0; k < dim_; ++k)
    {
      t(k, l) /= eigenvalues_(k) - std::conj(eigenvalues_(l));
    }
  }
  rho11_ = modes_ * t * modes_.adjoint();
  rho11_ = 0.5 * (rho11_ + rho11_.adjoint()).eval();

  if (!rho10_.allFinite() || !rho11_.allFinite())
  {
    throw NumericError("steady density matrix is not finite");
  }
}

Complex CorrelationEngine::mean_field(Channel channel) const
{
  return forward(channel) * std::sqrt(power_) +
         (kappa_.transpose() * rho10_.head(n_)).value() + c1_.dot(lowered_out_);
}

Real CorrelationEngine::flux(Channel channel) const
{
  const Real fw = forward(channel);
  const Complex coherent = (kappa_.transpose() * rho10_.head(n_)).value() + c1_.dot(lowered_out_);
  const Complex incoherent =
      (kappa_.transpose() * rho11_.topLeftCorner(n_, n_) * kappa_.conjugate()).value();
  return fw * power_ + 2.0 * fw * std::sqrt(power_) * coherent.real() + incoherent.real() +
         lowered_out_.squaredNorm();
}

Complex CorrelationEngine::vacuum_amplitude(Channel c) const
{
  return forward(c) * std::sqrt(power_) + (kappa_.transpose() * c1_.head(n_)).value();
}

VectorXc CorrelationEngine::conditional_sector1(Channel c, Real tau) const
{
  // φ(τ) = A0 c1 + exp(−i H1 τ)(φ(0) − A0 c1).
  const Complex a0 = vacuum_amplitude(c);
  const VectorXc start = forward(c) * std::sqrt(power_) * c1_ + lowered_out_;
  const VectorXc deviation = modes_inv_ * (start - a0 * c1_);
  const VectorXc phases = (-I * eigenvalues_.array() * tau).exp();
  return a0 * c1_ + modes_ * (phases.array() * deviation.array()).matrix();
}

Real CorrelationEngine::pair_density(Channel first, Channel second, Real tau) const
{
  if (tau < 0.0)
  {
    throw DomainError("delay must be nonnegative");
  }
  const VectorXc phi = conditional_sector1(first, tau);
  const Complex amp = forward(second) * std::sqrt(power_) * vacuum_amplitude(first) +
                      (kappa_.transpose() * phi.head(n_)).value();
  return std::norm(amp);
}

std::vector<Real> CorrelationEngine::g2(Channel first, Channel second,
                                        const std::vector<Real> &taus) const
{
  const Real norm = flux(first) * flux(second);
  if (!(norm > 0.0))
  {
    throw NumericError("vanishing photon flux in g2 normalization");
  }
  std::vector<Real> out;
  out.reserve(taus.size());
  for (const Real tau : taus)
  {
    out.push_back(pair_density(first, second, tau) / norm);
  }
  return out;
}

std::vector<Complex> CorrelationEngine::g1(Channel channel, const std::vector<Real> &taus) const
{
  // The ket side of a_α ρ evolves with jumps feeding back from the pair
  // sector; y is the adjoint of its (sector 0, sector 1) block.
  const Real fw = forward(channel);
  const Real sqrt_p = std::sqrt(power_);
  const Complex a0 = vacuum_amplitude(channel);
  const Complex mean = mean_field(channel);
  const VectorXc source_down = std::conj(a0) * drive_down_;

  auto rhs = [&](Real tau, const VectorXc &y) -> VectorXc
  {
    const VectorXc phi = conditional_sector1(channel, tau);
    const Complex x00 = mean - c1_.dot(phi);
    return I * c1_ * std::conj(drive_.dot(phi)) - I * std::conj(x00) * drive_ - I * (h1_ * y) -
           I * source_down + lowered_ * (decay_ * phi.head(n_).conjugate());
  };
  auto correlation = [&](Real tau, const VectorXc &y)
  {
    const VectorXc phi = conditional_sector1(channel, tau);
    return fw * sqrt_p * mean + std::conj((kappa_.transpose() * y.head(n_)).value()) +
           lowered_out_.dot(phi);
  };

  const VectorXc y0 = fw * sqrt_p * rho10_ + rho11_ * [&] {
    VectorXc k = VectorXc::Zero(dim_);
    k.head(n_) = kappa_.conjugate();
    return k;
  }();
  const Complex g0 = correlation(0.0, y0);
  if (!(std::abs(g0) > 0.0))
  {
    throw NumericError("vanishing photon flux in g1 normalization");
  }

  OdeTolerance tol;
  tol.relative = 1e-10;
  tol.absolute = 1e-14 * std::max(y0.norm(), 1e-300);
  tol.max_step = 0.5;
  Dopri5 solver(rhs, 0.0, y0, tol);
  std::vector<Complex> out;
  out.reserve(taus.size());
  for (const Real tau : taus)
  {
    if (tau < solver.time())
    {
      throw DomainError("g1 delays must be sorted ascending");
    }
    solver.advance_to(tau);
    out.push_back(correlation(tau, solver.state()) / g0);
  }
  return out;
}

Real delay_time(Real gamma_c, Real control)
{
  if (control == 0.0)
  {
    throw DomainError("delay time needs a nonzero control field");
  }
  return gamma_c / (2.0 * control * control);
}

std::vector<Real> default_tau_grid(Real tau_max, int count)
{
  if (count < 2 || !(tau_max > 0.0))
  {
    throw DomainError("tau grid needs at least two points and a positive range");
  }
  std::vector<Real> taus{0.0};
  const Real lo = std::log(tau_max * 1e-3);
  const Real hi = std::log(tau_max);
  for (int k = 0; k < count - 1; ++k)
  {
    taus.push_back(std::exp(lo + (hi - lo) * k / (count - 2)));
  }
  taus.back() = tau_max;
  return taus;
}

Real collapse_check(const std::vector<std::vector<Real>> &curves)
{
  Real worst = 0.0;
  for (std::size_t a = 0; a < curves.size(); ++a)
  {
    for (std::size_t b = a + 1; b < curves.size(); ++b)
    {
      if (curves[a].size() != curves[b].size() || curves[a].empty())
      {
        throw DomainError("collapse check needs curves on a common grid");
      }
      const Eigen::Map<const VectorXd> x(curves[a].data(), static_cast<Eigen::Index>(curves[a].size()));
      const Eigen::Map<const VectorXd> y(curves[b].data(), static_cast<Eigen::Index>(curves[b].size()));
      const Real scale = (0.5 * (x + y)).norm();
      const Real diff = (x - y).norm();
      worst = std::max(worst, scale > 0.0 ? diff / scale : diff);
    }
  }
  return worst;
}

MatrixXd two_photon_density(const CorrelationEngine &engine, Channel first, Channel second,
                            const std::vector<Real> &z)
{
  const auto n = static_cast<Eigen::Index>(z.size());
  MatrixXd rho(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    for (Eigen::Index j = 0; j < n; ++j)
    {
      const Real dz = z[static_cast<std::size_t>(j)] - z[static_cast<std::size_t>(i)];
      rho(i, j) = dz >= 0.0 ? engine.pair_density(first, second, dz)
                            : engine.pair_density(second, first, -dz);
    }
  }
  return rho;
}

}  // namespace rydarray
