// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#include "rydarray/validation.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "rydarray/linear_response.hpp"
#include "rydarray/pair_solver.hpp"

namespace rydarray
{

JumpChannels diagonalize_dissipator(const MatrixXd &decay)
{
  if ((decay - decay.transpose()).cwiseAbs().maxCoeff() > 1e-12)
  {
    throw NumericError("decay matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(decay);
  JumpChannels ch{eig.eigenvalues(), eig.eigenvectors()};
  if (ch.rates.size() > 0 && ch.rates.minCoeff() < -1e-10)
  {
    throw NumericError("decay matrix is not positive semidefinite", ch.rates.minCoeff());
  }
  ch.rates = ch.rates.cwiseMax(0.0);
  return ch;
}

VectorXc apply_lowering(const TruncatedBasis &basis, const VectorXc &weights, const VectorXc &psi)
{
  const Eigen::Index n = basis.atoms;
  const Eigen::Index o1 = 1;
  const Eigen::Index o2 = 1 + 2 * n;
  VectorXc out = VectorXc::Zero(psi.size());
  out(0) = (weights.transpose() * psi.segment(o1, n)).value();
  for (const auto &[i, j] : basis.ee)
  {
    const Complex amp = psi(o2 + basis.ee_index(i, j));
    out(o1 + i) += weights(j) * amp;
    out(o1 + j) += weights(i) * amp;
  }
  for (const auto &[i, j] : basis.es)
  {
    out(o1 + n + j) += weights(i) * psi(o2 + basis.es_index(i, j));
  }
  return out;
}

Real TrajectoryRecord::mean_reflection() const
{
  if (reflection.empty())
  {
    return 0.0;
  }
  return Eigen::Map<const VectorXd>(reflection.data(), static_cast<Eigen::Index>(reflection.size()))
      .mean();
}

Real TrajectoryRecord::mean_transmission() const
{
  if (transmission.empty())
  {
    return 0.0;
  }
  return Eigen::Map<const VectorXd>(transmission.data(),
                                    static_cast<Eigen::Index>(transmission.size()))
      .mean();
}

McwfEngine::McwfEngine(const EffectiveOperator &op, McwfOptions options)
  : basis_(op.basis), generator_(full_generator(op)),
    channels_(diagonalize_dissipator(MatrixXd(-2.0 * op.exchange.imag()))),
    kappa_(output_weights(op)), power_(op.probe_power), options_(options)
{
  if (!(options_.t_end > options_.burn_in) || options_.burn_in < 0.0 || !(options_.sample_dt > 0.0))
  {
    throw DomainError("trajectory times must satisfy 0 <= burn_in < t_end");
  }
  const SteadyAmplitudes amps = solve_linear_steady(op);
  const PairAmplitudes pairs = solve_pair_amplitudes(op, amps.c1);
  initial_.resize(dim());
  initial_(0) = 1.0;
  initial_.segment(1, basis_.dim(1)) = amps.c1;
  initial_.tail(basis_.dim(2)) = pairs.flatten(basis_);
  initial_.normalize();
  build_no_jump_path();
}

VectorXc McwfEngine::rhs(const VectorXc &psi) const
{
  return -I * (generator_ * psi);
}

void McwfEngine::build_no_jump_path()
{
  Dopri5 integrator([this](Real, const VectorXc &y) { return rhs(y); }, 0.0, initial_,
                    options_.tolerance);
  while (integrator.time() < options_.t_end)
  {
    integrator.step(options_.t_end);
    no_jump_path_.push_back(integrator.last_step());
  }
}

TrajectoryRecord McwfEngine::evolve(std::uint64_t seed, std::uint64_t index) const
{
  TrajectoryRecord rec;
  rec.seed = seed;
  rec.index = index;
  rec.duration = options_.t_end;

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<Real> uniform(0.0, 1.0);
  Real threshold = uniform(rng);

  const Real sqrt_p = std::sqrt(power_);
  Real next_sample = options_.burn_in;

  auto record_sample = [&](Real t, const VectorXc &psi)
  {
    const VectorXc phi = psi.normalized();
    const VectorXc emitted = apply_lowering(basis_, kappa_, phi);
    rec.sample_times.push_back(t);
    rec.reflection.push_back(emitted.squaredNorm() / power_);
    rec.transmission.push_back((sqrt_p * phi + emitted).squaredNorm() / power_);
    if (phi.tail(basis_.dim(2)).squaredNorm() > options_.pair_population_bound)
    {
      ++rec.truncation_warnings;
    }
  };

  // Processes one step; returns the post-jump state time if a jump fired.
  VectorXc jumped_state;
  auto process = [&](const DenseStep &s) -> std::optional<Real>
  {
    Real t_jump = s.t1();
    bool jump = s.end().squaredNorm() <= threshold;
    if (jump)
    {
      Real lo = s.t0;
      Real hi = s.t1();
      for (int it = 0; it < 60; ++it)
      {
        const Real mid = 0.5 * (lo + hi);
        (s.at(mid).squaredNorm() > threshold ? lo : hi) = mid;
      }
      t_jump = hi;
    }
    while (next_sample <= t_jump + 1e-12 && next_sample <= options_.t_end + 1e-12)
    {
      record_sample(next_sample, s.at(std::min(next_sample, s.t1())));
      next_sample += options_.sample_dt;
    }
    if (!jump)
    {
      return std::nullopt;
    }
    const VectorXc psi = s.at(t_jump);
    VectorXd weights(channels_.size());
    std::vector<VectorXc> candidates;
    candidates.reserve(static_cast<std::size_t>(channels_.size()));
    for (Eigen::Index m = 0; m < channels_.size(); ++m)
    {
      const VectorXc u = std::sqrt(channels_.rates(m)) * channels_.vectors.col(m).cast<Complex>();
      candidates.push_back(apply_lowering(basis_, u, psi));
      weights(m) = candidates.back().squaredNorm();
    }
    const Real total = weights.sum();
    if (!(total > 0.0))
    {
      throw NumericError("jump fired with vanishing jump rate");
    }
    Real pick = uniform(rng) * total;
    Eigen::Index m = 0;
    while (m + 1 < channels_.size() && pick >= weights(m))
    {
      pick -= weights(m);
      ++m;
    }
    rec.jump_times.push_back(t_jump);
    rec.jump_channels.push_back(static_cast<int>(m));
    jumped_state = candidates[static_cast<std::size_t>(m)].normalized();
    threshold = uniform(rng);
    return t_jump;
  };

  std::optional<Real> jump;
  for (const DenseStep &s : no_jump_path_)
  {
    jump = process(s);
    if (jump)
    {
      break;
    }
  }
  if (jump)
  {
    Dopri5 integrator([this](Real, const VectorXc &y) { return rhs(y); }, *jump, jumped_state,
                      options_.tolerance);
    while (integrator.time() < options_.t_end)
    {
      integrator.step(options_.t_end);
      if (const auto t = process(integrator.last_step()))
      {
        integrator.reset(*t, jumped_state);
      }
    }
  }
  return rec;
}

EnsembleSummary McwfEngine::ensemble(std::uint64_t seed, int count, int workers,
                                     std::vector<TrajectoryRecord> *records) const
{
  if (count < 1)
  {
    throw DomainError("ensemble needs at least one trajectory");
  }
  workers = std::max(1, workers);
  std::vector<TrajectoryRecord> all(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  auto work = [&](int w)
  {
    try
    {
      for (int k = w; k < count; k += workers)
      {
        all[static_cast<std::size_t>(k)] = evolve(seed, static_cast<std::uint64_t>(k));
      }
    }
    catch (...)
    {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };
  if (workers == 1)
  {
    work(0);
  }
  else
  {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
    {
      pool.emplace_back(work, w);
    }
    for (auto &t : pool)
    {
      t.join();
    }
  }
  for (const auto &e : errors)
  {
    if (e)
    {
      std::rethrow_exception(e);
    }
  }

  EnsembleSummary sum;
  sum.trajectories = count;
  VectorXd r(count);
  VectorXd t(count);
  for (int k = 0; k < count; ++k)
  {
    const TrajectoryRecord &rec = all[static_cast<std::size_t>(k)];
    r(k) = rec.mean_reflection();
    t(k) = rec.mean_transmission();
    sum.jumps += static_cast<long>(rec.jump_times.size());
    sum.truncation_warnings += rec.truncation_warnings;
  }
  auto stderr_of = [count](const VectorXd &x)
  {
    if (count < 2)
    {
      return 0.0;
    }
    return std::sqrt((x.array() - x.mean()).square().sum() / (count - 1) / count);
  };
  sum.reflection = r.mean();
  sum.transmission = t.mean();
  sum.reflection_se = stderr_of(r);
  sum.transmission_se = stderr_of(t);
  if (records)
  {
    *records = std::move(all);
  }
  return sum;
}

namespace
{

// Level of atom j in a product state index (0 = g, 1 = e, 2 = s).
int level_of(Eigen::Index state, Eigen::Index j)
{
  for (Eigen::Index k = 0; k < j; ++k)
  {
    state /= 3;
  }
  return static_cast<int>(state % 3);
}

Eigen::Index power3(Eigen::Index j)
{
  Eigen::Index p = 1;
  for (Eigen::Index k = 0; k < j; ++k)
  {
    p *= 3;
  }
  return p;
}

}  // namespace

DenseOracle::DenseOracle(const EffectiveOperator &op)
{
  const Eigen::Index n = op.atoms();
  if (n < 1 || n > 3)
  {
    throw DomainError("dense oracle supports 1 to 3 atoms");
  }
  if (op.drive_params.rydberg_loss != 0.0)
  {
    throw DomainError("dense oracle does not model Rydberg loss");
  }
  const Eigen::Index full = power3(n);
  std::vector<Eigen::Index> kept;
  std::vector<Eigen::Index> position(static_cast<std::size_t>(full), -1);
  for (Eigen::Index s = 0; s < full; ++s)
  {
    int rydberg = 0;
    for (Eigen::Index j = 0; j < n; ++j)
    {
      rydberg += level_of(s, j) == 2 ? 1 : 0;
    }
    if (op.basis.mode != BlockadeMode::full || rydberg <= 1)
    {
      position[static_cast<std::size_t>(s)] = static_cast<Eigen::Index>(kept.size());
      kept.push_back(s);
    }
  }
  const auto d = static_cast<Eigen::Index>(kept.size());

  // |to><from| on atom j, projected onto the kept states.
  auto sigma = [&](Eigen::Index j, int to, int from)
  {
    MatrixXc m = MatrixXc::Zero(d, d);
    for (Eigen::Index c = 0; c < d; ++c)
    {
      const Eigen::Index s = kept[static_cast<std::size_t>(c)];
      if (level_of(s, j) != from)
      {
        continue;
      }
      const Eigen::Index target = s + (to - from) * power3(j);
      const Eigen::Index r = position[static_cast<std::size_t>(target)];
      if (r >= 0)
      {
        m(r, c) = 1.0;
      }
    }
    return m;
  };

  const DriveParams &dp = op.drive_params;
  const Real rydberg = dp.rydberg_energy().real();
  const MatrixXd coherent = -op.exchange.real();
  const MatrixXd decay = -2.0 * op.exchange.imag();
  std::vector<MatrixXc> lower(static_cast<std::size_t>(n));
  for (Eigen::Index j = 0; j < n; ++j)
  {
    lower[static_cast<std::size_t>(j)] = sigma(j, 0, 1);
  }

  MatrixXc h = MatrixXc::Zero(d, d);
  for (Eigen::Index j = 0; j < n; ++j)
  {
    const MatrixXc &lj = lower[static_cast<std::size_t>(j)];
    h += dp.detuning * sigma(j, 1, 1) + rydberg * sigma(j, 2, 2);
    h -= op.drive(j) * lj.adjoint() + std::conj(op.drive(j)) * lj;
    h -= dp.control * (sigma(j, 1, 2) + sigma(j, 2, 1));
    for (Eigen::Index i = 0; i < n; ++i)
    {
      if (i != j)
      {
        h -= coherent(i, j) * lower[static_cast<std::size_t>(i)].adjoint() * lj;
      }
      if (i < j && op.pair_shift.size() > 0 && op.pair_shift(i, j) != 0.0)
      {
        h += op.pair_shift(i, j) * sigma(i, 2, 2) * sigma(j, 2, 2);
      }
    }
  }
  hamiltonian_ = h;

  MatrixXc heff = h;
  const MatrixXc id = MatrixXc::Identity(d, d);
  liouvillian_ = MatrixXc::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < n; ++i)
  {
    for (Eigen::Index j = 0; j < n; ++j)
    {
      const MatrixXc &li = lower[static_cast<std::size_t>(i)];
      const MatrixXc &lj = lower[static_cast<std::size_t>(j)];
      heff -= 0.5 * I * decay(i, j) * li.adjoint() * lj;
      // Γ_ij σ_ge^i ρ σ_eg^j
      liouvillian_ += decay(i, j) * Eigen::kroneckerProduct(MatrixXc(lj), li);
    }
  }
  liouvillian_ += -I * Eigen::kroneckerProduct(id, heff) +
                  I * Eigen::kroneckerProduct(MatrixXc(heff.conjugate()), id);

  const VectorXc kappa = output_weights(op);
  out_backward_ = MatrixXc::Zero(d, d);
  excited_ = MatrixXc::Zero(d, d);
  for (Eigen::Index j = 0; j < n; ++j)
  {
    out_backward_ += kappa(j) * lower[static_cast<std::size_t>(j)];
    excited_ += sigma(j, 1, 1);
  }
  out_forward_ = out_backward_ + std::sqrt(op.probe_power) * id;
}

MatrixXc DenseOracle::steady_state() const
{
  const Eigen::Index d = levels();
  MatrixXc system = liouvillian_;
  VectorXc rhs = VectorXc::Zero(d * d);
  system.row(0).setZero();
  for (Eigen::Index k = 0; k < d; ++k)
  {
    system(0, k + k * d) = 1.0;
  }
  rhs(0) = 1.0;
  const VectorXc x = system.fullPivLu().solve(rhs);
  MatrixXc rho = Eigen::Map<const MatrixXc>(x.data(), d, d);
  return 0.5 * (rho + rho.adjoint());
}

MatrixXc DenseOracle::evolve(const MatrixXc &rho, Real t) const
{
  const Eigen::Index d = levels();
  const MatrixXc propagator = (liouvillian_ * Complex(t)).exp();
  const VectorXc x = propagator * Eigen::Map<const VectorXc>(rho.data(), d * d);
  return Eigen::Map<const MatrixXc>(x.data(), d, d);
}

MatrixXc DenseOracle::integrate_to_steady(Real tol, Real t_max) const
{
  const Eigen::Index d = levels();
  const MatrixXc step = liouvillian_.exp();
  VectorXc x = VectorXc::Zero(d * d);
  x(0) = 1.0;  // |G><G|
  for (Real t = 0.0; t < t_max; t += 1.0)
  {
    const VectorXc next = step * x;
    const Real change = (next - x).norm();
    x = next;
    if (change < tol)
    {
      return Eigen::Map<const MatrixXc>(x.data(), d, d);
    }
  }
  throw NumericError("master equation did not reach stationarity");
}

Real DenseOracle::flux(Channel channel, const MatrixXc &rho) const
{
  const MatrixXc &a = output(channel);
  return (a * rho * a.adjoint()).trace().real();
}

Real DenseOracle::excited_population(const MatrixXc &rho) const
{
  return (excited_ * rho).trace().real();
}

std::vector<Real> DenseOracle::g2(Channel first, Channel second,
                                  const std::vector<Real> &taus) const
{
  const MatrixXc rho = steady_state();
  const MatrixXc &a = output(first);
  const MatrixXc conditioned = a * rho * a.adjoint();
  const Real norm = flux(first, rho) * flux(second, rho);
  std::vector<Real> out;
  for (const Real tau : taus)
  {
    out.push_back(flux(second, evolve(conditioned, tau)) / norm);
  }
  return out;
}

std::vector<Complex> DenseOracle::g1(Channel channel, const std::vector<Real> &taus) const
{
  const MatrixXc rho = steady_state();
  const MatrixXc &a = output(channel);
  const MatrixXc x = a * rho;
  const Real norm = flux(channel, rho);
  std::vector<Complex> out;
  for (const Real tau : taus)
  {
    out.push_back((a.adjoint() * evolve(x, tau)).trace() / norm);
  }
  return out;
}

}  // namespace rydarray
