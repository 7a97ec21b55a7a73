// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#include "rydarray/linear_response.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace rydarray
{

ArraySetup ArraySetup::make(Lattice lattice, ProbeMode mode, BlockadeParams blockade)
{
  ArraySetup setup;
  setup.coupling = coupling_matrices(lattice);
  setup.lattice = std::move(lattice);
  setup.mode = mode;
  setup.blockade = blockade;
  return setup;
}

EffectiveOperator ArraySetup::effective(const DriveParams &drive) const
{
  const TruncatedBasis basis = enumerate_basis(lattice.size(), blockade.mode);
  const VectorXc b = atom_photon_coupling() * field();
  MatrixXd shifts;
  if (blockade.mode == BlockadeMode::vdw)
  {
    shifts = rydberg_pair_shifts(lattice, blockade.c6);
  }
  EffectiveOperator op = assemble_effective(basis, coupling, drive, b, shifts);
  op.probe_power = mode.power;
  return op;
}

namespace
{

VectorXc refined_solve(const MatrixXc &h, const VectorXc &rhs)
{
  Eigen::PartialPivLU<MatrixXc> lu(h);
  const Real rcond = lu.rcond();
  if (!(rcond > 1e-14))
  {
    throw NumericError("single-excitation block is singular or ill-conditioned", 1.0 / rcond);
  }
  VectorXc x = lu.solve(rhs);
  const Real target = 1e-12 * std::max(rhs.norm(), 1e-300);
  for (int pass = 0; pass < 3; ++pass)
  {
    const VectorXc r = rhs - h * x;
    if (r.norm() <= target)
    {
      break;
    }
    x += lu.solve(r);
  }
  if ((h * x - rhs).norm() > 1e-10 * std::max(rhs.norm(), 1e-300))
  {
    throw NumericError("single-excitation solve missed the residual target", 1.0 / rcond);
  }
  return x;
}

}  // namespace

SteadyAmplitudes solve_linear_steady(const EffectiveOperator &op)
{
  const Eigen::Index n = op.atoms();
  SteadyAmplitudes amps;
  amps.c1 = VectorXc::Zero(2 * n);
  if (op.drive_params.control == 0.0)
  {
    // |s> decouples; only the e block is driven.
    amps.c1.head(n) = refined_solve(op.h1.topLeftCorner(n, n), -op.d01.head(n));
  }
  else
  {
    amps.c1 = refined_solve(op.h1, -op.d01);
  }
  amps.drive_scale = std::sqrt(op.probe_power);
  return amps;
}

Complex reflected_amplitude(const SteadyAmplitudes &amps, const VectorXc &field, Real power)
{
  if (!(power > 0.0))
  {
    throw DomainError("probe power must be positive");
  }
  const Eigen::Index n = field.size();
  const Complex overlap = field.dot(amps.c1.head(n));  // Σ E*_j c_{e_j}
  return I * atom_photon_coupling() / power * overlap;
}

Rtl rtl_coefficients(const SteadyAmplitudes &amps, const VectorXc &field, Real power)
{
  const Complex s = reflected_amplitude(amps, field, power);
  Rtl out;
  out.reflection = std::norm(s);
  out.transmission = std::norm(1.0 + s);
  out.loss = 1.0 - out.transmission - out.reflection;
  return out;
}

Rtl rtl_coefficients(const SteadyAmplitudes &amps, const Lattice &lattice, const ProbeMode &mode)
{
  return rtl_coefficients(amps, field_at_sites(lattice, mode), mode.power);
}

Rtl two_level_response(const ArraySetup &setup, Real detuning)
{
  if (setup.lattice.size() == 0)
  {
    return {};
  }
  DriveParams drive;
  drive.detuning = detuning;
  drive.reference_detuning = detuning;
  const EffectiveOperator op = setup.effective(drive);
  return rtl_coefficients(solve_linear_steady(op), op.drive / atom_photon_coupling(),
                          setup.mode.power);
}

std::vector<SpectrumRow> spectrum_scan(const ArraySetup &setup, const std::vector<Real> &detunings,
                                       const DriveParams &drive)
{
  std::vector<SpectrumRow> rows;
  rows.reserve(detunings.size());
  const VectorXc field = setup.field();
  for (const Real delta : detunings)
  {
    SpectrumRow row;
    row.detuning = delta;
    try
    {
      DriveParams point = drive;
      point.detuning = delta;
      row.rtl = rtl_coefficients(solve_linear_steady(setup.effective(point)), field,
                                 setup.mode.power);
    }
    catch (const NumericError &e)
    {
      row.error = e.what();
      row.rtl = {std::nan(""), std::nan(""), std::nan("")};
    }
    rows.push_back(row);
  }
  return rows;
}

Real transparency_window(const ArraySetup &setup, const DriveParams &drive)
{
  if (!(drive.control > 0.0))
  {
    throw DomainError("transparency window needs a control field");
  }
  const VectorXc field = setup.field();
  auto excess = [&](Real delta)
  {
    DriveParams point = drive;
    point.detuning = delta;
    return rtl_coefficients(solve_linear_steady(setup.effective(point)), field, setup.mode.power)
               .transmission -
           0.5;
  };
  const Real center = drive.reference_detuning;
  if (excess(center) <= 0.0)
  {
    return 0.0;
  }
  const CollectiveParams cp = collective_params(setup.coupling, setup.lattice, setup.mode);
  const Real omega2 = drive.control * drive.control;
  const Real step = std::min(omega2 / cp.gamma_c, drive.control) / 50.0;
  auto edge = [&](Real direction)
  {
    Real inside = center;
    Real outside = center + direction * step;
    for (int k = 0; excess(outside) > 0.0; ++k)
    {
      if (k > 100000)
      {
        throw NumericError("transparency window edge not found");
      }
      inside = outside;
      outside += direction * step;
    }
    for (int it = 0; it < 60; ++it)
    {
      const Real mid = 0.5 * (inside + outside);
      (excess(mid) > 0.0 ? inside : outside) = mid;
    }
    return 0.5 * (inside + outside);
  };
  return edge(+1.0) - edge(-1.0);
}

DefectResponse defect_average(const ArraySetup &setup, Real detuning)
{
  const Eigen::Index n = setup.lattice.size();
  if (n < 2)
  {
    throw DomainError("defect average needs at least two atoms");
  }
  const VectorXd weights = defect_weights(setup.lattice, setup.mode);
  const Rtl full = two_level_response(setup, detuning);
  DefectResponse out;
  for (Eigen::Index j = 0; j < n; ++j)
  {
    if (weights(j) == 0.0)
    {
      continue;
    }
    try
    {
      ArraySetup reduced;
      reduced.lattice = remove_site(setup.lattice, j);
      reduced.mode = setup.mode;
      reduced.coupling = setup.coupling.without(j);
      reduced.blockade = setup.blockade;
      const Rtl r = two_level_response(reduced, detuning);
      out.d_reflection += weights(j) * (r.reflection - full.reflection);
      out.d_transmission += weights(j) * (r.transmission - full.transmission);
      out.d_loss += weights(j) * (r.loss - full.loss);
    }
    catch (const NumericError &)
    {
      ++out.failures;
    }
  }
  return out;
}

namespace
{

// Nelder-Mead simplex minimization in two dimensions.
template <typename F>
std::pair<Eigen::Vector2d, Real> minimize_simplex(F f, const Eigen::Vector2d &start,
                                                  const Eigen::Vector2d &scale)
{
  std::array<Eigen::Vector2d, 3> x{start, start + Eigen::Vector2d(scale(0), 0.0),
                                   start + Eigen::Vector2d(0.0, scale(1))};
  std::array<Real, 3> fx{f(x[0]), f(x[1]), f(x[2])};
  for (int it = 0; it < 2000; ++it)
  {
    std::array<int, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fx[a] < fx[b]; });
    const int best = order[0];
    const int mid = order[1];
    const int worst = order[2];
    if (std::abs(fx[worst] - fx[best]) < 1e-13 &&
        (x[worst] - x[best]).cwiseAbs().maxCoeff() < 1e-7)
    {
      break;
    }
    const Eigen::Vector2d centroid = 0.5 * (x[best] + x[mid]);
    const Eigen::Vector2d reflected = centroid + (centroid - x[worst]);
    const Real fr = f(reflected);
    if (fr < fx[best])
    {
      const Eigen::Vector2d expanded = centroid + 2.0 * (centroid - x[worst]);
      const Real fe = f(expanded);
      if (fe < fr)
      {
        x[worst] = expanded;
        fx[worst] = fe;
      }
      else
      {
        x[worst] = reflected;
        fx[worst] = fr;
      }
      continue;
    }
    if (fr < fx[mid])
    {
      x[worst] = reflected;
      fx[worst] = fr;
      continue;
    }
    const Eigen::Vector2d contracted = centroid + 0.5 * (x[worst] - centroid);
    const Real fc = f(contracted);
    if (fc < fx[worst])
    {
      x[worst] = contracted;
      fx[worst] = fc;
      continue;
    }
    for (int k : {mid, worst})
    {
      x[k] = x[best] + 0.5 * (x[k] - x[best]);
      fx[k] = f(x[k]);
    }
  }
  const auto it = std::min_element(fx.begin(), fx.end());
  const auto k = static_cast<std::size_t>(it - fx.begin());
  return {x[k], fx[k]};
}

}  // namespace

ReflectionOptimum optimize_reflection(const Lattice &lattice, const CouplingMatrix &coupling,
                                      Real waist_guess, Real detuning_guess)
{
  // R depends on (w0, Δ) only through the drive vector and a diagonal
  // shift, so one eigendecomposition of the exchange matrix serves all
  // evaluations.
  Eigen::ComplexEigenSolver<MatrixXc> eig(coupling.exchange());
  const MatrixXc &modes = eig.eigenvectors();
  const MatrixXc modes_inv = modes.inverse();
  const VectorXc &lambda = eig.eigenvalues();
  const Real g = atom_photon_coupling();

  auto reflection = [&](const Eigen::Vector2d &p)
  {
    if (!(p(0) > 0.05))
    {
      return 0.0;
    }
    ProbeMode mode;
    mode.waist = p(0);
    const VectorXc field = field_at_sites(lattice, mode);
    const VectorXc projected = modes_inv * (g * field);
    const VectorXc ce = modes * (projected.array() / (lambda.array() + p(1))).matrix();
    return std::norm(I * g / mode.power * field.dot(ce));
  };

  ReflectionOptimum best;
  for (const Real start : {0.5 * waist_guess, waist_guess, 1.5 * waist_guess})
  {
    const auto [x, fx] = minimize_simplex([&](const Eigen::Vector2d &p) { return -reflection(p); },
                                          Eigen::Vector2d(start, detuning_guess),
                                          Eigen::Vector2d(0.25, 0.02));
    if (-fx > best.reflection)
    {
      best = {x(0), x(1), -fx};
    }
  }
  return best;
}

ReflectionOptimum optimize_detuning(const ArraySetup &setup, Real lo, Real hi)
{
  if (!(hi > lo))
  {
    throw DomainError("detuning bracket must satisfy lo < hi");
  }
  // Golden-section search.
  const Real ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  auto f = [&](Real delta) { return two_level_response(setup, delta).reflection; };
  Real a = lo;
  Real b = hi;
  Real x1 = b - ratio * (b - a);
  Real x2 = a + ratio * (b - a);
  Real f1 = f(x1);
  Real f2 = f(x2);
  while (b - a > 1e-7)
  {
    if (f1 > f2)
    {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = f(x1);
    }
    else
    {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = f(x2);
    }
  }
  const Real best = 0.5 * (a + b);
  return {setup.mode.waist, best, f(best)};
}

}  // namespace rydarray
