// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "rydarray/core.hpp"

namespace rydarray
{

struct OdeTolerance
{
  Real relative = 1e-8;
  Real absolute = 1e-12;
  Real min_step = 1e-12;
  Real max_step = 1.0;
};

/// Continuous extension of one accepted step on [t0, t0 + h].
struct DenseStep
{
  Real t0 = 0.0;
  Real h = 0.0;
  VectorXc r1, r2, r3, r4, r5;

  Real t1() const { return t0 + h; }
  VectorXc at(Real t) const
  {
    const Real theta = (t - t0) / h;
    const Real theta1 = 1.0 - theta;
    return r1 + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
  }
  VectorXc end() const { return r1 + r2; }
};

/// Dormand-Prince 5(4) integrator with dense output for complex vector
/// states. F is callable as f(t, y) -> VectorXc.
template <typename F>
class Dopri5
{
public:
  Dopri5(F f, Real t0, VectorXc y0, OdeTolerance tol = {})
    : f_(std::move(f)), tol_(tol), t_(t0), y_(std::move(y0))
  {
    k1_ = f_(t_, y_);
    h_ = std::min(tol_.max_step, 0.01);
  }

  Real time() const { return t_; }
  const VectorXc &state() const { return y_; }
  Real last_step_start() const { return last_.t0; }
  const DenseStep &last_step() const { return last_; }

  /// Takes one accepted step, never past t_stop.
  void step(Real t_stop)
  {
    constexpr Real c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr Real a21 = 1.0 / 5;
    constexpr Real a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr Real a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr Real a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
    constexpr Real a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr Real b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
    constexpr Real e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    for (;;)
    {
      Real h = std::min(h_, t_stop - t_);
      if (h < tol_.min_step && t_stop - t_ > tol_.min_step)
      {
        throw NumericError("ODE step size underflow");
      }
      const VectorXc k2 = f_(t_ + c2 * h, y_ + h * (a21 * k1_));
      const VectorXc k3 = f_(t_ + c3 * h, y_ + h * (a31 * k1_ + a32 * k2));
      const VectorXc k4 = f_(t_ + c4 * h, y_ + h * (a41 * k1_ + a42 * k2 + a43 * k3));
      const VectorXc k5 =
          f_(t_ + c5 * h, y_ + h * (a51 * k1_ + a52 * k2 + a53 * k3 + a54 * k4));
      const VectorXc k6 =
          f_(t_ + h, y_ + h * (a61 * k1_ + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      VectorXc y_new = y_ + h * (b1 * k1_ + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      const VectorXc k7 = f_(t_ + h, y_new);
      const VectorXc err = h * (e1 * k1_ + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      const Eigen::ArrayXd scale =
          tol_.absolute + tol_.relative * y_.cwiseAbs().array().max(y_new.cwiseAbs().array());
      const Real norm = std::sqrt((err.cwiseAbs().array() / scale).square().mean());
      const Real factor = std::clamp(0.9 * std::pow(std::max(norm, 1e-10), -0.2), 0.2, 5.0);
      if (norm <= 1.0 || h <= tol_.min_step)
      {
        // Dense-output coefficients (Hairer's continuous extension).
        constexpr Real d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                       d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                       d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
        last_.r1 = y_;
        last_.r2 = y_new - y_;
        last_.r3 = h * k1_ - last_.r2;
        last_.r4 = last_.r2 - h * k7 - last_.r3;
        last_.r5 = h * (d1 * k1_ + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
        last_.t0 = t_;
        last_.h = h;
        t_ += h;
        y_ = std::move(y_new);
        k1_ = k7;
        h_ = std::min(h * factor, tol_.max_step);
        return;
      }
      h_ = h * factor;
    }
  }

  /// State at t in [last_step_start(), time()].
  VectorXc dense(Real t) const { return last_.at(t); }

  /// Integrates to exactly t_end.
  void advance_to(Real t_end)
  {
    while (t_ < t_end - 1e-14 * std::max(1.0, std::abs(t_end)))
    {
      step(t_end);
    }
  }

  /// Replaces the state (after a discontinuity) keeping the step size.
  void reset(Real t, VectorXc y)
  {
    t_ = t;
    y_ = std::move(y);
    k1_ = f_(t_, y_);
  }

private:
  F f_;
  OdeTolerance tol_;
  Real t_;
  VectorXc y_;
  VectorXc k1_;
  Real h_ = 0.01;
  DenseStep last_;
};

}  // namespace rydarray
