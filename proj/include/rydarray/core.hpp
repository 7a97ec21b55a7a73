// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace rydarray
{

// Natural units throughout: Γ = 1 (single-atom decay rate of |e>), c = 1,
// λ = 1 (wavelength of the |g>-|e> transition).
using Real = double;
using Complex = std::complex<double>;

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using VectorXd = Eigen::VectorXd;
using VectorXc = Eigen::VectorXcd;
using MatrixXd = Eigen::MatrixXd;
using MatrixXc = Eigen::MatrixXcd;
using RowVectorXc = Eigen::RowVectorXcd;

inline constexpr Real pi = std::numbers::pi;
inline constexpr Real wavenumber = 2.0 * pi;  // k = 2π/λ
inline constexpr Complex I{0.0, 1.0};

// Error classes map onto CLI exit codes: config=2, numeric=3, I/O=4.
// DomainError covers bad arguments to library calls.
class DomainError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::runtime_error
{
public:
  ConfigError(std::string key, const std::string &what)
    : std::runtime_error(what), key_(std::move(key))
  {
  }
  const std::string &key() const { return key_; }

private:
  std::string key_;
};

class NumericError : public std::runtime_error
{
public:
  explicit NumericError(const std::string &what, double condition_estimate = 0.0)
    : std::runtime_error(what), condition_(condition_estimate)
  {
  }
  double condition_estimate() const { return condition_; }

private:
  double condition_;
};

class IoError : public std::runtime_error
{
public:
  IoError(std::string path, const std::string &what)
    : std::runtime_error(path + ": " + what), path_(std::move(path))
  {
  }
  const std::string &path() const { return path_; }

private:
  std::string path_;
};

}  // namespace rydarray
