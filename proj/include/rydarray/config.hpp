// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rydarray/core.hpp"
#include "rydarray/correlations.hpp"
#include "rydarray/hilbert.hpp"

namespace rydarray
{

// Key-value text with [section] headers; '#' starts a comment. Grids accept
// "linspace(lo, hi, n)" or comma-separated numbers.
struct ScenarioConfig
{
  struct LatticeSection
  {
    Real a_over_lambda = 0.75;
    int diameter_sites = 10;
    std::string polarization = "circular";
  } lattice;
  struct BeamSection
  {
    Real w0_over_lambda = 2.0;
    Real power_scale = 0.01;  // √P
  } beam;
  struct DriveSection
  {
    Real delta_over_gamma = 0.05;
    Real omega_over_gamma = 0.0;
    Real two_photon_detuning = 0.0;
    Real rydberg_loss = 0.0;
  } drive;
  struct BlockadeSection
  {
    std::string mode = "full";
    Real c6 = 0.0;
  } blockade;
  struct TruncationSection
  {
    int max_excitations = 2;
    Real pair_population_bound = 1e-2;
  } truncation;
  struct ScanSection
  {
    std::string variable = "none";
    std::vector<Real> grid;
  } scan;
  struct CorrelationSection
  {
    std::vector<std::pair<Channel, Channel>> channels{{Channel::forward, Channel::forward},
                                                      {Channel::backward, Channel::backward}};
    Real tau_max_over_delay = 10.0;
    int tau_points = 60;
    std::vector<Real> omega_set{0.5, 1.0, 2.0};
  } correlation;
  struct RunSection
  {
    std::uint64_t seed = 1;
    int trajectories = 2000;
    std::string output_dir = "results";
    Real t_end = 30.0;
    Real burn_in = 5.0;
  } run;

  /// Throws ConfigError naming the first invalid key.
  void validate() const;
};

ScenarioConfig parse_config(std::string_view text, const std::string &origin = "<config>");
ScenarioConfig load_config(const std::string &path);
std::string dump_config(const ScenarioConfig &config);

/// "linspace(lo, hi, n)" or "a, b, c".
std::vector<Real> parse_grid(std::string_view text);

/// Shortest decimal text that reads back to the same double.
std::string format_real(Real value);

/// 64-bit FNV-1a digest, hex encoded.
std::string content_hash(std::string_view text);

}  // namespace rydarray
