// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rydarray/config.hpp"
#include "rydarray/linear_response.hpp"

namespace rydarray
{

struct RunOptions
{
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output_dir;
  int workers = 1;
};

struct ScenarioOutput
{
  std::vector<std::string> files;
  nlohmann::json summary;
};

/// Scenario names: fig1e, fig2a, fig2b, fig3a, fig3b, fig4, custom, mcwf.
const std::vector<std::string> &scenario_names();

ScenarioOutput run_scenario(const std::string &name, const ScenarioConfig &config,
                            const RunOptions &options = {});

/// Compares the truncated solvers with the dense master equation for a
/// row of n ≤ 3 atoms spaced by the configured lattice constant.
ScenarioOutput run_oracle(int atoms, const ScenarioConfig &config, const RunOptions &options = {});

/// Array setup of the configured lattice with overrides.
ArraySetup make_setup(const ScenarioConfig &config, int diameter_sites, Real waist);

/// Drive at probe detuning Δ with the control two-photon resonant there
/// (spectrum scans then move the probe while the control stays fixed).
DriveParams make_drive(const ScenarioConfig &config, Real detuning, Real control);

}  // namespace rydarray
