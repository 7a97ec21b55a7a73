// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "rydarray/core.hpp"
#include "rydarray/validation.hpp"

namespace rydarray
{

struct Table
{
  std::vector<std::string> columns;
  std::vector<std::vector<Real>> rows;

  void add_row(std::vector<Real> row);
};

/// CSV text: header row, shortest round-trip numbers, LF line ends.
std::string to_csv(const Table &table);

/// Writes <dir>/<stem>.csv and <dir>/<stem>.json atomically (temp file plus
/// rename). A NaN anywhere aborts before anything is written.
std::vector<std::string> write_results(const std::string &dir, const std::string &stem,
                                       const Table &table, const nlohmann::json &sidecar);

/// Atomic text write.
void write_file_atomic(const std::string &path, const std::string &content);

/// One JSON object per trajectory.
void write_trajectory_log(const std::string &path, const std::vector<TrajectoryRecord> &records);

}  // namespace rydarray
