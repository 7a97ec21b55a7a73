// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#include "rydarray/results.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rydarray/config.hpp"

namespace rydarray
{

void Table::add_row(std::vector<Real> row)
{
  if (row.size() != columns.size())
  {
    throw DomainError("row width does not match the table header");
  }
  rows.push_back(std::move(row));
}

namespace
{

std::string csv_field(const std::string &s)
{
  if (s.find_first_of(",\"\n") == std::string::npos)
  {
    return s;
  }
  std::string quoted = "\"";
  for (const char c : s)
  {
    quoted += (c == '"') ? std::string("\"\"") : std::string(1, c);
  }
  return quoted + "\"";
}

}  // namespace

std::string to_csv(const Table &table)
{
  std::string out;
  for (std::size_t k = 0; k < table.columns.size(); ++k)
  {
    out += (k ? "," : "") + csv_field(table.columns[k]);
  }
  out += "\n";
  for (const auto &row : table.rows)
  {
    for (std::size_t k = 0; k < row.size(); ++k)
    {
      out += (k ? "," : "") + format_real(row[k]);
    }
    out += "\n";
  }
  return out;
}

void write_file_atomic(const std::string &path, const std::string &content)
{
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
    {
      throw IoError(tmp, "cannot open for writing");
    }
    out << content;
    out.flush();
    if (!out)
    {
      std::remove(tmp.c_str());
      throw IoError(tmp, "write failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec)
  {
    std::remove(tmp.c_str());
    throw IoError(path, "rename failed: " + ec.message());
  }
}

std::vector<std::string> write_results(const std::string &dir, const std::string &stem,
                                       const Table &table, const nlohmann::json &sidecar)
{
  for (std::size_t r = 0; r < table.rows.size(); ++r)
  {
    for (const Real v : table.rows[r])
    {
      if (std::isnan(v))
      {
        throw NumericError("NaN in result row " + std::to_string(r) + " of " + stem);
      }
    }
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
  {
    throw IoError(dir, "cannot create output directory: " + ec.message());
  }
  const std::string csv = (std::filesystem::path(dir) / (stem + ".csv")).string();
  const std::string meta = (std::filesystem::path(dir) / (stem + ".json")).string();
  const std::string csv_text = to_csv(table);
  nlohmann::json side = sidecar;
  side["csv"] = stem + ".csv";
  side["csv_hash"] = content_hash(csv_text);
  side["rows"] = table.rows.size();
  write_file_atomic(csv, csv_text);
  write_file_atomic(meta, side.dump(2) + "\n");
  return {csv, meta};
}

void write_trajectory_log(const std::string &path, const std::vector<TrajectoryRecord> &records)
{
  std::string text;
  for (const auto &rec : records)
  {
    nlohmann::json j;
    j["seed"] = rec.seed;
    j["index"] = rec.index;
    j["duration"] = rec.duration;
    j["jump_times"] = rec.jump_times;
    j["jump_channels"] = rec.jump_channels;
    j["sample_times"] = rec.sample_times;
    j["reflection"] = rec.reflection;
    j["transmission"] = rec.transmission;
    j["truncation_warnings"] = rec.truncation_warnings;
    text += j.dump() + "\n";
  }
  write_file_atomic(path, text);
}

}  // namespace rydarray
