// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#include "rydarray/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "rydarray/geometry.hpp"

namespace rydarray
{

namespace
{

std::string_view trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
  {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;)
  {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos)
    {
      return parts;
    }
    start = pos + 1;
  }
}

Real to_real(std::string_view s)
{
  Real v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
  {
    throw DomainError("expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

template <typename Int>
Int to_integer(std::string_view s)
{
  Int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
  {
    throw DomainError("expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

std::string join_reals(const std::vector<Real> &values)
{
  std::string out;
  for (std::size_t k = 0; k < values.size(); ++k)
  {
    out += (k ? ", " : "") + format_real(values[k]);
  }
  return out;
}

std::vector<std::pair<Channel, Channel>> parse_channels(std::string_view text)
{
  std::vector<std::pair<Channel, Channel>> out;
  for (const auto item : split(text, ','))
  {
    const auto pair = split(item, ':');
    if (pair.size() != 2)
    {
      throw DomainError("channel pairs are written first:second");
    }
    out.emplace_back(channel_from_name(pair[0]), channel_from_name(pair[1]));
  }
  return out;
}

using Setter = std::function<void(ScenarioConfig &, std::string_view)>;

const std::map<std::string, Setter> &setters()
{
  static const std::map<std::string, Setter> table{
      {"lattice.a_over_lambda", [](auto &c, auto v) { c.lattice.a_over_lambda = to_real(v); }},
      {"lattice.diameter_sites",
       [](auto &c, auto v) { c.lattice.diameter_sites = to_integer<int>(v); }},
      {"lattice.polarization", [](auto &c, auto v) { c.lattice.polarization = std::string(v); }},
      {"beam.w0_over_lambda", [](auto &c, auto v) { c.beam.w0_over_lambda = to_real(v); }},
      {"beam.power_scale", [](auto &c, auto v) { c.beam.power_scale = to_real(v); }},
      {"drive.delta_over_gamma", [](auto &c, auto v) { c.drive.delta_over_gamma = to_real(v); }},
      {"drive.omega_over_gamma", [](auto &c, auto v) { c.drive.omega_over_gamma = to_real(v); }},
      {"drive.two_photon_detuning",
       [](auto &c, auto v) { c.drive.two_photon_detuning = to_real(v); }},
      {"drive.rydberg_loss", [](auto &c, auto v) { c.drive.rydberg_loss = to_real(v); }},
      {"blockade.mode", [](auto &c, auto v) { c.blockade.mode = std::string(v); }},
      {"blockade.c6", [](auto &c, auto v) { c.blockade.c6 = to_real(v); }},
      {"truncation.max_excitations",
       [](auto &c, auto v) { c.truncation.max_excitations = to_integer<int>(v); }},
      {"truncation.pair_population_bound",
       [](auto &c, auto v) { c.truncation.pair_population_bound = to_real(v); }},
      {"scan.variable", [](auto &c, auto v) { c.scan.variable = std::string(v); }},
      {"scan.grid", [](auto &c, auto v) { c.scan.grid = parse_grid(v); }},
      {"correlation.channels", [](auto &c, auto v) { c.correlation.channels = parse_channels(v); }},
      {"correlation.tau_max_over_delay",
       [](auto &c, auto v) { c.correlation.tau_max_over_delay = to_real(v); }},
      {"correlation.tau_points",
       [](auto &c, auto v) { c.correlation.tau_points = to_integer<int>(v); }},
      {"correlation.omega_set", [](auto &c, auto v) { c.correlation.omega_set = parse_grid(v); }},
      {"run.seed", [](auto &c, auto v) { c.run.seed = to_integer<std::uint64_t>(v); }},
      {"run.trajectories", [](auto &c, auto v) { c.run.trajectories = to_integer<int>(v); }},
      {"run.output_dir", [](auto &c, auto v) { c.run.output_dir = std::string(v); }},
      {"run.t_end", [](auto &c, auto v) { c.run.t_end = to_real(v); }},
      {"run.burn_in", [](auto &c, auto v) { c.run.burn_in = to_real(v); }},
  };
  return table;
}

std::string position(const std::string &origin, std::size_t line, std::size_t column)
{
  return origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": ";
}

}  // namespace

std::string format_real(Real value)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc())
  {
    throw NumericError("cannot format number");
  }
  return std::string(buf, ptr);
}

std::string content_hash(std::string_view text)
{
  std::uint64_t h = 14695981039346656037ULL;
  for (const unsigned char c : text)
  {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<Real> parse_grid(std::string_view text)
{
  text = trim(text);
  if (text.rfind("linspace(", 0) == 0 && text.back() == ')')
  {
    const auto args = split(text.substr(9, text.size() - 10), ',');
    if (args.size() != 3)
    {
      throw DomainError("linspace takes (lo, hi, n)");
    }
    const Real lo = to_real(args[0]);
    const Real hi = to_real(args[1]);
    const int n = to_integer<int>(args[2]);
    if (n < 1)
    {
      throw DomainError("linspace needs at least one point");
    }
    std::vector<Real> grid(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
    {
      grid[static_cast<std::size_t>(k)] = n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
    }
    return grid;
  }
  std::vector<Real> grid;
  for (const auto item : split(text, ','))
  {
    grid.push_back(to_real(item));
  }
  return grid;
}

void ScenarioConfig::validate() const
{
  auto require = [](bool ok, const char *key, const std::string &what)
  {
    if (!ok)
    {
      throw ConfigError(key, std::string(key) + ": " + what);
    }
  };
  require(lattice.a_over_lambda > 0.0, "lattice.a_over_lambda", "must be positive");
  require(lattice.diameter_sites >= 1, "lattice.diameter_sites", "must be at least 1");
  try
  {
    polarization::from_name(lattice.polarization);
  }
  catch (const DomainError &e)
  {
    require(false, "lattice.polarization", e.what());
  }
  require(beam.w0_over_lambda > 0.0, "beam.w0_over_lambda", "must be positive");
  require(beam.power_scale > 0.0, "beam.power_scale", "must be positive");
  require(std::isfinite(drive.delta_over_gamma), "drive.delta_over_gamma", "must be finite");
  require(drive.omega_over_gamma >= 0.0, "drive.omega_over_gamma", "must be nonnegative");
  require(std::isfinite(drive.two_photon_detuning), "drive.two_photon_detuning", "must be finite");
  require(drive.rydberg_loss >= 0.0, "drive.rydberg_loss", "must be nonnegative");
  try
  {
    blockade_from_name(blockade.mode);
  }
  catch (const DomainError &e)
  {
    require(false, "blockade.mode", e.what());
  }
  require(blockade.c6 >= 0.0, "blockade.c6", "must be nonnegative");
  require(truncation.max_excitations == 2, "truncation.max_excitations", "only 2 is supported");
  require(truncation.pair_population_bound > 0.0, "truncation.pair_population_bound",
          "must be positive");
  // Sector-2 norm grows like P; keep it well below the bound.
  require(beam.power_scale * beam.power_scale < truncation.pair_population_bound,
          "beam.power_scale", "probe too strong for the two-excitation truncation");
  static const std::vector<std::string> variables{"none", "delta", "w0", "diameter", "omega"};
  require(std::find(variables.begin(), variables.end(), scan.variable) != variables.end(),
          "scan.variable", "must be one of none, delta, w0, diameter, omega");
  require(scan.variable == "none" || !scan.grid.empty(), "scan.grid", "must not be empty");
  require(std::is_sorted(scan.grid.begin(), scan.grid.end()), "scan.grid", "must be sorted");
  require(!correlation.channels.empty(), "correlation.channels", "must not be empty");
  require(correlation.tau_max_over_delay > 0.0, "correlation.tau_max_over_delay",
          "must be positive");
  require(correlation.tau_points >= 2, "correlation.tau_points", "must be at least 2");
  require(!correlation.omega_set.empty() &&
              std::all_of(correlation.omega_set.begin(), correlation.omega_set.end(),
                          [](Real w) { return w > 0.0; }),
          "correlation.omega_set", "must hold positive values");
  require(run.trajectories >= 1, "run.trajectories", "must be at least 1");
  require(!run.output_dir.empty(), "run.output_dir", "must not be empty");
  require(run.burn_in >= 0.0, "run.burn_in", "must be nonnegative");
  require(run.t_end > run.burn_in, "run.t_end", "must exceed run.burn_in");
}

ScenarioConfig parse_config(std::string_view text, const std::string &origin)
{
  ScenarioConfig config;
  std::string section;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size())
  {
    const auto end = text.find('\n', start);
    std::string_view raw =
        text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++line_no;
    start = (end == std::string_view::npos) ? text.size() + 1 : end + 1;

    const auto hash = raw.find('#');
    const std::string_view line = trim(raw.substr(0, hash));
    if (line.empty())
    {
      continue;
    }
    const std::size_t column = raw.find_first_not_of(" \t") + 1;
    if (line.front() == '[')
    {
      if (line.back() != ']')
      {
        throw ConfigError("", position(origin, line_no, column) + "unterminated section header");
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const std::vector<std::string> sections{"lattice",    "beam",        "drive",
                                                     "blockade",   "truncation",  "scan",
                                                     "correlation", "run"};
      if (std::find(sections.begin(), sections.end(), section) == sections.end())
      {
        throw ConfigError(section, position(origin, line_no, column) + "unknown section [" +
                                       section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
    {
      throw ConfigError("", position(origin, line_no, column) + "expected key = value");
    }
    if (section.empty())
    {
      throw ConfigError("", position(origin, line_no, column) + "key outside of a section");
    }
    const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end())
    {
      throw ConfigError(key, position(origin, line_no, column) + "unknown key '" + key + "'");
    }
    const std::size_t value_column = raw.find(value, raw.find('=')) + 1;
    try
    {
      it->second(config, value);
    }
    catch (const DomainError &e)
    {
      throw ConfigError(key, position(origin, line_no, value_column) + key + ": " + e.what());
    }
  }
  config.validate();
  return config;
}

ScenarioConfig load_config(const std::string &path)
{
  std::ifstream in(path);
  if (!in)
  {
    throw IoError(path, "cannot open configuration file");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path);
}

std::string dump_config(const ScenarioConfig &c)
{
  std::ostringstream out;
  out << "[lattice]\n"
      << "a_over_lambda = " << format_real(c.lattice.a_over_lambda) << "\n"
      << "diameter_sites = " << c.lattice.diameter_sites << "\n"
      << "polarization = " << c.lattice.polarization << "\n\n"
      << "[beam]\n"
      << "w0_over_lambda = " << format_real(c.beam.w0_over_lambda) << "\n"
      << "power_scale = " << format_real(c.beam.power_scale) << "\n\n"
      << "[drive]\n"
      << "delta_over_gamma = " << format_real(c.drive.delta_over_gamma) << "\n"
      << "omega_over_gamma = " << format_real(c.drive.omega_over_gamma) << "\n"
      << "two_photon_detuning = " << format_real(c.drive.two_photon_detuning) << "\n"
      << "rydberg_loss = " << format_real(c.drive.rydberg_loss) << "\n\n"
      << "[blockade]\n"
      << "mode = " << c.blockade.mode << "\n"
      << "c6 = " << format_real(c.blockade.c6) << "\n\n"
      << "[truncation]\n"
      << "max_excitations = " << c.truncation.max_excitations << "\n"
      << "pair_population_bound = " << format_real(c.truncation.pair_population_bound) << "\n\n"
      << "[scan]\n"
      << "variable = " << c.scan.variable << "\n";
  if (!c.scan.grid.empty())
  {
    out << "grid = " << join_reals(c.scan.grid) << "\n";
  }
  out << "\n[correlation]\nchannels = ";
  for (std::size_t k = 0; k < c.correlation.channels.size(); ++k)
  {
    out << (k ? ", " : "") << name_of(c.correlation.channels[k].first) << ":"
        << name_of(c.correlation.channels[k].second);
  }
  out << "\n"
      << "tau_max_over_delay = " << format_real(c.correlation.tau_max_over_delay) << "\n"
      << "tau_points = " << c.correlation.tau_points << "\n"
      << "omega_set = " << join_reals(c.correlation.omega_set) << "\n\n"
      << "[run]\n"
      << "seed = " << c.run.seed << "\n"
      << "trajectories = " << c.run.trajectories << "\n"
      << "output_dir = " << c.run.output_dir << "\n"
      << "t_end = " << format_real(c.run.t_end) << "\n"
      << "burn_in = " << format_real(c.run.burn_in) << "\n";
  return out.str();
}

}  // namespace rydarray
