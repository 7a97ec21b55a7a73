// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#include "rydarray/scenario.hpp"

#include <chrono>
#include <exception>
#include <filesystem>
#include <functional>
#include <thread>

#include <Eigen/Core>

#include "rydarray/correlations.hpp"
#include "rydarray/results.hpp"
#include "rydarray/validation.hpp"

namespace rydarray
{

namespace
{

constexpr const char *kVersion = "0.1.0";

// Evaluates fn(k) for k in [0, count) on a thread pool; results keep index
// order so output does not depend on the worker count.
template <typename T>
std::vector<T> parallel_map(std::size_t count, int workers, const std::function<T(std::size_t)> &fn)
{
  std::vector<T> out(count);
  workers = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  auto work = [&](int w)
  {
    try
    {
      for (std::size_t k = static_cast<std::size_t>(w); k < count;
           k += static_cast<std::size_t>(workers))
      {
        out[k] = fn(k);
      }
    }
    catch (...)
    {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };
  if (workers <= 1)
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
  return out;
}

std::vector<Real> grid_or(const ScenarioConfig &config, const std::string &variable,
                          std::vector<Real> fallback)
{
  return config.scan.variable == variable ? config.scan.grid : fallback;
}

std::vector<Real> linspace(Real lo, Real hi, int n)
{
  std::vector<Real> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k)
  {
    v[static_cast<std::size_t>(k)] = n == 1 ? lo : lo + (hi - lo) * k / (n - 1);
  }
  return v;
}

Real require_control(const ScenarioConfig &config, const std::string &scenario)
{
  if (!(config.drive.omega_over_gamma > 0.0))
  {
    throw ConfigError("drive.omega_over_gamma",
                      "drive.omega_over_gamma: must be positive for scenario " + scenario);
  }
  return config.drive.omega_over_gamma;
}

std::string pair_tag(Channel a, Channel b)
{
  auto c = [](Channel x) { return x == Channel::forward ? "f" : "b"; };
  return std::string(c(a)) + c(b);
}

ScenarioOutput finish(const std::string &stem, const Table &table, nlohmann::json summary,
                      const ScenarioConfig &config, const RunOptions &options,
                      std::chrono::steady_clock::time_point start)
{
  const std::string dump = dump_config(config);
  nlohmann::json side;
  side["scenario"] = stem;
  side["config"] = dump;
  side["config_hash"] = content_hash(dump);
  side["seed"] = options.seed.value_or(config.run.seed);
  side["versions"] = {{"rydarray", kVersion},
                      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                    std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                    std::to_string(EIGEN_MINOR_VERSION)}};
  side["summary"] = summary;
  side["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string dir = options.output_dir.value_or(config.run.output_dir);
  ScenarioOutput out;
  out.files = write_results(dir, stem, table, side);
  out.summary = std::move(summary);
  return out;
}

ScenarioOutput run_fig1e(const ScenarioConfig &config, const RunOptions &options,
                         std::chrono::steady_clock::time_point start)
{
  const ArraySetup setup =
      make_setup(config, config.lattice.diameter_sites, config.beam.w0_over_lambda);
  const Real control = config.drive.omega_over_gamma > 0.0 ? config.drive.omega_over_gamma : 1.0;
  const std::vector<Real> grid = grid_or(config, "delta", linspace(-1.0, 1.0, 201));
  const DriveParams two_level = make_drive(config, config.drive.delta_over_gamma, 0.0);
  const DriveParams eit = make_drive(config, config.drive.delta_over_gamma, control);

  const auto rows = parallel_map<std::pair<Rtl, Rtl>>(
      grid.size(), options.workers,
      [&](std::size_t k)
      {
        const std::vector<Real> one{grid[k]};
        return std::make_pair(spectrum_scan(setup, one, two_level)[0].rtl,
                              spectrum_scan(setup, one, eit)[0].rtl);
      });
  Table table{{"delta", "R_two_level", "T_two_level", "L_two_level", "R_eit", "T_eit", "L_eit"}, {}};
  for (std::size_t k = 0; k < grid.size(); ++k)
  {
    const auto &[a, b] = rows[k];
    table.add_row({grid[k], a.reflection, a.transmission, a.loss, b.reflection, b.transmission,
                   b.loss});
  }
  const CollectiveParams cp = collective_params(setup.coupling, setup.lattice, setup.mode);
  nlohmann::json summary{{"delta_c", cp.delta_c},
                         {"gamma_c", cp.gamma_c},
                         {"omega", control},
                         {"window_width", transparency_window(setup, eit)},
                         {"omega_sq_over_gamma_c", control * control / cp.gamma_c}};
  return finish("fig1e", table, summary, config, options, start);
}

ScenarioOutput run_fig2a(const ScenarioConfig &config, const RunOptions &options,
                         std::chrono::steady_clock::time_point start)
{
  const std::vector<Real> grid = grid_or(config, "w0", linspace(1.0, 4.0, 31));
  const Lattice lattice = build_disc_lattice(config.lattice.diameter_sites,
                                             config.lattice.a_over_lambda,
                                             polarization::from_name(config.lattice.polarization));
  const CouplingMatrix coupling = coupling_matrices(lattice);
  const auto rows = parallel_map<Rtl>(grid.size(), options.workers,
                                      [&](std::size_t k)
                                      {
                                        ArraySetup setup;
                                        setup.lattice = lattice;
                                        setup.coupling = coupling;
                                        setup.mode.waist = grid[k];
                                        return two_level_response(setup,
                                                                  config.drive.delta_over_gamma);
                                      });
  Table table{{"w0", "R", "T", "L"}, {}};
  Real best = 0.0;
  for (std::size_t k = 0; k < grid.size(); ++k)
  {
    table.add_row({grid[k], rows[k].reflection, rows[k].transmission, rows[k].loss});
    best = std::max(best, rows[k].reflection);
  }
  return finish("fig2a", table, {{"atoms", lattice.size()}, {"max_reflection", best}}, config,
                options, start);
}

ScenarioOutput run_fig2b(const ScenarioConfig &config, const RunOptions &options,
                         std::chrono::steady_clock::time_point start)
{
  const std::vector<Real> grid = grid_or(config, "w0", linspace(1.5, 3.0, 16));
  const Lattice lattice = build_disc_lattice(config.lattice.diameter_sites,
                                             config.lattice.a_over_lambda,
                                             polarization::from_name(config.lattice.polarization));
  const CouplingMatrix coupling = coupling_matrices(lattice);
  const auto rows = parallel_map<DefectResponse>(
      grid.size(), options.workers,
      [&](std::size_t k)
      {
        ArraySetup setup;
        setup.lattice = lattice;
        setup.coupling = coupling;
        setup.mode.waist = grid[k];
        return defect_average(setup, config.drive.delta_over_gamma);
      });
  Table table{{"w0", "dR", "dT", "dL", "failures"}, {}};
  int failures = 0;
  for (std::size_t k = 0; k < grid.size(); ++k)
  {
    table.add_row({grid[k], rows[k].d_reflection, rows[k].d_transmission, rows[k].d_loss,
                   static_cast<Real>(rows[k].failures)});
    failures += rows[k].failures;
  }
  return finish("fig2b", table, {{"failed_solves", failures}}, config, options, start);
}

struct AntibunchingPoint
{
  Real atoms = 0;
  ReflectionOptimum optimum;
  Real g2 = 0.0;
};

AntibunchingPoint antibunching(const ScenarioConfig &config, int diameter, Real waist,
                               bool optimize_waist)
{
  const Lattice lattice = build_disc_lattice(diameter, config.lattice.a_over_lambda,
                                             polarization::from_name(config.lattice.polarization));
  ArraySetup setup;
  setup.lattice = lattice;
  setup.coupling = coupling_matrices(lattice);
  setup.mode.waist = waist;
  setup.mode.power = config.beam.power_scale * config.beam.power_scale;
  setup.blockade = {blockade_from_name(config.blockade.mode), config.blockade.c6};

  AntibunchingPoint p;
  p.atoms = static_cast<Real>(lattice.size());
  if (optimize_waist)
  {
    p.optimum = optimize_reflection(lattice, setup.coupling, waist, config.drive.delta_over_gamma);
    setup.mode.waist = p.optimum.waist;
  }
  else
  {
    p.optimum = optimize_detuning(setup, config.drive.delta_over_gamma - 0.15,
                                  config.drive.delta_over_gamma + 0.15);
  }
  const CorrelationEngine engine(
      setup.effective(make_drive(config, p.optimum.detuning, config.drive.omega_over_gamma)));
  p.g2 = engine.g2(Channel::forward, Channel::forward, {0.0})[0];
  return p;
}

ScenarioOutput run_fig3a(const ScenarioConfig &config, const RunOptions &options,
                         std::chrono::steady_clock::time_point start)
{
  require_control(config, "fig3a");
  const std::vector<Real> grid = grid_or(config, "diameter", {4, 6, 8, 10, 12});
  const auto rows = parallel_map<AntibunchingPoint>(
      grid.size(), options.workers,
      [&](std::size_t k)
      {
        return antibunching(config, static_cast<int>(std::lround(grid[k])),
                            config.beam.w0_over_lambda, true);
      });
  Table table{{"diameter", "atoms", "w0", "delta", "R", "g2_ff0"}, {}};
  for (std::size_t k = 0; k < grid.size(); ++k)
  {
    const auto &r = rows[k];
    table.add_row({grid[k], r.atoms, r.optimum.waist, r.optimum.detuning, r.optimum.reflection,
                   r.g2});
  }
  return finish("fig3a", table, nlohmann::json::object(), config, options, start);
}

ScenarioOutput run_fig3b(const ScenarioConfig &config, const RunOptions &options,
                         std::chrono::steady_clock::time_point start)
{
  require_control(config, "fig3b");
  const std::vector<Real> grid = grid_or(config, "w0", linspace(1.0, 2.5, 7));
  const auto rows = parallel_map<AntibunchingPoint>(
      grid.size(), options.workers,
      [&](std::size_t k)
      { return antibunching(config, config.lattice.diameter_sites, grid[k], false); });
  Table table{{"w0", "atoms", "delta", "R", "g2_ff0"}, {}};
  for (std::size_t k = 0; k < grid.size(); ++k)
  {
    const auto &r = rows[k];
    table.add_row({grid[k], r.atoms, r.optimum.detuning, r.optimum.reflection, r.g2});
  }
  return finish("fig3b", table, nlohmann::json::object(), config, options, start);
}

ScenarioOutput run_fig4(const ScenarioConfig &config, const RunOptions &options,
                        std::chrono::steady_clock::time_point start)
{
  const ArraySetup setup =
      make_setup(config, config.lattice.diameter_sites, config.beam.w0_over_lambda);
  const CollectiveParams cp = collective_params(setup.coupling, setup.lattice, setup.mode);
  const auto &omegas = config.correlation.omega_set;
  const auto &pairs = config.correlation.channels;
  const std::vector<Real> collapse_grid = linspace(0.0, 5.0, 101);

  struct Curves
  {
    Real tau_d = 0.0;
    std::vector<Real> taus;
    std::vector<std::vector<Real>> g2;
    std::vector<std::vector<Real>> rescaled;
    std::vector<Complex> g1_forward;
    std::vector<Complex> g1_backward;
  };
  const auto curves = parallel_map<Curves>(
      omegas.size(), options.workers,
      [&](std::size_t k)
      {
        Curves c;
        c.tau_d = delay_time(cp.gamma_c, omegas[k]);
        c.taus = default_tau_grid(config.correlation.tau_max_over_delay * c.tau_d,
                                  config.correlation.tau_points);
        const CorrelationEngine engine(
            setup.effective(make_drive(config, config.drive.delta_over_gamma, omegas[k])));
        std::vector<Real> scaled;
        for (const Real x : collapse_grid)
        {
          scaled.push_back(x * c.tau_d);
        }
        for (const auto &[a, b] : pairs)
        {
          c.g2.push_back(engine.g2(a, b, c.taus));
          c.rescaled.push_back(engine.g2(a, b, scaled));
        }
        c.g1_forward = engine.g1(Channel::forward, c.taus);
        c.g1_backward = engine.g1(Channel::backward, c.taus);
        return c;
      });

  Table table{{"omega", "tau_d", "tau", "tau_over_delay"}, {}};
  for (const auto &[a, b] : pairs)
  {
    table.columns.push_back("g2_" + pair_tag(a, b));
  }
  table.columns.push_back("abs_g1_f");
  table.columns.push_back("abs_g1_b");
  for (std::size_t k = 0; k < omegas.size(); ++k)
  {
    const Curves &c = curves[k];
    for (std::size_t t = 0; t < c.taus.size(); ++t)
    {
      std::vector<Real> row{omegas[k], c.tau_d, c.taus[t], c.taus[t] / c.tau_d};
      for (std::size_t p = 0; p < pairs.size(); ++p)
      {
        row.push_back(c.g2[p][t]);
      }
      row.push_back(std::abs(c.g1_forward[t]));
      row.push_back(std::abs(c.g1_backward[t]));
      table.add_row(std::move(row));
    }
  }
  nlohmann::json collapse = nlohmann::json::object();
  for (std::size_t p = 0; p < pairs.size(); ++p)
  {
    std::vector<std::vector<Real>> set;
    for (const auto &c : curves)
    {
      set.push_back(c.rescaled[p]);
    }
    collapse[pair_tag(pairs[p].first, pairs[p].second)] = collapse_check(set);
  }
  return finish("fig4", table, {{"gamma_c", cp.gamma_c}, {"collapse_rms", collapse}}, config,
                options, start);
}

ScenarioOutput run_custom(const ScenarioConfig &config, const RunOptions &options,
                          std::chrono::steady_clock::time_point start)
{
  const ArraySetup setup =
      make_setup(config, config.lattice.diameter_sites, config.beam.w0_over_lambda);
  const Real control = config.drive.omega_over_gamma;
  const CollectiveParams cp = collective_params(setup.coupling, setup.lattice, setup.mode);
  const Real scale = control > 0.0 ? delay_time(cp.gamma_c, control) : 1.0 / cp.gamma_c;
  const CorrelationEngine engine(
      setup.effective(make_drive(config, config.drive.delta_over_gamma, control)));
  const std::vector<Real> taus =
      default_tau_grid(config.correlation.tau_max_over_delay * scale, config.correlation.tau_points);

  Table table{{"tau", "tau_scaled"}, {}};
  std::vector<std::vector<Real>> g2;
  for (const auto &[a, b] : config.correlation.channels)
  {
    table.columns.push_back("g2_" + pair_tag(a, b));
    g2.push_back(engine.g2(a, b, taus));
  }
  for (std::size_t t = 0; t < taus.size(); ++t)
  {
    std::vector<Real> row{taus[t], taus[t] / scale};
    for (const auto &curve : g2)
    {
      row.push_back(curve[t]);
    }
    table.add_row(std::move(row));
  }
  const Rtl lin = rtl_coefficients(engine.amplitudes(), setup.field(), setup.mode.power);
  nlohmann::json summary{{"atoms", setup.lattice.size()},
                         {"delta_c", cp.delta_c},
                         {"gamma_c", cp.gamma_c},
                         {"R", lin.reflection},
                         {"T", lin.transmission},
                         {"L", lin.loss},
                         {"flux_forward", engine.flux(Channel::forward) / engine.power()},
                         {"flux_backward", engine.flux(Channel::backward) / engine.power()}};
  return finish("custom", table, summary, config, options, start);
}

ScenarioOutput run_mcwf(const ScenarioConfig &config, const RunOptions &options,
                        std::chrono::steady_clock::time_point start)
{
  const ArraySetup setup =
      make_setup(config, config.lattice.diameter_sites, config.beam.w0_over_lambda);
  const EffectiveOperator op = setup.effective(
      make_drive(config, config.drive.delta_over_gamma, config.drive.omega_over_gamma));
  McwfOptions mo;
  mo.t_end = config.run.t_end;
  mo.burn_in = config.run.burn_in;
  mo.pair_population_bound = config.truncation.pair_population_bound;
  const McwfEngine engine(op, mo);
  std::vector<TrajectoryRecord> records;
  const std::uint64_t seed = options.seed.value_or(config.run.seed);
  const EnsembleSummary s = engine.ensemble(seed, config.run.trajectories, options.workers, &records);
  const CorrelationEngine deterministic(op);
  const Real p = deterministic.power();
  Table table{{"trajectories", "jumps", "R", "R_se", "T", "T_se", "R_deterministic",
               "T_deterministic", "jump_rate_sum"},
              {}};
  table.add_row({static_cast<Real>(s.trajectories), static_cast<Real>(s.jumps), s.reflection,
                 s.reflection_se, s.transmission, s.transmission_se,
                 deterministic.flux(Channel::backward) / p, deterministic.flux(Channel::forward) / p,
                 engine.channels().rates.sum()});
  const std::string dir = options.output_dir.value_or(config.run.output_dir);
  std::filesystem::create_directories(dir);
  write_trajectory_log((std::filesystem::path(dir) / "mcwf_trajectories.jsonl").string(), records);
  ScenarioOutput out = finish("mcwf", table, {{"truncation_warnings", s.truncation_warnings}},
                              config, options, start);
  out.files.push_back((std::filesystem::path(dir) / "mcwf_trajectories.jsonl").string());
  return out;
}

}  // namespace

const std::vector<std::string> &scenario_names()
{
  static const std::vector<std::string> names{"fig1e", "fig2a",  "fig2b", "fig3a",
                                              "fig3b", "fig4",   "custom", "mcwf"};
  return names;
}

ArraySetup make_setup(const ScenarioConfig &config, int diameter_sites, Real waist)
{
  ProbeMode mode;
  mode.waist = waist;
  mode.power = config.beam.power_scale * config.beam.power_scale;
  return ArraySetup::make(build_disc_lattice(diameter_sites, config.lattice.a_over_lambda,
                                             polarization::from_name(config.lattice.polarization)),
                          mode, {blockade_from_name(config.blockade.mode), config.blockade.c6});
}

DriveParams make_drive(const ScenarioConfig &config, Real detuning, Real control)
{
  DriveParams d;
  d.detuning = detuning;
  d.control = control;
  d.reference_detuning = detuning;
  d.two_photon_detuning = config.drive.two_photon_detuning;
  d.rydberg_loss = config.drive.rydberg_loss;
  return d;
}

ScenarioOutput run_scenario(const std::string &name, const ScenarioConfig &config,
                            const RunOptions &options)
{
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  if (name == "fig1e")
  {
    return run_fig1e(config, options, start);
  }
  if (name == "fig2a")
  {
    return run_fig2a(config, options, start);
  }
  if (name == "fig2b")
  {
    return run_fig2b(config, options, start);
  }
  if (name == "fig3a")
  {
    return run_fig3a(config, options, start);
  }
  if (name == "fig3b")
  {
    return run_fig3b(config, options, start);
  }
  if (name == "fig4")
  {
    return run_fig4(config, options, start);
  }
  if (name == "custom")
  {
    return run_custom(config, options, start);
  }
  if (name == "mcwf")
  {
    return run_mcwf(config, options, start);
  }
  throw ConfigError("scenario", "unknown scenario '" + name + "'");
}

ScenarioOutput run_oracle(int atoms, const ScenarioConfig &config, const RunOptions &options)
{
  if (atoms < 1 || atoms > 3)
  {
    throw ConfigError("n", "oracle supports 1 to 3 atoms");
  }
  const auto start = std::chrono::steady_clock::now();
  Eigen::Matrix3Xd positions = Eigen::Matrix3Xd::Zero(3, atoms);
  for (int j = 0; j < atoms; ++j)
  {
    positions(0, j) = config.lattice.a_over_lambda * (j - 0.5 * (atoms - 1));
  }
  ArraySetup setup;
  setup.lattice =
      custom_lattice(positions, polarization::from_name(config.lattice.polarization));
  setup.coupling = coupling_matrices(setup.lattice);
  setup.mode.waist = config.beam.w0_over_lambda;
  setup.mode.power = config.beam.power_scale * config.beam.power_scale;
  setup.blockade = {blockade_from_name(config.blockade.mode), config.blockade.c6};
  const EffectiveOperator op = setup.effective(
      make_drive(config, config.drive.delta_over_gamma, config.drive.omega_over_gamma));

  const CorrelationEngine engine(op);
  const DenseOracle oracle(op);
  const MatrixXc rho = oracle.steady_state();
  const Real control = config.drive.omega_over_gamma;
  const CollectiveParams cp = collective_params(setup.coupling, setup.lattice, setup.mode);
  const Real scale = control > 0.0 ? delay_time(cp.gamma_c, control) : 1.0 / cp.gamma_c;
  const std::vector<Real> taus = default_tau_grid(3.0 * scale, 16);

  Table table{{"tau"}, {}};
  std::vector<std::vector<Real>> columns;
  for (const auto &[a, b] : config.correlation.channels)
  {
    table.columns.push_back("g2_" + pair_tag(a, b) + "_truncated");
    table.columns.push_back("g2_" + pair_tag(a, b) + "_oracle");
    columns.push_back(engine.g2(a, b, taus));
    columns.push_back(oracle.g2(a, b, taus));
  }
  for (std::size_t t = 0; t < taus.size(); ++t)
  {
    std::vector<Real> row{taus[t]};
    for (const auto &c : columns)
    {
      row.push_back(c[t]);
    }
    table.add_row(std::move(row));
  }
  const Real p = setup.mode.power;
  nlohmann::json summary{{"atoms", atoms},
                         {"R_truncated", engine.flux(Channel::backward) / p},
                         {"R_oracle", oracle.flux(Channel::backward, rho) / p},
                         {"T_truncated", engine.flux(Channel::forward) / p},
                         {"T_oracle", oracle.flux(Channel::forward, rho) / p},
                         {"trace", rho.trace().real()}};
  return finish("oracle_n" + std::to_string(atoms), table, summary, config, options, start);
}

}  // namespace rydarray
