// Copyright 2026 The rydarray Authors
// SPDX-License-Identifier: Apache-2.0

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "rydarray/config.hpp"
#include "rydarray/scenario.hpp"

namespace
{

// Exit codes: 2 invalid input, 3 numerical failure, 4 I/O failure.
int report(const std::exception &e, int code)
{
  std::cerr << "error: " << e.what() << '\n';
  return code;
}

void print(const rydarray::ScenarioOutput &out)
{
  for (const auto &f : out.files)
  {
    std::cout << f << '\n';
  }
  std::cout << out.summary.dump(2) << '\n';
}

}  // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Rydberg atom array photon-statistics simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  int workers = 1;
  auto add_common = [&](CLI::App *cmd)
  {
    cmd->add_option("--config", config_path, "scenario config file")->required();
    cmd->add_option("--seed", seed, "override run.seed");
    cmd->add_option("--out", out_dir, "override run.output_dir");
    cmd->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  };

  std::string scenario;
  auto *run = app.add_subcommand("run", "run a named scenario");
  run->add_option("scenario", scenario, "fig1e|fig2a|fig2b|fig3a|fig3b|fig4|custom|mcwf")
      ->required()
      ->check(CLI::IsMember(rydarray::scenario_names()));
  add_common(run);

  auto *validate = app.add_subcommand("validate", "parse and validate a config");
  validate->add_option("--config", config_path, "scenario config file")->required();

  int atoms = 2;
  auto *oracle = app.add_subcommand("oracle", "compare with the dense master equation");
  oracle->add_option("--n", atoms, "atoms in a row (1 to 3)")->check(CLI::Range(1, 3));
  add_common(oracle);

  CLI11_PARSE(app, argc, argv);

  try
  {
    const rydarray::ScenarioConfig config = rydarray::load_config(config_path);
    config.validate();
    const rydarray::RunOptions options{seed, out_dir, workers};
    if (*validate)
    {
      std::cout << rydarray::dump_config(config);
      return 0;
    }
    if (*run)
    {
      print(rydarray::run_scenario(scenario, config, options));
    }
    else if (*oracle)
    {
      print(rydarray::run_oracle(atoms, config, options));
    }
    return 0;
  }
  catch (const rydarray::ConfigError &e)
  {
    return report(e, 2);
  }
  catch (const rydarray::DomainError &e)
  {
    return report(e, 2);
  }
  catch (const rydarray::NumericError &e)
  {
    return report(e, 3);
  }
  catch (const rydarray::IoError &e)
  {
    return report(e, 4);
  }
  catch (const std::exception &e)
  {
    return report(e, 1);
  }
}
