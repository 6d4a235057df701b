// normsim command-line driver. Talks to the simulator only through the C API.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "normsim/normsim.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct GridDeleter {
  void operator()(nsim_grid* g) const { nsim_grid_free(g); }
};
struct ResultsDeleter {
  void operator()(nsim_results* r) const { nsim_results_free(r); }
};
struct LandscapeDeleter {
  void operator()(nsim_landscape* l) const { nsim_landscape_free(l); }
};
using GridPtr = std::unique_ptr<nsim_grid, GridDeleter>;
using ResultsPtr = std::unique_ptr<nsim_results, ResultsDeleter>;
using LandscapePtr = std::unique_ptr<nsim_landscape, LandscapeDeleter>;

// Thrown to unwind with a specific exit code.
struct Exit {
  int code;
};

int exit_code_for(nsim_status status) {
  switch (status) {
    case NSIM_ERR_INVALID_ARGUMENT:
    case NSIM_ERR_PARAMETER:
    case NSIM_ERR_CONFIG:
      return kExitConfig;
    default:
      return kExitRuntime;
  }
}

void check(nsim_status status, const std::string& context) {
  if (status == NSIM_OK) return;
  std::cerr << "normsim: " << context << ": " << nsim_last_error() << " (" << nsim_status_name(status)
            << ")\n";
  throw Exit{exit_code_for(status)};
}

struct RunOptions {
  std::optional<std::uint64_t> runs;
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
  std::string out_dir;
  bool dump_landscape = false;
};

std::string cell_id(const nsim_grid* grid, size_t cell) {
  size_t needed = 0;
  check(nsim_grid_cell_id(grid, cell, nullptr, 0, &needed), "scenario id");
  std::string id(needed, '\0');
  check(nsim_grid_cell_id(grid, cell, id.data(), id.size(), nullptr), "scenario id");
  id.pop_back();
  return id;
}

void execute(nsim_grid* grid, const RunOptions& opts, const std::string& csv_name) {
  if (opts.runs) check(nsim_grid_set_runs(grid, *opts.runs), "--runs");
  if (opts.seed) check(nsim_grid_set_seed(grid, *opts.seed), "--seed");
  check(nsim_grid_validate(grid), "scenario grid");

  std::error_code ec;
  std::filesystem::create_directories(opts.out_dir, ec);
  if (ec) {
    std::cerr << "normsim: cannot create output directory " << opts.out_dir << ": " << ec.message() << '\n';
    throw Exit{kExitRuntime};
  }
  const std::filesystem::path out_dir(opts.out_dir);

  size_t cells = 0;
  check(nsim_grid_cell_count(grid, &cells), "scenario grid");

  if (opts.dump_landscape) {
    for (size_t cell = 0; cell < cells; ++cell) {
      nsim_landscape* raw = nullptr;
      check(nsim_landscape_for_run(grid, cell, 0, &raw), "landscape");
      LandscapePtr land(raw);
      const auto path = (out_dir / (cell_id(grid, cell) + ".landscape")).string();
      check(nsim_landscape_save(land.get(), path.c_str()), "landscape dump");
    }
  }

  std::cerr << "normsim: running " << cells << " scenario(s)\n";
  nsim_results* raw = nullptr;
  check(nsim_grid_run(grid, opts.workers, &raw), "simulation");
  ResultsPtr results(raw);
  const auto csv = (out_dir / csv_name).string();
  check(nsim_results_write_csv(results.get(), csv.c_str()), "csv");
  std::cout << csv << '\n';
}

void add_run_options(CLI::App* cmd, RunOptions& opts) {
  cmd->add_option("--runs", opts.runs, "Runs per scenario (overrides the config)");
  cmd->add_option("--seed", opts.seed, "Base RNG seed (overrides the config)");
  cmd->add_option("--workers", opts.workers, "Worker threads, 0 = one per core")->capture_default_str();
  cmd->add_option("--out", opts.out_dir, "Output directory")->required();
  cmd->add_flag("--dump-landscape", opts.dump_landscape,
                "Also write the landscape of run 0 of every scenario");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Team search on correlated NK(C,S) landscapes with descriptive social norms"};
  app.set_version_flag("--version", std::string(nsim_version()));
  app.require_subcommand(1);

  RunOptions sim_opts;
  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "Run the scenario grid described by a config file");
  simulate->add_option("--config", config_path, "YAML scenario grid")->required()->check(CLI::ExistingFile);
  add_run_options(simulate, sim_opts);

  RunOptions sweep_opts;
  std::string figure;
  auto* sweep = app.add_subcommand("sweep", "Run a preset grid: the main grid or a sensitivity sweep");
  sweep->add_option("--figure", figure, "Preset grid")
      ->required()
      ->check(CLI::IsMember({"main", "degree", "rho", "nsoc"}));
  add_run_options(sweep, sweep_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    nsim_grid* raw = nullptr;
    if (*simulate) {
      check(nsim_grid_from_file(config_path.c_str(), &raw), "config " + config_path);
      GridPtr grid(raw);
      execute(grid.get(), sim_opts, "results.csv");
    } else {
      check(nsim_grid_from_figure(figure.c_str(), &raw), "figure " + figure);
      GridPtr grid(raw);
      execute(grid.get(), sweep_opts, figure + ".csv");
    }
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitOk;
}
