#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "normsim/engine.hpp"

namespace normsim {

struct Complexity {
  int k = 2;
  int c = 0;
  int s = 0;
};

// Cross product of swept parameters over a fixed base scenario. Cells are
// ordered complexity, scheme, weights, degree, social tasks, rho (last one
// varies fastest).
struct ScenarioGrid {
  ScenarioParams base;
  std::vector<Complexity> complexities{{2, 0, 0}, {2, 2, 2}};
  std::vector<IncentiveScheme> schemes{{1.0, 0.0}, {0.75, 0.25}, {0.25, 0.75}};
  std::vector<DecisionWeights> weights{{1.0, 0.0}, {0.7, 0.3}, {0.5, 0.5}};
  std::vector<int> degrees{2};
  std::vector<int> social_tasks{2};
  std::vector<double> rhos{0.3};
  std::size_t runs = 1000;
  double confidence = 0.999;

  struct Cell {
    std::string id;
    ScenarioParams params;
  };
  std::vector<Cell> cells() const;

  // Throws ParameterError naming the first invalid cell.
  void validate() const;
};

// Canonical cell key, e.g. "K2C2S2_a0.75_w0.3_d2_ns2_rho0.3".
std::string scenario_id(const ScenarioParams& params);

// Presets: "main" (parameter table grid), "degree", "rho", "nsoc"
// (sensitivity sweeps at alpha=1, w=(0.5,0.5) plus the w=(1,0) benchmark).
ScenarioGrid figure_grid(std::string_view figure);
std::vector<std::string> figure_names();

// Loads a YAML grid description; see configs/table1.yaml.
ScenarioGrid load_grid(const std::string& path);
ScenarioGrid parse_grid(std::string_view yaml_text);

// Two-sided standard normal quantile for a confidence level, e.g. 3.2905 at 0.999.
double normal_critical_value(double confidence);

struct AggregateSeries {
  std::vector<double> mean;
  std::vector<double> ci_low;
  std::vector<double> ci_high;
  std::size_t runs = 0;

  std::size_t periods() const { return mean.size(); }
};

// Per-period mean and normal-approximation confidence band over runs.
AggregateSeries aggregate(const TraceMatrix& matrix, double confidence = 0.999);

struct CellResult {
  std::string id;
  ScenarioParams params;
  AggregateSeries series;
};

struct GridResults {
  std::vector<CellResult> cells;
};

// Every cell aggregated from grid.runs runs; deterministic for any worker count.
GridResults run_grid(const ScenarioGrid& grid, unsigned workers = 1);

inline constexpr std::string_view kCsvHeader =
    "scenario_id,K,C,S,rho,alpha,beta,w1,w2,D,N_S,t,mean,ci_low,ci_high,n_runs";

// One row per (cell, period), cells in grid order, t ascending from 1.
void write_csv(std::ostream& out, const GridResults& results);
void write_csv(const GridResults& results, const std::string& path);

}  // namespace normsim
