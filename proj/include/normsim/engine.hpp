#pragma once

#include <cstdint>
#include <vector>

#include "normsim/landscape.hpp"
#include "normsim/norms.hpp"
#include "normsim/rng.hpp"
#include "normsim/team.hpp"

namespace normsim {

// One simulated scenario. Defaults follow the main parameter table except for
// the node degree, which defaults to the bidirectional ring (D=2).
struct ScenarioParams {
  int agents = 4;           // P
  int tasks_per_agent = 4;  // N
  int k = 2;
  int c = 0;
  int s = 0;
  double rho = 0.3;
  int memory_span = 50;  // T_L
  int social_tasks = 2;  // N_S
  int degree = 2;        // D
  int periods = 500;     // T
  IncentiveScheme scheme{1.0, 0.0};
  DecisionWeights weights{1.0, 0.0};
  std::uint64_t seed = 0;
  int enumeration_budget = kDefaultEnumerationBudget;

  int task_count() const { return agents * tasks_per_agent; }
  DecisionRule decision_rule() const { return {scheme, weights, memory_span, social_tasks}; }

  // Throws ParameterError (or CapabilityError for M over budget).
  void validate() const;
};

// Normalized team performance per period (index 0 is period 1).
struct RunTrace {
  std::vector<double> series;
  TeamConfig final_config;
  std::uint64_t seed = 0;
};

// Mutable state of one run. Period t is the period the next step() executes.
class RunState {
 public:
  RunState(const ScenarioParams& params, std::uint64_t run_seed);

  const ScenarioParams& params() const { return params_; }
  const Landscape& landscape() const { return landscape_; }
  const SocialNetwork& network() const { return network_; }
  const TeamConfig& config() const { return config_; }
  const std::vector<NormMemory>& memories() const { return memories_; }
  int period() const { return period_; }
  const std::vector<double>& series() const { return series_; }
  std::uint64_t run_seed() const { return run_seed_; }
  bool finished() const { return period_ > params_.periods; }

  // Executes one period: expire, decide (synchronously), share, record.
  void step();

 private:
  ScenarioParams params_;
  std::uint64_t run_seed_;
  Landscape landscape_;
  SocialNetwork network_;
  TeamConfig config_;
  std::vector<NormMemory> memories_;
  std::vector<RandomStream> proposal_streams_;
  std::vector<double> series_;
  int period_ = 1;
};

// Landscape used by run `run_seed`; identical to RunState's.
Landscape build_run_landscape(const ScenarioParams& params, std::uint64_t run_seed);

RunState init_run(const ScenarioParams& params, std::uint64_t run_seed);
void step(RunState& state);
RunTrace run(const ScenarioParams& params, std::uint64_t run_seed);

// Row-major runs x periods matrix.
struct TraceMatrix {
  std::size_t runs = 0;
  std::size_t periods = 0;
  std::vector<double> values;

  double at(std::size_t run, std::size_t period) const { return values[run * periods + period]; }
  std::span<const double> row(std::size_t run) const { return {values.data() + run * periods, periods}; }
};

// Run i uses derive_seed(params.seed, i). Row order is fixed by run index, so
// the result does not depend on `workers`.
TraceMatrix replicate(const ScenarioParams& params, std::size_t runs, unsigned workers = 1);

}  // namespace normsim
