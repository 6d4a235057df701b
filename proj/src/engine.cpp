#include "normsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "normsim/error.hpp"

namespace normsim {

void ScenarioParams::validate() const {
  if (agents < 1) throw ParameterError("P must be >= 1");
  if (tasks_per_agent < 1) throw ParameterError("N must be >= 1");
  if (task_count() > enumeration_budget || task_count() > kMaxTasks) {
    throw CapabilityError("M=" + std::to_string(task_count()) + " exceeds the enumeration budget of " +
                          std::to_string(std::min(enumeration_budget, kMaxTasks)) + " bits");
  }
  if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError("rho must lie in [0,1], got " + std::to_string(rho));
  if (social_tasks < 0 || social_tasks > tasks_per_agent) {
    throw ParameterError("N_S must lie in [0, N], got " + std::to_string(social_tasks));
  }
  if (periods < 1) throw ParameterError("T must be >= 1");
  if (memory_span < 1) throw ParameterError("T_L must be >= 1");
  if (memory_span >= periods) {
    throw ParameterError("T_L=" + std::to_string(memory_span) + " must be below T=" + std::to_string(periods));
  }
  scheme.validate();
  weights.validate();
  if (agents == 1 && scheme.beta != 0.0) throw ParameterError("a single agent has no residual performance");
  // Coupling bounds and network feasibility are checked by their builders;
  // run them on throwaway inputs so errors surface before any run starts.
  RandomStream probe(0);
  (void)build_interaction_structure(agents, tasks_per_agent, k, c, s, probe, enumeration_budget);
  (void)SocialNetwork(agents, degree);
}

Landscape build_run_landscape(const ScenarioParams& params, std::uint64_t run_seed) {
  RandomStream rng(substream_seed(run_seed, static_cast<std::uint64_t>(StreamId::kLandscape)));
  const auto structure = build_interaction_structure(params.agents, params.tasks_per_agent, params.k,
                                                     params.c, params.s, rng, params.enumeration_budget);
  return build_landscape(structure, params.rho, rng, run_seed, params.enumeration_budget);
}

RunState::RunState(const ScenarioParams& params, std::uint64_t run_seed)
    : params_(params),
      run_seed_(run_seed),
      landscape_(build_run_landscape(params, run_seed)),
      network_(params.agents, params.degree),
      memories_(static_cast<std::size_t>(params.agents)) {
  RandomStream init(substream_seed(run_seed, static_cast<std::uint64_t>(StreamId::kInitialConfig)));
  config_ = TeamConfig::random(params.task_count(), init);
  proposal_streams_.reserve(static_cast<std::size_t>(params.agents));
  for (int p = 0; p < params.agents; ++p) {
    proposal_streams_.emplace_back(
        substream_seed(run_seed, static_cast<std::uint64_t>(StreamId::kAgentBase) + p));
  }
  series_.reserve(static_cast<std::size_t>(params.periods));
}

void RunState::step() {
  const int t = period_;
  const int n = params_.tasks_per_agent;
  const auto rule = params_.decision_rule();

  for (auto& memory : memories_) expire(memory, t, params_.memory_span);

  // Every agent decides against x_{t-1}; blocks are written afterwards.
  TeamConfig next = config_;
  for (int p = 0; p < params_.agents; ++p) {
    const TeamConfig candidate = propose_flip(p, n, config_, proposal_streams_[p]);
    const TeamConfig& chosen = choose(landscape_, p, config_, candidate, rule, memories_[p], t);
    next.assign_slice(p * n, n, chosen.slice(p * n, n));
  }
  config_ = next;

  share(network_, t, config_, n, params_.social_tasks, memories_);
  series_.push_back(team_performance(landscape_, config_) / landscape_.global_max());
  ++period_;
}

RunState init_run(const ScenarioParams& params, std::uint64_t run_seed) {
  params.validate();
  return RunState(params, run_seed);
}

void step(RunState& state) { state.step(); }

RunTrace run(const ScenarioParams& params, std::uint64_t run_seed) {
  RunState state = init_run(params, run_seed);
  while (!state.finished()) state.step();
  return {state.series(), state.config(), run_seed};
}

TraceMatrix replicate(const ScenarioParams& params, std::size_t runs, unsigned workers) {
  params.validate();
  TraceMatrix out;
  out.runs = runs;
  out.periods = static_cast<std::size_t>(params.periods);
  out.values.resize(out.runs * out.periods);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < runs; i = next++) {
      try {
        const auto trace = run(params, derive_seed(params.seed, i));
        std::copy(trace.series.begin(), trace.series.end(), out.values.begin() + i * out.periods);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = runs;
      }
    }
  };
  const unsigned threads = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(runs)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace normsim
