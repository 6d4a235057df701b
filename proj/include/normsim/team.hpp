#pragma once

#include "normsim/landscape.hpp"
#include "normsim/norms.hpp"
#include "normsim/rng.hpp"

namespace normsim {

// Linear compensation: alpha * own performance + beta * residual performance.
struct IncentiveScheme {
  double alpha = 1.0;
  double beta = 0.0;

  void validate() const;
};

// Weights of compensation (w1) and norm compliance (w2) in the decision rule.
struct DecisionWeights {
  double incentive = 1.0;
  double norm = 0.0;

  void validate() const;
};

// Everything an agent needs besides the landscape and its memory to rank two
// options.
struct DecisionRule {
  IncentiveScheme scheme;
  DecisionWeights weights;
  int memory_span = 50;
  int social_tasks = 2;
};

// Mean performance of every agent other than `agent`.
double residual_performance(const Landscape& land, int agent, const TeamConfig& cfg);

double incentive_payoff(const Landscape& land, int agent, const TeamConfig& cfg,
                        const IncentiveScheme& scheme);

// Flips one uniformly chosen bit of the agent's block.
TeamConfig propose_flip(int agent, int tasks_per_agent, const TeamConfig& cfg, RandomStream& rng);

// w1 * incentive + w2 * compliance of cfg from the agent's point of view.
double decision_objective(const Landscape& land, int agent, const TeamConfig& cfg,
                          const DecisionRule& rule, const NormMemory& memory, int period);

// Keeps the status quo unless the candidate scores strictly higher.
const TeamConfig& choose(const Landscape& land, int agent, const TeamConfig& status_quo,
                         const TeamConfig& candidate, const DecisionRule& rule,
                         const NormMemory& memory, int period);

}  // namespace normsim
