#include "normsim/team.hpp"

#include <cmath>
#include <string>

#include "normsim/error.hpp"

namespace normsim {

namespace {
constexpr double kWeightTolerance = 1e-12;
}

void IncentiveScheme::validate() const {
  if (!(alpha >= 0.0 && beta >= 0.0) || std::abs(alpha + beta - 1.0) > kWeightTolerance) {
    throw ParameterError("incentive scheme needs alpha, beta >= 0 with alpha + beta = 1, got [" +
                         std::to_string(alpha) + ", " + std::to_string(beta) + "]");
  }
}

void DecisionWeights::validate() const {
  if (!(incentive >= 0.0 && norm >= 0.0) || std::abs(incentive + norm - 1.0) > kWeightTolerance) {
    throw ParameterError("decision weights need w1, w2 >= 0 with w1 + w2 = 1, got [" +
                         std::to_string(incentive) + ", " + std::to_string(norm) + "]");
  }
}

double residual_performance(const Landscape& land, int agent, const TeamConfig& cfg) {
  const int agents = land.structure().agents;
  if (agents < 2) throw ParameterError("residual performance needs P >= 2");
  double sum = 0.0;
  for (int q = 0; q < agents; ++q) {
    if (q != agent) sum += agent_performance(land, q, cfg);
  }
  return sum / (agents - 1);
}

double incentive_payoff(const Landscape& land, int agent, const TeamConfig& cfg,
                        const IncentiveScheme& scheme) {
  const double own = agent_performance(land, agent, cfg);
  // A pure own-performance scheme is defined even for a single agent.
  if (scheme.beta == 0.0) return scheme.alpha * own;
  return scheme.alpha * own + scheme.beta * residual_performance(land, agent, cfg);
}

TeamConfig propose_flip(int agent, int tasks_per_agent, const TeamConfig& cfg, RandomStream& rng) {
  TeamConfig out = cfg;
  const auto offset = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(tasks_per_agent)));
  out.flip(agent * tasks_per_agent + offset);
  return out;
}

double decision_objective(const Landscape& land, int agent, const TeamConfig& cfg,
                          const DecisionRule& rule, const NormMemory& memory, int period) {
  const double incentive = incentive_payoff(land, agent, cfg, rule.scheme);
  if (rule.weights.norm == 0.0) return rule.weights.incentive * incentive;
  const auto bits = social_bits(cfg, agent, land.structure().tasks_per_agent, rule.social_tasks);
  return rule.weights.incentive * incentive +
         rule.weights.norm * compliance(bits, memory, period, rule.memory_span);
}

const TeamConfig& choose(const Landscape& land, int agent, const TeamConfig& status_quo,
                         const TeamConfig& candidate, const DecisionRule& rule,
                         const NormMemory& memory, int period) {
  const double keep = decision_objective(land, agent, status_quo, rule, memory, period);
  const double change = decision_objective(land, agent, candidate, rule, memory, period);
  return change > keep ? candidate : status_quo;
}

}  // namespace normsim
