#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "normsim/rng.hpp"

namespace normsim {

inline constexpr int kDefaultEnumerationBudget = 20;
// Hard ceiling on M; TeamConfig packs the decision vector into one word.
inline constexpr int kMaxTasks = 30;

// The full M-bit decision vector x = (x^1, ..., x^P), agent blocks contiguous
// and in order. Task 0 is the first bit of agent 0's block.
//
// Bits are packed most-significant-first, so comparing codes() compares the
// vectors lexicographically.
class TeamConfig {
 public:
  TeamConfig() = default;
  explicit TeamConfig(int task_count);
  static TeamConfig from_code(std::uint32_t code, int task_count);
  static TeamConfig from_bits(std::span<const std::uint8_t> bits);
  static TeamConfig random(int task_count, RandomStream& rng);

  int size() const { return task_count_; }
  std::uint32_t code() const { return code_; }

  bool bit(int task) const { return (code_ >> shift(task)) & 1U; }
  void set(int task, bool value);
  void flip(int task) { code_ ^= 1U << shift(task); }

  // Bits [first, first + count) as an unsigned word, first bit most significant.
  std::uint32_t slice(int first, int count) const;
  void assign_slice(int first, int count, std::uint32_t value);

  std::vector<std::uint8_t> bits() const;
  std::string to_string() const;

  friend bool operator==(const TeamConfig&, const TeamConfig&) = default;

 private:
  int shift(int task) const { return task_count_ - 1 - task; }

  int task_count_ = 0;
  std::uint32_t code_ = 0;
};

int hamming_distance(const TeamConfig& a, const TeamConfig& b);

// Which task bits feed each performance contribution.
//
// deps[i] lists 1 + K + C*S task indices: i itself, then K tasks of i's own
// block (ascending), then C tasks from each of S other blocks (ascending by
// absolute index). The internal pattern and the external offsets are the same
// for every agent, so "task j of agent p" and "task j of agent q" have tables
// of identical shape.
struct InteractionStructure {
  int agents = 0;
  int tasks_per_agent = 0;
  int k = 0;
  int c = 0;
  int s = 0;
  std::vector<std::vector<int>> deps;

  int task_count() const { return agents * tasks_per_agent; }
  int dependency_count() const { return 1 + k + c * s; }
  int agent_of(int task) const { return task / tasks_per_agent; }
  int position_of(int task) const { return task % tasks_per_agent; }

  // Throws ParameterError describing the first violated invariant.
  void validate() const;
};

InteractionStructure build_interaction_structure(int agents, int tasks_per_agent, int k, int c,
                                                 int s, RandomStream& rng,
                                                 int enumeration_budget = kDefaultEnumerationBudget);

// Correlated NK(C,S) landscape with its exhaustively computed maximum.
class Landscape {
 public:
  // Takes ownership of per-task tables (task order, entries in pattern order)
  // and enumerates the global maximum.
  Landscape(InteractionStructure structure, std::vector<std::vector<double>> tables, double rho,
            std::uint64_t seed = 0, int enumeration_budget = kDefaultEnumerationBudget);

  const InteractionStructure& structure() const { return structure_; }
  std::span<const double> table(int task) const;
  double rho() const { return rho_; }
  std::uint64_t seed() const { return seed_; }
  double global_max() const { return global_max_; }
  const TeamConfig& global_argmax() const { return global_argmax_; }

  // Index into table(task) selected by the dependency bits of cfg.
  std::uint32_t pattern(int task, const TeamConfig& cfg) const;

 private:
  InteractionStructure structure_;
  std::vector<double> values_;  // task-major, stride 2^(1+K+C*S)
  std::size_t stride_ = 0;
  double rho_ = 0.0;
  std::uint64_t seed_ = 0;
  double global_max_ = 0.0;
  TeamConfig global_argmax_;
};

// Gaussian-copula correction: the normal correlation whose image under the
// normal CDF has Pearson correlation rho.
double copula_normal_correlation(double rho);

Landscape build_landscape(const InteractionStructure& structure, double rho, RandomStream& rng,
                          std::uint64_t seed = 0,
                          int enumeration_budget = kDefaultEnumerationBudget);

double contribution(const Landscape& land, int task, const TeamConfig& cfg);
double agent_performance(const Landscape& land, int agent, const TeamConfig& cfg);
double team_performance(const Landscape& land, const TeamConfig& cfg);

struct GlobalOptimum {
  TeamConfig config;
  double value = 0.0;
};

// Exact maximum of team_performance over all 2^M configurations; ties go to
// the lexicographically smallest configuration.
GlobalOptimum enumerate_global_max(const Landscape& land,
                                   int enumeration_budget = kDefaultEnumerationBudget);

// Text dump format, see docs/landscape-format.md.
void write_landscape(std::ostream& out, const Landscape& land);
Landscape read_landscape(std::istream& in, int enumeration_budget = kDefaultEnumerationBudget);
void save_landscape(const std::string& path, const Landscape& land);
Landscape load_landscape(const std::string& path,
                         int enumeration_budget = kDefaultEnumerationBudget);

}  // namespace normsim
