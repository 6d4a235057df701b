#include "normsim/norms.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "normsim/error.hpp"

namespace normsim {

SocialBits social_bits(const TeamConfig& cfg, int agent, int tasks_per_agent, int social_tasks) {
  const int first = (agent + 1) * tasks_per_agent - social_tasks;
  return {cfg.slice(first, social_tasks), social_tasks};
}

SocialNetwork::SocialNetwork(int agents, int degree)
    : degree_(degree),
      senders_(static_cast<std::size_t>(std::max(agents, 0))),
      receivers_(static_cast<std::size_t>(std::max(agents, 0))) {
  if (agents < 1) throw ParameterError("network needs at least one agent");
  if (degree < 0 || degree > agents - 1) {
    throw ParameterError("node degree D=" + std::to_string(degree) + " must lie in [0, P-1] for P=" +
                         std::to_string(agents));
  }
  if (degree > 1 && degree % 2 == 1 && agents % 2 == 1) {
    throw ParameterError("odd node degree D=" + std::to_string(degree) + " needs an even number of agents");
  }

  std::vector<int> offsets;
  if (degree == 1) {
    offsets.push_back(1);
  } else if (degree > 1) {
    for (int d = 1; d <= degree / 2; ++d) {
      offsets.push_back(d);
      offsets.push_back(agents - d);
    }
    if (degree % 2 == 1) offsets.push_back(agents / 2);
  }
  for (int p = 0; p < agents; ++p) {
    for (int offset : offsets) {
      const int q = (p + offset) % agents;
      receivers_[p].push_back(q);
      senders_[q].push_back(p);
    }
  }
  for (auto& list : senders_) std::sort(list.begin(), list.end());
  for (auto& list : receivers_) std::sort(list.begin(), list.end());
}

void share(const SocialNetwork& net, int period, const TeamConfig& cfg, int tasks_per_agent,
           int social_tasks, std::vector<NormMemory>& memories) {
  for (int q = 0; q < net.agents(); ++q) {
    for (int p : net.senders(q)) {
      memories[q].records.push_back({period, social_bits(cfg, p, tasks_per_agent, social_tasks)});
    }
  }
}

void expire(NormMemory& memory, int period, int memory_span) {
  auto& records = memory.records;
  while (!records.empty() && records.front().period <= period - memory_span) records.pop_front();
}

double compliance(const SocialBits& bits, const NormMemory& memory, int period, int memory_span) {
  if (period <= memory_span || memory.empty() || bits.count == 0) return 0.0;
  const std::uint32_t mask = 0xffffffffU >> (32 - bits.count);
  // Integer match count keeps the result independent of record order.
  std::uint64_t matches = 0;
  for (const auto& record : memory.records) {
    matches += static_cast<std::uint64_t>(std::popcount(~(bits.word ^ record.bits.word) & mask));
  }
  return static_cast<double>(matches) /
         (static_cast<double>(bits.count) * static_cast<double>(memory.size()));
}

}  // namespace normsim
