#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "normsim/landscape.hpp"

namespace normsim {

// Social decisions of one agent: the last N_S bits of its block, first
// social task most significant.
struct SocialBits {
  std::uint32_t word = 0;
  int count = 0;

  bool bit(int position) const { return (word >> (count - 1 - position)) & 1U; }
  friend bool operator==(const SocialBits&, const SocialBits&) = default;
};

SocialBits social_bits(const TeamConfig& cfg, int agent, int tasks_per_agent, int social_tasks);

// Who shares social decisions with whom. Links are directed: an agent
// receives one record per period from each of its senders.
//
//   degree 0   no links
//   degree 1   directed cycle, p sends to p+1
//   even d     bidirectional ring to the d/2 nearest agents on each side
//   odd d > 1  even-degree ring plus the diametrically opposite agent (P even)
class SocialNetwork {
 public:
  SocialNetwork(int agents, int degree);

  int agents() const { return static_cast<int>(senders_.size()); }
  int degree() const { return degree_; }
  const std::vector<int>& senders(int agent) const { return senders_[agent]; }
  const std::vector<int>& receivers(int agent) const { return receivers_[agent]; }

 private:
  int degree_;
  std::vector<std::vector<int>> senders_;
  std::vector<std::vector<int>> receivers_;
};

struct MemoryRecord {
  int period = 0;
  SocialBits bits;
};

// One agent's memory L^p of peers' shared social decisions, oldest first.
struct NormMemory {
  std::deque<MemoryRecord> records;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
};

// Appends (t, social bits of the sender) to every receiver's memory.
void share(const SocialNetwork& net, int period, const TeamConfig& cfg, int tasks_per_agent,
           int social_tasks, std::vector<NormMemory>& memories);

// Drops records stamped at or before period - memory_span, so a record from
// period t' is visible through t' + memory_span - 1.
void expire(NormMemory& memory, int period, int memory_span);

// Share of social bits that agree with remembered peer decisions, averaged
// over records. Zero while period <= memory_span, when memory is empty, or
// when there are no social tasks.
double compliance(const SocialBits& bits, const NormMemory& memory, int period, int memory_span);

}  // namespace normsim
