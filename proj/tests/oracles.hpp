#pragma once

// Reference implementations used only by tests. They deliberately avoid the
// library's evaluation paths (TeamConfig packing, Gray-code enumeration,
// popcount compliance) and work from raw tables and plain bit vectors.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "normsim/landscape.hpp"
#include "normsim/rng.hpp"

namespace oracle {

using Bits = std::vector<int>;

inline Bits bits_of_code(std::uint64_t code, int m) {
  Bits b(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) b[i] = static_cast<int>((code >> (m - 1 - i)) & 1U);
  return b;
}

inline double contribution(const normsim::Landscape& land, int task, const Bits& x) {
  const auto& deps = land.structure().deps[task];
  std::size_t index = 0;
  for (std::size_t r = 0; r < deps.size(); ++r) {
    if (x[deps[r]]) index += std::size_t{1} << (deps.size() - 1 - r);
  }
  return land.table(task)[index];
}

inline double own_performance(const normsim::Landscape& land, int agent, const Bits& x) {
  const int n = land.structure().tasks_per_agent;
  double sum = 0.0;
  for (int i = agent * n; i < (agent + 1) * n; ++i) sum += contribution(land, i, x);
  return sum / n;
}

inline double team_performance(const normsim::Landscape& land, const Bits& x) {
  const int agents = land.structure().agents;
  double sum = 0.0;
  for (int p = 0; p < agents; ++p) sum += own_performance(land, p, x);
  return sum / agents;
}

struct Optimum {
  Bits config;
  double value = -1.0;
};

// Plain loop over 0 .. 2^M-1 in lexicographic order, first strict maximum wins.
inline Optimum naive_global_max(const normsim::Landscape& land) {
  const int m = land.structure().task_count();
  Optimum best;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << m); ++code) {
    const Bits x = bits_of_code(code, m);
    const double v = team_performance(land, x);
    if (v > best.value) best = {x, v};
  }
  return best;
}

struct Record {
  int period;
  Bits social;
};

// Mean over records of the fraction of matching social bits, returned as an
// exact rational (matches, N_S * |L|).
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  double value() const { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }
};

inline Fraction compliance(const Bits& social, const std::vector<Record>& memory, int t, int t_l) {
  if (t <= t_l || memory.empty() || social.empty()) return {0, 1};
  Fraction f;
  f.den = social.size() * memory.size();
  for (const auto& record : memory) {
    for (std::size_t i = 0; i < social.size(); ++i) f.num += (social[i] == record.social[i]) ? 1 : 0;
  }
  return f;
}

// Eq.-style direct form: average over records of per-record mean matches.
// Exact in floating point whenever N_S is a power of two.
inline double compliance_direct(const Bits& social, const std::vector<Record>& memory, int t, int t_l) {
  if (t <= t_l || memory.empty() || social.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& record : memory) {
    double matches = 0.0;
    for (std::size_t i = 0; i < social.size(); ++i) matches += (social[i] == record.social[i]) ? 1.0 : 0.0;
    sum += matches / static_cast<double>(social.size());
  }
  return sum / static_cast<double>(memory.size());
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// One-sample Kolmogorov-Smirnov statistic against U(0,1).
inline double ks_statistic_uniform(std::vector<double> sample) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double x = sample[i];
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - x, x - static_cast<double>(i) / n});
  }
  return d;
}

// Asymptotic Kolmogorov tail P(sqrt(n) D > x).
inline double kolmogorov_pvalue(double d, std::size_t n) {
  const double x = std::sqrt(static_cast<double>(n)) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k) {
    p += 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * x * x);
  }
  return std::clamp(p, 0.0, 1.0);
}

// Textbook one-bit hill climb on one agent's block, holding every other bit
// fixed: propose a uniformly random flip, keep it if own performance rises.
// Returns the block bits after each of `steps` proposals.
inline std::vector<Bits> hill_climb(const normsim::Landscape& land, int agent, Bits x,
                                    normsim::RandomStream proposals, int steps) {
  const int n = land.structure().tasks_per_agent;
  std::vector<Bits> path;
  for (int t = 0; t < steps; ++t) {
    Bits y = x;
    const auto i = agent * n + static_cast<int>(proposals.uniform_below(static_cast<std::uint64_t>(n)));
    y[i] = 1 - y[i];
    if (own_performance(land, agent, y) > own_performance(land, agent, x)) x = y;
    path.emplace_back(x.begin() + agent * n, x.begin() + (agent + 1) * n);
  }
  return path;
}

}  // namespace oracle
