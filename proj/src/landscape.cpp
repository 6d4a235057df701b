#include "normsim/landscape.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "normsim/error.hpp"

namespace normsim {

namespace {

constexpr int kMaxRejections = 10'000;

std::string str(const char* what, int value) { return std::string(what) + "=" + std::to_string(value); }

void check_budget(int task_count, int budget) {
  if (task_count > budget || task_count > kMaxTasks) {
    throw CapabilityError("M=" + std::to_string(task_count) +
                          " tasks exceeds the enumeration budget of " +
                          std::to_string(std::min(budget, kMaxTasks)) + " bits");
  }
}

// Random n x n 0/1 matrix with every row and column summing to `degree`,
// optionally with an empty diagonal. Rows are returned as sorted column lists.
//
// Rows are drawn independently and the whole matrix is rejected unless the
// column sums come out right; after kMaxRejections the circulant matrix is
// used instead.
std::vector<std::vector<int>> sample_regular_pattern(int n, int degree, bool exclude_diagonal,
                                                     RandomStream& rng) {
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(n));
  if (degree == 0) return rows;

  std::vector<int> pool;
  std::vector<int> column_sums(static_cast<std::size_t>(n));
  for (int attempt = 0; attempt < kMaxRejections; ++attempt) {
    std::fill(column_sums.begin(), column_sums.end(), 0);
    for (int row = 0; row < n; ++row) {
      pool.clear();
      for (int col = 0; col < n; ++col) {
        if (!(exclude_diagonal && col == row)) pool.push_back(col);
      }
      // Partial Fisher-Yates: the first `degree` entries are a uniform subset.
      for (int i = 0; i < degree; ++i) {
        const auto j = i + static_cast<int>(rng.uniform_below(pool.size() - i));
        std::swap(pool[i], pool[j]);
      }
      auto& chosen = rows[row];
      chosen.assign(pool.begin(), pool.begin() + degree);
      std::sort(chosen.begin(), chosen.end());
      for (int col : chosen) ++column_sums[col];
    }
    if (std::all_of(column_sums.begin(), column_sums.end(), [&](int v) { return v == degree; })) {
      return rows;
    }
  }

  const int first = exclude_diagonal ? 1 : 0;
  for (int row = 0; row < n; ++row) {
    auto& chosen = rows[row];
    chosen.clear();
    for (int i = 0; i < degree; ++i) chosen.push_back((row + first + i) % n);
    std::sort(chosen.begin(), chosen.end());
  }
  return rows;
}

}  // namespace

// ---------------------------------------------------------------------------
// TeamConfig

TeamConfig::TeamConfig(int task_count) : task_count_(task_count) {
  if (task_count < 0 || task_count > kMaxTasks) {
    throw ParameterError("task count must lie in [0, " + std::to_string(kMaxTasks) + "], got " +
                         std::to_string(task_count));
  }
}

TeamConfig TeamConfig::from_code(std::uint32_t code, int task_count) {
  TeamConfig cfg(task_count);
  const std::uint32_t mask = task_count == 0 ? 0U : (0xffffffffU >> (32 - task_count));
  cfg.code_ = code & mask;
  return cfg;
}

TeamConfig TeamConfig::from_bits(std::span<const std::uint8_t> bits) {
  TeamConfig cfg(static_cast<int>(bits.size()));
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] > 1) throw ParameterError("decision bits must be 0 or 1");
    cfg.set(static_cast<int>(i), bits[i] != 0);
  }
  return cfg;
}

TeamConfig TeamConfig::random(int task_count, RandomStream& rng) {
  if (task_count == 0) return TeamConfig(0);
  return from_code(static_cast<std::uint32_t>(rng.next_u64() >> (64 - task_count)), task_count);
}

void TeamConfig::set(int task, bool value) {
  const std::uint32_t mask = 1U << shift(task);
  code_ = value ? (code_ | mask) : (code_ & ~mask);
}

std::uint32_t TeamConfig::slice(int first, int count) const {
  if (count == 0) return 0;
  const int low = task_count_ - first - count;
  return (code_ >> low) & (0xffffffffU >> (32 - count));
}

void TeamConfig::assign_slice(int first, int count, std::uint32_t value) {
  if (count == 0) return;
  const int low = task_count_ - first - count;
  const std::uint32_t mask = (0xffffffffU >> (32 - count)) << low;
  code_ = (code_ & ~mask) | ((value << low) & mask);
}

std::vector<std::uint8_t> TeamConfig::bits() const {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(task_count_));
  for (int i = 0; i < task_count_; ++i) out[i] = bit(i) ? 1 : 0;
  return out;
}

std::string TeamConfig::to_string() const {
  std::string out;
  out.reserve(static_cast<std::size_t>(task_count_));
  for (int i = 0; i < task_count_; ++i) out.push_back(bit(i) ? '1' : '0');
  return out;
}

int hamming_distance(const TeamConfig& a, const TeamConfig& b) {
  return std::popcount(a.code() ^ b.code());
}

// ---------------------------------------------------------------------------
// InteractionStructure

static void check_coupling_bounds(int agents, int tasks_per_agent, int k, int c, int s) {
  if (agents < 1) throw ParameterError("P must be >= 1, got " + std::to_string(agents));
  if (tasks_per_agent < 1) throw ParameterError("N must be >= 1, got " + std::to_string(tasks_per_agent));
  if (k < 0 || k > tasks_per_agent - 1) {
    throw ParameterError("K must lie in [0, N-1]: " + str("K", k) + ", " + str("N", tasks_per_agent));
  }
  if (c < 0 || s < 0) throw ParameterError("C and S must be non-negative");
  if (c > 0) {
    if (s < 1) throw ParameterError("C > 0 requires S >= 1, got " + str("S", s));
    if (s > agents - 1) throw ParameterError("S must be <= P-1: " + str("S", s) + ", " + str("P", agents));
    if (c > tasks_per_agent) throw ParameterError("C must be <= N: " + str("C", c) + ", " + str("N", tasks_per_agent));
  }
}

void InteractionStructure::validate() const {
  check_coupling_bounds(agents, tasks_per_agent, k, c, s);
  const int m = task_count();
  if (static_cast<int>(deps.size()) != m) throw ParameterError("dependency list count differs from M");

  const int external = c * s;
  std::vector<int> in_degree(static_cast<std::size_t>(m));
  std::vector<int> internal_use(static_cast<std::size_t>(m));
  std::vector<int> external_use(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    const auto& row = deps[i];
    if (static_cast<int>(row.size()) != dependency_count()) {
      throw ParameterError("task " + std::to_string(i) + " has " + std::to_string(row.size()) +
                           " dependencies, expected 1+K+C*S=" + std::to_string(dependency_count()));
    }
    if (row[0] != i) throw ParameterError("deps[" + std::to_string(i) + "][0] must be the task itself");
    std::vector<int> sorted = row;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ParameterError("task " + std::to_string(i) + " has repeated dependencies");
    }
    for (int j : row) {
      if (j < 0 || j >= m) throw ParameterError("dependency index out of range");
      ++in_degree[j];
    }
    for (int r = 1; r <= k; ++r) {
      if (agent_of(row[r]) != agent_of(i)) {
        throw ParameterError("internal dependency of task " + std::to_string(i) + " leaves its block");
      }
      if (r > 1 && row[r] <= row[r - 1]) throw ParameterError("internal dependencies must be ascending");
      ++internal_use[row[r]];
    }
    std::vector<int> per_block(static_cast<std::size_t>(agents));
    for (int r = 1 + k; r < 1 + k + external; ++r) {
      if (agent_of(row[r]) == agent_of(i)) {
        throw ParameterError("external dependency of task " + std::to_string(i) + " is in its own block");
      }
      if (r > 1 + k && row[r] <= row[r - 1]) throw ParameterError("external dependencies must be ascending");
      ++per_block[agent_of(row[r])];
      ++external_use[row[r]];
    }
    int coupled_blocks = 0;
    for (int count : per_block) {
      if (count == 0) continue;
      if (count != c) throw ParameterError("task " + std::to_string(i) + " does not take exactly C tasks per coupled agent");
      ++coupled_blocks;
    }
    if (external > 0 && coupled_blocks != s) {
      throw ParameterError("task " + std::to_string(i) + " is not coupled to exactly S agents");
    }
  }
  for (int j = 0; j < m; ++j) {
    if (in_degree[j] != dependency_count() || internal_use[j] != k || external_use[j] != external) {
      throw ParameterError("task " + std::to_string(j) + " breaks regularity: it feeds " +
                           std::to_string(internal_use[j]) + " internal and " +
                           std::to_string(external_use[j]) + " external contributions");
    }
  }
  // Block symmetry of the internal pattern.
  for (int i = 0; i < m; ++i) {
    const int reference = position_of(i);
    for (int r = 1; r <= k; ++r) {
      if (position_of(deps[i][r]) != position_of(deps[reference][r])) {
        throw ParameterError("internal dependency pattern differs between agents");
      }
    }
  }
}

InteractionStructure build_interaction_structure(int agents, int tasks_per_agent, int k, int c,
                                                 int s, RandomStream& rng,
                                                 int enumeration_budget) {
  InteractionStructure out;
  out.agents = agents;
  out.tasks_per_agent = tasks_per_agent;
  out.k = k;
  out.c = c;
  out.s = c > 0 ? s : 0;
  check_coupling_bounds(agents, tasks_per_agent, k, c, out.s);
  check_budget(agents * tasks_per_agent, enumeration_budget);

  const int n = tasks_per_agent;
  const auto internal = sample_regular_pattern(n, k, /*exclude_diagonal=*/true, rng);

  // S distinct partner offsets in [1, P-1], one regular position pattern each.
  std::vector<int> offsets;
  std::vector<std::vector<std::vector<int>>> external;
  if (out.c > 0) {
    std::vector<int> pool;
    for (int d = 1; d < agents; ++d) pool.push_back(d);
    for (int i = 0; i < out.s; ++i) {
      const auto j = i + static_cast<int>(rng.uniform_below(pool.size() - i));
      std::swap(pool[i], pool[j]);
    }
    offsets.assign(pool.begin(), pool.begin() + out.s);
    for (int i = 0; i < out.s; ++i) {
      external.push_back(sample_regular_pattern(n, out.c, /*exclude_diagonal=*/false, rng));
    }
  }

  out.deps.resize(static_cast<std::size_t>(out.task_count()));
  for (int p = 0; p < agents; ++p) {
    for (int j = 0; j < n; ++j) {
      auto& row = out.deps[p * n + j];
      row.push_back(p * n + j);
      for (int u : internal[j]) row.push_back(p * n + u);
      std::vector<int> ext;
      for (std::size_t e = 0; e < offsets.size(); ++e) {
        const int partner = (p + offsets[e]) % agents;
        for (int u : external[e][j]) ext.push_back(partner * n + u);
      }
      std::sort(ext.begin(), ext.end());
      row.insert(row.end(), ext.begin(), ext.end());
    }
  }
  out.validate();
  return out;
}

// ---------------------------------------------------------------------------
// Landscape

Landscape::Landscape(InteractionStructure structure, std::vector<std::vector<double>> tables,
                     double rho, std::uint64_t seed, int enumeration_budget)
    : structure_(std::move(structure)), rho_(rho), seed_(seed) {
  structure_.validate();
  if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError("rho must lie in [0,1]");
  check_budget(structure_.task_count(), enumeration_budget);
  stride_ = std::size_t{1} << structure_.dependency_count();
  if (static_cast<int>(tables.size()) != structure_.task_count()) {
    throw ParameterError("expected one table per task");
  }
  values_.reserve(stride_ * tables.size());
  for (const auto& t : tables) {
    if (t.size() != stride_) {
      throw ParameterError("table size " + std::to_string(t.size()) + " differs from 2^(1+K+C*S)=" +
                           std::to_string(stride_));
    }
    for (double v : t) {
      if (!(v >= 0.0 && v <= 1.0)) throw ParameterError("table values must lie in [0,1]");
    }
    values_.insert(values_.end(), t.begin(), t.end());
  }
  const auto best = enumerate_global_max(*this, enumeration_budget);
  global_max_ = best.value;
  global_argmax_ = best.config;
}

std::span<const double> Landscape::table(int task) const {
  return {values_.data() + static_cast<std::size_t>(task) * stride_, stride_};
}

std::uint32_t Landscape::pattern(int task, const TeamConfig& cfg) const {
  std::uint32_t index = 0;
  for (int j : structure_.deps[task]) index = (index << 1) | (cfg.bit(j) ? 1U : 0U);
  return index;
}

double copula_normal_correlation(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError("rho must lie in [0,1]");
  if (rho == 1.0) return 1.0;  // 2 sin(pi/6) rounds just below 1
  return std::min(1.0, 2.0 * std::sin(std::numbers::pi * rho / 6.0));
}

Landscape build_landscape(const InteractionStructure& structure, double rho, RandomStream& rng,
                          std::uint64_t seed, int enumeration_budget) {
  structure.validate();
  const double normal_rho = copula_normal_correlation(rho);
  const double shared = std::sqrt(normal_rho);
  const double own = std::sqrt(1.0 - normal_rho);
  const int n = structure.tasks_per_agent;
  const int agents = structure.agents;
  const std::size_t entries = std::size_t{1} << structure.dependency_count();

  std::vector<std::vector<double>> tables(static_cast<std::size_t>(structure.task_count()),
                                          std::vector<double>(entries));
  // One equicorrelated P-variate normal per (position, pattern) cell, mapped
  // through the normal CDF.
  for (int j = 0; j < n; ++j) {
    for (std::size_t e = 0; e < entries; ++e) {
      const double common = rng.standard_normal();
      for (int p = 0; p < agents; ++p) {
        const double z = shared * common + own * rng.standard_normal();
        tables[p * n + j][e] = 0.5 * std::erfc(-z / std::numbers::sqrt2);
      }
    }
  }
  return Landscape(structure, std::move(tables), rho, seed, enumeration_budget);
}

double contribution(const Landscape& land, int task, const TeamConfig& cfg) {
  return land.table(task)[land.pattern(task, cfg)];
}

double agent_performance(const Landscape& land, int agent, const TeamConfig& cfg) {
  const int n = land.structure().tasks_per_agent;
  double sum = 0.0;
  for (int i = agent * n; i < (agent + 1) * n; ++i) sum += contribution(land, i, cfg);
  return sum / n;
}

double team_performance(const Landscape& land, const TeamConfig& cfg) {
  const int agents = land.structure().agents;
  double sum = 0.0;
  for (int p = 0; p < agents; ++p) sum += agent_performance(land, p, cfg);
  return sum / agents;
}

GlobalOptimum enumerate_global_max(const Landscape& land, int enumeration_budget) {
  const auto& st = land.structure();
  const int m = st.task_count();
  const int n = st.tasks_per_agent;
  const int width = st.dependency_count();
  check_budget(m, enumeration_budget);

  // Walk all codes in Gray-code order. Flipping task b toggles one bit of the
  // pattern of every task whose dependency list contains b.
  struct Toggle {
    int task;
    std::uint32_t mask;
  };
  std::vector<std::vector<Toggle>> toggles(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    for (int r = 0; r < width; ++r) {
      toggles[st.deps[i][r]].push_back({i, 1U << (width - 1 - r)});
    }
  }
  std::vector<const double*> tables(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) tables[i] = land.table(i).data();

  std::vector<std::uint32_t> patterns(static_cast<std::size_t>(m), 0U);
  auto evaluate = [&] {
    double total = 0.0;
    for (int p = 0; p < st.agents; ++p) {
      double sum = 0.0;
      for (int i = p * n; i < (p + 1) * n; ++i) sum += tables[i][patterns[i]];
      total += sum / n;
    }
    return total / st.agents;
  };

  std::uint32_t best_code = 0;
  double best = evaluate();
  std::uint32_t code = 0;
  const std::uint64_t count = std::uint64_t{1} << m;
  for (std::uint64_t step = 1; step < count; ++step) {
    const int low = std::countr_zero(step);  // Gray code flips bit `low` of the code
    code ^= 1U << low;
    const int task = m - 1 - low;
    for (const auto& t : toggles[task]) patterns[t.task] ^= t.mask;
    const double value = evaluate();
    if (value > best || (value == best && code < best_code)) {
      best = value;
      best_code = code;
    }
  }
  return {TeamConfig::from_code(best_code, m), best};
}

// ---------------------------------------------------------------------------
// Text dump

namespace {
constexpr const char* kMagic = "normsim-landscape";
constexpr int kFormatVersion = 1;
}  // namespace

void write_landscape(std::ostream& out, const Landscape& land) {
  const auto& st = land.structure();
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "M " << st.task_count() << " P " << st.agents << " N " << st.tasks_per_agent << " K "
      << st.k << " C " << st.c << " S " << st.s << '\n';
  out << std::setprecision(17) << "rho " << land.rho() << " seed " << land.seed() << '\n';
  for (const auto& row : st.deps) {
    out << "deps";
    for (int j : row) out << ' ' << j;
    out << '\n';
  }
  for (int i = 0; i < st.task_count(); ++i) {
    out << "table " << i;
    for (double v : land.table(i)) out << ' ' << v;
    out << '\n';
  }
}

Landscape read_landscape(std::istream& in, int enumeration_budget) {
  auto fail = [](const std::string& why) -> void { throw ConfigError("landscape dump: " + why); };
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != kMagic) fail("missing header");
  if (version != kFormatVersion) fail("unsupported version " + std::to_string(version));

  auto expect = [&](const char* key, auto& value) {
    std::string word;
    if (!(in >> word) || word != key || !(in >> value)) fail(std::string("expected field ") + key);
  };
  int m = 0;
  InteractionStructure st;
  double rho = 0.0;
  std::uint64_t seed = 0;
  expect("M", m);
  expect("P", st.agents);
  expect("N", st.tasks_per_agent);
  expect("K", st.k);
  expect("C", st.c);
  expect("S", st.s);
  expect("rho", rho);
  expect("seed", seed);
  if (st.agents < 1 || st.tasks_per_agent < 1 || m != st.task_count()) fail("M must equal P*N");
  check_budget(m, enumeration_budget);
  const int width = st.dependency_count();
  if (st.k < 0 || st.c < 0 || st.s < 0 || width > 24) fail("bad coupling counts");

  st.deps.assign(static_cast<std::size_t>(m), std::vector<int>(static_cast<std::size_t>(width)));
  for (auto& row : st.deps) {
    std::string word;
    if (!(in >> word) || word != "deps") fail("expected deps row");
    for (int& j : row) {
      if (!(in >> j)) fail("truncated deps row");
    }
  }
  std::vector<std::vector<double>> tables(static_cast<std::size_t>(m),
                                          std::vector<double>(std::size_t{1} << width));
  for (int i = 0; i < m; ++i) {
    std::string word;
    int index = -1;
    if (!(in >> word >> index) || word != "table" || index != i) fail("expected table " + std::to_string(i));
    for (double& v : tables[i]) {
      if (!(in >> v)) fail("truncated table " + std::to_string(i));
    }
  }
  try {
    return Landscape(std::move(st), std::move(tables), rho, seed, enumeration_budget);
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("landscape dump: ") + e.what());
  }
}

void save_landscape(const std::string& path, const Landscape& land) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_landscape(out, land);
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

Landscape load_landscape(const std::string& path, int enumeration_budget) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_landscape(in, enumeration_budget);
}

}  // namespace normsim
