#include "normsim/experiments.hpp"

#include <yaml-cpp/yaml.h>

#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "normsim/error.hpp"

namespace normsim {

namespace {

std::string format_number(const char* fmt, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, value);
  return buf;
}

std::string short_number(double v) { return format_number("%g", v); }
std::string full_number(double v) { return format_number("%.12g", v); }

}  // namespace

std::string scenario_id(const ScenarioParams& p) {
  std::ostringstream id;
  id << 'K' << p.k << 'C' << p.c << 'S' << p.s << "_a" << short_number(p.scheme.alpha) << "_w"
     << short_number(p.weights.norm) << "_d" << p.degree << "_ns" << p.social_tasks << "_rho"
     << short_number(p.rho);
  return id.str();
}

std::vector<ScenarioGrid::Cell> ScenarioGrid::cells() const {
  std::vector<Cell> out;
  for (const auto& cx : complexities) {
    for (const auto& scheme : schemes) {
      for (const auto& w : weights) {
        for (int d : degrees) {
          for (int ns : social_tasks) {
            for (double rho : rhos) {
              ScenarioParams p = base;
              p.k = cx.k;
              p.c = cx.c;
              p.s = cx.s;
              p.scheme = scheme;
              p.weights = w;
              p.degree = d;
              p.social_tasks = ns;
              p.rho = rho;
              out.push_back({scenario_id(p), p});
            }
          }
        }
      }
    }
  }
  return out;
}

void ScenarioGrid::validate() const {
  if (runs < 2) throw ParameterError("a grid needs at least 2 runs per cell, got " + std::to_string(runs));
  if (!(confidence > 0.0 && confidence < 1.0)) throw ParameterError("confidence must lie in (0,1)");
  const auto all = cells();
  if (all.empty()) throw ParameterError("scenario grid has no cells");
  std::set<std::string> seen;
  for (const auto& cell : all) {
    try {
      cell.params.validate();
    } catch (const ParameterError& e) {
      throw ParameterError("cell " + cell.id + ": " + e.what());
    } catch (const CapabilityError& e) {
      throw CapabilityError("cell " + cell.id + ": " + e.what());
    }
    if (!seen.insert(cell.id).second) throw ParameterError("duplicate scenario " + cell.id);
  }
}

std::vector<std::string> figure_names() { return {"main", "degree", "rho", "nsoc"}; }

ScenarioGrid figure_grid(std::string_view figure) {
  ScenarioGrid grid;
  if (figure == "main") return grid;

  // Sensitivity sweeps: no team incentive, strong norms, no-norm benchmark.
  grid.schemes = {{1.0, 0.0}};
  grid.weights = {{1.0, 0.0}, {0.5, 0.5}};
  if (figure == "degree") {
    grid.degrees = {0, 1, 2, 3};
  } else if (figure == "rho") {
    grid.rhos = {0.0, 0.3, 0.6, 0.9, 0.95, 1.0};
  } else if (figure == "nsoc") {
    grid.social_tasks = {0, 1, 2, 3, 4};
  } else {
    throw ParameterError("unknown figure '" + std::string(figure) + "' (expected main|degree|rho|nsoc)");
  }
  return grid;
}

// ---------------------------------------------------------------------------
// YAML config

namespace {

template <typename T>
T scalar(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("config key '" + key + "' has an invalid value");
  }
}

template <typename T>
std::vector<T> scalar_or_list(const YAML::Node& node, const std::string& key) {
  std::vector<T> out;
  if (node.IsSequence()) {
    for (const auto& item : node) out.push_back(scalar<T>(item, key));
  } else {
    out.push_back(scalar<T>(node, key));
  }
  if (out.empty()) throw ConfigError("config key '" + key + "' is an empty list");
  return out;
}

// Either one pair/triple or a list of them.
std::vector<std::vector<double>> tuples(const YAML::Node& node, const std::string& key, std::size_t width) {
  if (!node.IsSequence() || node.size() == 0) throw ConfigError("config key '" + key + "' must be a list");
  std::vector<std::vector<double>> out;
  auto read_one = [&](const YAML::Node& item) {
    if (!item.IsSequence() || item.size() != width) {
      throw ConfigError("config key '" + key + "' entries must have " + std::to_string(width) + " values");
    }
    std::vector<double> values;
    for (const auto& v : item) values.push_back(scalar<double>(v, key));
    out.push_back(std::move(values));
  };
  if (node[0].IsScalar()) {
    read_one(node);
  } else {
    for (const auto& item : node) read_one(item);
  }
  return out;
}

int as_count(double v, const std::string& key) {
  if (v != std::floor(v) || v < 0) throw ConfigError("config key '" + key + "' must hold integers");
  return static_cast<int>(v);
}

}  // namespace

ScenarioGrid parse_grid(std::string_view yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml_text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("config must be a mapping of parameter names to values");

  ScenarioGrid grid;
  auto& base = grid.base;
  int declared_m = -1;
  for (const auto& entry : root) {
    const auto key = entry.first.as<std::string>();
    const auto& value = entry.second;
    if (key == "m") {
      declared_m = scalar<int>(value, key);
    } else if (key == "p") {
      base.agents = scalar<int>(value, key);
    } else if (key == "n") {
      base.tasks_per_agent = scalar<int>(value, key);
    } else if (key == "complexity") {
      grid.complexities.clear();
      for (const auto& t : tuples(value, key, 3)) {
        grid.complexities.push_back({as_count(t[0], key), as_count(t[1], key), as_count(t[2], key)});
      }
    } else if (key == "schemes") {
      grid.schemes.clear();
      for (const auto& t : tuples(value, key, 2)) grid.schemes.push_back({t[0], t[1]});
    } else if (key == "weights") {
      grid.weights.clear();
      for (const auto& t : tuples(value, key, 2)) grid.weights.push_back({t[0], t[1]});
    } else if (key == "rho") {
      grid.rhos = scalar_or_list<double>(value, key);
    } else if (key == "d") {
      grid.degrees = scalar_or_list<int>(value, key);
    } else if (key == "n_s") {
      grid.social_tasks = scalar_or_list<int>(value, key);
    } else if (key == "t_l") {
      base.memory_span = scalar<int>(value, key);
    } else if (key == "t_max") {
      base.periods = scalar<int>(value, key);
    } else if (key == "seed") {
      base.seed = scalar<std::uint64_t>(value, key);
    } else if (key == "runs") {
      const auto r = scalar<long long>(value, key);
      if (r < 0) throw ConfigError("config key 'runs' must be non-negative");
      grid.runs = static_cast<std::size_t>(r);
    } else if (key == "confidence") {
      grid.confidence = scalar<double>(value, key);
    } else if (key == "enumeration_budget") {
      base.enumeration_budget = scalar<int>(value, key);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  if (declared_m >= 0 && declared_m != base.task_count()) {
    throw ConfigError("m=" + std::to_string(declared_m) + " must equal p*n=" + std::to_string(base.task_count()));
  }
  return grid;
}

ScenarioGrid load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream text;
  text << in.rdbuf();
  return parse_grid(text.str());
}

// ---------------------------------------------------------------------------
// Aggregation

double normal_critical_value(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw ParameterError("confidence must lie in (0,1)");
  const boost::math::normal_distribution<double> standard;
  return boost::math::quantile(standard, 0.5 + confidence / 2.0);
}

AggregateSeries aggregate(const TraceMatrix& matrix, double confidence) {
  if (matrix.runs < 2) throw ParameterError("confidence intervals need at least 2 runs");
  const double z = normal_critical_value(confidence);
  const auto runs = static_cast<double>(matrix.runs);

  AggregateSeries out;
  out.runs = matrix.runs;
  out.mean.resize(matrix.periods);
  out.ci_low.resize(matrix.periods);
  out.ci_high.resize(matrix.periods);
  for (std::size_t t = 0; t < matrix.periods; ++t) {
    double sum = 0.0;
    bool constant = true;
    for (std::size_t r = 0; r < matrix.runs; ++r) {
      sum += matrix.at(r, t);
      constant = constant && matrix.at(r, t) == matrix.at(0, t);
    }
    if (constant) {  // the summed mean can be off by an ulp
      out.mean[t] = out.ci_low[t] = out.ci_high[t] = matrix.at(0, t);
      continue;
    }
    const double mean = sum / runs;
    double squares = 0.0;
    for (std::size_t r = 0; r < matrix.runs; ++r) {
      const double d = matrix.at(r, t) - mean;
      squares += d * d;
    }
    const double half = z * std::sqrt(squares / (runs - 1.0)) / std::sqrt(runs);
    out.mean[t] = mean;
    out.ci_low[t] = mean - half;
    out.ci_high[t] = mean + half;
  }
  return out;
}

GridResults run_grid(const ScenarioGrid& grid, unsigned workers) {
  grid.validate();
  GridResults results;
  for (const auto& cell : grid.cells()) {
    try {
      const auto matrix = replicate(cell.params, grid.runs, workers);
      results.cells.push_back({cell.id, cell.params, aggregate(matrix, grid.confidence)});
    } catch (const std::exception& e) {
      throw std::runtime_error("cell " + cell.id + " failed: " + e.what());
    }
  }
  return results;
}

// ---------------------------------------------------------------------------
// CSV

void write_csv(std::ostream& out, const GridResults& results) {
  if (results.cells.empty()) throw ParameterError("no results to write");
  out << kCsvHeader << '\n';
  for (const auto& cell : results.cells) {
    const auto& p = cell.params;
    const std::string prefix = cell.id + ',' + std::to_string(p.k) + ',' + std::to_string(p.c) + ',' +
                               std::to_string(p.s) + ',' + full_number(p.rho) + ',' +
                               full_number(p.scheme.alpha) + ',' + full_number(p.scheme.beta) + ',' +
                               full_number(p.weights.incentive) + ',' + full_number(p.weights.norm) + ',' +
                               std::to_string(p.degree) + ',' + std::to_string(p.social_tasks) + ',';
    const auto& s = cell.series;
    for (std::size_t t = 0; t < s.periods(); ++t) {
      out << prefix << (t + 1) << ',' << full_number(s.mean[t]) << ',' << full_number(s.ci_low[t]) << ','
          << full_number(s.ci_high[t]) << ',' << s.runs << '\n';
    }
  }
}

void write_csv(const GridResults& results, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_csv(out, results);
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace normsim
