#include "normsim/normsim.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <string>
#include <thread>

#include "normsim/engine.hpp"
#include "normsim/error.hpp"
#include "normsim/experiments.hpp"
#include "normsim/landscape.hpp"

struct nsim_grid {
  normsim::ScenarioGrid grid;
};

struct nsim_results {
  normsim::GridResults results;
};

struct nsim_landscape {
  normsim::Landscape land;
};

namespace {

thread_local std::string last_error;

nsim_status fail(nsim_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

// Maps exceptions escaping the C++ core onto status codes.
template <typename Fn>
nsim_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return NSIM_OK;
  } catch (const normsim::ParameterError& e) {
    return fail(NSIM_ERR_PARAMETER, e.what());
  } catch (const normsim::ConfigError& e) {
    return fail(NSIM_ERR_CONFIG, e.what());
  } catch (const normsim::CapabilityError& e) {
    return fail(NSIM_ERR_CAPABILITY, e.what());
  } catch (const normsim::IoError& e) {
    return fail(NSIM_ERR_IO, e.what());
  } catch (const std::bad_alloc&) {
    return fail(NSIM_ERR_RUNTIME, "out of memory");
  } catch (const std::exception& e) {
    return fail(NSIM_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(NSIM_ERR_RUNTIME, "unknown error");
  }
}

#define NSIM_REQUIRE(cond, what) \
  if (!(cond)) return fail(NSIM_ERR_INVALID_ARGUMENT, what)

const normsim::ScenarioGrid::Cell* find_cell(const nsim_grid* grid, size_t cell,
                                             std::vector<normsim::ScenarioGrid::Cell>& storage) {
  storage = grid->grid.cells();
  return cell < storage.size() ? &storage[cell] : nullptr;
}

}  // namespace

extern "C" {

const char* nsim_version(void) { return "1.0.0"; }

const char* nsim_last_error(void) { return last_error.c_str(); }

const char* nsim_status_name(nsim_status status) {
  switch (status) {
    case NSIM_OK: return "ok";
    case NSIM_ERR_INVALID_ARGUMENT: return "invalid argument";
    case NSIM_ERR_PARAMETER: return "parameter error";
    case NSIM_ERR_CONFIG: return "config error";
    case NSIM_ERR_CAPABILITY: return "capability error";
    case NSIM_ERR_IO: return "i/o error";
    case NSIM_ERR_RUNTIME: return "runtime error";
  }
  return "unknown status";
}

nsim_status nsim_grid_from_file(const char* path, nsim_grid** out) {
  NSIM_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new nsim_grid{normsim::load_grid(path)}; });
}

nsim_status nsim_grid_from_figure(const char* figure, nsim_grid** out) {
  NSIM_REQUIRE(figure && out, "null argument");
  return guarded([&] { *out = new nsim_grid{normsim::figure_grid(figure)}; });
}

void nsim_grid_free(nsim_grid* grid) { delete grid; }

nsim_status nsim_grid_set_runs(nsim_grid* grid, uint64_t runs) {
  NSIM_REQUIRE(grid, "null grid");
  grid->grid.runs = static_cast<std::size_t>(runs);
  return NSIM_OK;
}

nsim_status nsim_grid_set_seed(nsim_grid* grid, uint64_t seed) {
  NSIM_REQUIRE(grid, "null grid");
  grid->grid.base.seed = seed;
  return NSIM_OK;
}

nsim_status nsim_grid_set_periods(nsim_grid* grid, uint32_t periods) {
  NSIM_REQUIRE(grid, "null grid");
  grid->grid.base.periods = static_cast<int>(periods);
  return NSIM_OK;
}

nsim_status nsim_grid_validate(const nsim_grid* grid) {
  NSIM_REQUIRE(grid, "null grid");
  return guarded([&] { grid->grid.validate(); });
}

nsim_status nsim_grid_cell_count(const nsim_grid* grid, size_t* out) {
  NSIM_REQUIRE(grid && out, "null argument");
  return guarded([&] { *out = grid->grid.cells().size(); });
}

nsim_status nsim_grid_cell_id(const nsim_grid* grid, size_t cell, char* buffer, size_t capacity,
                              size_t* needed) {
  NSIM_REQUIRE(grid, "null grid");
  std::vector<normsim::ScenarioGrid::Cell> cells;
  const auto* c = find_cell(grid, cell, cells);
  NSIM_REQUIRE(c, "cell index out of range");
  const auto& id = c->id;
  if (needed) *needed = id.size() + 1;
  if (buffer == nullptr && capacity == 0 && needed) return NSIM_OK;  // size query
  if (buffer == nullptr || capacity < id.size() + 1) {
    return fail(NSIM_ERR_INVALID_ARGUMENT, "buffer too small for scenario id");
  }
  std::memcpy(buffer, id.c_str(), id.size() + 1);
  return NSIM_OK;
}

nsim_status nsim_run_trace(const nsim_grid* grid, size_t cell, uint64_t run_index, double* out,
                           size_t periods) {
  NSIM_REQUIRE(grid && out, "null argument");
  std::vector<normsim::ScenarioGrid::Cell> cells;
  const auto* c = find_cell(grid, cell, cells);
  NSIM_REQUIRE(c, "cell index out of range");
  NSIM_REQUIRE(periods == static_cast<size_t>(c->params.periods), "buffer length differs from T");
  return guarded([&] {
    const auto trace = normsim::run(c->params, normsim::derive_seed(c->params.seed, run_index));
    std::copy(trace.series.begin(), trace.series.end(), out);
  });
}

nsim_status nsim_grid_run(const nsim_grid* grid, uint32_t workers, nsim_results** out) {
  NSIM_REQUIRE(grid && out, "null argument");
  const unsigned threads = workers != 0 ? workers : std::max(1U, std::thread::hardware_concurrency());
  return guarded([&] { *out = new nsim_results{normsim::run_grid(grid->grid, threads)}; });
}

void nsim_results_free(nsim_results* results) { delete results; }

nsim_status nsim_results_cell_count(const nsim_results* results, size_t* out) {
  NSIM_REQUIRE(results && out, "null argument");
  *out = results->results.cells.size();
  return NSIM_OK;
}

nsim_status nsim_results_period_count(const nsim_results* results, size_t cell, size_t* out) {
  NSIM_REQUIRE(results && out, "null argument");
  NSIM_REQUIRE(cell < results->results.cells.size(), "cell index out of range");
  *out = results->results.cells[cell].series.periods();
  return NSIM_OK;
}

nsim_status nsim_results_series(const nsim_results* results, size_t cell, double* mean,
                                double* ci_low, double* ci_high, size_t periods) {
  NSIM_REQUIRE(results, "null results");
  NSIM_REQUIRE(cell < results->results.cells.size(), "cell index out of range");
  const auto& s = results->results.cells[cell].series;
  NSIM_REQUIRE(periods == s.periods(), "buffer length differs from T");
  if (mean) std::copy(s.mean.begin(), s.mean.end(), mean);
  if (ci_low) std::copy(s.ci_low.begin(), s.ci_low.end(), ci_low);
  if (ci_high) std::copy(s.ci_high.begin(), s.ci_high.end(), ci_high);
  return NSIM_OK;
}

nsim_status nsim_results_write_csv(const nsim_results* results, const char* path) {
  NSIM_REQUIRE(results && path, "null argument");
  return guarded([&] { normsim::write_csv(results->results, path); });
}

nsim_status nsim_landscape_for_run(const nsim_grid* grid, size_t cell, uint64_t run_index,
                                   nsim_landscape** out) {
  NSIM_REQUIRE(grid && out, "null argument");
  std::vector<normsim::ScenarioGrid::Cell> cells;
  const auto* c = find_cell(grid, cell, cells);
  NSIM_REQUIRE(c, "cell index out of range");
  return guarded([&] {
    c->params.validate();
    *out = new nsim_landscape{
        normsim::build_run_landscape(c->params, normsim::derive_seed(c->params.seed, run_index))};
  });
}

nsim_status nsim_landscape_load(const char* path, nsim_landscape** out) {
  NSIM_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new nsim_landscape{normsim::load_landscape(path)}; });
}

nsim_status nsim_landscape_save(const nsim_landscape* land, const char* path) {
  NSIM_REQUIRE(land && path, "null argument");
  return guarded([&] { normsim::save_landscape(path, land->land); });
}

void nsim_landscape_free(nsim_landscape* land) { delete land; }

nsim_status nsim_landscape_task_count(const nsim_landscape* land, size_t* out) {
  NSIM_REQUIRE(land && out, "null argument");
  *out = static_cast<size_t>(land->land.structure().task_count());
  return NSIM_OK;
}

nsim_status nsim_landscape_team_performance(const nsim_landscape* land, const uint8_t* bits,
                                            size_t task_count, double* out) {
  NSIM_REQUIRE(land && bits && out, "null argument");
  NSIM_REQUIRE(task_count == static_cast<size_t>(land->land.structure().task_count()),
               "bit count differs from M");
  return guarded([&] {
    const auto cfg = normsim::TeamConfig::from_bits({bits, task_count});
    *out = normsim::team_performance(land->land, cfg);
  });
}

nsim_status nsim_landscape_global_max(const nsim_landscape* land, double* value,
                                      uint8_t* argmax_bits, size_t task_count) {
  NSIM_REQUIRE(land, "null landscape");
  if (value) *value = land->land.global_max();
  if (argmax_bits) {
    NSIM_REQUIRE(task_count == static_cast<size_t>(land->land.structure().task_count()),
                 "bit count differs from M");
    const auto bits = land->land.global_argmax().bits();
    std::copy(bits.begin(), bits.end(), argmax_bits);
  }
  return NSIM_OK;
}

}  // extern "C"
