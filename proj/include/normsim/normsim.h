/*
 * C interface to the normsim team-search simulator.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an nsim_status; on
 * failure nsim_last_error() describes the problem (per thread, valid until
 * the next failing call on that thread).
 */
#ifndef NORMSIM_NORMSIM_H
#define NORMSIM_NORMSIM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define NSIM_API __declspec(dllexport)
#elif defined(__GNUC__) || defined(__clang__)
#  define NSIM_API __attribute__((visibility("default")))
#else
#  define NSIM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nsim_status {
  NSIM_OK = 0,
  NSIM_ERR_INVALID_ARGUMENT = 1, /* null handle, bad index, short buffer */
  NSIM_ERR_PARAMETER = 2,        /* model parameter outside its domain */
  NSIM_ERR_CONFIG = 3,           /* unreadable or malformed config / dump */
  NSIM_ERR_CAPABILITY = 4,       /* e.g. landscape too large to enumerate */
  NSIM_ERR_IO = 5,
  NSIM_ERR_RUNTIME = 6
} nsim_status;

typedef struct nsim_grid nsim_grid;
typedef struct nsim_results nsim_results;
typedef struct nsim_landscape nsim_landscape;

NSIM_API const char* nsim_version(void);
NSIM_API const char* nsim_last_error(void);
NSIM_API const char* nsim_status_name(nsim_status status);

/* Scenario grids ---------------------------------------------------------- */

NSIM_API nsim_status nsim_grid_from_file(const char* path, nsim_grid** out);
/* figure: "main", "degree", "rho" or "nsoc". */
NSIM_API nsim_status nsim_grid_from_figure(const char* figure, nsim_grid** out);
NSIM_API void nsim_grid_free(nsim_grid* grid);

NSIM_API nsim_status nsim_grid_set_runs(nsim_grid* grid, uint64_t runs);
NSIM_API nsim_status nsim_grid_set_seed(nsim_grid* grid, uint64_t seed);
NSIM_API nsim_status nsim_grid_set_periods(nsim_grid* grid, uint32_t periods);
NSIM_API nsim_status nsim_grid_validate(const nsim_grid* grid);
NSIM_API nsim_status nsim_grid_cell_count(const nsim_grid* grid, size_t* out);
/* Copies the NUL-terminated scenario id of a cell. *needed (optional) gets the
   buffer size required including the terminator. */
NSIM_API nsim_status nsim_grid_cell_id(const nsim_grid* grid, size_t cell, char* buffer,
                                       size_t capacity, size_t* needed);

/* Normalized performance trace of one run of a cell (run seed derived from
   the grid seed and run_index). out must hold `periods` values. */
NSIM_API nsim_status nsim_run_trace(const nsim_grid* grid, size_t cell, uint64_t run_index,
                                    double* out, size_t periods);

/* Runs every cell; the result is independent of `workers` (0 = one per core). */
NSIM_API nsim_status nsim_grid_run(const nsim_grid* grid, uint32_t workers, nsim_results** out);
NSIM_API void nsim_results_free(nsim_results* results);

NSIM_API nsim_status nsim_results_cell_count(const nsim_results* results, size_t* out);
NSIM_API nsim_status nsim_results_period_count(const nsim_results* results, size_t cell,
                                               size_t* out);
/* Any of mean / ci_low / ci_high may be NULL; non-null buffers hold `periods`. */
NSIM_API nsim_status nsim_results_series(const nsim_results* results, size_t cell, double* mean,
                                         double* ci_low, double* ci_high, size_t periods);
NSIM_API nsim_status nsim_results_write_csv(const nsim_results* results, const char* path);

/* Landscapes -------------------------------------------------------------- */

/* The landscape that run `run_index` of `cell` simulates on. */
NSIM_API nsim_status nsim_landscape_for_run(const nsim_grid* grid, size_t cell, uint64_t run_index,
                                            nsim_landscape** out);
NSIM_API nsim_status nsim_landscape_load(const char* path, nsim_landscape** out);
NSIM_API nsim_status nsim_landscape_save(const nsim_landscape* land, const char* path);
NSIM_API void nsim_landscape_free(nsim_landscape* land);

NSIM_API nsim_status nsim_landscape_task_count(const nsim_landscape* land, size_t* out);
/* bits: task_count bytes, each 0 or 1, task order. */
NSIM_API nsim_status nsim_landscape_team_performance(const nsim_landscape* land,
                                                     const uint8_t* bits, size_t task_count,
                                                     double* out);
/* argmax_bits (optional) receives task_count bytes. */
NSIM_API nsim_status nsim_landscape_global_max(const nsim_landscape* land, double* value,
                                               uint8_t* argmax_bits, size_t task_count);

#ifdef __cplusplus
}
#endif

#endif /* NORMSIM_NORMSIM_H */
