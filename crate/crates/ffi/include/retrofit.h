#ifndef RETROFIT_H
#define RETROFIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RetrofitStatus {
  RETROFIT_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  RETROFIT_STATUS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  RETROFIT_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed or out-of-range input.
   */
  RETROFIT_STATUS_INVALID_INPUT = 3,
  /**
   * Well-formed input the data cannot answer, such as an empty reference group.
   */
  RETROFIT_STATUS_DOMAIN_ERROR = 4,
  RETROFIT_STATUS_INTERNAL = 5,
  /**
   * A Rust panic was caught at the boundary.
   */
  RETROFIT_STATUS_PANIC = 6,
} RetrofitStatus;

/**
 * A loaded or synthesized record set together with the default tables.
 */
typedef struct RetrofitDataset RetrofitDataset;

/**
 * An itemised electricity bill; mirrors the JSON `bill` object.
 */
typedef struct RetrofitBill {
  double sek_month;
  double sek_vat;
  double sek_fee;
  double sek_price;
  double sek_tax;
  double sek_network;
  uint32_t months_covered;
  bool separate_supplier_and_grid;
} RetrofitBill;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the most recent failure on this thread, or an empty string.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *retrofit_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *retrofit_version(void);

/**
 * kWh consumed during the billed period and, optionally, scaled to a year.
 *
 * # Safety
 * `bill` must point to a valid `RetrofitBill`; `out_period_kwh` and
 * `out_annual_kwh` must each be null or writable.
 */
enum RetrofitStatus retrofit_bill_to_kwh(const struct RetrofitBill *bill,
                                         double *out_period_kwh,
                                         double *out_annual_kwh);

/**
 * Energy use intensity in kWh per m² and year.
 *
 * # Safety
 * `out_eui` must be writable.
 */
enum RetrofitStatus retrofit_compute_eui(double total_kwh, double area_m2, double *out_eui);

/**
 * Compactly supported cubic weight of a normalized distance.
 */
double retrofit_mls_weight(double s);

/**
 * Write `n` quasi-random points in `[0, 1)^dims`, starting at index `skip`,
 * row-major into `out`, which must hold `out_len >= n * dims` doubles.
 *
 * # Safety
 * `out` must be writable for `out_len` doubles.
 */
enum RetrofitStatus retrofit_sobol_sequence(size_t n,
                                            size_t dims,
                                            uint64_t skip,
                                            double *out,
                                            size_t out_len);

/**
 * Load a store written by `retrofit synth` or `retrofit ingest`.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out_dataset` must be writable.
 */
enum RetrofitStatus retrofit_dataset_load(const char *path, struct RetrofitDataset **out_dataset);

/**
 * Generate `n` synthetic records from `seed` with the default generator settings.
 *
 * # Safety
 * `out_dataset` must be writable.
 */
enum RetrofitStatus retrofit_dataset_synthesize(size_t n,
                                                uint64_t seed,
                                                struct RetrofitDataset **out_dataset);

/**
 * Number of records, or 0 for a null handle.
 *
 * # Safety
 * `dataset` must be null or a live handle.
 */
size_t retrofit_dataset_len(const struct RetrofitDataset *dataset);

/**
 * Release a dataset. Null is ignored.
 *
 * # Safety
 * `dataset` must be null or a handle not yet freed.
 */
void retrofit_dataset_free(struct RetrofitDataset *dataset);

/**
 * Benchmark one house. `request_json` is a benchmark request object; the
 * response (or error body) is written to `out_json`.
 *
 * # Safety
 * `dataset` must be a live handle, `request_json` a NUL-terminated string
 * and `out_json` writable.
 */
enum RetrofitStatus retrofit_benchmark_json(const struct RetrofitDataset *dataset,
                                            const char *request_json,
                                            char **out_json);

/**
 * Run the sensitivity analysis. `config_json` may be null for the defaults;
 * the report list (or error body) is written to `out_json`.
 *
 * # Safety
 * `dataset` must be a live handle, `config_json` null or a NUL-terminated
 * string and `out_json` writable.
 */
enum RetrofitStatus retrofit_sensitivity_json(const struct RetrofitDataset *dataset,
                                              const char *config_json,
                                              char **out_json);

/**
 * Release a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void retrofit_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RETROFIT_H */
