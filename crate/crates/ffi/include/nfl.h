#ifndef NFL_H
#define NFL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum NflStatus {
  NFL_STATUS_OK = 0,
  NFL_STATUS_NULL_POINTER = 1,
  NFL_STATUS_SHAPE = 2,
  NFL_STATUS_INDEX = 3,
  NFL_STATUS_VALIDATION = 4,
  NFL_STATUS_RESOURCE_LIMIT = 5,
  NFL_STATUS_INTERNAL = 6,
  NFL_STATUS_PANIC = 7,
  NFL_STATUS_BUFFER_TOO_SMALL = 8,
} NflStatus;

typedef enum NflCostModel {
  NFL_COST_MODEL_TRANSPOSITIONS = 0,
  NFL_COST_MODEL_GATES = 1,
} NflCostModel;

typedef enum NflAggregator {
  NFL_AGGREGATOR_AVERAGE = 0,
  NFL_AGGREGATOR_MAX = 1,
  NFL_AGGREGATOR_BUDGET = 2,
} NflAggregator;

typedef enum NflHaarMethod {
  NFL_HAAR_METHOD_QR = 0,
  NFL_HAAR_METHOD_RAYLEIGH = 1,
} NflHaarMethod;

// Compiled `{X, Toffoli}` circuit.
typedef struct NflGateList NflGateList;

// Permutations grouped by prepared distribution.
typedef struct NflPartition NflPartition;

// Register widths.
typedef struct NflShape NflShape;

// Resource state (squared magnitudes).
typedef struct NflState NflState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. The pointer is
// valid until the next failing call on the same thread.
const char *nfl_last_error(void);

// Library version as a static string.
const char *nfl_version(void);

// # Safety
// `s` must come from this library and not have been freed.
void nfl_string_free(char *s);

// # Safety
// `out` must be writable.
enum NflStatus nfl_shape_new(uint32_t n0,
                             uint32_t nplus,
                             uint32_t nq,
                             uint32_t ny,
                             struct NflShape **out);

// # Safety
// `shape` must be null or a live handle.
void nfl_shape_free(struct NflShape *shape);

// `N = 2^n`.
//
// # Safety
// `shape` must be a live handle and `out` writable.
enum NflStatus nfl_shape_size(const struct NflShape *shape, uintptr_t *out);

// Generic number of distribution classes `M*` for the shape.
//
// # Safety
// `shape` must be a live handle and `out` writable.
enum NflStatus nfl_count_classes(const struct NflShape *shape, uintptr_t *out);

// `C(2Ñ - 1, Ñ - 1)` with `Ñ = 2^n_tilde`, as a decimal string to be freed
// with [`nfl_string_free`].
//
// # Safety
// `out` must be writable.
enum NflStatus nfl_stars_and_bars_count(uint32_t n_tilde, char **out);

// State from `len` squared magnitudes (float backend).
//
// # Safety
// `masses` must point to `len` doubles and `out` be writable.
enum NflStatus nfl_state_from_f64(const double *masses, uintptr_t len, struct NflState **out);

// Exact state from `len` fractions `num[i] / den[i]`.
//
// # Safety
// `num` and `den` must each point to `len` integers and `out` be writable.
enum NflStatus nfl_state_from_ratios(const int64_t *num,
                                     const int64_t *den,
                                     uintptr_t len,
                                     struct NflState **out);

// Haar-random `nq`-qubit state; `method` is an [`NflHaarMethod`] value.
//
// # Safety
// `out` must be writable.
enum NflStatus nfl_state_haar(uint32_t nq, uint64_t seed, uint32_t method, struct NflState **out);

// # Safety
// `state` must be null or a live handle.
void nfl_state_free(struct NflState *state);

// # Safety
// `state` must be a live handle and `out` writable.
enum NflStatus nfl_state_len(const struct NflState *state, uintptr_t *out);

// Copies the squared magnitudes (as doubles) into `buf`.
//
// # Safety
// `state` must be a live handle and `buf` hold `len` doubles.
enum NflStatus nfl_state_masses(const struct NflState *state, double *buf, uintptr_t len);

// # Safety
// `state` must be a live handle and `out` writable.
enum NflStatus nfl_state_is_distinct(const struct NflState *state, double tolerance, bool *out);

// Strong distinctness at `shape`: fast path first, then the exhaustive check.
//
// # Safety
// Handles must be live and `out` writable.
enum NflStatus nfl_state_is_strongly_distinct(const struct NflState *state,
                                              const struct NflShape *shape,
                                              double tolerance,
                                              bool *out);

// Output distribution of the permutation `image` (where index `k` goes to
// `image[k]`) applied to the input built from `state`. Writes `2^ny`
// doubles to `buf`.
//
// # Safety
// Handles must be live, `image` hold `len` entries and `buf` `buf_len` doubles.
enum NflStatus nfl_output_distribution(const struct NflShape *shape,
                                       const struct NflState *state,
                                       const uintptr_t *image,
                                       uintptr_t len,
                                       double *buf,
                                       uintptr_t buf_len);

// Groups permutations by prepared distribution. `samples == 0` scans all
// `N!` permutations; otherwise `samples` seeded random ones.
//
// # Safety
// Handles must be live and `out` writable.
enum NflStatus nfl_partition_new(const struct NflState *state,
                                 const struct NflShape *shape,
                                 uintptr_t samples,
                                 uint64_t seed,
                                 double tolerance,
                                 struct NflPartition **out);

// # Safety
// `partition` must be null or a live handle.
void nfl_partition_free(struct NflPartition *partition);

// Number of distinct distributions `M`.
//
// # Safety
// `partition` must be a live handle and `out` writable.
enum NflStatus nfl_partition_class_count(const struct NflPartition *partition, uintptr_t *out);

// Whether two partitions group the same permutations identically.
//
// # Safety
// Handles must be live and `out` writable.
enum NflStatus nfl_partition_same(const struct NflPartition *a,
                                  const struct NflPartition *b,
                                  bool *out);

// Primary entry of the aggregate cost (cheapest member per class, then the
// aggregator). `model` is an [`NflCostModel`] and `aggregator` an
// [`NflAggregator`] value; `budget` is only read by the budget aggregator.
//
// # Safety
// `partition` must be a live handle and `out` writable.
enum NflStatus nfl_partition_aggregate_cost(const struct NflPartition *partition,
                                            uint32_t model,
                                            uint32_t aggregator,
                                            double budget,
                                            double *out);

// Compiles the permutation `image` of size `2^n` into `{X, Toffoli}` gates
// over `n` register lines plus one ancilla (line `n`).
//
// # Safety
// `image` must hold `len` entries and `out` be writable.
enum NflStatus nfl_compile_permutation(const uintptr_t *image,
                                       uintptr_t len,
                                       struct NflGateList **out);

// # Safety
// `gates` must be null or a live handle.
void nfl_gate_list_free(struct NflGateList *gates);

// # Safety
// `gates` must be a live handle and `out` writable.
enum NflStatus nfl_gate_list_len(const struct NflGateList *gates, uintptr_t *out);

// One gate per line (`X t` or `CCX c1 c2 t`); free with [`nfl_string_free`].
//
// # Safety
// `gates` must be a live handle and `out` writable.
enum NflStatus nfl_gate_list_to_text(const struct NflGateList *gates, char **out);

// Runs the circuit on basis state `input` (register bits plus ancilla bit
// `n`) and writes the resulting basis state.
//
// # Safety
// `gates` must be a live handle and `out` writable.
enum NflStatus nfl_gate_list_simulate(const struct NflGateList *gates,
                                      uint64_t input,
                                      uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* NFL_H */
