/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef QUELAB_H
#define QUELAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QuelabStatus {
  QUELAB_STATUS_OK = 0,
  QUELAB_STATUS_DOMAIN = 1,
  QUELAB_STATUS_USAGE = 2,
  QUELAB_STATUS_EVALUATION = 3,
  QUELAB_STATUS_CONFIG = 4,
  QUELAB_STATUS_NULL_POINTER = 5,
  QUELAB_STATUS_INVALID_UTF8 = 6,
  QUELAB_STATUS_PANIC = 7,
} QuelabStatus;

/*
 Eisenstein series on the modular surface or a Bianchi orbifold.
 */
typedef struct QuelabEvaluator QuelabEvaluator;

/*
 A validated experiment configuration.
 */
typedef struct QuelabExperiment QuelabExperiment;

typedef struct QuelabComplex {
  double re;
  double im;
} QuelabComplex;

typedef struct QuelabMassResult {
  double raw_mass;
  double normalized_mass;
  double main_term;
  double deviation;
} QuelabMassResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Copies the last error message of this thread into `buf` (NUL-terminated,
 truncated to `len`). Returns the full message length, 0 if none.

 # Safety
 `buf` must be null or point to `len` writable bytes.
 */
size_t quelab_last_error(char *buf, size_t len);

/*
 # Safety
 `out_eval` must be a valid pointer.
 */
enum QuelabStatus quelab_evaluator_new_modular(struct QuelabEvaluator **out_eval);

/*
 Evaluator over ℚ(√d) for one of the nine class-number-one d.

 # Safety
 `out_eval` must be a valid pointer.
 */
enum QuelabStatus quelab_evaluator_new_bianchi(int64_t d, struct QuelabEvaluator **out_eval);

/*
 # Safety
 `ev` must be null or a handle from a `quelab_evaluator_new_*` call, freed once.
 */
void quelab_evaluator_free(struct QuelabEvaluator *ev);

/*
 2 or 3; 0 for a null handle.

 # Safety
 `ev` must be null or a live handle.
 */
size_t quelab_evaluator_dimension(const struct QuelabEvaluator *ev);

/*
 E(x + iy, s) on the modular surface.

 # Safety
 `ev` must be a live handle and `result` a valid pointer.
 */
enum QuelabStatus quelab_eval_h2(const struct QuelabEvaluator *ev,
                                 double x,
                                 double y,
                                 struct QuelabComplex s,
                                 struct QuelabComplex *result);

/*
 E(z + rj, s) on a Bianchi orbifold.

 # Safety
 `ev` must be a live handle and `result` a valid pointer.
 */
enum QuelabStatus quelab_eval_h3(const struct QuelabEvaluator *ev,
                                 struct QuelabComplex z,
                                 double r,
                                 struct QuelabComplex s,
                                 struct QuelabComplex *result);

/*
 Ball mass of |E(·, s_t)|² by tensor Gauss quadrature with `order` nodes
 per coordinate. `center` holds (x, y) on ℍ² or (Re z, Im z, r) on ℍ³.

 # Safety
 `ev` must be a live handle, `center` must point to `center_len` doubles
 and `result` must be valid.
 */
enum QuelabStatus quelab_ball_mass(const struct QuelabEvaluator *ev,
                                   const double *center,
                                   size_t center_len,
                                   double radius,
                                   double t,
                                   size_t order,
                                   struct QuelabMassResult *result);

/*
 Selberg transform h_{R,n}(t) of the normalised ball kernel.

 # Safety
 `result` must be a valid pointer.
 */
enum QuelabStatus quelab_h_char(size_t n, double radius, double t, double *result);

/*
 Cauchy–Schwarz lower bound at the Heegner point of the form (a, b, c).

 # Safety
 `result` must be a valid pointer.
 */
enum QuelabStatus quelab_lower_bound_avg(int64_t a,
                                         int64_t b,
                                         int64_t c,
                                         double radius,
                                         double t,
                                         double *result);

/*
 # Safety
 `result` must be a valid pointer.
 */
enum QuelabStatus quelab_riemann_zeta(struct QuelabComplex s, struct QuelabComplex *result);

/*
 # Safety
 `result` must be a valid pointer.
 */
enum QuelabStatus quelab_dedekind_zeta(int64_t d,
                                       struct QuelabComplex s,
                                       struct QuelabComplex *result);

/*
 Parses and validates an experiment config given as TOML text.

 # Safety
 `text` must be a NUL-terminated string and `out_exp` a valid pointer.
 */
enum QuelabStatus quelab_experiment_from_toml(const char *text, struct QuelabExperiment **out_exp);

/*
 # Safety
 `exp` must be null or a handle from [`quelab_experiment_from_toml`], freed once.
 */
void quelab_experiment_free(struct QuelabExperiment *exp);

/*
 Runs the experiment and returns the CSV table as a string owned by the
 library (release with [`quelab_string_free`]). `threads` = 0 uses the
 default pool. Row failures appear in the table's error column.

 # Safety
 `exp` must be a live handle and `csv` a valid pointer.
 */
enum QuelabStatus quelab_experiment_run(const struct QuelabExperiment *exp,
                                        size_t threads,
                                        char **csv);

/*
 # Safety
 `s` must be null or a string returned by this library, freed once.
 */
void quelab_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUELAB_H */
