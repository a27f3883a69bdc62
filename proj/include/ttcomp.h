/* ttcomp -- tensor-train completion library, C interface.
 *
 * All functions returning ttc_status report success as TTC_OK; on failure a
 * thread-local message is available via ttc_last_error().  Objects returned
 * through out-parameters are owned by the caller and released with the
 * matching *_destroy function.  Tensors hold 64-bit floats in
 * first-index-fastest (column-major) order.
 */
#ifndef TTCOMP_H
#define TTCOMP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define TTC_API __declspec(dllexport)
#else
#define TTC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ttc_status {
  TTC_OK = 0,
  TTC_ERR_INVALID_ARGUMENT = 1,
  TTC_ERR_PARSE = 2,
  TTC_ERR_SHAPE_MISMATCH = 3,
  TTC_ERR_DIVERGED = 4,
  TTC_ERR_IO = 5,
  TTC_ERR_INTERNAL = 6
} ttc_status;

typedef enum ttc_algorithm {
  TTC_ALG_WOPT = 0, /* full weighted gradient descent */
  TTC_ALG_SGD = 1   /* batch-one stochastic descent */
} ttc_algorithm;

typedef enum ttc_optimizer {
  TTC_OPT_ADAM = 0,
  TTC_OPT_GD_LINESEARCH = 1
} ttc_optimizer;

typedef struct ttc_tensor ttc_tensor;     /* dense N-way array */
typedef struct ttc_tt ttc_tt;             /* tensor-train core chain */
typedef struct ttc_vdt_plan ttc_vdt_plan; /* visual-data tensorization plan */
typedef struct ttc_result ttc_result;     /* solver output: model + log */

typedef struct ttc_solver_options {
  /* Full rank chain R_0..R_N (rank_count = N+1), or NULL to expand
   * uniform_rank to (1, r, ..., r, 1). */
  const int64_t* ranks;
  int32_t rank_count;
  int64_t uniform_rank;

  double learning_rate;
  double beta1;
  double beta2;
  double epsilon;
  int32_t adam_bias_correction; /* 0/1; the printed rule has none */

  double tol;
  int64_t max_iters;
  uint64_t seed;
  double init_scale;
  int64_t log_every;  /* SGD log cadence; WOPT logs every iteration */
  int32_t optimizer;  /* ttc_optimizer; WOPT only */
} ttc_solver_options;

/* Fill defaults: tol 1e-4, lr 1e-3, betas 0.9/0.999, eps 1e-8, init 0.1,
 * uniform rank 10, and per-algorithm max_iters (500 WOPT, 100000 SGD). */
TTC_API void ttc_solver_options_init(ttc_solver_options* opts,
                                     ttc_algorithm alg);

/* Message describing the most recent failure on this thread. */
TTC_API const char* ttc_last_error(void);

/* ---- dense tensors ---- */

TTC_API ttc_status ttc_tensor_create(const int64_t* dims, int32_t order,
                                     const double* values, /* NULL -> zeros */
                                     ttc_tensor** out);
TTC_API void ttc_tensor_destroy(ttc_tensor* t);
TTC_API int32_t ttc_tensor_order(const ttc_tensor* t);
TTC_API ttc_status ttc_tensor_dims(const ttc_tensor* t, int64_t* dims_out);
TTC_API int64_t ttc_tensor_size(const ttc_tensor* t);
TTC_API const double* ttc_tensor_data(const ttc_tensor* t);
TTC_API double* ttc_tensor_data_mut(ttc_tensor* t);

/* TNSR v1 binary container (atomic writes). */
TTC_API ttc_status ttc_tensor_load(const char* path, ttc_tensor** out);
TTC_API ttc_status ttc_tensor_save(const ttc_tensor* t, const char* path);

/* Binary PPM/PGM <-> H x W x 3 / H x W tensor with values in [0,1]. */
TTC_API ttc_status ttc_image_load(const char* path, ttc_tensor** out);
TTC_API ttc_status ttc_image_save(const ttc_tensor* t, const char* path);

/* ---- generators ---- */

/* Oscillating-function tensor: f(x) = sin(x/4)cos(x^2) sampled uniformly on
 * [0,1] and reshaped to dims. */
TTC_API ttc_status ttc_synth_sin(const int64_t* dims, int32_t order,
                                 ttc_tensor** out);

/* Binary mask with exactly round((1-missing_rate)*total) ones, uniform
 * without replacement, deterministic in seed. */
TTC_API ttc_status ttc_mask_random(const int64_t* dims, int32_t order,
                                   double missing_rate, uint64_t seed,
                                   ttc_tensor** out);

/* ---- completion pipeline pieces ---- */

/* Affine map of y onto [0,1] using the value range over mask==1 entries;
 * *lo/*hi receive the range for the inverse map. */
TTC_API ttc_status ttc_normalize_masked(const ttc_tensor* y,
                                        const ttc_tensor* mask,
                                        ttc_tensor** out, double* lo,
                                        double* hi);
TTC_API ttc_status ttc_denormalize(const ttc_tensor* t, double lo, double hi,
                                   ttc_tensor** out);

/* Z = (1-W)*X + W*Y. */
TTC_API ttc_status ttc_compose(const ttc_tensor* y, const ttc_tensor* mask,
                               const ttc_tensor* x, ttc_tensor** out);

/* ||ref - z||_F / ||ref||_F. */
TTC_API ttc_status ttc_rse(const ttc_tensor* ref, const ttc_tensor* z,
                           double* out);
/* 10*log10(255^2/MSE) after rescaling both tensors by the affine map taking
 * ref's range onto [0,255]; +infinity when z == ref. */
TTC_API ttc_status ttc_psnr(const ttc_tensor* ref, const ttc_tensor* z,
                            double* out);

/* ---- visual-data tensorization ---- */

TTC_API ttc_status ttc_vdt_plan_auto(int64_t u, int64_t v,
                                     const int64_t* trailing,
                                     int32_t trailing_count,
                                     ttc_vdt_plan** out);
/* Parses "u=2,2,2 v=2,2,2 trailing=3" (trailing optional). */
TTC_API ttc_status ttc_vdt_plan_parse(const char* line, ttc_vdt_plan** out);
TTC_API ttc_status ttc_vdt_plan_format(const ttc_vdt_plan* plan, char* buf,
                                       size_t bufsize);
TTC_API void ttc_vdt_plan_destroy(ttc_vdt_plan* plan);

TTC_API ttc_status ttc_vdt_apply(const ttc_tensor* t, const ttc_vdt_plan* plan,
                                 ttc_tensor** out);
TTC_API ttc_status ttc_vdt_invert(const ttc_tensor* t,
                                  const ttc_vdt_plan* plan, ttc_tensor** out);

/* ---- solvers ---- */

/* Fit TT cores to the observed entries of y (mask==1).  Returns
 * TTC_ERR_DIVERGED when the objective turns non-finite or exceeds 1e6x its
 * initial value. */
TTC_API ttc_status ttc_solve(ttc_algorithm alg, const ttc_tensor* y,
                             const ttc_tensor* mask,
                             const ttc_solver_options* opts, ttc_result** out);

TTC_API void ttc_result_destroy(ttc_result* r);
TTC_API const ttc_tt* ttc_result_model(const ttc_result* r);
TTC_API int64_t ttc_result_iterations(const ttc_result* r);
TTC_API int64_t ttc_result_log_length(const ttc_result* r);
TTC_API ttc_status ttc_result_log_row(const ttc_result* r, int64_t i,
                                      int64_t* iter, double* objective,
                                      double* rse_observed,
                                      double* elapsed_ms);
/* CSV with header "iter,objective,rse_observed,elapsed_ms"; pass
 * include_timing=0 to zero the elapsed column for reproducible bytes. */
TTC_API ttc_status ttc_result_write_csv(const ttc_result* r, const char* path,
                                        int32_t include_timing);

/* ---- TT models ---- */

TTC_API void ttc_tt_destroy(ttc_tt* g);
TTC_API int32_t ttc_tt_order(const ttc_tt* g);
TTC_API ttc_status ttc_tt_ranks(const ttc_tt* g, int64_t* ranks_out /*N+1*/);
TTC_API ttc_status ttc_tt_reconstruct(const ttc_tt* g, ttc_tensor** out);
TTC_API ttc_status ttc_tt_entry(const ttc_tt* g, const int64_t* idx,
                                double* out);
/* Manifest plus one TNSR file per core, "<manifest>.core<k>.tnsr". */
TTC_API ttc_status ttc_tt_save(const ttc_tt* g, const char* path);
TTC_API ttc_status ttc_tt_load(const char* path, ttc_tt** out);

#ifdef __cplusplus
}
#endif

#endif /* TTCOMP_H */
