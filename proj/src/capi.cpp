#include "ttcomp.h"

#include <cstring>
#include <new>
#include <string>

#include "evaluate.hpp"
#include "io.hpp"
#include "sgd.hpp"
#include "vdt.hpp"
#include "wopt.hpp"

struct ttc_tensor {
  ttc::DenseTensor t;
};

struct ttc_tt {
  ttc::TtCores g;
};

struct ttc_vdt_plan {
  ttc::VdtPlan plan;
};

struct ttc_result {
  ttc::SolveResult r;
  ttc_tt model;
};

namespace {

thread_local std::string g_last_error;

ttc_status to_status(ttc::Errc code) {
  switch (code) {
    case ttc::Errc::ok: return TTC_OK;
    case ttc::Errc::invalid_argument: return TTC_ERR_INVALID_ARGUMENT;
    case ttc::Errc::parse: return TTC_ERR_PARSE;
    case ttc::Errc::shape_mismatch: return TTC_ERR_SHAPE_MISMATCH;
    case ttc::Errc::diverged: return TTC_ERR_DIVERGED;
    case ttc::Errc::io: return TTC_ERR_IO;
  }
  return TTC_ERR_INTERNAL;
}

ttc_status set_error(ttc_status s, const char* msg) {
  g_last_error = msg;
  return s;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
ttc_status guarded(Fn&& fn) {
  try {
    fn();
    return TTC_OK;
  } catch (const ttc::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TTC_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TTC_ERR_INTERNAL;
  }
}

std::vector<ttc::Index> dims_from(const int64_t* dims, int32_t order) {
  ttc::require(dims != nullptr && order >= 1, ttc::Errc::invalid_argument,
               "dims must be a non-empty array");
  return std::vector<ttc::Index>(dims, dims + order);
}

ttc::SolverConfig config_from(const ttc_solver_options& o) {
  ttc::SolverConfig c;
  if (o.ranks != nullptr) {
    ttc::require(o.rank_count >= 2, ttc::Errc::invalid_argument,
                 "rank chain needs at least 2 entries");
    c.ranks.assign(o.ranks, o.ranks + o.rank_count);
  } else {
    c.uniform_rank = o.uniform_rank;
  }
  c.learning_rate = o.learning_rate;
  c.beta1 = o.beta1;
  c.beta2 = o.beta2;
  c.epsilon = o.epsilon;
  c.adam_bias_correction = o.adam_bias_correction != 0;
  c.tol = o.tol;
  c.max_iters = o.max_iters;
  c.seed = o.seed;
  c.init_scale = o.init_scale;
  c.log_every = o.log_every;
  switch (o.optimizer) {
    case TTC_OPT_ADAM: c.optimizer = ttc::WoptOptimizer::adam; break;
    case TTC_OPT_GD_LINESEARCH:
      c.optimizer = ttc::WoptOptimizer::gd_linesearch;
      break;
    default:
      ttc::fail(ttc::Errc::invalid_argument, "unknown optimizer code");
  }
  ttc::require(c.log_every >= 1, ttc::Errc::invalid_argument,
               "log_every must be >= 1");
  return c;
}

#define TTC_REQUIRE_HANDLE(h)                                            \
  do {                                                                   \
    if ((h) == nullptr)                                                  \
      return set_error(TTC_ERR_INVALID_ARGUMENT, "null handle: " #h);    \
  } while (0)

}  // namespace

extern "C" {

void ttc_solver_options_init(ttc_solver_options* opts, ttc_algorithm alg) {
  if (opts == nullptr) return;
  std::memset(opts, 0, sizeof *opts);
  opts->ranks = nullptr;
  opts->rank_count = 0;
  opts->uniform_rank = 10;
  opts->learning_rate = 1e-3;
  opts->beta1 = 0.9;
  opts->beta2 = 0.999;
  opts->epsilon = 1e-8;
  opts->adam_bias_correction = 0;
  opts->tol = 1e-4;
  opts->max_iters = alg == TTC_ALG_SGD ? 100000 : 500;
  opts->seed = 0;
  opts->init_scale = 0.1;
  opts->log_every = 1000;
  opts->optimizer = TTC_OPT_ADAM;
}

const char* ttc_last_error(void) { return g_last_error.c_str(); }

ttc_status ttc_tensor_create(const int64_t* dims, int32_t order,
                             const double* values, ttc_tensor** out) {
  TTC_REQUIRE_HANDLE(out);
  return guarded([&] {
    auto d = dims_from(dims, order);
    if (values == nullptr) {
      *out = new ttc_tensor{ttc::DenseTensor(std::move(d))};
    } else {
      std::vector<double> v(values, values + ttc::dim_product(d));
      *out = new ttc_tensor{ttc::DenseTensor(std::move(d), std::move(v))};
    }
  });
}

void ttc_tensor_destroy(ttc_tensor* t) { delete t; }

int32_t ttc_tensor_order(const ttc_tensor* t) {
  return t == nullptr ? 0 : static_cast<int32_t>(t->t.order());
}

ttc_status ttc_tensor_dims(const ttc_tensor* t, int64_t* dims_out) {
  TTC_REQUIRE_HANDLE(t);
  TTC_REQUIRE_HANDLE(dims_out);
  for (std::size_t n = 0; n < t->t.dims().size(); ++n)
    dims_out[n] = t->t.dims()[n];
  return TTC_OK;
}

int64_t ttc_tensor_size(const ttc_tensor* t) {
  return t == nullptr ? 0 : t->t.size();
}

const double* ttc_tensor_data(const ttc_tensor* t) {
  return t == nullptr ? nullptr : t->t.data();
}

double* ttc_tensor_data_mut(ttc_tensor* t) {
  return t == nullptr ? nullptr : t->t.data();
}

ttc_status ttc_tensor_load(const char* path, ttc_tensor** out) {
  TTC_REQUIRE_HANDLE(path);
  TTC_REQUIRE_HANDLE(out);
  return guarded([&] { *out = new ttc_tensor{ttc::load_tnsr(path)}; });
}

ttc_status ttc_tensor_save(const ttc_tensor* t, const char* path) {
  TTC_REQUIRE_HANDLE(t);
  TTC_REQUIRE_HANDLE(path);
  return guarded([&] { ttc::save_tnsr(t->t, path); });
}

ttc_status ttc_image_load(const char* path, ttc_tensor** out) {
  TTC_REQUIRE_HANDLE(path);
  TTC_REQUIRE_HANDLE(out);
  return guarded([&] { *out = new ttc_tensor{ttc::load_image(path)}; });
}

ttc_status ttc_image_save(const ttc_tensor* t, const char* path) {
  TTC_REQUIRE_HANDLE(t);
  TTC_REQUIRE_HANDLE(path);
  return guarded([&] { ttc::save_image(t->t, path); });
}

ttc_status ttc_synth_sin(const int64_t* dims, int32_t order,
                         ttc_tensor** out) {
  TTC_REQUIRE_HANDLE(out);
  return guarded([&] {
    *out = new ttc_tensor{ttc::gen_sin_tensor(dims_from(dims, order))};
  });
}

ttc_status ttc_mask_random(const int64_t* dims, int32_t order,
                           double missing_rate, uint64_t seed,
                           ttc_tensor** out) {
  TTC_REQUIRE_HANDLE(out);
  return guarded([&] {
    *out = new ttc_tensor{
        ttc::gen_random_mask(dims_from(dims, order), missing_rate, seed)};
  });
}

ttc_status ttc_normalize_masked(const ttc_tensor* y, const ttc_tensor* mask,
                                ttc_tensor** out, double* lo, double* hi) {
  TTC_REQUIRE_HANDLE(y);
  TTC_REQUIRE_HANDLE(mask);
  TTC_REQUIRE_HANDLE(out);
  return guarded([&] {
    auto res = ttc::normalize_masked(y->t, mask->t);
    *out = new ttc_tensor{std::move(res.tensor)};
    if (lo != nullptr) *lo = res.lo;
    if (hi != nullptr) *hi = res.hi;
  });
}

ttc_status ttc_denormalize(const ttc_tensor* t, double lo, double hi,
                           ttc_tensor** out) {
  TTC_REQUIRE_HANDLE(t);
  TTC_REQUIRE_HANDLE(out);
  return guarded(
      [&] { *out = new ttc_tensor{ttc::denormalize(t->t, lo, hi)}; });
}

ttc_status ttc_compose(const ttc_tensor* y, const ttc_tensor* mask,
                       const ttc_tensor* x, ttc_tensor** out) {
  TTC_REQUIRE_HANDLE(y);
  TTC_REQUIRE_HANDLE(mask);
  TTC_REQUIRE_HANDLE(x);
  TTC_REQUIRE_HANDLE(out);
  return guarded(
      [&] { *out = new ttc_tensor{ttc::compose(y->t, mask->t, x->t)}; });
}

ttc_status ttc_rse(const ttc_tensor* ref, const ttc_tensor* z, double* out) {
  TTC_REQUIRE_HANDLE(ref);
  TTC_REQUIRE_HANDLE(z);
  TTC_REQUIRE_HANDLE(out);
  return guarded([&] { *out = ttc::rse(ref->t, z->t); });
}

ttc_status ttc_psnr(const ttc_tensor* ref, const ttc_tensor* z, double* out) {
  TTC_REQUIRE_HANDLE(ref);
  TTC_REQUIRE_HANDLE(z);
  TTC_REQUIRE_HANDLE(out);
  return guarded([&] { *out = ttc::psnr(ref->t, z->t); });
}

ttc_status ttc_vdt_plan_auto(int64_t u, int64_t v, const int64_t* trailing,
                             int32_t trailing_count, ttc_vdt_plan** out) {
  TTC_REQUIRE_HANDLE(out);
  return guarded([&] {
    std::vector<ttc::Index> tail;
    if (trailing_count > 0) {
      ttc::require(trailing != nullptr, ttc::Errc::invalid_argument,
                   "trailing dims array is null");
      tail.assign(trailing, trailing + trailing_count);
    }
    *out = new ttc_vdt_plan{ttc::VdtPlan::auto_plan(u, v, std::move(tail))};
  });
}

ttc_status ttc_vdt_plan_parse(const char* line, ttc_vdt_plan** out) {
  TTC_REQUIRE_HANDLE(line);
  TTC_REQUIRE_HANDLE(out);
  return guarded([&] { *out = new ttc_vdt_plan{ttc::VdtPlan::parse(line)}; });
}

ttc_status ttc_vdt_plan_format(const ttc_vdt_plan* plan, char* buf,
                               size_t bufsize) {
  TTC_REQUIRE_HANDLE(plan);
  TTC_REQUIRE_HANDLE(buf);
  return guarded([&] {
    const std::string s = plan->plan.to_string();
    ttc::require(s.size() + 1 <= bufsize, ttc::Errc::invalid_argument,
                 "plan buffer too small");
    std::memcpy(buf, s.c_str(), s.size() + 1);
  });
}

void ttc_vdt_plan_destroy(ttc_vdt_plan* plan) { delete plan; }

ttc_status ttc_vdt_apply(const ttc_tensor* t, const ttc_vdt_plan* plan,
                         ttc_tensor** out) {
  TTC_REQUIRE_HANDLE(t);
  TTC_REQUIRE_HANDLE(plan);
  TTC_REQUIRE_HANDLE(out);
  return guarded(
      [&] { *out = new ttc_tensor{ttc::apply_vdt(t->t, plan->plan)}; });
}

ttc_status ttc_vdt_invert(const ttc_tensor* t, const ttc_vdt_plan* plan,
                          ttc_tensor** out) {
  TTC_REQUIRE_HANDLE(t);
  TTC_REQUIRE_HANDLE(plan);
  TTC_REQUIRE_HANDLE(out);
  return guarded(
      [&] { *out = new ttc_tensor{ttc::invert_vdt(t->t, plan->plan)}; });
}

ttc_status ttc_solve(ttc_algorithm alg, const ttc_tensor* y,
                     const ttc_tensor* mask, const ttc_solver_options* opts,
                     ttc_result** out) {
  TTC_REQUIRE_HANDLE(y);
  TTC_REQUIRE_HANDLE(mask);
  TTC_REQUIRE_HANDLE(opts);
  TTC_REQUIRE_HANDLE(out);
  return guarded([&] {
    const ttc::SolverConfig config = config_from(*opts);
    const auto run = [&]() -> ttc::SolveResult {
      switch (alg) {
        case TTC_ALG_WOPT: return ttc::run_wopt(y->t, mask->t, config);
        case TTC_ALG_SGD: return ttc::run_sgd(y->t, mask->t, config);
      }
      ttc::fail(ttc::Errc::invalid_argument, "unknown algorithm code");
    };
    ttc::SolveResult res = run();
    ttc_tt model{res.model};
    *out = new ttc_result{std::move(res), std::move(model)};
  });
}

void ttc_result_destroy(ttc_result* r) { delete r; }

const ttc_tt* ttc_result_model(const ttc_result* r) {
  return r == nullptr ? nullptr : &r->model;
}

int64_t ttc_result_iterations(const ttc_result* r) {
  return r == nullptr ? 0 : r->r.iterations;
}

int64_t ttc_result_log_length(const ttc_result* r) {
  return r == nullptr ? 0 : static_cast<int64_t>(r->r.log.size());
}

ttc_status ttc_result_log_row(const ttc_result* r, int64_t i, int64_t* iter,
                              double* objective, double* rse_observed,
                              double* elapsed_ms) {
  TTC_REQUIRE_HANDLE(r);
  if (i < 0 || i >= static_cast<int64_t>(r->r.log.size()))
    return set_error(TTC_ERR_INVALID_ARGUMENT, "log row index out of range");
  const auto& row = r->r.log[static_cast<std::size_t>(i)];
  if (iter != nullptr) *iter = row.iter;
  if (objective != nullptr) *objective = row.objective;
  if (rse_observed != nullptr) *rse_observed = row.rse_observed;
  if (elapsed_ms != nullptr) *elapsed_ms = row.elapsed_ms;
  return TTC_OK;
}

ttc_status ttc_result_write_csv(const ttc_result* r, const char* path,
                                int32_t include_timing) {
  TTC_REQUIRE_HANDLE(r);
  TTC_REQUIRE_HANDLE(path);
  return guarded(
      [&] { ttc::write_csv_log(r->r.log, path, include_timing != 0); });
}

void ttc_tt_destroy(ttc_tt* g) { delete g; }

int32_t ttc_tt_order(const ttc_tt* g) {
  return g == nullptr ? 0 : static_cast<int32_t>(g->g.order());
}

ttc_status ttc_tt_ranks(const ttc_tt* g, int64_t* ranks_out) {
  TTC_REQUIRE_HANDLE(g);
  TTC_REQUIRE_HANDLE(ranks_out);
  for (std::size_t n = 0; n < g->g.ranks().size(); ++n)
    ranks_out[n] = g->g.ranks()[n];
  return TTC_OK;
}

ttc_status ttc_tt_reconstruct(const ttc_tt* g, ttc_tensor** out) {
  TTC_REQUIRE_HANDLE(g);
  TTC_REQUIRE_HANDLE(out);
  return guarded(
      [&] { *out = new ttc_tensor{ttc::full_reconstruct(g->g)}; });
}

ttc_status ttc_tt_entry(const ttc_tt* g, const int64_t* idx, double* out) {
  TTC_REQUIRE_HANDLE(g);
  TTC_REQUIRE_HANDLE(idx);
  TTC_REQUIRE_HANDLE(out);
  return guarded([&] {
    std::vector<ttc::Index> i(idx, idx + g->g.order());
    *out = ttc::eval_entry(g->g, i);
  });
}

ttc_status ttc_tt_save(const ttc_tt* g, const char* path) {
  TTC_REQUIRE_HANDLE(g);
  TTC_REQUIRE_HANDLE(path);
  return guarded([&] { ttc::save_tt(g->g, path); });
}

ttc_status ttc_tt_load(const char* path, ttc_tt** out) {
  TTC_REQUIRE_HANDLE(path);
  TTC_REQUIRE_HANDLE(out);
  return guarded([&] { *out = new ttc_tt{ttc::load_tt(path)}; });
}

}  // extern "C"
