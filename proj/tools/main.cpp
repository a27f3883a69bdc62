// ttcomp command-line front end.  Talks to the library exclusively through
// the C API in ttcomp.h.
//
// Exit codes: 0 success, 2 argument/parse/io errors, 3 shape mismatches,
// 4 solver divergence, 1 anything else.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ttcomp.h"

namespace {

int exit_code_for(ttc_status s) {
  switch (s) {
    case TTC_OK: return 0;
    case TTC_ERR_INVALID_ARGUMENT:
    case TTC_ERR_PARSE:
    case TTC_ERR_IO: return 2;
    case TTC_ERR_SHAPE_MISMATCH: return 3;
    case TTC_ERR_DIVERGED: return 4;
    case TTC_ERR_INTERNAL: break;
  }
  return 1;
}

// On failure prints the library's message and exits with the mapped code.
void check(ttc_status s, const char* what) {
  if (s == TTC_OK) return;
  std::fprintf(stderr, "ttcomp: %s: %s\n", what, ttc_last_error());
  std::exit(exit_code_for(s));
}

struct TensorDeleter {
  void operator()(ttc_tensor* t) const { ttc_tensor_destroy(t); }
};
struct PlanDeleter {
  void operator()(ttc_vdt_plan* p) const { ttc_vdt_plan_destroy(p); }
};
struct ResultDeleter {
  void operator()(ttc_result* r) const { ttc_result_destroy(r); }
};
using TensorPtr = std::unique_ptr<ttc_tensor, TensorDeleter>;
using PlanPtr = std::unique_ptr<ttc_vdt_plan, PlanDeleter>;
using ResultPtr = std::unique_ptr<ttc_result, ResultDeleter>;

std::vector<int64_t> parse_dims(const std::string& text) {
  std::vector<int64_t> dims;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &pos);
    } catch (...) {
      pos = 0;
    }
    if (pos != item.size() || v < 1) {
      std::fprintf(stderr, "ttcomp: invalid extent '%s' in dims '%s'\n",
                   item.c_str(), text.c_str());
      std::exit(2);
    }
    dims.push_back(v);
  }
  if (dims.empty()) {
    std::fprintf(stderr, "ttcomp: empty dims list\n");
    std::exit(2);
  }
  return dims;
}

TensorPtr load_tensor(const std::string& path) {
  ttc_tensor* t = nullptr;
  check(ttc_tensor_load(path.c_str(), &t), path.c_str());
  return TensorPtr(t);
}

// "auto" derives an all-2 plan from the tensor's first two modes; anything
// else is parsed as an explicit "u=... v=... trailing=..." line.
PlanPtr make_plan(const std::string& plan_text, const ttc_tensor* data) {
  ttc_vdt_plan* plan = nullptr;
  if (plan_text == "auto") {
    const int32_t order = ttc_tensor_order(data);
    if (order < 2) {
      std::fprintf(stderr, "ttcomp: auto VDT plan needs at least 2 modes\n");
      std::exit(2);
    }
    std::vector<int64_t> dims(order);
    check(ttc_tensor_dims(data, dims.data()), "tensor dims");
    check(ttc_vdt_plan_auto(dims[0], dims[1], dims.data() + 2, order - 2,
                            &plan),
          "vdt auto plan");
  } else {
    check(ttc_vdt_plan_parse(plan_text.c_str(), &plan), "vdt plan");
  }
  return PlanPtr(plan);
}

struct SolveFlags {
  std::string algorithm = "wopt";
  std::string optimizer = "adam";
  std::vector<int64_t> rank_chain;
  int64_t rank = 10;
  int64_t max_iters = -1;  // -1: per-algorithm default
  double tol = 1e-4;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t seed = 0;
  double init_scale = 0.1;
  int64_t log_every = 1000;
  bool bias_correction = false;
};

void add_solver_flags(CLI::App* cmd, SolveFlags& f) {
  cmd->add_option("-a,--algorithm", f.algorithm, "wopt or sgd")
      ->check(CLI::IsMember({"wopt", "sgd"}));
  cmd->add_option("--rank", f.rank, "uniform TT-rank");
  cmd->add_option("--ranks", f.rank_chain,
                  "full TT-rank chain R0,...,RN (overrides --rank)")
      ->delimiter(',');
  cmd->add_option("--max-iters", f.max_iters, "iteration cap");
  cmd->add_option("--tol", f.tol, "|f_t - f_{t-1}| stopping threshold")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--lr", f.lr, "learning rate");
  cmd->add_option("--beta1", f.beta1, "Adam first-moment decay");
  cmd->add_option("--beta2", f.beta2, "Adam second-moment decay");
  cmd->add_option("--eps", f.eps, "Adam denominator epsilon");
  cmd->add_option("--seed", f.seed, "RNG seed (init and sampling)");
  cmd->add_option("--init-scale", f.init_scale, "core init std deviation");
  cmd->add_option("--log-every", f.log_every, "sgd: log cadence in iterations");
  cmd->add_option("--optimizer", f.optimizer, "wopt update rule")
      ->check(CLI::IsMember({"adam", "gd"}));
  cmd->add_flag("--bias-correction", f.bias_correction,
                "enable Adam bias correction");
}

ttc_solver_options options_from(const SolveFlags& f, ttc_algorithm alg) {
  ttc_solver_options o;
  ttc_solver_options_init(&o, alg);
  if (!f.rank_chain.empty()) {
    o.ranks = f.rank_chain.data();
    o.rank_count = static_cast<int32_t>(f.rank_chain.size());
  } else {
    o.uniform_rank = f.rank;
  }
  if (f.max_iters >= 0) o.max_iters = f.max_iters;
  o.tol = f.tol;
  o.learning_rate = f.lr;
  o.beta1 = f.beta1;
  o.beta2 = f.beta2;
  o.epsilon = f.eps;
  o.seed = f.seed;
  o.init_scale = f.init_scale;
  o.log_every = f.log_every;
  o.optimizer = f.optimizer == "gd" ? TTC_OPT_GD_LINESEARCH : TTC_OPT_ADAM;
  o.adam_bias_correction = f.bias_correction ? 1 : 0;
  return o;
}

std::string default_log_path(const std::string& output) {
  const auto dot = output.rfind('.');
  return (dot == std::string::npos ? output : output.substr(0, dot)) + ".csv";
}

int run_complete(const std::string& input, const std::string& mask_path,
                 const std::string& output, std::string log_path,
                 const std::string& model_path, const std::string& vdt_plan_text,
                 const SolveFlags& flags, bool no_normalize, bool no_timing) {
  const ttc_algorithm alg =
      flags.algorithm == "sgd" ? TTC_ALG_SGD : TTC_ALG_WOPT;
  TensorPtr y = load_tensor(input);
  TensorPtr w = load_tensor(mask_path);

  // Fit on observed values affinely mapped to [0,1]; the reconstruction is
  // mapped back before composing the completed tensor.
  double lo = 0.0, hi = 1.0;
  TensorPtr normalized;
  const ttc_tensor* fit_input = y.get();
  if (!no_normalize) {
    ttc_tensor* t = nullptr;
    check(ttc_normalize_masked(y.get(), w.get(), &t, &lo, &hi), "normalize");
    normalized.reset(t);
    fit_input = t;
  }

  PlanPtr plan;
  TensorPtr yt, wt;
  const ttc_tensor* solve_y = fit_input;
  const ttc_tensor* solve_w = w.get();
  if (!vdt_plan_text.empty()) {
    plan = make_plan(vdt_plan_text, y.get());
    ttc_tensor* a = nullptr;
    check(ttc_vdt_apply(fit_input, plan.get(), &a), "vdt apply");
    yt.reset(a);
    ttc_tensor* b = nullptr;
    check(ttc_vdt_apply(w.get(), plan.get(), &b), "vdt apply (mask)");
    wt.reset(b);
    solve_y = yt.get();
    solve_w = wt.get();
  }

  const ttc_solver_options opts = options_from(flags, alg);
  ttc_result* res_raw = nullptr;
  check(ttc_solve(alg, solve_y, solve_w, &opts, &res_raw), "solve");
  ResultPtr res(res_raw);

  ttc_tensor* x_raw = nullptr;
  check(ttc_tt_reconstruct(ttc_result_model(res.get()), &x_raw), "reconstruct");
  TensorPtr x(x_raw);
  if (plan) {
    ttc_tensor* xi = nullptr;
    check(ttc_vdt_invert(x.get(), plan.get(), &xi), "vdt invert");
    x.reset(xi);
  }
  if (!no_normalize) {
    ttc_tensor* xd = nullptr;
    check(ttc_denormalize(x.get(), lo, hi, &xd), "denormalize");
    x.reset(xd);
  }

  ttc_tensor* z_raw = nullptr;
  check(ttc_compose(y.get(), w.get(), x.get(), &z_raw), "compose");
  TensorPtr z(z_raw);
  check(ttc_tensor_save(z.get(), output.c_str()), output.c_str());

  if (log_path.empty()) log_path = default_log_path(output);
  check(ttc_result_write_csv(res.get(), log_path.c_str(), no_timing ? 0 : 1),
        log_path.c_str());
  if (!model_path.empty())
    check(ttc_tt_save(ttc_result_model(res.get()), model_path.c_str()),
          model_path.c_str());
  return 0;
}

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ttcomp: tensor-train completion toolkit"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand(
      "synth", "write the oscillating-function test tensor as TNSR");
  std::string synth_dims, synth_out;
  synth->add_option("--dims", synth_dims, "comma-separated extents")
      ->required();
  synth->add_option("-o,--output", synth_out, "output .tnsr path")->required();

  // mask
  auto* mask = app.add_subcommand("mask", "write a random binary mask as TNSR");
  std::string mask_dims, mask_out;
  double missing_rate = 0.5;
  std::uint64_t mask_seed = 0;
  mask->add_option("--dims", mask_dims, "comma-separated extents")->required();
  mask->add_option("--missing-rate", missing_rate, "fraction of missing entries")
      ->required();
  mask->add_option("--seed", mask_seed, "RNG seed");
  mask->add_option("-o,--output", mask_out, "output .tnsr path")->required();

  // complete
  auto* complete = app.add_subcommand(
      "complete", "fit TT cores to observed entries and fill the rest");
  std::string c_input, c_mask, c_output, c_log, c_model, c_vdt;
  bool c_no_normalize = false, c_no_timing = false;
  SolveFlags flags;
  complete->add_option("-i,--input", c_input, "data .tnsr")->required();
  complete->add_option("-m,--mask", c_mask, "mask .tnsr (1=observed)")
      ->required();
  complete->add_option("-o,--output", c_output, "completed .tnsr")->required();
  complete->add_option("--log", c_log, "convergence CSV (default: output.csv)");
  complete->add_option("--save-model", c_model, "TT container manifest path");
  complete->add_option("--vdt", c_vdt, "VDT plan: 'auto' or 'u=.. v=.. trailing=..'");
  complete->add_flag("--no-normalize", c_no_normalize,
                     "fit raw values instead of [0,1]-normalized");
  complete->add_flag("--no-timing", c_no_timing,
                     "write 0 in the CSV elapsed_ms column");
  add_solver_flags(complete, flags);

  // eval
  auto* eval = app.add_subcommand("eval", "print rse/psnr of a completion");
  std::string e_truth, e_completed;
  eval->add_option("-t,--truth", e_truth, "reference .tnsr")->required();
  eval->add_option("-c,--completed", e_completed, "completed .tnsr")
      ->required();

  // vdt
  auto* vdt = app.add_subcommand(
      "vdt", "apply or invert the visual-data tensorization");
  std::string v_input, v_output, v_plan;
  bool v_invert = false;
  vdt->add_option("-i,--input", v_input, "input .tnsr")->required();
  vdt->add_option("-o,--output", v_output, "output .tnsr")->required();
  vdt->add_option("--plan", v_plan, "'auto' or 'u=.. v=.. trailing=..'")
      ->required();
  vdt->add_flag("--invert", v_invert, "apply the inverse transform");

  // img
  auto* img = app.add_subcommand(
      "img", "convert between PPM/PGM images and TNSR tensors");
  std::string i_input, i_output;
  img->add_option("-i,--input", i_input, "input .ppm/.pgm or .tnsr")
      ->required();
  img->add_option("-o,--output", i_output, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (synth->parsed()) {
    const auto dims = parse_dims(synth_dims);
    ttc_tensor* t = nullptr;
    check(ttc_synth_sin(dims.data(), static_cast<int32_t>(dims.size()), &t),
          "synth");
    TensorPtr tp(t);
    check(ttc_tensor_save(t, synth_out.c_str()), synth_out.c_str());
    return 0;
  }

  if (mask->parsed()) {
    const auto dims = parse_dims(mask_dims);
    ttc_tensor* t = nullptr;
    check(ttc_mask_random(dims.data(), static_cast<int32_t>(dims.size()),
                          missing_rate, mask_seed, &t),
          "mask");
    TensorPtr tp(t);
    check(ttc_tensor_save(t, mask_out.c_str()), mask_out.c_str());
    return 0;
  }

  if (complete->parsed())
    return run_complete(c_input, c_mask, c_output, c_log, c_model, c_vdt,
                        flags, c_no_normalize, c_no_timing);

  if (eval->parsed()) {
    TensorPtr truth = load_tensor(e_truth);
    TensorPtr completed = load_tensor(e_completed);
    double rse_value = 0.0, psnr_value = 0.0;
    check(ttc_rse(truth.get(), completed.get(), &rse_value), "rse");
    check(ttc_psnr(truth.get(), completed.get(), &psnr_value), "psnr");
    std::printf("rse=%.6g\npsnr=%.6g\n", rse_value, psnr_value);
    return 0;
  }

  if (vdt->parsed()) {
    TensorPtr input = load_tensor(v_input);
    if (v_invert && v_plan == "auto") {
      std::fprintf(stderr,
                   "ttcomp: --invert needs an explicit plan (the original "
                   "image dims cannot be derived from tensorized input)\n");
      return 2;
    }
    PlanPtr plan = make_plan(v_plan, input.get());
    ttc_tensor* out = nullptr;
    check(v_invert ? ttc_vdt_invert(input.get(), plan.get(), &out)
                   : ttc_vdt_apply(input.get(), plan.get(), &out),
          "vdt");
    TensorPtr op(out);
    check(ttc_tensor_save(out, v_output.c_str()), v_output.c_str());
    return 0;
  }

  if (img->parsed()) {
    const bool from_image =
        has_suffix(i_input, ".ppm") || has_suffix(i_input, ".pgm");
    ttc_tensor* t = nullptr;
    if (from_image) {
      check(ttc_image_load(i_input.c_str(), &t), i_input.c_str());
      TensorPtr tp(t);
      check(ttc_tensor_save(t, i_output.c_str()), i_output.c_str());
    } else {
      check(ttc_tensor_load(i_input.c_str(), &t), i_input.c_str());
      TensorPtr tp(t);
      check(ttc_image_save(t, i_output.c_str()), i_output.c_str());
    }
    return 0;
  }

  return 2;
}
