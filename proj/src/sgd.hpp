#pragma once

#include <vector>

#include "solver_config.hpp"

namespace ttc {

/// Observed entries of a partially known tensor as (linear offset, value)
/// pairs.  This is the only view of the data TT-SGD needs, so the solver's
/// working set stays proportional to the model, not to the dim product.
class ObservedSet {
public:
  ObservedSet(std::vector<Index> dims, std::vector<Index> offsets,
              std::vector<double> values);

  /// Collects the entries where w == 1.  Observed values must be finite.
  static ObservedSet from_dense(const DenseTensor& y, const DenseTensor& w);

  const std::vector<Index>& dims() const { return dims_; }
  Index count() const { return static_cast<Index>(offsets_.size()); }
  Index offset(Index k) const { return offsets_[k]; }
  double value(Index k) const { return values_[k]; }

  /// Frobenius norm of the observed values.
  double norm() const;

  void decode(Index offset, std::span<Index> idx_out) const;

private:
  std::vector<Index> dims_;
  std::vector<Index> offsets_;
  std::vector<double> values_;
};

/// Gradient of the single-entry loss 0.5*(x - y)^2 with respect to the N
/// slices selected by idx: slice n receives (x - y) * a_n^T * b_n^T where
/// a_n / b_n are the partial products of the slices before / after mode n.
struct EntryGradient {
  double residual = 0.0;               // x - y
  std::vector<Matrix> slice_grads;     // slice n: R_{n-1} x R_n
};

EntryGradient entry_gradient(const TtCores& g, std::span<const Index> idx,
                             double y_val);

/// TT-SGD: per iteration, sample one observed entry uniformly with
/// replacement and Adam-update only the N slices it touches.  Stops after
/// max_iters samples or when consecutive epoch-averaged losses (epoch = one
/// window of `count` samples) differ by at most tol.
SolveResult run_sgd(const std::vector<Index>& dims, const ObservedSet& observed,
                    const SolverConfig& config);

SolveResult run_sgd(const DenseTensor& y, const DenseTensor& w,
                    const SolverConfig& config);

}  // namespace ttc
