#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "dense_tensor.hpp"

namespace ttc {

/// Strided view of the mode-2 slice G^(n)[:, i, :], an R_{n-1} x R_n matrix.
using SliceView =
    Eigen::Map<const Matrix, Eigen::Unaligned, Eigen::OuterStride<>>;
using MutSliceView =
    Eigen::Map<Matrix, Eigen::Unaligned, Eigen::OuterStride<>>;

/// Tensor-train core chain: N order-three cores, core n of shape
/// R_{n-1} x I_n x R_n (first index fastest), with R_0 = R_N = 1 and
/// adjacent ranks agreeing.  Boundary cores keep their rank-1 outer mode
/// so every core goes through the same code path.
class TtCores {
public:
  /// Zero-initialized cores for the given dims and rank chain (size N+1).
  TtCores(std::vector<Index> dims, std::vector<Index> ranks);

  /// Cores filled i.i.d. Gaussian(0,1) * init_scale, deterministic in seed.
  static TtCores random_init(std::vector<Index> dims, std::vector<Index> ranks,
                             std::uint64_t seed, double init_scale);

  /// Expands a uniform rank r to the chain (1, r, ..., r, 1).
  static std::vector<Index> uniform_rank_chain(Index order, Index rank);

  Index order() const { return static_cast<Index>(dims_.size()); }
  const std::vector<Index>& dims() const { return dims_; }
  const std::vector<Index>& ranks() const { return ranks_; }
  Index rank_before(Index n) const { return ranks_[n]; }
  Index rank_after(Index n) const { return ranks_[n + 1]; }

  std::span<const double> core(Index n) const { return cores_[n]; }
  std::span<double> core(Index n) { return cores_[n]; }
  Index core_size(Index n) const { return static_cast<Index>(cores_[n].size()); }

  /// Total entry count across cores: sum_n R_{n-1} * I_n * R_n.
  Index param_count() const;

  SliceView slice(Index n, Index i) const;
  MutSliceView slice(Index n, Index i);

private:
  std::vector<Index> dims_;
  std::vector<Index> ranks_;
  std::vector<std::vector<double>> cores_;
};

/// Contract the full chain into the dense tensor it represents.
DenseTensor full_reconstruct(const TtCores& g);

/// Single entry as the product of the N mode-2 slices picked by idx.
double eval_entry(const TtCores& g, std::span<const Index> idx);
double eval_entry(const TtCores& g, std::initializer_list<Index> idx);

/// Merge of cores 0..n-1, shape I_0 x ... x I_{n-1} x R_{n-1}.
/// n == 0 gives the scalar 1 (a single-entry tensor).
DenseTensor subchain_left(const TtCores& g, Index n);

/// Merge of cores n+1..N-1, shape R_n x I_{n+1} x ... x I_{N-1}.
/// n == N-1 gives the scalar 1.
DenseTensor subchain_right(const TtCores& g, Index n);

/// Mode-2 matricization of core n: I_n x (R_{n-1} * R_n), columns ordered
/// with the leading rank fastest.
Matrix core_mode2_unfold(const TtCores& g, Index n);

/// Mode-n unfolding of the represented tensor assembled from the subchains:
/// core_mode2_unfold(g,n) * (right-subchain mode-1 unfold (x) left-subchain
/// last-mode unfold).  Equals mode_n_unfold(full_reconstruct(g), n).
Matrix tt_mode_unfolding(const TtCores& g, Index n);

}  // namespace ttc
