#pragma once

#include <string>
#include <vector>

#include "dense_tensor.hpp"

namespace ttc {

/// Visual-data tensorization plan for a tensor whose first two modes are the
/// image modes U x V: split U into u_1..u_l and V into v_1..v_l, interleave
/// the factor modes as (u_1, v_1, u_2, v_2, ...), then fuse each (u_k, v_k)
/// pair into one mode of extent u_k*v_k (u_k varying fastest).  Trailing
/// modes (channels, frames) pass through unchanged.  Mode k of the output
/// then addresses a u_k x v_k pixel-block hierarchy of the image.
class VdtPlan {
public:
  VdtPlan(std::vector<Index> u_factors, std::vector<Index> v_factors,
          std::vector<Index> trailing_dims);

  /// All-2 factorization, l = log2(U); requires U == V, both powers of two.
  static VdtPlan auto_plan(Index u, Index v, std::vector<Index> trailing_dims);

  /// Parses the single-line form "u=2,2,2 v=2,2,2 trailing=3"
  /// (trailing may be omitted or empty).
  static VdtPlan parse(const std::string& line);
  std::string to_string() const;

  const std::vector<Index>& u_factors() const { return u_; }
  const std::vector<Index>& v_factors() const { return v_; }
  const std::vector<Index>& trailing_dims() const { return trailing_; }

  Index u() const { return dim_product(u_); }
  Index v() const { return dim_product(v_); }
  Index block_levels() const { return static_cast<Index>(u_.size()); }

  /// Expected input dims: (U, V, trailing...).
  std::vector<Index> input_dims() const;
  /// Split dims before permuting: (u_1..u_l, v_1..v_l, trailing...).
  std::vector<Index> split_dims() const;
  /// The interleaving permutation over the split modes, 0-based:
  /// {0, l, 1, l+1, ..., l-1, 2l-1, 2l, ...}.
  std::vector<Index> interleave() const;
  /// Output dims: (u_1*v_1, ..., u_l*v_l, trailing...).
  std::vector<Index> output_dims() const;

private:
  std::vector<Index> u_, v_, trailing_;
};

/// reshape -> permute -> reshape per the plan; exact (pure index relabeling).
DenseTensor apply_vdt(const DenseTensor& t, const VdtPlan& plan);

/// Exact inverse: invert_vdt(apply_vdt(t, p), p) == t bit for bit.
DenseTensor invert_vdt(const DenseTensor& t, const VdtPlan& plan);

}  // namespace ttc
