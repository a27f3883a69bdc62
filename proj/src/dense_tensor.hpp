#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "error.hpp"

namespace ttc {

using Index = std::int64_t;
using Matrix = Eigen::MatrixXd;  // column-major

/// Dense N-way array of doubles with first-index-fastest (column-major)
/// linearization: element (i_0, ..., i_{N-1}) lives at linear offset
/// i_0 + i_1*I_0 + i_2*I_0*I_1 + ...  All indices are 0-based.
class DenseTensor {
public:
  DenseTensor() = default;

  /// Zero-filled tensor. Every extent must be >= 1.
  explicit DenseTensor(std::vector<Index> dims);

  /// Takes ownership of `values`; values.size() must equal the dim product.
  DenseTensor(std::vector<Index> dims, std::vector<double> values);

  static DenseTensor constant(std::vector<Index> dims, double value);

  Index order() const { return static_cast<Index>(dims_.size()); }
  const std::vector<Index>& dims() const { return dims_; }
  Index size() const { return static_cast<Index>(values_.size()); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  const double* data() const { return values_.data(); }
  double* data() { return values_.data(); }

  double operator[](Index linear) const { return values_[linear]; }
  double& operator[](Index linear) { return values_[linear]; }

  /// Linear offset of a multi-index (bounds-checked).
  Index offset_of(std::span<const Index> idx) const;

  double at(std::span<const Index> idx) const { return values_[offset_of(idx)]; }
  double& at(std::span<const Index> idx) { return values_[offset_of(idx)]; }
  double at(std::initializer_list<Index> idx) const {
    return at(std::span<const Index>(idx.begin(), idx.size()));
  }
  double& at(std::initializer_list<Index> idx) {
    return at(std::span<const Index>(idx.begin(), idx.size()));
  }

  bool same_dims(const DenseTensor& other) const { return dims_ == other.dims_; }

private:
  std::vector<Index> dims_;
  std::vector<double> values_;
};

Index dim_product(std::span<const Index> dims);

/// Mode-n matricization: rows index mode n, columns enumerate the remaining
/// modes with the first mode varying fastest (Kolda ordering).
Matrix mode_n_unfold(const DenseTensor& t, Index mode);

/// Inverse of mode_n_unfold for the given target dims.
DenseTensor fold_mode_n(const Matrix& m, Index mode, std::vector<Index> dims);

/// Kronecker product: block a(i,k)*b placed at block position (i,k).
Matrix kronecker(const Matrix& a, const Matrix& b);

/// Element-wise product; dims must agree.
DenseTensor hadamard(const DenseTensor& a, const DenseTensor& b);

double inner(const DenseTensor& a, const DenseTensor& b);
double frobenius_norm(const DenseTensor& a);

/// Same linearized value sequence interpreted under new dims.
DenseTensor reshape(const DenseTensor& t, std::vector<Index> new_dims);

/// Axis permutation: the element at input index (i_0,...,i_{N-1}) moves to
/// output position (i_{perm[0]}, ..., i_{perm[N-1]}); the output extent of
/// mode k is dims[perm[k]].  Matches the usual permute(A, order) semantics.
DenseTensor permute_axes(const DenseTensor& t, std::span<const Index> perm);

/// Throws unless w has the same dims as data and every entry is exactly
/// 0 (missing) or 1 (observed).
void validate_weight_tensor(const DenseTensor& data, const DenseTensor& w);

}  // namespace ttc
