#include "dense_tensor.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace ttc {

namespace {

void check_dims(const std::vector<Index>& dims) {
  require(!dims.empty(), Errc::invalid_argument, "tensor needs at least one mode");
  for (Index d : dims)
    require(d >= 1, Errc::invalid_argument,
            "tensor extent must be >= 1, got " + std::to_string(d));
}

// strides[n] = product of extents of modes < n
std::vector<Index> strides_of(const std::vector<Index>& dims) {
  std::vector<Index> s(dims.size());
  Index acc = 1;
  for (std::size_t n = 0; n < dims.size(); ++n) {
    s[n] = acc;
    acc *= dims[n];
  }
  return s;
}

}  // namespace

Index dim_product(std::span<const Index> dims) {
  Index p = 1;
  for (Index d : dims) p *= d;
  return p;
}

DenseTensor::DenseTensor(std::vector<Index> dims) : dims_(std::move(dims)) {
  check_dims(dims_);
  values_.assign(static_cast<std::size_t>(dim_product(dims_)), 0.0);
}

DenseTensor::DenseTensor(std::vector<Index> dims, std::vector<double> values)
    : dims_(std::move(dims)), values_(std::move(values)) {
  check_dims(dims_);
  require(static_cast<Index>(values_.size()) == dim_product(dims_),
          Errc::invalid_argument,
          "value count does not match the dim product");
}

DenseTensor DenseTensor::constant(std::vector<Index> dims, double value) {
  DenseTensor t(std::move(dims));
  std::fill(t.values_.begin(), t.values_.end(), value);
  return t;
}

Index DenseTensor::offset_of(std::span<const Index> idx) const {
  require(static_cast<Index>(idx.size()) == order(), Errc::invalid_argument,
          "multi-index order mismatch");
  Index off = 0;
  Index stride = 1;
  for (std::size_t n = 0; n < idx.size(); ++n) {
    require(idx[n] >= 0 && idx[n] < dims_[n], Errc::invalid_argument,
            "index out of range in mode " + std::to_string(n));
    off += idx[n] * stride;
    stride *= dims_[n];
  }
  return off;
}

Matrix mode_n_unfold(const DenseTensor& t, Index mode) {
  const Index N = t.order();
  require(mode >= 0 && mode < N, Errc::invalid_argument,
          "unfold mode out of range");
  const auto& dims = t.dims();
  const Index rows = dims[mode];
  const Index cols = t.size() / rows;
  Matrix m(rows, cols);

  // Walk the tensor in layout order; the column index advances in the same
  // order except that mode `mode` is skipped.
  std::vector<Index> idx(N, 0);
  std::vector<Index> col_strides(N, 0);
  {
    Index acc = 1;
    for (Index n = 0; n < N; ++n) {
      if (n == mode) continue;
      col_strides[n] = acc;
      acc *= dims[n];
    }
  }
  Index row = 0, col = 0;
  for (Index off = 0; off < t.size(); ++off) {
    m(row, col) = t[off];
    // odometer increment
    for (Index n = 0; n < N; ++n) {
      if (n == mode) {
        if (++row < rows) break;
        row = 0;
      } else {
        if (++idx[n] < dims[n]) {
          col += col_strides[n];
          break;
        }
        col -= col_strides[n] * (dims[n] - 1);
        idx[n] = 0;
      }
    }
  }
  return m;
}

DenseTensor fold_mode_n(const Matrix& m, Index mode, std::vector<Index> dims) {
  DenseTensor t(std::move(dims));
  const Index N = t.order();
  require(mode >= 0 && mode < N, Errc::invalid_argument, "fold mode out of range");
  require(m.rows() == t.dims()[mode] && m.rows() * m.cols() == t.size(),
          Errc::shape_mismatch, "matrix shape does not match fold target");

  std::vector<Index> idx(N, 0);
  std::vector<Index> col_strides(N, 0);
  {
    Index acc = 1;
    for (Index n = 0; n < N; ++n) {
      if (n == mode) continue;
      col_strides[n] = acc;
      acc *= t.dims()[n];
    }
  }
  Index row = 0, col = 0;
  for (Index off = 0; off < t.size(); ++off) {
    t[off] = m(row, col);
    for (Index n = 0; n < N; ++n) {
      if (n == mode) {
        if (++row < m.rows()) break;
        row = 0;
      } else {
        if (++idx[n] < t.dims()[n]) {
          col += col_strides[n];
          break;
        }
        col -= col_strides[n] * (t.dims()[n] - 1);
        idx[n] = 0;
      }
    }
  }
  return t;
}

Matrix kronecker(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

DenseTensor hadamard(const DenseTensor& a, const DenseTensor& b) {
  require(a.same_dims(b), Errc::shape_mismatch, "hadamard: dims differ");
  std::vector<double> out(a.values().begin(), a.values().end());
  for (Index i = 0; i < a.size(); ++i) out[i] *= b[i];
  return DenseTensor(a.dims(), std::move(out));
}

double inner(const DenseTensor& a, const DenseTensor& b) {
  require(a.same_dims(b), Errc::shape_mismatch, "inner: dims differ");
  double s = 0.0;
  for (Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double frobenius_norm(const DenseTensor& a) {
  Eigen::Map<const Eigen::VectorXd> v(a.data(), a.size());
  return v.norm();
}

DenseTensor reshape(const DenseTensor& t, std::vector<Index> new_dims) {
  check_dims(new_dims);
  require(dim_product(new_dims) == t.size(), Errc::shape_mismatch,
          "reshape: element count mismatch");
  return DenseTensor(std::move(new_dims),
                     std::vector<double>(t.values().begin(), t.values().end()));
}

DenseTensor permute_axes(const DenseTensor& t, std::span<const Index> perm) {
  const Index N = t.order();
  require(static_cast<Index>(perm.size()) == N, Errc::invalid_argument,
          "permutation length mismatch");
  std::vector<bool> seen(N, false);
  for (Index p : perm) {
    require(p >= 0 && p < N && !seen[p], Errc::invalid_argument,
            "invalid permutation");
    seen[p] = true;
  }

  std::vector<Index> out_dims(N);
  for (Index k = 0; k < N; ++k) out_dims[k] = t.dims()[perm[k]];
  DenseTensor out(std::move(out_dims));

  // Output stride contributed by each *input* mode: input mode m appears as
  // output mode perm^{-1}(m).
  const auto out_strides = strides_of(out.dims());
  std::vector<Index> contrib(N);
  for (Index k = 0; k < N; ++k) contrib[perm[k]] = out_strides[k];

  std::vector<Index> idx(N, 0);
  Index out_off = 0;
  for (Index off = 0; off < t.size(); ++off) {
    out[out_off] = t[off];
    for (Index n = 0; n < N; ++n) {
      if (++idx[n] < t.dims()[n]) {
        out_off += contrib[n];
        break;
      }
      out_off -= contrib[n] * (t.dims()[n] - 1);
      idx[n] = 0;
    }
  }
  return out;
}

void validate_weight_tensor(const DenseTensor& data, const DenseTensor& w) {
  require(data.same_dims(w), Errc::shape_mismatch,
          "weight tensor dims do not match data dims");
  for (Index i = 0; i < w.size(); ++i)
    require(w[i] == 0.0 || w[i] == 1.0, Errc::invalid_argument,
            "weight tensor entries must be 0 or 1");
}

}  // namespace ttc
