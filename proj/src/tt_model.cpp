#include "tt_model.hpp"

#include <random>
#include <string>

namespace ttc {

namespace {

using MatView = Eigen::Map<const Matrix>;
using MutMatView = Eigen::Map<Matrix>;

void check_chain(const std::vector<Index>& dims, const std::vector<Index>& ranks) {
  require(!dims.empty(), Errc::invalid_argument, "TT model needs at least one mode");
  for (Index d : dims)
    require(d >= 1, Errc::invalid_argument, "TT mode extent must be >= 1");
  require(ranks.size() == dims.size() + 1, Errc::invalid_argument,
          "rank chain must have order+1 entries");
  require(ranks.front() == 1 && ranks.back() == 1, Errc::invalid_argument,
          "boundary ranks must be 1");
  for (Index r : ranks)
    require(r >= 1, Errc::invalid_argument, "TT ranks must be >= 1");
}

}  // namespace

TtCores::TtCores(std::vector<Index> dims, std::vector<Index> ranks)
    : dims_(std::move(dims)), ranks_(std::move(ranks)) {
  check_chain(dims_, ranks_);
  cores_.resize(dims_.size());
  for (Index n = 0; n < order(); ++n)
    cores_[n].assign(
        static_cast<std::size_t>(ranks_[n] * dims_[n] * ranks_[n + 1]), 0.0);
}

TtCores TtCores::random_init(std::vector<Index> dims, std::vector<Index> ranks,
                             std::uint64_t seed, double init_scale) {
  TtCores g(std::move(dims), std::move(ranks));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Index n = 0; n < g.order(); ++n)
    for (double& x : g.cores_[n]) x = gauss(rng) * init_scale;
  return g;
}

std::vector<Index> TtCores::uniform_rank_chain(Index order, Index rank) {
  require(order >= 1, Errc::invalid_argument, "order must be >= 1");
  require(rank >= 1, Errc::invalid_argument, "rank must be >= 1");
  std::vector<Index> chain(static_cast<std::size_t>(order) + 1, rank);
  chain.front() = 1;
  chain.back() = 1;
  return chain;
}

Index TtCores::param_count() const {
  Index total = 0;
  for (Index n = 0; n < order(); ++n) total += core_size(n);
  return total;
}

SliceView TtCores::slice(Index n, Index i) const {
  require(n >= 0 && n < order(), Errc::invalid_argument, "core index out of range");
  require(i >= 0 && i < dims_[n], Errc::invalid_argument,
          "slice index out of range in mode " + std::to_string(n));
  const Index rb = ranks_[n], ra = ranks_[n + 1];
  return SliceView(cores_[n].data() + i * rb, rb, ra,
                   Eigen::OuterStride<>(rb * dims_[n]));
}

MutSliceView TtCores::slice(Index n, Index i) {
  require(n >= 0 && n < order(), Errc::invalid_argument, "core index out of range");
  require(i >= 0 && i < dims_[n], Errc::invalid_argument,
          "slice index out of range in mode " + std::to_string(n));
  const Index rb = ranks_[n], ra = ranks_[n + 1];
  return MutSliceView(cores_[n].data() + i * rb, rb, ra,
                      Eigen::OuterStride<>(rb * dims_[n]));
}

DenseTensor full_reconstruct(const TtCores& g) {
  const Index N = g.order();
  // Left-to-right sweep.  The accumulator holds the merge of cores 0..n-1 as
  // a (I_0*...*I_{n-1}) x R_{n-1} column-major matrix; multiplying by core n
  // viewed as R_{n-1} x (I_n*R_n) extends it by one mode with no reshuffle.
  std::vector<double> acc{1.0};
  Index rows = 1;
  for (Index n = 0; n < N; ++n) {
    const Index rb = g.rank_before(n), ra = g.rank_after(n), in = g.dims()[n];
    std::vector<double> next(static_cast<std::size_t>(rows * in * ra));
    MutMatView out(next.data(), rows, in * ra);
    out.noalias() = MatView(acc.data(), rows, rb) *
                    MatView(g.core(n).data(), rb, in * ra);
    acc = std::move(next);
    rows *= in;
  }
  return DenseTensor(g.dims(), std::move(acc));
}

double eval_entry(const TtCores& g, std::span<const Index> idx) {
  require(static_cast<Index>(idx.size()) == g.order(), Errc::invalid_argument,
          "entry index order mismatch");
  Eigen::RowVectorXd row = Eigen::RowVectorXd::Ones(1);
  for (Index n = 0; n < g.order(); ++n) row = row * g.slice(n, idx[n]);
  return row(0);
}

double eval_entry(const TtCores& g, std::initializer_list<Index> idx) {
  return eval_entry(g, std::span<const Index>(idx.begin(), idx.size()));
}

DenseTensor subchain_left(const TtCores& g, Index n) {
  require(n >= 0 && n < g.order(), Errc::invalid_argument,
          "subchain mode out of range");
  std::vector<double> acc{1.0};
  Index rows = 1;
  std::vector<Index> out_dims;
  for (Index k = 0; k < n; ++k) {
    const Index rb = g.rank_before(k), ra = g.rank_after(k), ik = g.dims()[k];
    std::vector<double> next(static_cast<std::size_t>(rows * ik * ra));
    MutMatView out(next.data(), rows, ik * ra);
    out.noalias() = MatView(acc.data(), rows, rb) *
                    MatView(g.core(k).data(), rb, ik * ra);
    acc = std::move(next);
    rows *= ik;
    out_dims.push_back(ik);
  }
  out_dims.push_back(g.rank_before(n));
  return DenseTensor(std::move(out_dims), std::move(acc));
}

DenseTensor subchain_right(const TtCores& g, Index n) {
  require(n >= 0 && n < g.order(), Errc::invalid_argument,
          "subchain mode out of range");
  const Index N = g.order();
  // Right-to-left sweep.  The accumulator holds the merge of cores k..N-1 as
  // a R_{k-1} x (I_k*...*I_{N-1}) column-major matrix; prepending core k-1
  // viewed as (R_{k-2}*I_{k-1}) x R_{k-1} again needs no reshuffle.
  std::vector<double> acc{1.0};
  Index cols = 1;
  std::vector<Index> tail_dims;
  for (Index k = N - 1; k > n; --k) {
    const Index rb = g.rank_before(k), ra = g.rank_after(k), ik = g.dims()[k];
    std::vector<double> next(static_cast<std::size_t>(rb * ik * cols));
    MutMatView out(next.data(), rb * ik, cols);
    out.noalias() = MatView(g.core(k).data(), rb * ik, ra) *
                    MatView(acc.data(), ra, cols);
    acc = std::move(next);
    cols *= ik;
    tail_dims.insert(tail_dims.begin(), ik);
  }
  std::vector<Index> out_dims{g.rank_after(n)};
  out_dims.insert(out_dims.end(), tail_dims.begin(), tail_dims.end());
  return DenseTensor(std::move(out_dims), std::move(acc));
}

Matrix core_mode2_unfold(const TtCores& g, Index n) {
  const Index rb = g.rank_before(n), ra = g.rank_after(n), in = g.dims()[n];
  Matrix m(in, rb * ra);
  for (Index s = 0; s < ra; ++s)
    for (Index i = 0; i < in; ++i)
      for (Index r = 0; r < rb; ++r)
        m(i, s * rb + r) = g.core(n)[r + i * rb + s * rb * in];
  return m;
}

Matrix tt_mode_unfolding(const TtCores& g, Index n) {
  const DenseTensor right = subchain_right(g, n);
  const DenseTensor left = subchain_left(g, n);
  // Right subchain is already laid out as its mode-1 unfolding; the left
  // subchain's last-mode unfolding is the transpose of its layout view.
  MatView right1(right.data(), g.rank_after(n), right.size() / g.rank_after(n));
  MatView left_cols(left.data(), left.size() / g.rank_before(n),
                    g.rank_before(n));
  return core_mode2_unfold(g, n) *
         kronecker(right1, left_cols.transpose());
}

}  // namespace ttc
