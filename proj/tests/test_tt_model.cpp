#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "tt_model.hpp"

using namespace ttc;

namespace {

TtCores random_model(std::vector<Index> dims, std::vector<Index> ranks,
                     std::uint64_t seed, double scale = 0.5) {
  return TtCores::random_init(std::move(dims), std::move(ranks), seed, scale);
}

double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  double m = 0.0;
  for (Index i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("rank chain validation") {
  CHECK_THROWS_AS(TtCores({2, 2}, {2, 2, 1}), Error);   // R0 != 1
  CHECK_THROWS_AS(TtCores({2, 2}, {1, 2, 2}), Error);   // RN != 1
  CHECK_THROWS_AS(TtCores({2, 2}, {1, 0, 1}), Error);   // rank 0
  CHECK_THROWS_AS(TtCores({2, 2}, {1, 1}), Error);      // wrong length
  CHECK_NOTHROW(TtCores({2, 2}, {1, 3, 1}));
  CHECK(TtCores::uniform_rank_chain(4, 3) ==
        (std::vector<Index>{1, 3, 3, 3, 1}));
}

TEST_CASE("param count matches sum of core sizes") {
  TtCores g({4, 5, 6}, {1, 2, 3, 1});
  CHECK(g.param_count() == 1 * 4 * 2 + 2 * 5 * 3 + 3 * 6 * 1);
}

TEST_CASE("rank-one model reconstructs the outer product") {
  TtCores g({2, 3, 2}, {1, 1, 1, 1});
  const std::vector<double> a{1, 2}, b{3, 4, 5}, c{6, 7};
  std::copy(a.begin(), a.end(), g.core(0).begin());
  std::copy(b.begin(), b.end(), g.core(1).begin());
  std::copy(c.begin(), c.end(), g.core(2).begin());
  DenseTensor x = full_reconstruct(g);
  for (Index k = 0; k < 2; ++k)
    for (Index j = 0; j < 3; ++j)
      for (Index i = 0; i < 2; ++i)
        CHECK(x.at({i, j, k}) == doctest::Approx(a[i] * b[j] * c[k]));
}

TEST_CASE("all-ones cores, ranks (1,2,2,1) on 2x2x2 give entries of 4") {
  TtCores g({2, 2, 2}, {1, 2, 2, 1});
  for (Index n = 0; n < 3; ++n)
    std::fill(g.core(n).begin(), g.core(n).end(), 1.0);
  DenseTensor x = full_reconstruct(g);
  for (Index i = 0; i < x.size(); ++i) CHECK(x[i] == doctest::Approx(4.0));
}

TEST_CASE("eval_entry hand example: [1,2] * I * [3,4]^T = 11") {
  TtCores g({1, 1, 1}, {1, 2, 2, 1});
  g.core(0)[0] = 1.0;
  g.core(0)[1] = 2.0;
  // middle core is the 2x2 identity
  g.core(1)[0] = 1.0;
  g.core(1)[1] = 0.0;
  g.core(1)[2] = 0.0;
  g.core(1)[3] = 1.0;
  g.core(2)[0] = 3.0;
  g.core(2)[1] = 4.0;
  CHECK(eval_entry(g, {0, 0, 0}) == doctest::Approx(11.0));
}

TEST_CASE("eval_entry equals full_reconstruct entry by entry") {
  TtCores g = random_model({3, 4, 2}, {1, 2, 3, 1}, 42);
  DenseTensor x = full_reconstruct(g);
  std::vector<Index> idx(3, 0);
  for (Index k = 0; k < 2; ++k)
    for (Index j = 0; j < 4; ++j)
      for (Index i = 0; i < 3; ++i) {
        idx = {i, j, k};
        CHECK(std::abs(eval_entry(g, idx) - x.at(idx)) < 1e-12);
      }
  CHECK_THROWS_AS(eval_entry(g, {0, 0, 5}), Error);
}

TEST_CASE("reconstruct agrees with the naive contraction oracle") {
  TtCores g = random_model({2, 3, 2, 2}, {1, 2, 3, 2, 1}, 7);
  DenseTensor x = full_reconstruct(g);
  DenseTensor ref = oracle::tt_contract_all(g);
  CHECK(max_abs_diff(x, ref) < 1e-12);
}

TEST_CASE("entry evaluation matches contraction up to order 9") {
  const std::vector<std::vector<Index>> shapes = {
      {3, 4, 2},
      {2, 3, 2, 3, 2},
      {2, 2, 2, 2, 2, 2, 2},
      {2, 2, 2, 2, 2, 2, 2, 2, 2}};
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    const Index N = static_cast<Index>(shapes[s].size());
    TtCores g = random_model(shapes[s],
                             TtCores::uniform_rank_chain(N, 2), 50 + s);
    DenseTensor x = full_reconstruct(g);
    std::vector<Index> idx(static_cast<std::size_t>(N), 0);
    for (Index off = 0; off < x.size(); ++off) {
      CHECK(std::abs(eval_entry(g, idx) - x[off]) < 1e-12);
      for (Index n = 0; n < N; ++n) {
        if (++idx[n] < shapes[s][n]) break;
        idx[n] = 0;
      }
    }
  }
}

TEST_CASE("subchain boundaries are the scalar 1") {
  TtCores g = random_model({3, 4, 2}, {1, 2, 2, 1}, 3);
  DenseTensor left = subchain_left(g, 0);
  REQUIRE(left.size() == 1);
  CHECK(left[0] == 1.0);
  DenseTensor right = subchain_right(g, g.order() - 1);
  REQUIRE(right.size() == 1);
  CHECK(right[0] == 1.0);
  CHECK_THROWS_AS(subchain_left(g, 3), Error);
}

TEST_CASE("subchain_left(N-1) equals the contraction of cores 0..N-2") {
  TtCores g = random_model({3, 2, 4}, {1, 2, 3, 1}, 11);
  DenseTensor left = subchain_left(g, 2);  // cores 0,1 merged: 3 x 2 x R2
  REQUIRE(left.dims() == (std::vector<Index>{3, 2, 3}));
  // oracle: row-by-row slice products of the two leading cores
  for (Index r = 0; r < 3; ++r)
    for (Index j = 0; j < 2; ++j)
      for (Index i = 0; i < 3; ++i) {
        Matrix prod = Matrix(g.slice(0, i)) * Matrix(g.slice(1, j));
        CHECK(std::abs(left.at({i, j, r}) - prod(0, r)) < 1e-12);
      }
}

TEST_CASE("left and right subchains sandwich core n back to the full tensor") {
  TtCores g = random_model({2, 3, 2, 2}, {1, 2, 2, 2, 1}, 13);
  DenseTensor full = full_reconstruct(g);
  const Index n = 2;
  DenseTensor left = subchain_left(g, n);    // 2 x 3 x R2
  DenseTensor right = subchain_right(g, n);  // R3 x 2
  // brute-force three-factor contraction
  std::vector<Index> idx(4, 0);
  for (Index i3 = 0; i3 < 2; ++i3)
    for (Index i2 = 0; i2 < 2; ++i2)
      for (Index i1 = 0; i1 < 3; ++i1)
        for (Index i0 = 0; i0 < 2; ++i0) {
          double sum = 0.0;
          for (Index rb = 0; rb < g.rank_before(n); ++rb)
            for (Index ra = 0; ra < g.rank_after(n); ++ra)
              sum += left.at({i0, i1, rb}) * g.slice(n, i2)(rb, ra) *
                     right.at({ra, i3});
          CHECK(std::abs(sum - full.at({i0, i1, i2, i3})) < 1e-12);
        }
}

TEST_CASE("subchain-assembled unfolding equals the direct unfolding") {
  SUBCASE("order 3, every mode") {
    TtCores g = random_model({3, 4, 2}, {1, 2, 3, 1}, 17);
    DenseTensor full = full_reconstruct(g);
    for (Index n = 0; n < 3; ++n) {
      Matrix direct = mode_n_unfold(full, n);
      Matrix assembled = tt_mode_unfolding(g, n);
      REQUIRE(assembled.rows() == direct.rows());
      REQUIRE(assembled.cols() == direct.cols());
      CHECK((assembled - direct).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SUBCASE("order 5, middle mode") {
    TtCores g = random_model({2, 3, 2, 3, 2},
                             TtCores::uniform_rank_chain(5, 2), 19);
    Matrix direct = mode_n_unfold(full_reconstruct(g), 2);
    Matrix assembled = tt_mode_unfolding(g, 2);
    CHECK((assembled - direct).cwiseAbs().maxCoeff() < 1e-12);
  }
  SUBCASE("rank-one model") {
    TtCores g = random_model({2, 3, 2}, {1, 1, 1, 1}, 23);
    Matrix direct = mode_n_unfold(full_reconstruct(g), 1);
    Matrix assembled = tt_mode_unfolding(g, 1);
    CHECK((assembled - direct).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("random init: determinism, zero scale, half-normal magnitude") {
  const std::vector<Index> dims{4, 4, 4};
  const auto ranks = TtCores::uniform_rank_chain(3, 3);
  TtCores a = TtCores::random_init(dims, ranks, 99, 0.1);
  TtCores b = TtCores::random_init(dims, ranks, 99, 0.1);
  for (Index n = 0; n < a.order(); ++n)
    for (Index i = 0; i < a.core_size(n); ++i)
      CHECK(a.core(n)[i] == b.core(n)[i]);

  TtCores z = TtCores::random_init(dims, ranks, 5, 0.0);
  DenseTensor x = full_reconstruct(z);
  for (Index i = 0; i < x.size(); ++i) CHECK(x[i] == 0.0);

  // E|N(0, 0.1)| = 0.1*sqrt(2/pi); aggregate over many seeds to pass 1e4
  // samples.
  double sum = 0.0;
  Index count = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    TtCores m = TtCores::random_init(dims, ranks, seed, 0.1);
    for (Index n = 0; n < m.order(); ++n)
      for (double v : m.core(n)) {
        sum += std::abs(v);
        ++count;
      }
  }
  REQUIRE(count >= 10000);
  const double mean = sum / static_cast<double>(count);
  const double expected = 0.079788456080286536;
  CHECK(std::abs(mean - expected) < 0.1 * expected);
}
