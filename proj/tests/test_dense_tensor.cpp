#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>

#include "dense_tensor.hpp"
#include "oracles.hpp"

using namespace ttc;

TEST_CASE("linearization is first-index-fastest") {
  DenseTensor t({2, 3, 2});
  std::iota(t.values().begin(), t.values().end(), 1.0);
  double expected = 1.0;
  for (Index k = 0; k < 2; ++k)
    for (Index j = 0; j < 3; ++j)
      for (Index i = 0; i < 2; ++i) {
        CHECK(t.at({i, j, k}) == expected);
        expected += 1.0;
      }
  CHECK(t.at({0, 1, 1}) == t[0 + 1 * 2 + 1 * 6]);
}

TEST_CASE("construction rejects bad dims") {
  CHECK_THROWS_AS(DenseTensor({2, 0, 3}), Error);
  CHECK_THROWS_AS(DenseTensor(std::vector<Index>{}), Error);
  CHECK_THROWS_AS(DenseTensor({2, 2}, std::vector<double>(3, 0.0)), Error);
}

TEST_CASE("order-2 unfold on mode 0 is the matrix itself") {
  DenseTensor t = oracle::random_tensor({3, 4}, 7);
  Matrix m = mode_n_unfold(t, 0);
  for (Index j = 0; j < 4; ++j)
    for (Index i = 0; i < 3; ++i) CHECK(m(i, j) == t.at({i, j}));
}

TEST_CASE("2x3x2 tensor with values 1..12: mode-1 unfold row") {
  DenseTensor t({2, 3, 2});
  std::iota(t.values().begin(), t.values().end(), 1.0);
  Matrix m = mode_n_unfold(t, 1);
  REQUIRE(m.rows() == 3);
  REQUIRE(m.cols() == 4);
  // second row (i2 = 1): enumerate (i2; i1 + 2*i3) by hand
  CHECK(m(1, 0) == 3.0);
  CHECK(m(1, 1) == 4.0);
  CHECK(m(1, 2) == 9.0);
  CHECK(m(1, 3) == 10.0);
}

TEST_CASE("unfold/fold round trip on every mode up to order 9") {
  const std::vector<std::vector<Index>> shapes = {
      {5},        {4, 3},          {2, 3, 2},
      {3, 2, 4, 2}, {2, 2, 3, 2, 2}, {2, 2, 2, 2, 2, 2, 2, 2, 2}};
  for (std::size_t s = 0; s < shapes.size(); ++s) {
    DenseTensor t = oracle::random_tensor(shapes[s], 100 + s);
    for (Index n = 0; n < t.order(); ++n) {
      DenseTensor back = fold_mode_n(mode_n_unfold(t, n), n, t.dims());
      REQUIRE(back.dims() == t.dims());
      for (Index i = 0; i < t.size(); ++i) CHECK(back[i] == t[i]);
    }
  }
  CHECK_THROWS_AS(mode_n_unfold(oracle::random_tensor({2, 2}, 1), 2), Error);
}

TEST_CASE("kronecker: scalar case, hand expansion, shape") {
  Matrix b = oracle::random_matrix(2, 3, 5);
  Matrix two(1, 1);
  two << 2.0;
  CHECK((kronecker(two, b) - 2.0 * b).norm() == 0.0);

  Matrix a(2, 2), c(2, 2), expect(4, 4);
  a << 1, 2, 3, 4;
  c << 0, 1, 1, 0;
  expect << 0, 1, 0, 2, 1, 0, 2, 0, 0, 3, 0, 4, 3, 0, 4, 0;
  CHECK((kronecker(a, c) - expect).norm() == 0.0);

  Matrix x = oracle::random_matrix(3, 2, 6), y = oracle::random_matrix(4, 5, 7);
  CHECK(kronecker(x, y).rows() == 12);
  CHECK(kronecker(x, y).cols() == 10);
}

TEST_CASE("kronecker mixed-product identity") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Matrix a = oracle::random_matrix(2, 3, seed * 4 + 1);
    Matrix b = oracle::random_matrix(3, 2, seed * 4 + 2);
    Matrix c = oracle::random_matrix(3, 2, seed * 4 + 3);
    Matrix d = oracle::random_matrix(2, 4, seed * 4 + 4);
    Matrix lhs = kronecker(a, b) * kronecker(c, d);
    Matrix rhs = kronecker(Matrix(a * c), Matrix(b * d));
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("hadamard identities and errors") {
  DenseTensor a = oracle::random_tensor({2, 3, 2}, 9);
  CHECK(hadamard(a, DenseTensor::constant(a.dims(), 1.0)).values()[5] == a[5]);
  DenseTensor zero = hadamard(a, DenseTensor::constant(a.dims(), 0.0));
  for (Index i = 0; i < zero.size(); ++i) CHECK(zero[i] == 0.0);

  DenseTensor u({3}, {1, 2, 3}), v({3}, {4, 5, 6});
  DenseTensor uv = hadamard(u, v);
  CHECK(uv[0] == 4.0);
  CHECK(uv[1] == 10.0);
  CHECK(uv[2] == 18.0);

  CHECK_THROWS_AS(hadamard(a, DenseTensor({2, 3})), Error);
}

TEST_CASE("inner and frobenius norm") {
  CHECK(frobenius_norm(DenseTensor::constant({2, 2, 2}, 1.0)) ==
        doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));
  DenseTensor a = oracle::random_tensor({4, 3}, 11);
  CHECK(inner(a, DenseTensor::constant(a.dims(), 0.0)) == 0.0);
  CHECK(inner(DenseTensor({2}, {1, 2}), DenseTensor({2}, {3, 4})) == 11.0);
  CHECK_THROWS_AS(inner(a, DenseTensor({3, 4})), Error);
}

TEST_CASE("reshape round trip and errors") {
  DenseTensor t = oracle::random_tensor({2, 6}, 13);
  DenseTensor r = reshape(t, {3, 4});
  DenseTensor back = reshape(r, {2, 6});
  for (Index i = 0; i < t.size(); ++i) CHECK(back[i] == t[i]);
  CHECK_THROWS_AS(reshape(t, {5, 2}), Error);
}

TEST_CASE("permute_axes: identity, transpose, scatter semantics") {
  DenseTensor t = oracle::random_tensor({2, 3}, 17);
  const std::vector<Index> id{0, 1};
  DenseTensor same = permute_axes(t, id);
  for (Index i = 0; i < t.size(); ++i) CHECK(same[i] == t[i]);

  const std::vector<Index> swap{1, 0};
  DenseTensor tr = permute_axes(t, swap);
  REQUIRE(tr.dims() == std::vector<Index>{3, 2});
  CHECK(tr.at({1, 0}) == t.at({0, 1}));

  // element (i0,i1,i2) must land at (i_{p0}, i_{p1}, i_{p2})
  DenseTensor u = oracle::random_tensor({2, 3, 4}, 19);
  const std::vector<Index> p{1, 2, 0};
  DenseTensor v = permute_axes(u, p);
  REQUIRE(v.dims() == (std::vector<Index>{3, 4, 2}));
  for (Index i0 = 0; i0 < 2; ++i0)
    for (Index i1 = 0; i1 < 3; ++i1)
      for (Index i2 = 0; i2 < 4; ++i2)
        CHECK(v.at({i1, i2, i0}) == u.at({i0, i1, i2}));

  CHECK_THROWS_AS(permute_axes(u, std::vector<Index>{0, 1, 1}), Error);
  CHECK_THROWS_AS(permute_axes(u, std::vector<Index>{0, 1}), Error);
}

TEST_CASE("weight tensor validation") {
  DenseTensor y = oracle::random_tensor({2, 2}, 23);
  CHECK_NOTHROW(validate_weight_tensor(y, DenseTensor({2, 2}, {0, 1, 1, 0})));
  CHECK_THROWS_AS(validate_weight_tensor(y, DenseTensor({2, 2}, {0, 0.5, 1, 0})),
                  Error);
  CHECK_THROWS_AS(validate_weight_tensor(y, DenseTensor({4}, {0, 1, 1, 0})),
                  Error);
}
