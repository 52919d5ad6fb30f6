#include <random>

#include "doctest.h"
#include "nccech/linalg.hpp"

using namespace nccech;

namespace {

Matrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c, int zero_bias) {
  std::uniform_int_distribution<int> d(-3, 3 + zero_bias);
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      int v = d(rng);
      m.at(i, j) = v > 3 ? 0 : v;
    }
  return m;
}

}  // namespace

TEST_CASE("rank nullity and kernel vectors") {
  std::mt19937 rng(11);
  Field q = Field::rationals();
  for (int trial = 0; trial < 40; ++trial) {
    Matrix m = random_matrix(rng, 1 + trial % 5, 1 + trial % 7, trial % 4);
    auto ker = nullspace(m, q);
    CHECK(ker.size() + rank(m, q) == m.cols());
    for (const auto& v : ker) CHECK(is_zero(m.apply(v, q)));
  }
}

TEST_CASE("solve and inconsistency witness") {
  Field q = Field::rationals();
  Matrix m(3, 2);
  m.at(0, 0) = 1;
  m.at(1, 1) = 1;
  m.at(2, 0) = 1;
  m.at(2, 1) = 1;
  auto x = solve(m, {1, 2, 3}, q);
  REQUIRE(x);
  CHECK((*x)[0] == 1);
  CHECK((*x)[1] == 2);
  CHECK_FALSE(solve(m, {1, 2, 4}, q));
  auto y = inconsistency_witness(m, {1, 2, 4}, q);
  REQUIRE(y);
  Scalar a = (*y)[0] + (*y)[2], b = (*y)[1] + (*y)[2];
  CHECK(a == 0);
  CHECK(b == 0);
  CHECK((*y)[0] * 1 + (*y)[1] * 2 + (*y)[2] * 4 != 0);
}

TEST_CASE("quotient space of the boundary of a square") {
  Field q = Field::rationals();
  // Z = everything in Q^3, B = span{(1,1,0)}: quotient of dim 2
  QuotientSpace qs(3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, {{1, 1, 0}}, q);
  CHECK(qs.dim() == 2);
  auto c = qs.coordinates({1, 1, 0});
  CHECK(is_zero(c));
  auto c2 = qs.coordinates({0, 0, 5});
  CHECK_FALSE(is_zero(c2));
}

TEST_CASE("prime field rank differs from rational rank") {
  Matrix m(2, 2);
  m.at(0, 0) = 1;
  m.at(0, 1) = 2;
  m.at(1, 0) = 3;
  m.at(1, 1) = 1;  // det = -5
  CHECK(rank(m, Field::rationals()) == 2);
  Field f5 = Field::prime(5);
  Matrix n(2, 2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) n.at(i, j) = f5.normalize(m.at(i, j));
  CHECK(rank(n, f5) == 1);
}
