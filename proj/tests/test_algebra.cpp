#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "nccech/error.hpp"

using namespace nccech;
using fixtures::make_algebra;
using fixtures::make_hom;

namespace {

coeff::ArtinRing ring(int n) { return coeff::ArtinRing(Field::rationals(), n, {0, 1}); }

algebra::AlgebraPtr quantum_chart(int n, bool with_sz = true) {
  std::vector<std::string> rules{"x*z -> 1", "z*x -> 1", "s*x -> x*s + t*x"};
  if (with_sz) rules.push_back("s*z -> z*s - t*z");
  return make_algebra("A0", {{"x", {1, 0}}, {"z", {-1, 0}}, {"s", {0, 1}}}, rules, ring(n));
}

}  // namespace

TEST_CASE("multiply") {
  auto laurent = make_algebra("L", {{"x", 1}, {"z", -1}}, {"x*z -> 1", "z*x -> 1"}, ring(1));
  CHECK(laurent->format(laurent->multiply(laurent->parse("x"), laurent->parse("z"))) == "1");
  auto qp = make_algebra("Q", {{"x", {1, 0}}, {"s", {0, 1}}}, {"s*x -> x*s + t*x"}, ring(2));
  CHECK(qp->format(qp->multiply(qp->parse("s"), qp->parse("x"))) == "x*s + t*x");
  CHECK(qp->format(qp->multiply(qp->parse("s"), qp->parse("x*x"))) == "x*x*s + 2*t*x*x");
  auto e1 = algebra::make_element(qp, "s");
  auto e2 = algebra::make_element(laurent, "x");
  CHECK_THROWS_AS(algebra::multiply(e1, e2), Error);
}

TEST_CASE("associativity on random homogeneous triples") {
  auto a = quantum_chart(3);
  std::mt19937 rng(3);
  const std::vector<std::string> gens{"x", "z", "s", "t*x", "x*s", "z*z", "s*s", "1"};
  std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
  for (int trial = 0; trial < 60; ++trial) {
    auto p = a->parse(gens[pick(rng)]), q = a->parse(gens[pick(rng)]), r = a->parse(gens[pick(rng)]);
    CHECK(a->multiply(a->multiply(p, q), r) == a->multiply(p, a->multiply(q, r)));
  }
}

TEST_CASE("check_hom") {
  auto ky = make_algebra("k[y]", {{"y", -1}}, {}, ring(1));
  auto laurent = make_algebra("L", {{"x", 1}, {"z", -1}}, {"x*z -> 1", "z*x -> 1"}, ring(1));
  CHECK(algebra::check_hom(make_hom(ky, laurent, {"z"}), 10).valid());
  CHECK(algebra::check_hom(algebra::AlgebraHom::identity(laurent), 10).valid());

  auto a2 = make_algebra("A2", {{"y", {-1, 0}}, {"s", {0, 1}}}, {"s*y -> y*s - t*y"}, ring(2));
  CHECK(algebra::check_hom(make_hom(a2, quantum_chart(2), {"z", "s"}), 10).valid());
  auto bad = algebra::check_hom(make_hom(a2, quantum_chart(2, false), {"z", "s"}), 10);
  REQUIRE(bad.defects.size() == 1);
  CHECK(bad.defects[0].rule == 0);
  CHECK(quantum_chart(2, false)->format(bad.defects[0].difference) == "s*z - z*s + t*z");

  CHECK_THROWS_AS(make_hom(ky, laurent, {"x"}), Error);
}

TEST_CASE("compose_hom") {
  auto s = fixtures::p1(ring(1));
  auto id0 = algebra::AlgebraHom::identity(s.algebra(2));
  auto c = algebra::compose_hom(id0, s.phi(2, 0));
  CHECK(c.images() == s.phi(2, 0).images());
  CHECK_THROWS_AS(algebra::compose_hom(s.phi(2, 0), s.phi(2, 1)), Error);
}

TEST_CASE("graded basis") {
  auto kx = make_algebra("k[x]", {{"x", 1}}, {}, ring(1));
  CHECK(kx->basis(2, 16).dim() == 1);
  auto laurent = make_algebra("L", {{"x", 1}, {"z", -1}}, {"x*z -> 1", "z*x -> 1"}, ring(1));
  for (int w = -6; w <= 6; ++w) CHECK(laurent->basis(w, 16).dim() == 1);
  auto qp = make_algebra("Q", {{"x", 1}, {"s", 1}}, {"s*x -> x*s + t*x"}, coeff::ArtinRing(Field::rationals(), 2, 1));
  const auto& b = qp->basis(2, 16);
  CHECK(b.words.size() == 3);
  CHECK(b.dim() == 5);
  auto v = qp->coordinates(qp->parse("x*s + 3*t*s"), 2, 16);
  CHECK(qp->format(qp->from_coordinates(v, 2, 16)) == "x*s + 3*t*s");
}
