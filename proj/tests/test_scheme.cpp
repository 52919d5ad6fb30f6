#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "nccech/error.hpp"

using namespace nccech;

namespace {
coeff::ArtinRing ring(int n) { return coeff::ArtinRing(Field::rationals(), n, {0, 1}); }
}  // namespace

TEST_CASE("meet poset validation") {
  using P = scheme::MeetPoset;
  P p({"1", "2", "0"}, {{"0", "1"}, {"0", "2"}}, {{"1", "2", "0"}});
  CHECK(p.meet(0, 1) == 2);
  CHECK(p.meet(2, 0) == 2);
  CHECK(p.leq(2, 0));
  CHECK_THROWS_AS(P({"1", "2", "0"}, {{"0", "1"}, {"0", "2"}}, {{"1", "2", "3"}}), Error);
  CHECK_THROWS_AS(P({"1", "2", "0"}, {{"0", "1"}, {"0", "2"}}, {}), Error);
  CHECK_THROWS_AS(P({"1", "2", "0"}, {{"0", "1"}, {"0", "2"}}, {{"1", "2", "1"}}), Error);
  CHECK_THROWS_AS(P({"a", "b"}, {{"a", "b"}, {"b", "a"}}, {}), Error);
}

TEST_CASE("enumerate chains") {
  scheme::MeetPoset p({"1", "2", "0"}, {{"0", "1"}, {"0", "2"}}, {{"1", "2", "0"}});
  auto c0 = scheme::enumerate_chains(p, 0);
  REQUIRE(c0.size() == 3);
  CHECK(c0[1].positions == std::vector<int>{2});
  auto c1 = scheme::enumerate_chains(p, 1);
  REQUIRE(c1.size() == 3);
  CHECK(c1[0].positions == std::vector<int>{1, 2});
  CHECK(c1[1].positions == std::vector<int>{1, 3});
  CHECK(c1[2].positions == std::vector<int>{2, 3});
  for (const auto& c : c1) CHECK(p.name(c.meet) == "0");
  auto c2 = scheme::enumerate_chains(p, 2);
  REQUIRE(c2.size() == 1);
  CHECK(p.name(c2[0].meet) == "0");
  CHECK_THROWS_AS(scheme::enumerate_chains(p, 3), Error);
}

TEST_CASE("validate the P1 scheme") {
  Window w;
  auto s = fixtures::p1(ring(1));
  auto rep = scheme::validate_scheme(s, w);
  CHECK(rep.valid());
  CHECK(rep.surjectivity_checks == 13);

  // y -> z^2 alone still reaches every weight through x^a z^(2b)
  CHECK(scheme::validate_scheme(fixtures::p1(ring(1), "z*z"), w).valid());
  auto bad = fixtures::p1(ring(1), "z*z", "x*x");
  auto r2 = scheme::validate_scheme(bad, w);
  CHECK_FALSE(r2.valid());
  for (const auto& f : r2.surjectivity_failures) CHECK(((f.weight.primary % 2) != 0));
  CHECK(r2.surjectivity_failures.size() == 6);

  auto one = std::make_shared<scheme::MeetPoset>(std::vector<std::string>{"u"},
                                                 std::vector<std::pair<std::string, std::string>>{},
                                                 std::vector<scheme::MeetPoset::MeetEntry>{});
  auto triv = scheme::make_scheme("pt", one, {fixtures::make_algebra("k[x]", {{"x", 1}}, {}, ring(1))}, {});
  CHECK(scheme::validate_scheme(triv, w).valid());
}

TEST_CASE("trivial tower flatness and reduction exactness") {
  Window w;
  scheme::DeformationTower t{"trivial", {fixtures::p1(ring(1)), fixtures::p1(ring(2)), fixtures::p1(ring(3))}};
  auto rep = scheme::validate_tower(t, w);
  CHECK(rep.valid());
}
