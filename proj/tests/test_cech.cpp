#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"
#include "nccech/cech.hpp"

using namespace nccech;

namespace {

std::shared_ptr<const scheme::NcScheme> p1(int order = 1) {
  return std::make_shared<scheme::NcScheme>(fixtures::p1(coeff::ArtinRing(Field::rationals(), order)));
}

qcoh::ModulePtr line(const std::shared_ptr<const scheme::NcScheme>& s, int n) {
  return std::make_shared<qcoh::LocallyFreeModule>(fixtures::line_bundle(s, n));
}

// Classical two-chart Čech count for O(n) in weight w: C^0 = k[x]_w + k[y]_(w-n)
// (one monomial each when w >= 0, resp. w <= n), C^1 = the Laurent monomial x^w.
struct Laurent {
  std::size_t h0, h1;
};
Laurent laurent_oracle(int n, int w) {
  std::size_t c0 = (w >= 0 ? 1u : 0u) + (w <= n ? 1u : 0u);
  std::size_t r = std::min<std::size_t>(c0, 1);
  return {c0 - r, 1 - r};
}

}  // namespace

TEST_CASE("Čech complex of P1 terms") {
  auto s = p1();
  auto c = cech::build_cech(line(s, 0));
  REQUIRE(c.length() == 3);
  CHECK(c.term_count(0) == 3);
  CHECK(c.term_count(1) == 3);
  CHECK(c.term_count(2) == 1);
  for (int p = 1; p < 3; ++p)
    for (const auto& ch : c.chains[static_cast<std::size_t>(p)]) CHECK(s->poset->name(ch.meet) == "0");
  auto blocks = cech::cech_blocks(c);
  CHECK(blocks.size() == 3 + 6 + 3);
}

TEST_CASE("resolution exactness and sign mutations") {
  auto s = p1();
  Window win;
  for (int n = -3; n <= 3; ++n) {
    auto c = cech::build_cech(line(s, n));
    auto rep = cech::resolution_exactness_check(c, win);
    CHECK_MESSAGE(rep.exact(), "O(", n, ")");
    CHECK(rep.positions_checked == 3 * 13 * 4);
    CHECK(rep.cap_warnings.empty());
    auto blocks = cech::cech_blocks(c);
    for (std::size_t b = 0; b < blocks.size(); ++b)
      CHECK_MESSAGE(!cech::resolution_exactness_check(c, win, cech::SignMutation{b}).exact(), "block ", b);
  }
}

TEST_CASE("one-open scheme") {
  coeff::ArtinRing r(Field::rationals(), 1);
  auto one = std::make_shared<scheme::MeetPoset>(std::vector<std::string>{"u"},
                                                 std::vector<std::pair<std::string, std::string>>{},
                                                 std::vector<scheme::MeetPoset::MeetEntry>{});
  auto s = std::make_shared<scheme::NcScheme>(
      scheme::make_scheme("pt", one, {fixtures::make_algebra("k[x]", {{"x", 1}}, {}, r)}, {}));
  auto m = std::make_shared<qcoh::LocallyFreeModule>("O", s, 1, std::vector<std::vector<Weight>>{{0}},
                                                     std::map<std::pair<int, int>, qcoh::PolyMatrix>{});
  auto c = cech::build_cech(m);
  CHECK(c.length() == 1);
  Window win;
  CHECK(cech::resolution_exactness_check(c, win).exact());
  auto e = cech::ext(m, m, win);
  CHECK(e.dim(0) == 7);  // x^0 .. x^6
  CHECK(e.dim(1) == 0);
}

TEST_CASE("line bundle cohomology against the Laurent count") {
  auto s = p1();
  auto o = line(s, 0);
  Window win;
  for (int n = -4; n <= 4; ++n) {
    auto e = cech::ext(o, line(s, n), win);
    CHECK(e.dd_failures.empty());
    for (Weight w : win.weights()) {
      auto want = laurent_oracle(n, w.primary);
      CHECK_MESSAGE(e.dim(0, w) == want.h0, "n=", n, " w=", w.primary);
      CHECK_MESSAGE(e.dim(1, w) == want.h1, "n=", n, " w=", w.primary);
      CHECK(e.dim(2, w) == 0);
    }
    CHECK(e.dim(0) == static_cast<std::size_t>(std::max(n + 1, 0)));
    CHECK(e.dim(1) == static_cast<std::size_t>(std::max(-n - 1, 0)));
    cech::HomComplex h(o, qcoh::ModuleComplex::single(line(s, n)));
    for (const auto& [w, chi] : cech::euler_characteristic(h, win))
      CHECK(chi == static_cast<long>(e.dim(0, w)) - static_cast<long>(e.dim(1, w)) + static_cast<long>(e.dim(2, w)));
  }
  cech::HomComplex h(o, qcoh::ModuleComplex::single(line(s, -2)));
  // the class of H^1(O(-2)) is z = x^-1, weight -1
  auto chi = cech::euler_characteristic(h, win);
  CHECK(chi.at(-1) == -1);
  CHECK(chi.at(0) == 0);
  long total = 0;
  for (const auto& [w, c] : chi) total += c;
  CHECK(total == -1);
}

TEST_CASE("enumeration invariance") {
  auto s = p1();
  Window win;
  auto f = std::make_shared<qcoh::LocallyFreeModule>(
      qcoh::direct_sum("O+O(-2)", fixtures::line_bundle(s, 0), fixtures::line_bundle(s, -2)));
  auto base = cech::ext(f, f, win);
  std::vector<int> perm{0, 1, 2};
  int count = 0;
  do {
    auto e = cech::ext(f, f, win, -1, perm);
    for (int p = 0; p < 3; ++p)
      for (Weight w : win.weights()) CHECK(e.dim(p, w) == base.dim(p, w));
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  CHECK(count == 6);
  CHECK(base.dim(0) == 5);  // 1 + 1 + 3 + 0, Hom(O(-2), O) = H0(O(2))
  CHECK(base.dim(1) == 1);
}

TEST_CASE("Ext of O + O(1)") {
  auto s = p1();
  Window win;
  auto f = std::make_shared<qcoh::LocallyFreeModule>(
      qcoh::direct_sum("T", fixtures::line_bundle(s, 0), fixtures::line_bundle(s, 1)));
  auto e = cech::ext(f, f, win);
  CHECK(e.dim(0) == 4);
  CHECK(e.dim(1) == 0);
  CHECK(e.dim(2) == 0);
  cech::HomComplex h(f, qcoh::ModuleComplex::single(f));
  CHECK(cech::graded_hom(h, 0).size() == 3);
  CHECK(cech::graded_hom(h, 1).size() == 1);
}

TEST_CASE("Hom into complexes") {
  auto s = p1();
  Window win;
  auto o = line(s, 0);
  auto shifted = qcoh::ModuleComplex::single(line(s, -2)).shifted(1);
  auto e = cech::ext(o, shifted, win);
  CHECK(e.dim(0) == 1);
  CHECK(e.dim(-1) == 0);

  qcoh::ModuleComplex k;
  k.name = "K";
  k.terms = {{-1, line(s, -1)}, {0, o}};
  k.maps[-1] = {qcoh::parse_matrix(*s->algebra(0), "1"), qcoh::parse_matrix(*s->algebra(1), "y"),
                qcoh::parse_matrix(*s->algebra(2), "1")};
  auto ek = cech::ext(o, k, win);
  CHECK(ek.dd_failures.empty());
  CHECK(ek.dim(-1) == 0);
  CHECK(ek.dim(0) == 1);
  CHECK(ek.dim(0, 0) == 1);
  CHECK(ek.dim(1) == 0);
}

TEST_CASE("trivial tower doubles dimensions") {
  auto s1 = p1(1), s2 = p1(2);
  Window win;
  for (int n = -3; n <= 3; ++n) {
    auto e1 = cech::ext(line(s1, 0), line(s1, n), win);
    auto e2 = cech::ext(line(s2, 0), line(s2, n), win);
    for (int p = 0; p < 3; ++p) {
      CHECK(e2.dim(p) == 2 * e1.dim(p));
      if (e2.dim(p) == 0) continue;
      auto pat = e2.rank_pattern(p, 2);
      CHECK(pat.is_free);
      CHECK(pat.rank == static_cast<int>(e1.dim(p)));
    }
  }
}
