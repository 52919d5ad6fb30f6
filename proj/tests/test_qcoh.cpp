#include "doctest.h"
#include "fixtures.hpp"
#include "nccech/error.hpp"

using namespace nccech;
using qcoh::PolyMatrix;

namespace {
coeff::ArtinRing ring(int n) { return coeff::ArtinRing(Field::rationals(), n, {0, 1}); }

std::shared_ptr<const scheme::NcScheme> p1() { return std::make_shared<scheme::NcScheme>(fixtures::p1(ring(1))); }

// sections of O(d) on P^1 in weight w: x^w on chart 1 glued to y^(d-w)
std::size_t laurent_count(int d, int w) { return (w >= 0 && w <= d) ? 1 : 0; }
}  // namespace

TEST_CASE("line bundles are valid modules") {
  auto s = p1();
  for (int n = -3; n <= 3; ++n) {
    auto m = fixtures::line_bundle(s, n);
    auto rep = qcoh::validate_module(m);
    CHECK_MESSAGE(rep.valid(), "O(", n, ")");
    REQUIRE(m.psi_inverse(2, 1) != nullptr);
    auto prod = qcoh::mat_mul(*s->algebra(2), m.psi(2, 1), *m.psi_inverse(2, 1));
    CHECK(prod == PolyMatrix::identity(1));
  }
  auto sum = qcoh::direct_sum("O+O(1)", fixtures::line_bundle(s, 0), fixtures::line_bundle(s, 1));
  CHECK(sum.rank() == 2);
  CHECK(qcoh::validate_module(sum).valid());
  CHECK(qcoh::format_matrix(*s->algebra(2), sum.psi(2, 1)) == "1, 0; 0, x");
}

TEST_CASE("module defects are reported") {
  auto s = p1();
  const auto& a0 = *s->algebra(2);
  std::map<std::pair<int, int>, PolyMatrix> psi;
  psi.emplace(std::make_pair(2, 0), PolyMatrix::identity(2));
  psi.emplace(std::make_pair(2, 1), qcoh::parse_matrix(a0, "x, 0; 0, 0"));
  qcoh::LocallyFreeModule bad("bad", s, 2, {{0, 0}, {-1, 0}, {0, 0}}, psi);
  auto rep = qcoh::validate_module(bad);
  REQUIRE(rep.defects.size() == 1);
  CHECK(rep.defects[0].kind == "invertibility");

  psi[{2, 1}] = qcoh::parse_matrix(a0, "x + 1, 0; 0, 1");
  qcoh::LocallyFreeModule inh("inh", s, 2, {{0, 0}, {-1, 0}, {0, 0}}, psi);
  bool saw = false;
  for (const auto& d : qcoh::validate_module(inh).defects) saw = saw || d.kind == "homogeneity";
  CHECK(saw);

  CHECK_THROWS_AS(qcoh::LocallyFreeModule("x", s, 1, {{0}, {0}}, {}), Error);
  CHECK_THROWS_AS(qcoh::parse_matrix(a0, "1, 0; 1"), Error);
}

TEST_CASE("global homs between line bundles") {
  auto s = p1();
  Window win;
  for (int a = -2; a <= 2; ++a)
    for (int b = -2; b <= 2; ++b) {
      auto ma = fixtures::line_bundle(s, a), mb = fixtures::line_bundle(s, b);
      for (int w = win.lo.primary; w <= win.hi.primary; ++w) {
        auto h = qcoh::direct_hom(ma, mb, w, win.length_cap);
        CHECK_MESSAGE(h.basis.size() == laurent_count(b - a, w), "a=", a, " b=", b, " w=", w);
      }
    }
  // additivity over a direct sum
  auto sum = qcoh::direct_sum("O+O(1)", fixtures::line_bundle(s, 0), fixtures::line_bundle(s, 1));
  auto o2 = fixtures::line_bundle(s, 2);
  for (int w = -1; w <= 4; ++w)
    CHECK(qcoh::direct_hom(sum, o2, w, 16).basis.size() == laurent_count(2, w) + laurent_count(1, w));
}

TEST_CASE("pushforward and restriction") {
  auto s = p1();
  auto m = std::make_shared<qcoh::LocallyFreeModule>(fixtures::line_bundle(s, 2));
  const auto& P = *s->poset;
  for (int i = 0; i < 3; ++i) {
    auto pf = qcoh::pushforward(m, i);
    CHECK(pf.component(i) == i);
    for (int j = 0; j < 3; ++j) {
      CHECK(qcoh::pushforward(pf, j).origin == P.meet(i, j));
      auto r = qcoh::restriction(*m, i);
      CHECK(r[static_cast<std::size_t>(i)].matrix == PolyMatrix::identity(1));
      // r_j on [M_i] after r_i is r_{i n j}
      auto rj = qcoh::restriction(pf, j);
      auto rij = qcoh::restriction(*m, P.meet(i, j));
      for (int c = 0; c < 3; ++c) {
        const auto& first = r[static_cast<std::size_t>(c)];
        const auto& second = rj[static_cast<std::size_t>(c)];
        int q = second.target_component;
        auto composed = qcoh::mat_mul(*s->algebra(q), second.matrix,
                                      qcoh::mat_map(s->phi(q, first.target_component), first.matrix));
        CHECK(q == rij[static_cast<std::size_t>(c)].target_component);
        CHECK(composed == rij[static_cast<std::size_t>(c)].matrix);
      }
    }
  }
}

TEST_CASE("adjunction against local homs") {
  auto s = p1();
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 2; ++b) {
      auto ma = fixtures::line_bundle(s, a);
      auto mb = std::make_shared<qcoh::LocallyFreeModule>(fixtures::line_bundle(s, b));
      for (int site = 0; site < 3; ++site)
        for (int w = -4; w <= 4; ++w) {
          auto h = qcoh::direct_hom(ma, qcoh::pushforward(mb, site), w, 16);
          CHECK_MESSAGE(h.basis.size() == qcoh::local_hom_dim(ma, *mb, site, w, 16), "a=", a, " b=", b,
                        " s=", site, " w=", w);
        }
    }
}

TEST_CASE("complexes of modules") {
  auto s = p1();
  auto o = std::make_shared<qcoh::LocallyFreeModule>(fixtures::line_bundle(s, 0));
  auto om = std::make_shared<qcoh::LocallyFreeModule>(fixtures::line_bundle(s, -1));
  qcoh::ModuleComplex x;
  x.name = "K";
  x.terms = {{-1, om}, {0, o}};
  x.maps[-1] = {qcoh::parse_matrix(*s->algebra(0), "1"), qcoh::parse_matrix(*s->algebra(1), "y"),
                qcoh::parse_matrix(*s->algebra(2), "1")};
  CHECK(qcoh::validate_complex(x).valid());
  auto sh = x.shifted(1);
  CHECK(sh.terms.count(-2) == 1);
  CHECK(qcoh::format_matrix(*s->algebra(1), sh.maps.at(-2)[1]) == "-y");
  CHECK(qcoh::validate_complex(sh).valid());
  CHECK(x.differential(0, 0).rows == 0);

  x.maps[-1][1] = qcoh::parse_matrix(*s->algebra(1), "2*y");
  CHECK_FALSE(qcoh::validate_complex(x).valid());
  x.maps[-1][1] = qcoh::parse_matrix(*s->algebra(1), "1");
  CHECK_FALSE(qcoh::validate_complex(x).valid());
}
