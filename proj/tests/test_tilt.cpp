#include "doctest.h"
#include "fixtures.hpp"
#include "nccech/deform.hpp"
#include "nccech/tilt.hpp"

using namespace nccech;

namespace {

using SchemePtr = std::shared_ptr<const scheme::NcScheme>;

SchemePtr p1(int order = 1) {
  return std::make_shared<scheme::NcScheme>(fixtures::p1(coeff::ArtinRing(Field::rationals(), order)));
}

qcoh::ModulePtr line(const SchemePtr& s, int n) {
  return std::make_shared<qcoh::LocallyFreeModule>(fixtures::line_bundle(s, n));
}

qcoh::ModulePtr sum(const qcoh::ModulePtr& a, const qcoh::ModulePtr& b) {
  return std::make_shared<qcoh::LocallyFreeModule>(qcoh::direct_sum(a->name() + "+" + b->name(), *a, *b));
}

// Sections of End(O + O(1)) by hand on the charts k[x], k[y], k[x, z].
tilt::Endo hand(const SchemePtr& s, Weight w, const std::string& c0, const std::string& c1, const std::string& c2) {
  return {w,
          {qcoh::parse_matrix(*s->algebra(0), c0), qcoh::parse_matrix(*s->algebra(1), c1),
           qcoh::parse_matrix(*s->algebra(2), c2)}};
}

}  // namespace

TEST_CASE("pretilting verdicts on P1") {
  auto s = p1();
  Window win;
  auto t = tilt::pretilting_check(sum(line(s, 0), line(s, 1)), 5, win);
  CHECK(t.pretilting);
  CHECK(t.pmax == 2);
  CHECK(t.warnings.empty());
  auto bad = tilt::pretilting_check(sum(line(s, 0), line(s, -2)), 5, win);
  CHECK_FALSE(bad.pretilting);
  std::size_t e1 = 0;
  for (const auto& [key, d] : bad.ext)
    if (key.first == 1) e1 += d;
  CHECK(e1 == 1);
  CHECK(tilt::pretilting_check(line(s, 0), 5, win).pretilting);
}

TEST_CASE("end algebra of O is k") {
  auto s = p1();
  auto e = tilt::end_algebra(line(s, 0), Window{});
  CHECK(e.dim() == 1);
  CHECK(e.unit() == Vec{1});
  CHECK(e.axiom_failures().empty());
}

TEST_CASE("Kronecker algebra from O + O(1)") {
  auto s = p1();
  Window win;
  auto e = tilt::end_algebra(sum(line(s, 0), line(s, 1)), win);
  REQUIRE(e.dim() == 4);
  CHECK(e.axiom_failures().empty());
  CHECK(e.warnings().empty());

  // hand-coded sections; a_1 and a_2 are 1 and x on the first chart
  auto e1 = hand(s, 0, "1, 0; 0, 0", "1, 0; 0, 0", "1, 0; 0, 0");
  auto e2 = hand(s, 0, "0, 0; 0, 1", "0, 0; 0, 1", "0, 0; 0, 1");
  auto a1 = hand(s, 0, "0, 0; 1, 0", "0, 0; y, 0", "0, 0; 1, 0");
  auto a2 = hand(s, 1, "0, 0; x, 0", "0, 0; 1, 0", "0, 0; x, 0");
  std::vector<Vec> c;
  for (const auto* x : {&e1, &e2, &a1, &a2}) {
    auto v = e.coordinates(*x);
    REQUIRE(v);
    c.push_back(*v);
  }
  CHECK(rank(Matrix::from_columns(c, 4), Field::rationals()) == 4);
  // e_1 e_2 = e_2 e_1 = 0, e_i^2 = e_i, e_2 a_i e_1 = a_i, every other product zero
  const Vec z(4);
  const Vec* expect[4][4] = {{&c[0], &z, &z, &z}, {&z, &c[1], &c[2], &c[3]}, {&c[2], &z, &z, &z}, {&c[3], &z, &z, &z}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK_MESSAGE(e.multiply(c[i], c[j]) == *expect[i][j], i << " * " << j);
  Vec sum_e(4);
  for (int i = 0; i < 4; ++i) sum_e[i] = c[0][i] + c[1][i];
  CHECK(sum_e == e.unit());
}

TEST_CASE("trivial tower end algebra is free") {
  Window win;
  auto s1 = p1(1), s2 = p1(2);
  auto e0 = tilt::end_algebra(sum(line(s1, 0), line(s1, 1)), win);
  auto e = tilt::end_algebra(sum(line(s2, 0), line(s2, 1)), win);
  CHECK(e.dim() == 8);
  CHECK(e.axiom_failures().empty());
  auto v = tilt::flatness_check(e, &e0);
  CHECK(v.flat);
  CHECK(v.pattern.rank == 4);
  CHECK(v.generated_dim == 8);
  REQUIRE(v.reduction_matches);
  CHECK(*v.reduction_matches);
  CHECK(v.reduction_failures.empty());

  auto v1 = tilt::flatness_check(e0);
  CHECK(v1.flat);
  CHECK(v1.pattern.rank == 4);

  // t killing one basis element is not a free pattern
  Matrix bent = e.t_action();
  for (std::size_t c = 0; c < bent.cols(); ++c)
    if (!is_zero(bent.column(c))) {
      for (std::size_t r = 0; r < bent.rows(); ++r) bent.at(r, c) = 0;
      break;
    }
  CHECK_FALSE(coeff::flat_rank_pattern(bent, 2, Field::rationals()).is_free);
}

TEST_CASE("generation witnesses") {
  Window win;
  auto s = p1(2);
  auto f = sum(line(s, 0), line(s, 1));
  auto g1 = tilt::generation_check(f, qcoh::ModuleComplex::single(line(s, -1)), win);
  REQUIRE(g1.witness);
  CHECK(*g1.witness == 1);
  auto g2 = tilt::generation_check(f, qcoh::ModuleComplex::single(line(s, -2)).shifted(1), win);
  REQUIRE(g2.witness);
  CHECK(*g2.witness == 0);
  auto g3 = tilt::generation_check(f, qcoh::ModuleComplex::single(sum(line(s, 0), line(s, 3))), win);
  REQUIRE(g3.witness);
  CHECK(*g3.witness == 0);
  auto self = tilt::generation_check(f, qcoh::ModuleComplex::single(f), win);
  REQUIRE(self.witness);
  CHECK(*self.witness == 0);

  auto s1 = p1(1);
  for (int r : {2, 6, 10}) {
    Window w{{-r, 0}, {r, 0}, 16};
    auto neg = tilt::generation_check(line(s1, 0), qcoh::ModuleComplex::single(line(s1, -1)), w);
    CHECK_FALSE(neg.witness);
    CHECK(neg.dims.empty());
  }
}

TEST_CASE("Phi images carry a right E-action") {
  Window win;
  auto s = p1();
  auto e = tilt::end_algebra(sum(line(s, 0), line(s, 1)), win);
  struct Case {
    int n;
    std::size_t h0, h1;
  };
  for (const auto& cs : {Case{0, 1, 0}, Case{1, 3, 0}, Case{-1, 0, 1}}) {
    auto img = tilt::phi_image(e, qcoh::ModuleComplex::single(line(s, cs.n)), win);
    CHECK(img.dim(0) == cs.h0);
    CHECK(img.dim(1) == cs.h1);
    CHECK(img.action_failures.empty());
    CHECK(img.warnings.empty());
    CHECK(img.euler == static_cast<long>(cs.h0) - static_cast<long>(cs.h1));
    CHECK(img.euler == img.euler_from_terms);
    for (const auto& d : img.degrees) CHECK(d.e_action.size() == e.dim());
  }
  // e_1 acts on Phi(O) as the identity, e_2 as zero
  auto img = tilt::phi_image(e, qcoh::ModuleComplex::single(line(s, 0)), win);
  auto c1 = e.coordinates(hand(s, 0, "1, 0; 0, 0", "1, 0; 0, 0", "1, 0; 0, 0"));
  REQUIRE(c1);
  Matrix act(1, 1);
  for (std::size_t a = 0; a < e.dim(); ++a) act.at(0, 0) += (*c1)[a] * img.degrees.at(0).e_action[a].at(0, 0);
  CHECK(act.at(0, 0) == 1);
}

TEST_CASE("quantum tower: pretilting extension to level 3") {
  Window win{{-6, 0}, {6, 2}, 16};
  std::vector<SchemePtr> levels;
  for (int n = 1; n <= 3; ++n)
    levels.push_back(
        std::make_shared<scheme::NcScheme>(fixtures::quantum_p1(coeff::ArtinRing(Field::rationals(), n, {0, 1}))));
  auto f0 = sum(line(levels[0], 0), line(levels[0], 1));
  auto run = deform::run_tower(levels, f0, win);
  CHECK(run.tower_defects.empty());
  CHECK(run.obstructed_level == 0);
  REQUIRE(run.levels.size() == 2);
  for (const auto& lv : run.levels) {
    REQUIRE(lv.certificate);
    CHECK(lv.certificate->cocycle_ok);
    CHECK(lv.certificate->reduces);
  }
  auto e0 = tilt::end_algebra(f0, win);
  CHECK(e0.dim() == 12);
  for (int n = 2; n <= 3; ++n) {
    auto fn = n == 3 ? run.top : run.levels[0].certificate->module;
    auto pt = tilt::pretilting_check(fn, 2, win);
    CHECK(pt.pretilting);
    auto e = tilt::end_algebra(fn, win);
    CHECK(e.axiom_failures().empty());
    auto v = tilt::flatness_check(e, &e0);
    CHECK(v.flat);
    CHECK(v.generated_dim == static_cast<std::size_t>(n) * e0.dim());
    CHECK(v.pattern.rank == static_cast<int>(e0.dim()));
    REQUIRE(v.reduction_matches);
    CHECK(*v.reduction_matches);
  }
}
