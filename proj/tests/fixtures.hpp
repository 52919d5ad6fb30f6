#ifndef NCCECH_TEST_FIXTURES_HPP
#define NCCECH_TEST_FIXTURES_HPP

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nccech/qcoh.hpp"

namespace fixtures {

using namespace nccech;

inline algebra::AlgebraPtr make_algebra(const std::string& name,
                                        const std::vector<std::pair<std::string, Weight>>& letters,
                                        const std::vector<std::string>& rules, const coeff::ArtinRing& ring) {
  rewrite::Alphabet a;
  for (const auto& [n, w] : letters) a.add(n, w);
  std::vector<rewrite::RewriteRule> rs;
  for (const auto& r : rules) {
    auto arrow = r.find("->");
    rs.push_back({rewrite::parse_word(r.substr(0, arrow), a), rewrite::parse_poly(r.substr(arrow + 2), a, ring)});
  }
  return std::make_shared<algebra::GradedAlgebra>(name, rewrite::RewriteSystem(a, rs, ring));
}

inline algebra::AlgebraHom make_hom(const algebra::AlgebraPtr& src, const algebra::AlgebraPtr& dst,
                                    const std::vector<std::string>& images) {
  std::vector<rewrite::Poly> im;
  for (const auto& s : images) im.push_back(dst->parse(s));
  return algebra::AlgebraHom(src, dst, im);
}

// P^1 with charts k[x], k[y] and the Laurent overlap; elements declared in
// the order 1, 2, 0 so that i(1) = 1, i(2) = 2, i(3) = 0.
inline scheme::NcScheme p1(const coeff::ArtinRing& ring, const std::string& y_image = "z",
                           const std::string& x_image = "x") {
  const Weight wx = x_image == "x" ? 1 : 2;
  const Weight wy = y_image == "z" ? -1 : -2;
  auto poset = std::make_shared<scheme::MeetPoset>(
      std::vector<std::string>{"1", "2", "0"},
      std::vector<std::pair<std::string, std::string>>{{"0", "1"}, {"0", "2"}},
      std::vector<scheme::MeetPoset::MeetEntry>{{"1", "2", "0"}});
  auto a1 = make_algebra("k[x]", {{"x", wx}}, {}, ring);
  auto a2 = make_algebra("k[y]", {{"y", wy}}, {}, ring);
  auto a0 = make_algebra("k[x,z]", {{"x", 1}, {"z", -1}}, {"x*z -> 1", "z*x -> 1"}, ring);
  std::map<std::pair<int, int>, algebra::AlgebraHom> g;
  g.emplace(std::make_pair(2, 0), make_hom(a1, a0, {x_image}));
  g.emplace(std::make_pair(2, 1), make_hom(a2, a0, {y_image}));
  return scheme::make_scheme("P1", poset, {a1, a2, a0}, std::move(g));
}


// P^1 x A^1 with sx - xs = tx; x, z, y in the first weight component, s and t
// in the second.
inline scheme::NcScheme quantum_p1(const coeff::ArtinRing& ring) {
  auto poset = std::make_shared<scheme::MeetPoset>(
      std::vector<std::string>{"1", "2", "0"},
      std::vector<std::pair<std::string, std::string>>{{"0", "1"}, {"0", "2"}},
      std::vector<scheme::MeetPoset::MeetEntry>{{"1", "2", "0"}});
  auto a1 = make_algebra("A1", {{"x", {1, 0}}, {"s", {0, 1}}}, {"s*x -> x*s + t*x"}, ring);
  auto a2 = make_algebra("A2", {{"y", {-1, 0}}, {"s", {0, 1}}}, {"s*y -> y*s - t*y"}, ring);
  auto a0 = make_algebra("A0", {{"x", {1, 0}}, {"z", {-1, 0}}, {"s", {0, 1}}},
                         {"x*z -> 1", "z*x -> 1", "s*x -> x*s + t*x", "s*z -> z*s - t*z"}, ring);
  std::map<std::pair<int, int>, algebra::AlgebraHom> g;
  g.emplace(std::make_pair(2, 0), make_hom(a1, a0, {"x", "s"}));
  g.emplace(std::make_pair(2, 1), make_hom(a2, a0, {"z", "s"}));
  return scheme::make_scheme("quantum", poset, {a1, a2, a0}, std::move(g));
}

// O(n) on the P^1 fixture: trivial on chart 1, psi over the overlap x^n
// (z^-n when n < 0) from chart 2.
inline qcoh::LocallyFreeModule line_bundle(const std::shared_ptr<const scheme::NcScheme>& s, int n) {
  const auto& a0 = *s->algebra(2);
  std::string e = "1";
  for (int k = 0; k < (n < 0 ? -n : n); ++k) e += n < 0 ? "*z" : "*x";
  std::map<std::pair<int, int>, qcoh::PolyMatrix> psi;
  psi.emplace(std::make_pair(2, 0), qcoh::parse_matrix(a0, "1"));
  psi.emplace(std::make_pair(2, 1), qcoh::parse_matrix(a0, e));
  return qcoh::LocallyFreeModule("O(" + std::to_string(n) + ")", s, 1, {{0}, {-n}, {0}}, std::move(psi));
}

// Chain 0 < 1 < 2 < 3 with a side branch 0 < 4, every chart k[x]. With
// `bent`, phi_01 sends x to (1 + t) x.
inline scheme::NcScheme depth3(const coeff::ArtinRing& ring, bool bent) {
  auto poset = std::make_shared<scheme::MeetPoset>(
      std::vector<std::string>{"0", "1", "2", "3", "4"},
      std::vector<std::pair<std::string, std::string>>{{"0", "1"}, {"1", "2"}, {"2", "3"}, {"0", "4"}},
      std::vector<scheme::MeetPoset::MeetEntry>{{"1", "4", "0"}, {"2", "4", "0"}, {"3", "4", "0"}});
  std::vector<algebra::AlgebraPtr> as;
  for (int i = 0; i < 5; ++i) as.push_back(make_algebra("k[x]", {{"x", 1}}, {}, ring));
  std::map<std::pair<int, int>, algebra::AlgebraHom> g;
  g.emplace(std::make_pair(0, 1), make_hom(as[1], as[0], {bent ? "x + t*x" : "x"}));
  g.emplace(std::make_pair(1, 2), make_hom(as[2], as[1], {"x"}));
  g.emplace(std::make_pair(2, 3), make_hom(as[3], as[2], {"x"}));
  g.emplace(std::make_pair(0, 4), make_hom(as[4], as[0], {"x"}));
  return scheme::make_scheme("depth3", poset, as, std::move(g));
}

// Rank 2, generators in degrees 0 and 1, unipotent gluing on 1 < 2 and 2 < 3.
inline qcoh::LocallyFreeModule depth3_module(const std::shared_ptr<const scheme::NcScheme>& s) {
  std::map<std::pair<int, int>, qcoh::PolyMatrix> psi;
  psi.emplace(std::make_pair(0, 1), qcoh::parse_matrix(*s->algebra(0), "1, 0; 0, 1"));
  psi.emplace(std::make_pair(1, 2), qcoh::parse_matrix(*s->algebra(1), "1, x; 0, 1"));
  psi.emplace(std::make_pair(2, 3), qcoh::parse_matrix(*s->algebra(2), "1, x; 0, 1"));
  psi.emplace(std::make_pair(0, 4), qcoh::parse_matrix(*s->algebra(0), "1, 0; 0, 1"));
  std::vector<std::vector<Weight>> sh(5, std::vector<Weight>{0, -1});
  return qcoh::LocallyFreeModule("E", s, 2, sh, std::move(psi));
}

// Vertices 1, 2, 3 (algebra k), edges 12, 13, 23 (k[c]/c^2) and a bottom 0
// (k<c, d> modulo all quadratic words). With `bent`, phi_{0,12}(c) = c + t d.
inline scheme::NcScheme hexagon(const coeff::ArtinRing& ring, bool bent) {
  auto poset = std::make_shared<scheme::MeetPoset>(
      std::vector<std::string>{"1", "2", "3", "12", "13", "23", "0"},
      std::vector<std::pair<std::string, std::string>>{{"12", "1"}, {"12", "2"}, {"13", "1"}, {"13", "3"},
                                                       {"23", "2"}, {"23", "3"}, {"0", "12"}, {"0", "13"},
                                                       {"0", "23"}},
      std::vector<scheme::MeetPoset::MeetEntry>{{"1", "2", "12"},  {"1", "3", "13"},   {"2", "3", "23"},
                                                {"12", "13", "0"}, {"12", "23", "0"}, {"13", "23", "0"},
                                                {"1", "23", "0"},  {"2", "13", "0"},  {"3", "12", "0"}});
  std::vector<algebra::AlgebraPtr> as;
  for (int i = 0; i < 3; ++i) as.push_back(make_algebra("k", {}, {}, ring));
  for (int i = 0; i < 3; ++i) as.push_back(make_algebra("k[c]/c^2", {{"c", 0}}, {"c*c -> 0"}, ring));
  as.push_back(make_algebra("k<c,d>/(c,d)^2", {{"c", 0}, {"d", 0}},
                            {"c*c -> 0", "c*d -> 0", "d*c -> 0", "d*d -> 0"}, ring));
  std::map<std::pair<int, int>, algebra::AlgebraHom> g;
  const int edge[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int e = 0; e < 3; ++e) {
    for (int v : edge[e]) g.emplace(std::make_pair(3 + e, v), make_hom(as[static_cast<std::size_t>(v)], as[3 + e], {}));
    g.emplace(std::make_pair(6, 3 + e), make_hom(as[3 + e], as[6], {bent && e == 0 ? "c + t*d" : "c"}));
  }
  return scheme::make_scheme("hexagon", poset, as, std::move(g));
}

// Line bundle twisted by 1 + c on the two edges through vertex 1.
inline qcoh::LocallyFreeModule hexagon_module(const std::shared_ptr<const scheme::NcScheme>& s) {
  std::map<std::pair<int, int>, qcoh::PolyMatrix> psi;
  const int edge[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (int e = 0; e < 3; ++e) {
    for (int v : edge[e])
      psi.emplace(std::make_pair(3 + e, v), qcoh::parse_matrix(*s->algebra(3 + e), v == 0 && e < 2 ? "1 + c" : "1"));
    psi.emplace(std::make_pair(6, 3 + e), qcoh::parse_matrix(*s->algebra(6), "1"));
  }
  std::vector<std::vector<Weight>> sh(7, std::vector<Weight>{0});
  return qcoh::LocallyFreeModule("L", s, 1, sh, std::move(psi));
}

}  // namespace fixtures

#endif
