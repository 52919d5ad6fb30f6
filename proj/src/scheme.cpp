#include "nccech/scheme.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "nccech/error.hpp"

namespace nccech::scheme {

MeetPoset::MeetPoset(std::vector<std::string> names, const std::vector<std::pair<std::string, std::string>>& less,
                     const std::vector<MeetEntry>& meets)
    : names_(std::move(names)) {
  const std::size_t d = names_.size();
  if (d == 0) throw Error(ErrorKind::InvalidArgument, "poset has no elements");
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (names_[i] == names_[j]) throw Error(ErrorKind::InvalidArgument, "duplicate poset element " + names_[i]);
  leq_.assign(d * d, false);
  for (std::size_t i = 0; i < d; ++i) leq_[i * d + i] = true;
  auto idx = [&](const std::string& n) {
    int i = index(n);
    if (i < 0) throw Error(ErrorKind::Reference, "unknown poset element '" + n + "'");
    return static_cast<std::size_t>(i);
  };
  for (const auto& [a, b] : less) leq_[idx(a) * d + idx(b)] = true;
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < d; ++i)
      if (leq_[i * d + k])
        for (std::size_t j = 0; j < d; ++j)
          if (leq_[k * d + j]) leq_[i * d + j] = true;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j)
      if (leq_[i * d + j] && leq_[j * d + i])
        throw Error(ErrorKind::InvalidArgument, "order relation has a cycle through " + names_[i] + " and " + names_[j]);

  meet_.assign(d * d, -1);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      if (leq_[i * d + j]) meet_[i * d + j] = static_cast<int>(i);
      if (leq_[j * d + i]) meet_[i * d + j] = static_cast<int>(j);
    }
  for (const auto& m : meets) {
    std::size_t a = idx(m.a), b = idx(m.b), c = idx(m.meet);
    if (!leq_[c * d + a] || !leq_[c * d + b])
      throw Error(ErrorKind::InvalidArgument, "meet " + m.a + " " + m.b + " = " + m.meet + " is not a lower bound");
    for (std::size_t l = 0; l < d; ++l)
      if (leq_[l * d + a] && leq_[l * d + b] && !leq_[l * d + c])
        throw Error(ErrorKind::InvalidArgument, "meet " + m.a + " " + m.b + " = " + m.meet +
                                                    " is not the greatest lower bound (" + names_[l] + ")");
    if (meet_[a * d + b] >= 0 && meet_[a * d + b] != static_cast<int>(c))
      throw Error(ErrorKind::InvalidArgument, "meet " + m.a + " " + m.b + " contradicts the order");
    meet_[a * d + b] = meet_[b * d + a] = static_cast<int>(c);
  }
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j)
      if (meet_[i * d + j] < 0)
        throw Error(ErrorKind::InvalidArgument, "missing meet for " + names_[i] + " and " + names_[j]);
}

int MeetPoset::index(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<int>(i);
  return -1;
}

int MeetPoset::meet(const std::vector<int>& elems) const {
  if (elems.empty()) throw Error(ErrorKind::InvalidArgument, "meet of an empty tuple");
  int m = elems.front();
  for (int e : elems) m = meet(m, e);
  return m;
}

std::vector<int> default_enumeration(const MeetPoset& p) {
  std::vector<int> e(p.size());
  std::iota(e.begin(), e.end(), 0);
  return e;
}

std::vector<Chain> enumerate_chains(const MeetPoset& p, int degree, const std::vector<int>& enumeration) {
  const int d = static_cast<int>(p.size());
  if (degree < 0 || degree >= d)
    throw Error(ErrorKind::InvalidArgument, "chain degree " + std::to_string(degree) + " out of range [0, " +
                                                std::to_string(d - 1) + "]");
  if (static_cast<int>(enumeration.size()) != d) throw Error(ErrorKind::InvalidArgument, "enumeration size mismatch");
  std::vector<Chain> out;
  std::vector<int> pos(static_cast<std::size_t>(degree + 1));
  std::iota(pos.begin(), pos.end(), 1);
  while (true) {
    Chain c;
    c.positions = pos;
    for (int j : pos) c.elements.push_back(enumeration[static_cast<std::size_t>(j - 1)]);
    c.meet = p.meet(c.elements);
    out.push_back(std::move(c));
    int k = degree;
    while (k >= 0 && pos[static_cast<std::size_t>(k)] == d - degree + k) --k;
    if (k < 0) break;
    ++pos[static_cast<std::size_t>(k)];
    for (int m = k + 1; m <= degree; ++m) pos[static_cast<std::size_t>(m)] = pos[static_cast<std::size_t>(m - 1)] + 1;
  }
  return out;
}

std::vector<Chain> enumerate_chains(const MeetPoset& p, int degree) {
  return enumerate_chains(p, degree, default_enumeration(p));
}

std::vector<std::vector<int>> order_chains(const MeetPoset& p, int length) {
  std::vector<std::vector<int>> out;
  if (length < 1) return out;
  const int d = static_cast<int>(p.size());
  std::vector<int> cur;
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(cur.size()) == length) {
      out.push_back(cur);
      return;
    }
    for (int e = 0; e < d; ++e) {
      if (!cur.empty() && !p.less(cur.back(), e)) continue;
      cur.push_back(e);
      self(self);
      cur.pop_back();
    }
  };
  rec(rec);
  return out;
}

const AlgebraHom& NcScheme::phi(int i, int j) const {
  if (i == j) return identities_.at(static_cast<std::size_t>(i));
  auto it = gluings.find({i, j});
  if (it == gluings.end())
    throw Error(ErrorKind::InvalidArgument, "no gluing between " + poset->name(i) + " and " + poset->name(j));
  return it->second;
}

NcScheme make_scheme(std::string name, std::shared_ptr<const MeetPoset> poset, std::vector<AlgebraPtr> algebras,
                     std::map<std::pair<int, int>, AlgebraHom> gluings) {
  NcScheme s;
  s.name = std::move(name);
  s.poset = std::move(poset);
  const int d = static_cast<int>(s.poset->size());
  if (static_cast<int>(algebras.size()) != d)
    throw Error(ErrorKind::InvalidArgument, "scheme " + s.name + ": one chart per poset element required");
  s.ring = algebras.front()->ring();
  for (int i = 0; i < d; ++i) {
    const auto& a = algebras[static_cast<std::size_t>(i)];
    if (!(a->ring() == s.ring)) throw Error(ErrorKind::Mismatch, "scheme " + s.name + ": charts over different rings");
    s.identities_.push_back(AlgebraHom::identity(a));
  }
  for (const auto& [key, h] : gluings) {
    auto [i, j] = key;
    if (!s.poset->less(i, j))
      throw Error(ErrorKind::InvalidArgument, "gluing " + s.poset->name(i) + " " + s.poset->name(j) +
                                                  ": requires " + s.poset->name(i) + " < " + s.poset->name(j));
    if (h.source() != algebras[static_cast<std::size_t>(j)] || h.target() != algebras[static_cast<std::size_t>(i)])
      throw Error(ErrorKind::Mismatch, "gluing " + s.poset->name(i) + " " + s.poset->name(j) + ": wrong charts");
  }
  s.algebras = std::move(algebras);
  s.gluings = std::move(gluings);
  bool progress = true;
  while (progress) {
    progress = false;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        if (!s.poset->less(i, j) || s.gluings.count({i, j})) continue;
        for (int k = 0; k < d; ++k) {
          if (!s.poset->less(i, k) || !s.poset->less(k, j)) continue;
          auto a = s.gluings.find({i, k});
          auto b = s.gluings.find({k, j});
          if (a == s.gluings.end() || b == s.gluings.end()) continue;
          s.gluings.emplace(std::make_pair(i, j), algebra::compose_hom(a->second, b->second));
          progress = true;
          break;
        }
      }
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (s.poset->less(i, j) && !s.gluings.count({i, j}))
        throw Error(ErrorKind::InvalidArgument, "scheme " + s.name + ": missing gluing " + s.poset->name(i) + " " +
                                                    s.poset->name(j));
  return s;
}

bool SchemeReport::valid() const {
  if (!hom_failures.empty() || !confluence_failures.empty() || !cocycle_failures.empty() ||
      !surjectivity_failures.empty())
    return false;
  for (const auto& t : tensor_checks)
    if (!t.matches) return false;
  return true;
}

namespace {

// Weights of a box enlarged by its own width on both sides.
std::vector<Weight> expanded_weights(const Window& w) {
  Window e = w;
  Weight width = w.hi - w.lo;
  e.lo = w.lo - width;
  e.hi = w.hi + width;
  return e.weights();
}

}  // namespace

SchemeReport validate_scheme(const NcScheme& s, const Window& window) {
  SchemeReport rep;
  const MeetPoset& P = *s.poset;
  const int d = static_cast<int>(P.size());
  rep.confluence_bound = window.hi.primary + (window.hi.primary - window.lo.primary);

  for (int i = 0; i < d; ++i) {
    auto c = s.algebra(i)->presentation().check_local_confluence(rep.confluence_bound);
    if (!c.confluent()) rep.confluence_failures.emplace_back(P.name(i), std::move(c));
  }
  for (const auto& [key, h] : s.gluings) {
    auto r = algebra::check_hom(h, std::numeric_limits<int>::max());
    if (!r.valid()) rep.hom_failures.emplace_back(P.name(key.first) + "<" + P.name(key.second), std::move(r));
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        if (!P.less(i, j) || !P.less(j, k)) continue;
        ++rep.cocycle_checks;
        AlgebraHom comp = algebra::compose_hom(s.phi(i, j), s.phi(j, k));
        const AlgebraHom& direct = s.phi(i, k);
        const auto& src = *s.algebra(k);
        for (std::size_t l = 0; l < src.alphabet().size(); ++l)
          if (comp.images()[l] != direct.images()[l])
            rep.cocycle_failures.push_back({i, j, k, src.alphabet().name(static_cast<rewrite::Letter>(l)),
                                            s.algebra(i)->format(comp.images()[l]),
                                            s.algebra(i)->format(direct.images()[l])});
      }

  const int cap = window.length_cap;
  const auto targets = window.weights();
  const auto factors = expanded_weights(window);
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      if (P.comparable(j, k)) continue;
      const int i = P.meet(j, k);
      const auto& Ai = *s.algebra(i);
      const auto& hj = s.phi(i, j);
      const auto& hk = s.phi(i, k);
      for (Weight w : targets) {
        const auto& bi = Ai.basis(w, cap);
        if (bi.cap_insufficient)
          rep.cap_warnings.push_back(Ai.name() + " at weight " + w.to_string() + ": length cap reached");
        if (bi.dim() == 0) continue;
        ++rep.surjectivity_checks;
        std::vector<Vec> span;
        bool overflow = false;
        for (Weight u : factors) {
          const auto& bj = s.algebra(j)->basis(u, cap);
          const auto& bk = s.algebra(k)->basis(w - u, cap);
          for (const auto& mj : bj.monomials)
            for (const auto& mk : bk.monomials) {
              if (mj.tpow + mk.tpow >= s.ring.order()) continue;
              Poly a = hj.apply(rewrite::monomial_poly(mj.word, mj.tpow));
              Poly b = hk.apply(rewrite::monomial_poly(mk.word, mk.tpow));
              Poly prod = Ai.multiply(a, b);
              try {
                span.push_back(Ai.coordinates(prod, w, cap));
              } catch (const Error&) {
                overflow = true;
              }
            }
        }
        if (overflow)
          rep.cap_warnings.push_back("products into " + Ai.name() + " at weight " + w.to_string() +
                                     " leave the enumerated basis");
        std::size_t r = span.empty() ? 0 : rank(Matrix::from_columns(span, bi.dim()), s.ring.field());
        if (r < bi.dim()) rep.surjectivity_failures.push_back({j, k, i, w, bi.dim(), r});
      }
    }

  for (const auto& t : s.tensor_assumptions) {
    TensorCheck c;
    c.assumption = t;
    c.meet = P.meet(t.j, t.k);
    c.computed = s.algebra(c.meet)->basis(t.weight, cap).dim();
    c.matches = c.computed == t.dim;
    rep.tensor_checks.push_back(c);
  }
  return rep;
}

rewrite::Poly reduce_poly(const rewrite::Poly& p, const coeff::ArtinRing& target) {
  return rewrite::truncate(p, target);
}

bool TowerReport::valid() const {
  for (const auto& l : levels)
    if (!l.valid()) return false;
  return flatness_failures.empty() && reduction_failures.empty();
}

TowerReport validate_tower(const DeformationTower& t, const Window& window) {
  TowerReport rep;
  for (const auto& lvl : t.levels) rep.levels.push_back(validate_scheme(lvl, window));
  if (t.levels.empty()) return rep;
  const NcScheme& base = t.level(1);
  if (base.ring.order() != 1) rep.reduction_failures.push_back({1, "level 1 is not over the base field"});
  const Weight tw = base.ring.t_weight();
  for (int n = 1; n <= t.top(); ++n) {
    const NcScheme& S = t.level(n);
    if (S.ring.order() != n) {
      rep.reduction_failures.push_back({n, "level " + std::to_string(n) + " has ring order " +
                                               std::to_string(S.ring.order())});
      continue;
    }
    for (std::size_t i = 0; i < S.size(); ++i)
      for (Weight w : window.weights()) {
        std::size_t dim = S.algebras[i]->basis(w, window.length_cap).dim();
        std::size_t expected = 0;
        for (int j = 0; j < n; ++j) expected += base.algebras[i]->basis(w - tw * j, window.length_cap).dim();
        if (dim != expected) rep.flatness_failures.push_back({n, S.algebras[i]->name(), w, dim, expected});
      }
  }
  for (int n = 1; n < t.top(); ++n) {
    const NcScheme& lo = t.level(n);
    const NcScheme& hi = t.level(n + 1);
    if (lo.size() != hi.size()) {
      rep.reduction_failures.push_back({n + 1, "chart count differs"});
      continue;
    }
    for (std::size_t i = 0; i < lo.size(); ++i) {
      const auto& rl = lo.algebras[i]->presentation().rules();
      const auto& rh = hi.algebras[i]->presentation().rules();
      const std::string nm = lo.poset->name(static_cast<int>(i));
      if (!(lo.algebras[i]->alphabet() == hi.algebras[i]->alphabet()) || rl.size() != rh.size()) {
        rep.reduction_failures.push_back({n + 1, "chart " + nm + ": presentations differ in shape"});
        continue;
      }
      for (std::size_t r = 0; r < rl.size(); ++r)
        if (rl[r].lhs != rh[r].lhs || reduce_poly(rh[r].rhs, lo.ring) != rl[r].rhs)
          rep.reduction_failures.push_back({n + 1, "chart " + nm + " rule " + std::to_string(r + 1) + ": " +
                                                       lo.algebras[i]->format(reduce_poly(rh[r].rhs, lo.ring)) +
                                                       " vs " + lo.algebras[i]->format(rl[r].rhs)});
    }
    for (const auto& [key, h] : hi.gluings) {
      auto it = lo.gluings.find(key);
      const std::string nm = "gluing " + lo.poset->name(key.first) + " " + lo.poset->name(key.second);
      if (it == lo.gluings.end()) {
        rep.reduction_failures.push_back({n + 1, nm + ": absent at the lower level"});
        continue;
      }
      const auto& src = *h.source();
      for (std::size_t l = 0; l < h.images().size(); ++l) {
        Poly red = reduce_poly(h.images()[l], lo.ring);
        if (red != it->second.images()[l])
          rep.reduction_failures.push_back({n + 1, nm + " letter " +
                                                       src.alphabet().name(static_cast<rewrite::Letter>(l)) + ": " +
                                                       it->second.target()->format(red) + " vs " +
                                                       it->second.target()->format(it->second.images()[l])});
      }
    }
  }
  return rep;
}

}  // namespace nccech::scheme
