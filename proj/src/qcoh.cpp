#include "nccech/qcoh.hpp"

#include <sstream>

#include "nccech/error.hpp"
#include "system_builder.hpp"

namespace nccech::qcoh {

PolyMatrix PolyMatrix::identity(std::size_t n) {
  PolyMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = rewrite::monomial_poly({});
  return m;
}

bool PolyMatrix::is_zero() const {
  for (const auto& p : entries)
    if (!p.empty()) return false;
  return true;
}

PolyMatrix mat_mul(const GradedAlgebra& a, const PolyMatrix& x, const PolyMatrix& y) {
  if (x.cols != y.rows) throw Error(ErrorKind::InvalidArgument, "matrix product shape mismatch");
  PolyMatrix out(x.rows, y.cols);
  for (std::size_t r = 0; r < x.rows; ++r)
    for (std::size_t c = 0; c < y.cols; ++c) {
      Poly acc;
      for (std::size_t m = 0; m < x.cols; ++m) {
        if (x.at(r, m).empty() || y.at(m, c).empty()) continue;
        rewrite::add_scaled(acc, a.multiply(x.at(r, m), y.at(m, c)), 1, 0, a.ring());
      }
      out.at(r, c) = std::move(acc);
    }
  return out;
}

PolyMatrix mat_add(const GradedAlgebra& a, const PolyMatrix& x, const PolyMatrix& y, const Scalar& c) {
  if (x.rows != y.rows || x.cols != y.cols) throw Error(ErrorKind::InvalidArgument, "matrix sum shape mismatch");
  PolyMatrix out = x;
  for (std::size_t i = 0; i < out.entries.size(); ++i) rewrite::add_scaled(out.entries[i], y.entries[i], c, 0, a.ring());
  return out;
}

PolyMatrix mat_scale_t(const GradedAlgebra& a, const PolyMatrix& x, int tpow, const Scalar& c) {
  PolyMatrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.entries.size(); ++i) rewrite::add_scaled(out.entries[i], x.entries[i], c, tpow, a.ring());
  return out;
}

PolyMatrix mat_map(const algebra::AlgebraHom& h, const PolyMatrix& x) {
  PolyMatrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.entries.size(); ++i) out.entries[i] = h.apply(x.entries[i]);
  return out;
}

PolyMatrix mat_truncate(const PolyMatrix& x, const coeff::ArtinRing& ring) {
  PolyMatrix out(x.rows, x.cols);
  for (std::size_t i = 0; i < x.entries.size(); ++i) out.entries[i] = rewrite::truncate(x.entries[i], ring);
  return out;
}

std::string format_matrix(const GradedAlgebra& a, const PolyMatrix& x) {
  std::ostringstream os;
  for (std::size_t r = 0; r < x.rows; ++r) {
    if (r) os << "; ";
    for (std::size_t c = 0; c < x.cols; ++c) os << (c ? ", " : "") << a.format(x.at(r, c));
  }
  return os.str();
}

PolyMatrix parse_matrix(const GradedAlgebra& a, const std::string& text) {
  std::vector<std::vector<Poly>> rows;
  std::stringstream rs(text);
  std::string row;
  while (std::getline(rs, row, ';')) {
    rows.emplace_back();
    std::stringstream es(row);
    std::string e;
    while (std::getline(es, e, ',')) rows.back().push_back(a.parse(e));
  }
  if (rows.empty() || rows.front().empty()) throw Error(ErrorKind::Parse, "empty matrix");
  PolyMatrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols) throw Error(ErrorKind::Parse, "ragged matrix '" + text + "'");
    for (std::size_t c = 0; c < m.cols; ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

std::optional<PolyMatrix> solve_matrix(const GradedAlgebra& a, std::size_t rows, std::size_t cols,
                                       const std::vector<std::vector<std::vector<Weight>>>& entry_weights,
                                       const std::vector<LinearCondition>& conditions, int cap) {
  detail::SystemBuilder sb;
  struct Unknown {
    std::size_t r, c;
    Monomial m;
  };
  std::vector<Unknown> unknowns;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      for (Weight w : entry_weights[r][c])
        for (const auto& m : a.basis(w, cap).monomials) unknowns.push_back({r, c, m});
  std::vector<std::size_t> ucols;
  for (const auto& u : unknowns) {
    std::size_t col = sb.add_column();
    ucols.push_back(col);
    Poly mp = rewrite::monomial_poly(u.m.word, u.m.tpow);
    for (std::size_t k = 0; k < conditions.size(); ++k)
      for (const auto& term : conditions[k].terms)
        for (std::size_t x = 0; x < term.left.rows; ++x) {
          const Poly& l = term.left.at(x, u.r);
          if (l.empty()) continue;
          Poly lm = a.multiply(l, mp);
          if (lm.empty()) continue;
          for (std::size_t y = 0; y < term.right.cols; ++y) {
            const Poly& rr = term.right.at(u.c, y);
            if (rr.empty()) continue;
            sb.add(col, static_cast<int>(k), x, y, a.multiply(lm, rr));
          }
        }
  }
  std::size_t rhs = sb.add_column();
  for (std::size_t k = 0; k < conditions.size(); ++k) {
    const PolyMatrix& b = conditions[k].rhs;
    for (std::size_t x = 0; x < b.rows; ++x)
      for (std::size_t y = 0; y < b.cols; ++y) sb.add(rhs, static_cast<int>(k), x, y, b.at(x, y));
  }
  const Field& k = a.field();
  auto sol = solve(sb.dense(ucols, k), sb.column(rhs, k), k);
  if (!sol) return std::nullopt;
  PolyMatrix u(rows, cols);
  for (std::size_t i = 0; i < unknowns.size(); ++i)
    rewrite::add_term(u.at(unknowns[i].r, unknowns[i].c), unknowns[i].m, (*sol)[i], a.ring());
  return u;
}

LocallyFreeModule::LocallyFreeModule(std::string name, SchemePtr scheme, std::size_t rank,
                                     std::vector<std::vector<Weight>> shifts,
                                     std::map<std::pair<int, int>, PolyMatrix> psi, int cap)
    : name_(std::move(name)), scheme_(std::move(scheme)), rank_(rank), shifts_(std::move(shifts)),
      psi_(std::move(psi)) {
  const auto& P = *scheme_->poset;
  const int d = static_cast<int>(P.size());
  if (static_cast<int>(shifts_.size()) != d)
    throw Error(ErrorKind::InvalidArgument, "module " + name_ + ": shifts needed for every chart");
  for (const auto& s : shifts_)
    if (s.size() != rank_) throw Error(ErrorKind::InvalidArgument, "module " + name_ + ": shift list of wrong length");
  for (const auto& [key, m] : psi_) {
    if (!P.less(key.first, key.second))
      throw Error(ErrorKind::InvalidArgument, "module " + name_ + ": gluing " + P.name(key.first) + " " +
                                                  P.name(key.second) + " is not along i < j");
    if (m.rows != rank_ || m.cols != rank_)
      throw Error(ErrorKind::InvalidArgument, "module " + name_ + ": gluing matrix of wrong size");
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(d); ++i) identity_.push_back(PolyMatrix::identity(rank_));
  bool progress = true;
  while (progress) {
    progress = false;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        if (!P.less(i, j) || psi_.count({i, j})) continue;
        for (int k = 0; k < d; ++k) {
          if (!P.less(i, k) || !P.less(k, j) || !psi_.count({i, k}) || !psi_.count({k, j})) continue;
          psi_.emplace(std::make_pair(i, j), mat_mul(*scheme_->algebra(i), psi_.at({i, k}),
                                                     mat_map(scheme_->phi(i, k), psi_.at({k, j}))));
          progress = true;
          break;
        }
      }
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (P.less(i, j) && !psi_.count({i, j}))
        throw Error(ErrorKind::InvalidArgument, "module " + name_ + ": missing gluing " + P.name(i) + " " + P.name(j));

  for (const auto& [key, m] : psi_) {
    auto [i, j] = key;
    const auto& A = *scheme_->algebra(i);
    bool homogeneous = true;
    for (std::size_t a = 0; a < rank_ && homogeneous; ++a)
      for (std::size_t b = 0; b < rank_; ++b) {
        Weight expect = shifts_[static_cast<std::size_t>(i)][a] - shifts_[static_cast<std::size_t>(j)][b];
        auto w = A.homogeneous_weight(m.at(a, b), expect);
        if (!w || *w != expect) {
          homogeneous = false;
          break;
        }
      }
    std::vector<std::vector<std::vector<Weight>>> ew(rank_, std::vector<std::vector<Weight>>(rank_));
    if (homogeneous) {
      for (std::size_t b = 0; b < rank_; ++b)
        for (std::size_t a = 0; a < rank_; ++a)
          ew[b][a] = {shifts_[static_cast<std::size_t>(j)][b] - shifts_[static_cast<std::size_t>(i)][a]};
    } else {
      // search every weight of the default window box
      std::vector<Weight> all = Window{}.weights();
      for (auto& row : ew)
        for (auto& e : row) e = all;
    }
    PolyMatrix id = PolyMatrix::identity(rank_);
    std::vector<LinearCondition> conds{{{MatrixTerm{m, id}}, id}, {{MatrixTerm{id, m}}, id}};
    auto inv = solve_matrix(A, rank_, rank_, ew, conds, cap);
    if (inv) inverse_.emplace(key, std::move(*inv));
  }
}

const PolyMatrix& LocallyFreeModule::psi(int i, int j) const {
  if (i == j) return identity_.at(static_cast<std::size_t>(i));
  auto it = psi_.find({i, j});
  if (it == psi_.end()) throw Error(ErrorKind::InvalidArgument, "module " + name_ + ": no gluing for this pair");
  return it->second;
}

const PolyMatrix* LocallyFreeModule::psi_inverse(int i, int j) const {
  if (i == j) return &identity_.at(static_cast<std::size_t>(i));
  auto it = inverse_.find({i, j});
  return it == inverse_.end() ? nullptr : &it->second;
}

LocallyFreeModule LocallyFreeModule::renamed(std::string name) const {
  LocallyFreeModule m = *this;
  m.name_ = std::move(name);
  return m;
}

LocallyFreeModule direct_sum(const std::string& name, const LocallyFreeModule& a, const LocallyFreeModule& b) {
  if (a.scheme() != b.scheme()) throw Error(ErrorKind::Mismatch, "direct sum of modules on different schemes");
  const std::size_t r = a.rank() + b.rank();
  std::vector<std::vector<Weight>> shifts;
  for (std::size_t i = 0; i < a.all_shifts().size(); ++i) {
    auto s = a.all_shifts()[i];
    s.insert(s.end(), b.all_shifts()[i].begin(), b.all_shifts()[i].end());
    shifts.push_back(std::move(s));
  }
  std::map<std::pair<int, int>, PolyMatrix> psi;
  for (const auto& [key, ma] : a.gluings()) {
    const PolyMatrix& mb = b.psi(key.first, key.second);
    PolyMatrix m(r, r);
    for (std::size_t x = 0; x < a.rank(); ++x)
      for (std::size_t y = 0; y < a.rank(); ++y) m.at(x, y) = ma.at(x, y);
    for (std::size_t x = 0; x < b.rank(); ++x)
      for (std::size_t y = 0; y < b.rank(); ++y) m.at(a.rank() + x, a.rank() + y) = mb.at(x, y);
    psi.emplace(key, std::move(m));
  }
  return LocallyFreeModule(name, a.scheme(), r, std::move(shifts), std::move(psi));
}

ModuleReport validate_module(const LocallyFreeModule& m) {
  ModuleReport rep;
  const NcScheme& S = *m.scheme();
  const auto& P = *S.poset;
  const int d = static_cast<int>(P.size());
  for (const auto& [key, psi] : m.gluings()) {
    auto [i, j] = key;
    const auto& A = *S.algebra(i);
    for (std::size_t a = 0; a < m.rank(); ++a)
      for (std::size_t b = 0; b < m.rank(); ++b) {
        Weight expect = m.shifts(i)[a] - m.shifts(j)[b];
        auto w = A.homogeneous_weight(psi.at(a, b), expect);
        if (!w || *w != expect)
          rep.defects.push_back({"homogeneity", {i, j},
                                 "entry (" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ") = " +
                                     A.format(psi.at(a, b)) + " is not homogeneous of weight " + expect.to_string()});
      }
    if (!m.psi_inverse(i, j))
      rep.defects.push_back({"invertibility", {i, j}, "no two-sided inverse of " + format_matrix(A, psi) + " in window"});
  }
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        if (!P.less(i, j) || !P.less(j, k)) continue;
        ++rep.cocycle_checks;
        const auto& A = *S.algebra(i);
        PolyMatrix lhs = mat_mul(A, m.psi(i, j), mat_map(S.phi(i, j), m.psi(j, k)));
        if (!(lhs == m.psi(i, k)))
          rep.defects.push_back({"cocycle", {i, j, k}, format_matrix(A, lhs) + " vs " + format_matrix(A, m.psi(i, k))});
      }
  return rep;
}

int PushforwardModule::component(int i) const { return module->scheme()->poset->meet(i, origin); }

const PolyMatrix& PushforwardModule::gluing(int i, int j) const { return module->psi(component(i), component(j)); }

PushforwardModule pushforward(const ModulePtr& m, int s) { return PushforwardModule{m, s}; }

PushforwardModule pushforward(const PushforwardModule& p, int s) {
  return PushforwardModule{p.module, p.module->scheme()->poset->meet(p.origin, s)};
}

std::vector<ComponentMap> restriction(const LocallyFreeModule& m, int s) {
  const NcScheme& S = *m.scheme();
  std::vector<ComponentMap> out;
  for (int i = 0; i < static_cast<int>(S.size()); ++i) {
    int p = S.poset->meet(i, s);
    out.push_back({p, m.psi(p, i)});
  }
  return out;
}

std::vector<ComponentMap> restriction(const PushforwardModule& pf, int j) {
  const NcScheme& S = *pf.module->scheme();
  PushforwardModule target = pushforward(pf, j);
  std::vector<ComponentMap> out;
  for (int i = 0; i < static_cast<int>(S.size()); ++i) {
    int p = pf.component(i), q = target.component(i);
    out.push_back({q, pf.module->psi(q, p)});
  }
  return out;
}

namespace {

// Target data for direct_hom: component algebra index, shifts and gluings.
struct HomTarget {
  const LocallyFreeModule* module;
  std::vector<int> comp;
};

HomBasis solve_direct_hom(const LocallyFreeModule& m, const HomTarget& t, Weight w, int cap) {
  const NcScheme& S = *m.scheme();
  const auto& P = *S.poset;
  const int d = static_cast<int>(P.size());
  const std::size_t rm = m.rank(), rn = t.module->rank();
  struct Unknown {
    int i;
    std::size_t a, b;
    Monomial mono;
  };
  std::vector<Unknown> unknowns;
  for (int i = 0; i < d; ++i) {
    int p = t.comp[static_cast<std::size_t>(i)];
    const auto& A = *S.algebra(p);
    for (std::size_t a = 0; a < rn; ++a)
      for (std::size_t b = 0; b < rm; ++b) {
        Weight ew = w + t.module->shifts(p)[a] - m.shifts(i)[b];
        for (const auto& mono : A.basis(ew, cap).monomials) unknowns.push_back({i, a, b, mono});
      }
  }
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (P.less(i, j)) pairs.emplace_back(i, j);

  detail::SystemBuilder sb;
  std::vector<std::size_t> cols;
  for (const auto& u : unknowns) {
    std::size_t col = sb.add_column();
    cols.push_back(col);
    Poly mp = rewrite::monomial_poly(u.mono.word, u.mono.tpow);
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      auto [i, j] = pairs[e];
      int pi = t.comp[static_cast<std::size_t>(i)], pj = t.comp[static_cast<std::size_t>(j)];
      const auto& A = *S.algebra(pi);
      if (u.i == j) {
        // + G_ij phi_{pi pj}(H_j)
        Poly img = S.phi(pi, pj).apply(mp);
        const PolyMatrix& G = t.module->psi(pi, pj);
        for (std::size_t x = 0; x < rn; ++x)
          if (!G.at(x, u.a).empty()) sb.add(col, static_cast<int>(e), x, u.b, A.multiply(G.at(x, u.a), img));
      }
      if (u.i == i) {
        // - H_i phi_{pi i}(Psi^M_ij)
        const PolyMatrix& Pm = m.psi(i, j);
        for (std::size_t y = 0; y < rm; ++y) {
          if (Pm.at(u.b, y).empty()) continue;
          Poly rhs = S.phi(pi, i).apply(Pm.at(u.b, y));
          sb.add(col, static_cast<int>(e), u.a, y, A.multiply(mp, rhs), -1);
        }
      }
    }
  }
  const Field& k = S.ring.field();
  HomBasis out;
  out.weight = w;
  for (const Vec& v : nullspace(sb.dense(cols, k), k)) {
    std::vector<PolyMatrix> h;
    for (int i = 0; i < d; ++i) h.emplace_back(rn, rm);
    for (std::size_t x = 0; x < unknowns.size(); ++x) {
      const auto& u = unknowns[x];
      rewrite::add_term(h[static_cast<std::size_t>(u.i)].at(u.a, u.b), u.mono, v[x], S.ring);
    }
    out.basis.push_back(std::move(h));
  }
  return out;
}

}  // namespace

HomBasis direct_hom(const LocallyFreeModule& m, const LocallyFreeModule& n, Weight w, int cap) {
  if (m.scheme() != n.scheme()) throw Error(ErrorKind::Mismatch, "direct_hom: modules on different schemes");
  HomTarget t{&n, scheme::default_enumeration(*m.scheme()->poset)};
  return solve_direct_hom(m, t, w, cap);
}

HomBasis direct_hom(const LocallyFreeModule& m, const PushforwardModule& n, Weight w, int cap) {
  if (m.scheme() != n.module->scheme()) throw Error(ErrorKind::Mismatch, "direct_hom: modules on different schemes");
  HomTarget t{n.module.get(), {}};
  for (int i = 0; i < static_cast<int>(m.scheme()->size()); ++i) t.comp.push_back(n.component(i));
  return solve_direct_hom(m, t, w, cap);
}

std::size_t local_hom_dim(const LocallyFreeModule& m, const LocallyFreeModule& n, int s, Weight w, int cap) {
  const auto& A = *m.scheme()->algebra(s);
  std::size_t dim = 0;
  for (Weight sn : n.shifts(s))
    for (Weight sm : m.shifts(s)) dim += A.basis(w + sn - sm, cap).dim();
  return dim;
}

ModuleComplex ModuleComplex::single(const ModulePtr& m, int degree) {
  ModuleComplex x;
  x.name = m->name();
  x.terms.emplace(degree, m);
  return x;
}

ModuleComplex ModuleComplex::shifted(int k) const {
  ModuleComplex x;
  x.name = name + "[" + std::to_string(k) + "]";
  for (const auto& [q, m] : terms) x.terms.emplace(q - k, m);
  for (const auto& [q, mats] : maps) {
    std::vector<PolyMatrix> ms = mats;
    if (k % 2 != 0)
      for (std::size_t i = 0; i < ms.size(); ++i)
        ms[i] = mat_scale_t(*terms.at(q)->scheme()->algebra(static_cast<int>(i)), ms[i], 0, -1);
    x.maps.emplace(q - k, std::move(ms));
  }
  return x;
}

SchemePtr ModuleComplex::scheme() const {
  if (terms.empty()) throw Error(ErrorKind::InvalidArgument, "complex " + name + " has no terms");
  return terms.begin()->second->scheme();
}

PolyMatrix ModuleComplex::differential(int q, int i) const {
  auto it = maps.find(q);
  if (it != maps.end()) return it->second.at(static_cast<std::size_t>(i));
  auto src = terms.find(q), dst = terms.find(q + 1);
  std::size_t rs = src == terms.end() ? 0 : src->second->rank();
  std::size_t rd = dst == terms.end() ? 0 : dst->second->rank();
  return PolyMatrix(rd, rs);
}

ComplexReport validate_complex(const ModuleComplex& x) {
  ComplexReport rep;
  const SchemePtr S = x.scheme();
  const auto& P = *S->poset;
  const int d = static_cast<int>(P.size());
  for (const auto& [q, m] : x.terms)
    if (m->scheme() != S) rep.defects.push_back("term " + std::to_string(q) + " lives on another scheme");
  for (const auto& [q, mats] : x.maps) {
    auto src = x.terms.find(q), dst = x.terms.find(q + 1);
    if (src == x.terms.end() || dst == x.terms.end()) {
      rep.defects.push_back("map in degree " + std::to_string(q) + " has a missing end");
      continue;
    }
    const auto& X = *src->second;
    const auto& Y = *dst->second;
    if (static_cast<int>(mats.size()) != d) {
      rep.defects.push_back("map in degree " + std::to_string(q) + " needs one matrix per chart");
      continue;
    }
    for (int i = 0; i < d; ++i) {
      const auto& D = mats[static_cast<std::size_t>(i)];
      const auto& A = *S->algebra(i);
      if (D.rows != Y.rank() || D.cols != X.rank()) {
        rep.defects.push_back("map in degree " + std::to_string(q) + " at " + P.name(i) + " has the wrong shape");
        continue;
      }
      for (std::size_t a = 0; a < D.rows; ++a)
        for (std::size_t b = 0; b < D.cols; ++b) {
          Weight expect = Y.shifts(i)[a] - X.shifts(i)[b];
          auto w = A.homogeneous_weight(D.at(a, b), expect);
          if (!w || *w != expect)
            rep.defects.push_back("map in degree " + std::to_string(q) + " at " + P.name(i) + ": entry " +
                                  A.format(D.at(a, b)) + " is not of weight " + expect.to_string());
        }
    }
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        if (!P.less(i, j)) continue;
        const auto& A = *S->algebra(i);
        PolyMatrix lhs = mat_mul(A, mats[static_cast<std::size_t>(i)], X.psi(i, j));
        PolyMatrix rhs = mat_mul(A, Y.psi(i, j), mat_map(S->phi(i, j), mats[static_cast<std::size_t>(j)]));
        if (!(lhs == rhs))
          rep.defects.push_back("map in degree " + std::to_string(q) + " does not commute with the gluing " +
                                P.name(i) + " " + P.name(j));
      }
    if (x.maps.count(q + 1))
      for (int i = 0; i < d; ++i) {
        PolyMatrix dd = mat_mul(*S->algebra(i), x.maps.at(q + 1)[static_cast<std::size_t>(i)], mats[static_cast<std::size_t>(i)]);
        if (!dd.is_zero())
          rep.defects.push_back("D^" + std::to_string(q + 1) + " D^" + std::to_string(q) + " != 0 at " + P.name(i));
      }
  }
  return rep;
}

}  // namespace nccech::qcoh
