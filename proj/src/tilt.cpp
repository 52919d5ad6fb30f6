#include "nccech/tilt.hpp"

#include "nccech/error.hpp"

namespace nccech::tilt {

namespace {

Vec zeros(std::size_t n) { return Vec(n, Scalar(0)); }

Vec axpy(const Field& k, const Vec& acc, const Scalar& c, const Vec& x) {
  Vec out = acc;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] != 0) out[i] = k.add(out[i], k.mul(c, x[i]));
  return out;
}

std::string vec_str(const Vec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i].get_str();
  return s + ")";
}

}  // namespace

Window widen(const Window& w, Weight tw, int order) {
  Window out = w;
  const int m = order - 1;
  (tw.primary > 0 ? out.hi.primary : out.lo.primary) += tw.primary * m;
  (tw.secondary > 0 ? out.hi.secondary : out.lo.secondary) += tw.secondary * m;
  return out;
}

EndomorphismAlgebra::EndomorphismAlgebra(ModulePtr f, const Window& core)
    : f_(std::move(f)), window_(core), wide_(widen(core, f_->scheme()->ring.t_weight(), f_->scheme()->ring.order())) {
  const auto& S = *f_->scheme();
  const Window& window = wide_;
  hom_ = std::make_shared<cech::HomComplex>(f_, ModuleComplex::single(f_), std::vector<int>{}, window.length_cap);
  const auto& h = *hom_;
  const auto& terms = h.terms(0);
  for (Weight w : window.weights()) {
    if (h.cap_insufficient(0, w)) warnings_.push_back("length cap reached at weight " + w.to_string());
    std::size_t j = 0;
    for (auto& v : cech::graded_hom(h, w)) {
      Endo e;
      e.weight = w;
      e.charts.assign(S.size(), PolyMatrix(f_->rank(), f_->rank()));
      auto parts = h.decode(0, w, v);
      for (std::size_t t = 0; t < terms.size(); ++t) e.charts[static_cast<std::size_t>(terms[t].site)] = parts[t];
      if (window_.contains(w)) core_.push_back(basis_.size());
      by_weight_[w].push_back(basis_.size());
      labels_.push_back("w" + w.to_string() + "#" + std::to_string(j++));
      basis_.push_back(std::move(e));
      term_vecs_.push_back(std::move(v));
    }
  }
  const std::size_t n = basis_.size();

  auto product = [&](const Endo& x, const Endo& y) {
    Endo p;
    p.weight = x.weight + y.weight;
    for (std::size_t s = 0; s < S.size(); ++s)
      p.charts.push_back(qcoh::mat_mul(*S.algebra(static_cast<int>(s)), x.charts[s], y.charts[s]));
    return p;
  };
  auto is_zero_endo = [](const Endo& e) {
    for (const auto& m : e.charts)
      if (!m.is_zero()) return false;
    return true;
  };
  auto coords_or_warn = [&](const Endo& e, const std::string& what) {
    if (is_zero_endo(e)) return zeros(n);
    if (!window.contains(e.weight)) {
      warnings_.push_back(what + " has weight " + e.weight.to_string() + " outside the window; dropped");
      return zeros(n);
    }
    auto c = coordinates(e);
    if (!c) throw Error(ErrorKind::Arithmetic, what + " is not a global endomorphism");
    return *c;
  };

  table_.assign(n, std::vector<Vec>(n));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      table_[a][b] = coords_or_warn(product(basis_[a], basis_[b]), labels_[a] + " * " + labels_[b]);
      for (std::size_t c = 0; c < n; ++c)
        if (table_[a][b][c] != 0) constants_.push_back({a, b, c, table_[a][b][c]});
    }

  t_ = Matrix(n, n);
  if (S.ring.order() > 1)
    for (std::size_t a = 0; a < n; ++a) {
      Endo te;
      te.weight = basis_[a].weight + S.ring.t_weight();
      for (std::size_t s = 0; s < S.size(); ++s)
        te.charts.push_back(qcoh::mat_scale_t(*S.algebra(static_cast<int>(s)), basis_[a].charts[s], 1));
      Vec c = coords_or_warn(te, "t * " + labels_[a]);
      for (std::size_t r = 0; r < n; ++r) t_.at(r, a) = c[r];
    }

  Endo one;
  one.weight = 0;
  one.charts.assign(S.size(), PolyMatrix::identity(f_->rank()));
  unit_ = coords_or_warn(one, "unit");
}

int EndomorphismAlgebra::order() const { return f_->scheme()->ring.order(); }
const Field& EndomorphismAlgebra::field() const { return f_->scheme()->ring.field(); }

Vec EndomorphismAlgebra::multiply(const Vec& x, const Vec& y) const {
  const Field& k = field();
  Vec out = zeros(dim());
  for (std::size_t a = 0; a < dim(); ++a) {
    if (x[a] == 0) continue;
    for (std::size_t b = 0; b < dim(); ++b)
      if (y[b] != 0) out = axpy(k, out, k.mul(x[a], y[b]), table_[a][b]);
  }
  return out;
}

std::optional<Vec> EndomorphismAlgebra::coordinates(const Endo& e) const {
  const auto& h = *hom_;
  const Field& k = field();
  const auto& terms = h.terms(0);
  std::vector<PolyMatrix> parts;
  for (const auto& t : terms) parts.push_back(e.charts[static_cast<std::size_t>(t.site)]);
  Vec out = zeros(dim());
  auto it = by_weight_.find(e.weight);
  Vec v;
  try {
    v = h.encode(0, e.weight, parts);
  } catch (const Error&) {
    return std::nullopt;
  }
  if (it == by_weight_.end()) {
    if (is_zero(v)) return out;
    return std::nullopt;
  }
  std::vector<Vec> cols;
  for (std::size_t a : it->second) cols.push_back(term_vecs_[a]);
  auto sol = solve(Matrix::from_columns(cols, v.size()), v, k);
  if (!sol) return std::nullopt;
  for (std::size_t i = 0; i < it->second.size(); ++i) out[it->second[i]] = (*sol)[i];
  return out;
}

Endo EndomorphismAlgebra::element(const Vec& v) const {
  const auto& S = *f_->scheme();
  Endo e;
  e.charts.assign(S.size(), PolyMatrix(f_->rank(), f_->rank()));
  bool first = true;
  for (std::size_t a = 0; a < dim(); ++a) {
    if (v[a] == 0) continue;
    if (first) e.weight = basis_[a].weight;
    first = false;
    for (std::size_t s = 0; s < S.size(); ++s)
      e.charts[s] = qcoh::mat_add(*S.algebra(static_cast<int>(s)), e.charts[s], basis_[a].charts[s], v[a]);
  }
  return e;
}

std::vector<std::string> EndomorphismAlgebra::axiom_failures() const {
  std::vector<std::string> out;
  const Field& k = field();
  const std::size_t n = dim();
  auto unit_vec = [&](std::size_t a) {
    Vec e = zeros(n);
    e[a] = 1;
    return e;
  };
  for (std::size_t a = 0; a < n; ++a) {
    Vec ea = unit_vec(a);
    if (multiply(unit_, ea) != ea || multiply(ea, unit_) != ea) out.push_back("unit law fails on " + labels_[a]);
    for (std::size_t b = 0; b < n; ++b) {
      const Vec& ab = table_[a][b];
      if (t_.apply(ab, k) != multiply(t_.apply(ea, k), unit_vec(b)) ||
          t_.apply(ab, k) != multiply(ea, t_.apply(unit_vec(b), k)))
        out.push_back("t is not central on " + labels_[a] + " * " + labels_[b]);
      for (std::size_t c = 0; c < n; ++c) {
        Vec ec = unit_vec(c);
        if (multiply(ab, ec) != multiply(ea, table_[b][c]))
          out.push_back("associativity fails on " + labels_[a] + ", " + labels_[b] + ", " + labels_[c]);
      }
    }
  }
  Matrix p = Matrix::identity(n);
  for (int i = 0; i < order(); ++i) p = t_.multiply(p, k);
  if (n && !p.is_zero()) out.push_back("t^" + std::to_string(order()) + " does not act as zero");
  return out;
}

EndomorphismAlgebra end_algebra(const ModulePtr& f, const Window& window) { return EndomorphismAlgebra(f, window); }

FlatnessVerdict flatness_check(const EndomorphismAlgebra& e, const EndomorphismAlgebra* e0) {
  FlatnessVerdict v;
  const Field& k = e.field();
  const std::size_t n = e.dim();
  const int order = e.order();
  const Matrix& T = e.t_action();
  auto unit_vec = [](std::size_t len, std::size_t i) {
    Vec x = zeros(len);
    x[i] = 1;
    return x;
  };

  // N = k[t] . core
  std::vector<Vec> gens;
  for (std::size_t a : e.core()) {
    Vec x = unit_vec(n, a);
    for (int j = 0; j < order; ++j) {
      gens.push_back(x);
      x = T.apply(x, k);
    }
  }
  std::vector<Vec> nb = gens.empty() ? std::vector<Vec>{} : column_space(Matrix::from_columns(gens, n), k);
  v.generated_dim = nb.size();
  Matrix nbm = Matrix::from_columns(nb, n);
  Matrix tn(nb.size(), nb.size());
  for (std::size_t i = 0; i < nb.size(); ++i) {
    auto c = solve(nbm, T.apply(nb[i], k), k);
    if (!c) throw Error(ErrorKind::Arithmetic, "t-span of the window part is not t-stable");
    for (std::size_t r = 0; r < nb.size(); ++r) tn.at(r, i) = (*c)[r];
  }
  try {
    v.pattern = coeff::flat_rank_pattern(tn, order, k);
    v.flat = v.pattern.is_free;
  } catch (const Error&) {
    v.flat = false;
  }
  if (!e0) return v;

  auto fail = [&](std::string s) { v.reduction_failures.push_back(std::move(s)); };
  const auto& ring0 = e0->module()->scheme()->ring;
  const auto& core0 = e0->core();
  const std::size_t n0 = e0->dim();

  // lift each core element of e0 through the reduction map, weight by weight
  std::map<Weight, std::vector<std::size_t>> by_weight;
  for (std::size_t a : e.core()) by_weight[e.basis()[a].weight].push_back(a);
  std::vector<Vec> lifts;
  for (std::size_t c : core0) {
    const Weight w = e0->basis()[c].weight;
    const auto& cols = by_weight[w];
    Matrix R(n0, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      Endo r = e.basis()[cols[j]];
      for (auto& m : r.charts) m = qcoh::mat_truncate(m, ring0);
      auto x = e0->coordinates(r);
      if (!x) {
        fail("reduction of " + e.labels()[cols[j]] + " is not an endomorphism of the level-1 module");
        continue;
      }
      for (std::size_t i = 0; i < n0; ++i) R.at(i, j) = (*x)[i];
    }
    auto l = solve(R, unit_vec(n0, c), k);
    Vec lift = zeros(n);
    if (!l)
      fail(e0->labels()[c] + " does not lift");
    else
      for (std::size_t j = 0; j < cols.size(); ++j) lift[cols[j]] = (*l)[j];
    lifts.push_back(lift);
  }
  std::vector<Vec> tN;
  for (const auto& x : nb) tN.push_back(T.apply(x, k));
  tN = tN.empty() ? tN : column_space(Matrix::from_columns(tN, n), k);
  QuotientSpace q(n, nb, tN, k);
  if (q.dim() != core0.size())
    fail("dim N/tN = " + std::to_string(q.dim()) + " but the level-1 window part has dim " +
         std::to_string(core0.size()));
  if (!v.reduction_failures.empty()) {
    v.reduction_matches = false;
    return v;
  }
  std::vector<Vec> cols;
  for (const auto& l : lifts) cols.push_back(q.coordinates(l));
  Matrix M = Matrix::from_columns(cols, q.dim());
  for (std::size_t a = 0; a < core0.size(); ++a)
    for (std::size_t b = 0; b < core0.size(); ++b) {
      Weight w = e0->basis()[core0[a]].weight + e0->basis()[core0[b]].weight;
      if (!e0->window().contains(w)) continue;
      Vec want0 = e0->multiply(unit_vec(n0, core0[a]), unit_vec(n0, core0[b]));
      Vec want(core0.size());
      for (std::size_t c = 0; c < core0.size(); ++c) want[c] = want0[core0[c]];
      auto x = solve(M, q.coordinates(e.multiply(lifts[a], lifts[b])), k);
      if (!x || *x != want)
        fail("E/tE constant " + e0->labels()[core0[a]] + " * " + e0->labels()[core0[b]] + " = " +
             (x ? vec_str(*x) : "?") + ", level 1 gives " + vec_str(want));
    }
  v.reduction_matches = v.reduction_failures.empty();
  return v;
}

TiltingReport pretilting_check(const ModulePtr& f, int pmax, const Window& window) {
  TiltingReport r;
  int top = static_cast<int>(f->scheme()->size()) - 1;
  r.pmax = pmax >= 0 && pmax < top ? pmax : top;
  auto rep = cech::ext(f, f, window, r.pmax);
  r.pretilting = true;
  for (const auto& g : rep.groups) {
    r.ext[{g.degree, g.weight}] = g.dim;
    if (g.degree > 0) r.pretilting = false;
  }
  r.warnings = rep.warnings;
  for (const auto& d : rep.dd_failures) r.warnings.push_back("d o d != 0 at " + d);
  return r;
}

GenerationResult generation_check(const ModulePtr& f, const ModuleComplex& x, const Window& window) {
  GenerationResult g;
  g.object = x.name;
  auto rep = cech::ext(f, x, window);
  for (const auto& grp : rep.groups) g.dims[grp.degree] += grp.dim;
  if (!g.dims.empty()) g.witness = g.dims.rbegin()->first;
  g.warnings = rep.warnings;
  for (const auto& d : rep.dd_failures) g.warnings.push_back("d o d != 0 at " + d);
  return g;
}

std::size_t PhiImage::dim(int p) const {
  for (const auto& d : degrees)
    if (d.degree == p) return d.dim;
  return 0;
}

PhiImage phi_image(const EndomorphismAlgebra& e, const ModuleComplex& x, const Window& window) {
  PhiImage img;
  img.object = x.name;
  const auto& F = *e.module();
  const auto& S = *F.scheme();
  const Field& k = S.ring.field();
  cech::HomComplex h(e.module(), x, {}, window.length_cap);
  auto rep = cech::cohomology(h, window);
  img.warnings = rep.warnings;
  for (const auto& d : rep.dd_failures) img.warnings.push_back("d o d != 0 at " + d);
  for (const auto& [w, chi] : cech::euler_characteristic(h, window)) img.euler_from_terms += chi;

  std::map<int, std::vector<const cech::CohomologyGroup*>> by_degree;
  for (const auto& g : rep.groups) by_degree[g.degree].push_back(&g);
  for (const auto& [p, groups] : by_degree) {
    PhiDegree d;
    d.degree = p;
    std::map<Weight, std::size_t> off;
    for (const auto* g : groups) {
      off[g->weight] = d.dim;
      for (std::size_t i = 0; i < g->dim; ++i) d.weights.emplace_back(g->weight, i);
      d.dim += g->dim;
    }
    img.euler += (p % 2 == 0 ? 1 : -1) * static_cast<long>(d.dim);
    d.t_action = Matrix(d.dim, d.dim);
    if (S.ring.order() > 1)
      for (const auto* g : groups) {
        auto it = off.find(g->weight + rep.t_weight);
        if (it == off.end()) continue;
        for (std::size_t c = 0; c < g->t_action.cols(); ++c)
          for (std::size_t r = 0; r < g->t_action.rows(); ++r)
            d.t_action.at(it->second + r, off[g->weight] + c) = g->t_action.at(r, c);
      }
    const auto& terms = h.terms(p);
    for (std::size_t b = 0; b < e.dim(); ++b) {
      const Endo& eb = e.basis()[b];
      Matrix act(d.dim, d.dim);
      for (const auto* g : groups) {
        Weight w2 = g->weight + eb.weight;
        auto it = off.find(w2);
        for (std::size_t c = 0; c < g->dim; ++c) {
          auto parts = h.decode(p, g->weight, g->representatives[c]);
          bool nonzero = false;
          for (std::size_t t = 0; t < terms.size(); ++t) {
            int s = terms[t].site;
            parts[t] = qcoh::mat_mul(*S.algebra(s), parts[t], eb.charts[static_cast<std::size_t>(s)]);
            nonzero = nonzero || !parts[t].is_zero();
          }
          if (!nonzero) continue;
          if (!window.contains(w2)) {
            img.warnings.push_back("action of " + e.labels()[b] + " leaves the window at weight " + w2.to_string());
            continue;
          }
          Vec v = h.encode(p, w2, parts);
          if (p < h.max_degree() && h.dim(p + 1, w2) > 0 && !is_zero(h.differential(p, w2).apply(v, k))) {
            img.action_failures.push_back("class composed with " + e.labels()[b] + " is not a cocycle");
            continue;
          }
          if (it == off.end()) continue;  // lands in a zero group
          Vec coords = cech::class_coordinates(h, p, w2, v);
          for (std::size_t r = 0; r < coords.size(); ++r) act.at(it->second + r, off[g->weight] + c) = coords[r];
        }
      }
      d.e_action.push_back(std::move(act));
    }
    // right module axioms: rho(e_a e_b) = rho(e_b) rho(e_a), rho(1) = 1, commutes with t
    const std::size_t n = e.dim();
    Matrix unit(d.dim, d.dim);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t r = 0; r < d.dim; ++r)
        for (std::size_t c = 0; c < d.dim; ++c)
          unit.at(r, c) = k.add(unit.at(r, c), k.mul(e.unit()[a], d.e_action[a].at(r, c)));
    if (!(unit == Matrix::identity(d.dim))) img.action_failures.push_back("unit acts nontrivially in degree " + std::to_string(p));
    for (std::size_t a = 0; a < n; ++a) {
      if (!(d.e_action[a].multiply(d.t_action, k) == d.t_action.multiply(d.e_action[a], k)))
        img.action_failures.push_back(e.labels()[a] + " does not commute with t in degree " + std::to_string(p));
      for (std::size_t b = 0; b < n; ++b) {
        Vec ua = zeros(n), ub = zeros(n);
        ua[a] = 1;
        ub[b] = 1;
        Vec ab = e.multiply(ua, ub);
        Matrix lhs(d.dim, d.dim);
        for (std::size_t c = 0; c < n; ++c) {
          if (ab[c] == 0) continue;
          for (std::size_t r = 0; r < d.dim; ++r)
            for (std::size_t q = 0; q < d.dim; ++q)
              lhs.at(r, q) = k.add(lhs.at(r, q), k.mul(ab[c], d.e_action[c].at(r, q)));
        }
        if (!(lhs == d.e_action[b].multiply(d.e_action[a], k)))
          img.action_failures.push_back("(x " + e.labels()[a] + ") " + e.labels()[b] + " != x (" + e.labels()[a] +
                                        " " + e.labels()[b] + ") in degree " + std::to_string(p));
      }
    }
    img.degrees.push_back(std::move(d));
  }
  return img;
}

}  // namespace nccech::tilt
