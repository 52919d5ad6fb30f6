#include "nccech/cech.hpp"

#include <mutex>

#include "matrix_piece.hpp"
#include "nccech/error.hpp"

namespace nccech::cech {

using detail::MatrixPiece;

namespace {

std::vector<int> resolve_enumeration(const scheme::MeetPoset& p, std::vector<int> e) {
  if (e.empty()) return scheme::default_enumeration(p);
  std::vector<int> sorted = e;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    if (sorted[i] != static_cast<int>(i) || sorted.size() != p.size())
      throw Error(ErrorKind::InvalidArgument, "enumeration is not a permutation of the poset elements");
  return e;
}

std::vector<std::vector<Chain>> all_chains(const scheme::MeetPoset& p, const std::vector<int>& e) {
  std::vector<std::vector<Chain>> out;
  for (int deg = 0; deg < static_cast<int>(p.size()); ++deg) out.push_back(scheme::enumerate_chains(p, deg, e));
  return out;
}

std::vector<CechBlock> blocks_of(const std::vector<std::vector<Chain>>& chains) {
  std::vector<CechBlock> out;
  if (chains.empty()) return out;
  for (std::size_t c = 0; c < chains[0].size(); ++c) out.push_back({-1, -1, static_cast<int>(c), 1});
  for (std::size_t p = 0; p + 1 < chains.size(); ++p) {
    std::map<std::vector<int>, int> index;
    for (std::size_t c = 0; c < chains[p].size(); ++c) index.emplace(chains[p][c].positions, static_cast<int>(c));
    for (std::size_t c = 0; c < chains[p + 1].size(); ++c) {
      const auto& pos = chains[p + 1][c].positions;
      for (std::size_t k = 0; k < pos.size(); ++k) {
        std::vector<int> face = pos;
        face.erase(face.begin() + static_cast<long>(k));
        out.push_back({static_cast<int>(p), index.at(face), static_cast<int>(c), k % 2 == 0 ? 1 : -1});
      }
    }
  }
  return out;
}

MatrixPiece column_piece(const qcoh::LocallyFreeModule& m, int p, Weight w, int cap) {
  const auto& sh = m.shifts(p);
  return MatrixPiece(*m.scheme()->algebra(p), m.rank(), 1, [&](std::size_t a, std::size_t) { return w + sh[a]; },
                     cap);
}

}  // namespace

CechComplex build_cech(const ModulePtr& m, std::vector<int> enumeration) {
  const auto& P = *m->scheme()->poset;
  CechComplex c;
  c.module = m;
  c.enumeration = resolve_enumeration(P, std::move(enumeration));
  c.chains = all_chains(P, c.enumeration);
  return c;
}

std::vector<CechBlock> cech_blocks(const CechComplex& c) { return blocks_of(c.chains); }

ExactnessReport resolution_exactness_check(const CechComplex& cx, const Window& window,
                                           std::optional<SignMutation> mutation) {
  ExactnessReport rep;
  const auto& M = *cx.module;
  const auto& S = *M.scheme();
  const auto& P = *S.poset;
  const Field& k = S.ring.field();
  const int cap = window.length_cap;
  auto blocks = blocks_of(cx.chains);
  if (mutation && mutation->block < blocks.size()) blocks[mutation->block].sign *= -1;
  const int len = cx.length();

  for (int i = 0; i < static_cast<int>(P.size()); ++i) {
    // component of position pos (-1 = M) and chain c
    auto comp = [&](int pos, int c) {
      return pos < 0 ? i : P.meet(i, cx.chains[static_cast<std::size_t>(pos)][static_cast<std::size_t>(c)].meet);
    };
    for (Weight w : window.weights()) {
      // pieces and offsets per position
      std::vector<std::vector<MatrixPiece>> pieces(static_cast<std::size_t>(len + 1));
      std::vector<std::vector<std::size_t>> offs(static_cast<std::size_t>(len + 1));
      std::vector<std::size_t> dims(static_cast<std::size_t>(len + 1), 0);
      bool capw = false;
      for (int pos = -1; pos < len; ++pos) {
        std::size_t n = pos < 0 ? 1 : cx.chains[static_cast<std::size_t>(pos)].size();
        auto& pv = pieces[static_cast<std::size_t>(pos + 1)];
        for (std::size_t c = 0; c < n; ++c) {
          pv.push_back(column_piece(M, comp(pos, static_cast<int>(c)), w, cap));
          capw = capw || pv.back().cap_insufficient();
          offs[static_cast<std::size_t>(pos + 1)].push_back(dims[static_cast<std::size_t>(pos + 1)]);
          dims[static_cast<std::size_t>(pos + 1)] += pv.back().dim();
        }
      }
      if (capw) rep.cap_warnings.push_back("chart " + P.name(i) + " weight " + w.to_string());
      // D[pos + 1]: position pos -> pos + 1
      std::vector<Matrix> D;
      for (int pos = -1; pos + 1 < len; ++pos)
        D.emplace_back(dims[static_cast<std::size_t>(pos + 2)], dims[static_cast<std::size_t>(pos + 1)]);
      PolyMatrix id1 = PolyMatrix::identity(1);
      for (const auto& b : blocks) {
        int from = b.degree < 0 ? 0 : b.from;
        int src = comp(b.degree, from), dst = comp(b.degree + 1, b.to);
        const auto& fp = pieces[static_cast<std::size_t>(b.degree + 1)][static_cast<std::size_t>(from)];
        const auto& tp = pieces[static_cast<std::size_t>(b.degree + 2)][static_cast<std::size_t>(b.to)];
        detail::add_induced_map(D[static_cast<std::size_t>(b.degree + 1)],
                                offs[static_cast<std::size_t>(b.degree + 2)][static_cast<std::size_t>(b.to)],
                                offs[static_cast<std::size_t>(b.degree + 1)][static_cast<std::size_t>(from)], fp, tp,
                                S.phi(dst, src), M.psi(dst, src), id1, b.sign);
      }
      std::vector<std::size_t> ranks;
      for (const auto& m : D) ranks.push_back(rank(m, k));
      for (int pos = -1; pos < len; ++pos) {
        std::size_t out_rank = pos + 1 < len ? ranks[static_cast<std::size_t>(pos + 1)] : 0;
        std::size_t ker = dims[static_cast<std::size_t>(pos + 1)] - out_rank;
        std::size_t im = pos >= 0 ? ranks[static_cast<std::size_t>(pos)] : 0;
        ++rep.positions_checked;
        if (ker != im) rep.failures.push_back({w, i, pos, ker, im});
      }
      for (std::size_t q = 0; q + 1 < D.size(); ++q)
        if (!D[q + 1].multiply(D[q], k).is_zero())
          rep.dd_failures.push_back("chart " + P.name(i) + " weight " + w.to_string() + " degree " +
                                    std::to_string(static_cast<int>(q) - 1));
    }
  }
  return rep;
}

struct HomComplex::Cache {
  std::mutex mu;
  std::map<std::pair<int, Weight>, std::vector<MatrixPiece>> pieces;
  std::map<std::pair<int, Weight>, std::unique_ptr<Matrix>> diffs;
};

HomComplex::HomComplex(ModulePtr source, ModuleComplex target, std::vector<int> enumeration, int cap)
    : source_(std::move(source)), target_(std::move(target)), cap_(cap), cache_(std::make_shared<Cache>()) {
  const auto& P = *source_->scheme()->poset;
  if (target_.scheme() != source_->scheme())
    throw Error(ErrorKind::Mismatch, "Hom complex between objects on different schemes");
  enumeration_ = resolve_enumeration(P, std::move(enumeration));
  chains_ = all_chains(P, enumeration_);
  const int d = static_cast<int>(P.size());
  for (int n = min_degree(); n <= max_degree(); ++n) {
    auto& ts = terms_[n];
    for (const auto& [q, mod] : target_.terms) {
      int p = n - q;
      if (p < 0 || p >= d) continue;
      for (std::size_t c = 0; c < chains_[static_cast<std::size_t>(p)].size(); ++c)
        ts.push_back({q, p, c, chains_[static_cast<std::size_t>(p)][c].meet});
    }
  }
}

int HomComplex::min_degree() const { return target_.terms.begin()->first; }

int HomComplex::max_degree() const {
  return target_.terms.rbegin()->first + static_cast<int>(source_->scheme()->size()) - 1;
}

const std::vector<HomComplex::Term>& HomComplex::terms(int n) const {
  static const std::vector<Term> none;
  auto it = terms_.find(n);
  return it == terms_.end() ? none : it->second;
}

namespace {

const std::vector<MatrixPiece>& term_pieces(const HomComplex& h, std::mutex& mu,
                                            std::map<std::pair<int, Weight>, std::vector<MatrixPiece>>& cache, int n,
                                            Weight w, int cap) {
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({n, w});
    if (it != cache.end()) return it->second;
  }
  std::vector<MatrixPiece> out;
  const auto& F = *h.source();
  for (const auto& t : h.terms(n)) {
    const auto& N = *h.target().terms.at(t.q);
    const auto& shN = N.shifts(t.site);
    const auto& shF = F.shifts(t.site);
    out.emplace_back(*F.scheme()->algebra(t.site), N.rank(), F.rank(),
                     [&](std::size_t a, std::size_t b) { return w + shN[a] - shF[b]; }, cap);
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.try_emplace({n, w}, std::move(out)).first->second;
}

std::vector<std::size_t> offsets(const std::vector<MatrixPiece>& ps) {
  std::vector<std::size_t> o;
  std::size_t acc = 0;
  for (const auto& p : ps) {
    o.push_back(acc);
    acc += p.dim();
  }
  o.push_back(acc);
  return o;
}

}  // namespace

std::size_t HomComplex::dim(int n, Weight w) const {
  return offsets(term_pieces(*this, cache_->mu, cache_->pieces, n, w, cap_)).back();
}

bool HomComplex::cap_insufficient(int n, Weight w) const {
  for (const auto& p : term_pieces(*this, cache_->mu, cache_->pieces, n, w, cap_))
    if (p.cap_insufficient()) return true;
  return false;
}

const Matrix& HomComplex::differential(int n, Weight w) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->diffs.find({n, w});
    if (it != cache_->diffs.end()) return *it->second;
  }
  const auto& S = *source_->scheme();
  const auto& F = *source_;
  const auto& src = term_pieces(*this, cache_->mu, cache_->pieces, n, w, cap_);
  const auto& dst = term_pieces(*this, cache_->mu, cache_->pieces, n + 1, w, cap_);
  auto so = offsets(src), dso = offsets(dst);
  auto m = std::make_unique<Matrix>(dso.back(), so.back());
  const auto& ts = terms(n);
  const auto& td = terms(n + 1);
  std::map<std::tuple<int, int, std::size_t>, std::size_t> where;
  for (std::size_t x = 0; x < td.size(); ++x) where.emplace(std::make_tuple(td[x].q, td[x].p, td[x].chain), x);
  auto blocks = blocks_of(chains_);
  PolyMatrix idF = PolyMatrix::identity(F.rank());
  for (std::size_t x = 0; x < ts.size(); ++x) {
    const Term& t = ts[x];
    const auto& N = *target_.terms.at(t.q);
    // Čech part
    for (const auto& b : blocks) {
      if (b.degree != t.p || b.from != static_cast<int>(t.chain)) continue;
      std::size_t y = where.at({t.q, t.p + 1, static_cast<std::size_t>(b.to)});
      int s = t.site, s2 = td[y].site;
      const PolyMatrix* inv = F.psi_inverse(s2, s);
      if (!inv) throw Error(ErrorKind::InvalidArgument, "source module " + F.name() + " has a non-invertible gluing");
      detail::add_induced_map(*m, dso[y], so[x], src[x], dst[y], S.phi(s2, s), N.psi(s2, s), *inv, b.sign);
    }
    // differential of the target
    auto dm = target_.maps.find(t.q);
    if (dm != target_.maps.end()) {
      std::size_t y = where.at({t.q + 1, t.p, t.chain});
      detail::add_induced_map(*m, dso[y], so[x], src[x], dst[y], S.phi(t.site, t.site),
                              dm->second.at(static_cast<std::size_t>(t.site)), idF, t.p % 2 == 0 ? 1 : -1);
    }
  }
  std::lock_guard<std::mutex> lock(cache_->mu);
  return *cache_->diffs.try_emplace({n, w}, std::move(m)).first->second;
}

Matrix HomComplex::t_action(int n, Weight w) const {
  const auto& S = *source_->scheme();
  const Weight tw = S.ring.t_weight();
  const auto& src = term_pieces(*this, cache_->mu, cache_->pieces, n, w, cap_);
  const auto& dst = term_pieces(*this, cache_->mu, cache_->pieces, n, w + tw, cap_);
  auto so = offsets(src), dso = offsets(dst);
  Matrix m(dso.back(), so.back());
  const auto& ts = terms(n);
  for (std::size_t x = 0; x < ts.size(); ++x) {
    const auto& N = *target_.terms.at(ts[x].q);
    PolyMatrix t(N.rank(), N.rank());
    for (std::size_t a = 0; a < N.rank(); ++a) t.at(a, a) = rewrite::truncate(rewrite::monomial_poly({}, 1), S.ring);
    detail::add_induced_map(m, dso[x], so[x], src[x], dst[x], S.phi(ts[x].site, ts[x].site), t,
                            PolyMatrix::identity(source_->rank()), 1);
  }
  return m;
}

std::vector<PolyMatrix> HomComplex::decode(int n, Weight w, const Vec& v) const {
  const auto& ps = term_pieces(*this, cache_->mu, cache_->pieces, n, w, cap_);
  auto o = offsets(ps);
  std::vector<PolyMatrix> out;
  for (std::size_t x = 0; x < ps.size(); ++x) out.push_back(ps[x].decode(v, o[x]));
  return out;
}

Vec HomComplex::encode(int n, Weight w, const std::vector<PolyMatrix>& parts) const {
  const auto& ps = term_pieces(*this, cache_->mu, cache_->pieces, n, w, cap_);
  auto o = offsets(ps);
  Vec v(o.back());
  for (std::size_t x = 0; x < ps.size(); ++x) ps[x].encode(parts.at(x), v, o[x]);
  return v;
}

std::size_t CohomologyReport::dim(int degree) const {
  std::size_t s = 0;
  for (const auto& g : groups)
    if (g.degree == degree) s += g.dim;
  return s;
}

std::size_t CohomologyReport::dim(int degree, Weight w) const {
  const auto* g = group(degree, w);
  return g ? g->dim : 0;
}

const CohomologyGroup* CohomologyReport::group(int degree, Weight w) const {
  for (const auto& g : groups)
    if (g.degree == degree && g.weight == w) return &g;
  return nullptr;
}

coeff::FlatRankPattern CohomologyReport::rank_pattern(int degree, int order) const {
  std::map<Weight, std::size_t> off;
  std::size_t total = 0;
  for (const auto& g : groups)
    if (g.degree == degree) {
      off[g.weight] = total;
      total += g.dim;
    }
  // t moves weight w to w + wt(t); images leaving the report are dropped
  Matrix t(total, total);
  for (const auto& g : groups) {
    if (g.degree != degree) continue;
    auto it = off.find(g.weight + t_weight);
    if (it == off.end()) continue;
    for (std::size_t c = 0; c < g.t_action.cols(); ++c)
      for (std::size_t r = 0; r < g.t_action.rows(); ++r) t.at(it->second + r, off[g.weight] + c) = g.t_action.at(r, c);
  }
  return coeff::flat_rank_pattern(t, order, field);
}

namespace {

struct WeightQuotient {
  QuotientSpace q;
  std::vector<Vec> cycles;
};

WeightQuotient quotient_at(const HomComplex& h, int n, Weight w, const Field& k) {
  std::size_t dn = h.dim(n, w);
  std::vector<Vec> Z;
  if (h.dim(n + 1, w) == 0 || n + 1 > h.max_degree())
    for (std::size_t i = 0; i < dn; ++i) {
      Vec e(dn);
      e[i] = 1;
      Z.push_back(e);
    }
  else
    Z = nullspace(h.differential(n, w), k);
  std::vector<Vec> B;
  if (n - 1 >= h.min_degree() && h.dim(n - 1, w) > 0 && dn > 0) B = column_space(h.differential(n - 1, w), k);
  return {QuotientSpace(dn, Z, B, k), Z};
}

}  // namespace

CohomologyReport cohomology(const HomComplex& h, const Window& window, int pmin, int pmax) {
  CohomologyReport rep;
  const auto& S = *h.source()->scheme();
  const Field& k = S.ring.field();
  const Weight tw = S.ring.t_weight();
  rep.t_weight = tw;
  rep.field = k;
  for (int n = pmin; n <= pmax; ++n)
    for (Weight w : window.weights()) {
      if (h.cap_insufficient(n, w))
        rep.warnings.push_back("length cap reached in degree " + std::to_string(n) + " weight " + w.to_string());
      if (n > h.min_degree() && n <= h.max_degree() && h.dim(n - 1, w) > 0 && h.dim(n + 1, w) > 0) {
        const Matrix& a = h.differential(n - 1, w);
        const Matrix& b = h.differential(n, w);
        if (!b.multiply(a, k).is_zero())
          rep.dd_failures.push_back("degree " + std::to_string(n) + " weight " + w.to_string());
      }
      if (h.dim(n, w) == 0) continue;
      auto wq = quotient_at(h, n, w, k);
      if (wq.q.dim() == 0) continue;
      CohomologyGroup g;
      g.degree = n;
      g.weight = w;
      g.dim = wq.q.dim();
      g.representatives = wq.q.representatives();
      if (S.ring.order() > 1) {
        Weight w2 = w + tw;
        auto target = quotient_at(h, n, w2, k);
        Matrix T = h.t_action(n, w);
        g.t_action = Matrix(target.q.dim(), g.dim);
        for (std::size_t c = 0; c < g.dim; ++c) {
          Vec img = T.apply(g.representatives[c], k);
          if (target.q.dim() == 0) continue;
          Vec coords = target.q.coordinates(img);
          for (std::size_t r = 0; r < coords.size(); ++r) g.t_action.at(r, c) = coords[r];
        }
      } else {
        g.t_action = Matrix(g.dim, g.dim);
      }
      rep.groups.push_back(std::move(g));
    }
  return rep;
}

CohomologyReport cohomology(const HomComplex& h, const Window& window) {
  return cohomology(h, window, h.min_degree(), h.max_degree());
}

CohomologyReport ext(const ModulePtr& f, const ModulePtr& n, const Window& window, int pmax,
                     std::vector<int> enumeration) {
  HomComplex h(f, ModuleComplex::single(n), std::move(enumeration), window.length_cap);
  int top = h.max_degree();
  if (pmax >= 0 && pmax < top) top = pmax;
  return cohomology(h, window, 0, top);
}

CohomologyReport ext(const ModulePtr& f, const ModuleComplex& n, const Window& window, std::vector<int> enumeration) {
  HomComplex h(f, n, std::move(enumeration), window.length_cap);
  return cohomology(h, window);
}

Vec class_coordinates(const HomComplex& h, int n, Weight w, const Vec& cocycle) {
  const Field& k = h.source()->scheme()->ring.field();
  if (h.dim(n, w) == 0) return {};
  return quotient_at(h, n, w, k).q.coordinates(cocycle);
}

std::vector<Vec> graded_hom(const HomComplex& h, Weight w) {
  const Field& k = h.source()->scheme()->ring.field();
  std::size_t d0 = h.dim(0, w);
  if (h.dim(1, w) == 0) {
    std::vector<Vec> all;
    for (std::size_t i = 0; i < d0; ++i) {
      Vec e(d0);
      e[i] = 1;
      all.push_back(e);
    }
    return all;
  }
  return nullspace(h.differential(0, w), k);
}

std::map<Weight, long> euler_characteristic(const HomComplex& h, const Window& window) {
  std::map<Weight, long> out;
  for (Weight w : window.weights()) {
    long chi = 0;
    for (int n = h.min_degree(); n <= h.max_degree(); ++n)
      chi += (n % 2 == 0 ? 1 : -1) * static_cast<long>(h.dim(n, w));
    out[w] = chi;
  }
  return out;
}

}  // namespace nccech::cech
