#include "nccech/deform.hpp"

#include <mutex>

#include "matrix_piece.hpp"
#include "nccech/cech.hpp"
#include "nccech/error.hpp"

namespace nccech::deform {

using detail::MatrixPiece;

bool ChainCochain::is_zero() const {
  for (const auto& [c, m] : parts)
    if (!m.is_zero()) return false;
  return true;
}

struct ChainComplex::Cache {
  std::mutex mu;
  std::map<std::pair<int, Weight>, std::vector<MatrixPiece>> pieces;
  std::map<std::pair<int, Weight>, std::unique_ptr<Matrix>> diffs;
  std::vector<std::map<std::vector<int>, std::size_t>> index;
};

ChainComplex::ChainComplex(ModulePtr f, int cap) : f_(std::move(f)), cap_(cap), cache_(std::make_shared<Cache>()) {
  const auto& P = *f_->scheme()->poset;
  for (int len = 1;; ++len) {
    auto cs = scheme::order_chains(P, len);
    if (cs.empty()) break;
    std::map<std::vector<int>, std::size_t> idx;
    for (std::size_t i = 0; i < cs.size(); ++i) idx.emplace(cs[i], i);
    cache_->index.push_back(std::move(idx));
    chains_.push_back(std::move(cs));
  }
}

const std::vector<std::vector<int>>& ChainComplex::chains(int p) const {
  static const std::vector<std::vector<int>> none;
  if (p < 0 || p > top()) return none;
  return chains_[static_cast<std::size_t>(p)];
}

namespace {

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

// pieces for degree p at weight w
static const std::vector<MatrixPiece>& pieces_of(const ChainComplex& cx, std::mutex& mu,
                                                 std::map<std::pair<int, Weight>, std::vector<MatrixPiece>>& cache,
                                                 int p, Weight w, int cap) {
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({p, w});
    if (it != cache.end()) return it->second;
  }
  const auto& F = *cx.module();
  std::vector<MatrixPiece> out;
  for (const auto& ch : cx.chains(p)) {
    const auto& s0 = F.shifts(ch.front());
    const auto& sp = F.shifts(ch.back());
    out.emplace_back(*F.scheme()->algebra(ch.front()), F.rank(), F.rank(),
                     [&](std::size_t a, std::size_t b) { return w + s0[a] - sp[b]; }, cap);
  }
  std::lock_guard<std::mutex> lock(mu);
  return cache.try_emplace({p, w}, std::move(out)).first->second;
}

std::size_t ChainComplex::dim(int p, Weight w) const {
  return offsets(pieces_of(*this, cache_->mu, cache_->pieces, p, w, cap_)).back();
}

const Matrix& ChainComplex::differential(int p, Weight w) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->diffs.find({p, w});
    if (it != cache_->diffs.end()) return *it->second;
  }
  const auto& F = *f_;
  const auto& S = *F.scheme();
  const auto& src = pieces_of(*this, cache_->mu, cache_->pieces, p, w, cap_);
  const auto& dst = pieces_of(*this, cache_->mu, cache_->pieces, p + 1, w, cap_);
  auto so = offsets(src), dso = offsets(dst);
  auto m = std::make_unique<Matrix>(dso.back(), so.back());
  const auto& targets = chains(p + 1);
  const auto& index = p >= 0 && p <= top() ? cache_->index[static_cast<std::size_t>(p)]
                                           : std::map<std::vector<int>, std::size_t>{};
  PolyMatrix id = PolyMatrix::identity(F.rank());
  for (std::size_t y = 0; y < targets.size(); ++y) {
    const auto& ch = targets[y];
    const int i0 = ch[0];
    const int q = p + 1;  // index of the last element
    // first face: drop i_0, transport along phi_{i0 i1}
    {
      std::vector<int> face(ch.begin() + 1, ch.end());
      std::size_t x = index.at(face);
      detail::add_induced_map(*m, dso[y], so[x], src[x], dst[y], S.phi(i0, ch[1]), F.psi(i0, ch[1]), id, 1);
    }
    for (int k = 1; k <= p; ++k) {
      std::vector<int> face = ch;
      face.erase(face.begin() + k);
      std::size_t x = index.at(face);
      detail::add_induced_map(*m, dso[y], so[x], src[x], dst[y], S.phi(i0, i0), id, id, k % 2 == 0 ? 1 : -1);
    }
    {
      std::vector<int> face(ch.begin(), ch.end() - 1);
      std::size_t x = index.at(face);
      PolyMatrix right = qcoh::mat_map(S.phi(i0, ch[static_cast<std::size_t>(q - 1)]),
                                       F.psi(ch[static_cast<std::size_t>(q - 1)], ch[static_cast<std::size_t>(q)]));
      detail::add_induced_map(*m, dso[y], so[x], src[x], dst[y], S.phi(i0, i0), id, right, q % 2 == 0 ? 1 : -1);
    }
  }
  std::lock_guard<std::mutex> lock(cache_->mu);
  return *cache_->diffs.try_emplace({p, w}, std::move(m)).first->second;
}

Vec ChainComplex::encode(const ChainCochain& c, Weight w) const {
  const auto& ps = pieces_of(*this, cache_->mu, cache_->pieces, c.degree, w, cap_);
  auto o = offsets(ps);
  Vec v(o.back());
  const auto& cs = chains(c.degree);
  for (std::size_t x = 0; x < cs.size(); ++x) {
    auto it = c.parts.find(cs[x]);
    if (it != c.parts.end()) ps[x].encode(it->second, v, o[x]);
  }
  return v;
}

ChainCochain ChainComplex::decode(int p, Weight w, const Vec& v) const {
  const auto& ps = pieces_of(*this, cache_->mu, cache_->pieces, p, w, cap_);
  auto o = offsets(ps);
  ChainCochain c;
  c.degree = p;
  const auto& cs = chains(p);
  for (std::size_t x = 0; x < cs.size(); ++x) {
    PolyMatrix m = ps[x].decode(v, o[x]);
    if (!m.is_zero()) c.parts.emplace(cs[x], std::move(m));
  }
  return c;
}

ChainCochain ChainComplex::coboundary(const ChainCochain& c, Weight w) const {
  const Field& k = f_->scheme()->ring.field();
  return decode(c.degree + 1, w, differential(c.degree, w).apply(encode(c, w), k));
}

std::size_t ChainCohomology::dim(int p) const {
  std::size_t s = 0;
  for (const auto& [key, d] : dims)
    if (key.first == p) s += d;
  return s;
}

ChainCohomology chain_cohomology(const ChainComplex& c, const Window& window) {
  ChainCohomology out;
  const Field& k = c.module()->scheme()->ring.field();
  for (int p = 0; p <= c.top(); ++p)
    for (Weight w : window.weights()) {
      std::size_t n = c.dim(p, w);
      if (n == 0) continue;
      std::size_t z = p < c.top() ? n - rank(c.differential(p, w), k) : n;
      std::size_t b = p > 0 && c.dim(p - 1, w) > 0 ? rank(c.differential(p - 1, w), k) : 0;
      if (z > b) out.dims[{p, w}] = z - b;
    }
  return out;
}

LocallyFreeModule transport(const LocallyFreeModule& f, const SchemePtr& target) {
  const auto& S = *f.scheme();
  if (target->size() != S.size()) throw Error(ErrorKind::Mismatch, "transport: different number of charts");
  for (int i = 0; i < static_cast<int>(S.size()); ++i) {
    const auto& a = S.algebra(i)->alphabet();
    const auto& b = target->algebra(i)->alphabet();
    if (a.size() != b.size()) throw Error(ErrorKind::Mismatch, "transport: chart alphabets differ");
    for (std::size_t l = 0; l < a.size(); ++l)
      if (a.name(static_cast<rewrite::Letter>(l)) != b.name(static_cast<rewrite::Letter>(l)))
        throw Error(ErrorKind::Mismatch, "transport: chart alphabets differ");
  }
  std::map<std::pair<int, int>, PolyMatrix> psi;
  for (const auto& [key, m] : f.gluings()) psi.emplace(key, qcoh::mat_truncate(m, target->ring));
  return LocallyFreeModule(f.name(), target, f.rank(), f.all_shifts(), std::move(psi));
}

LocallyFreeModule lift_gluing(const LocallyFreeModule& f, const SchemePtr& next) {
  if (next->ring.order() < f.scheme()->ring.order())
    throw Error(ErrorKind::InvalidArgument, "lift_gluing: target level is below the module");
  return transport(f, next);
}

LocallyFreeModule reduce_module(const LocallyFreeModule& f, const SchemePtr& lower) { return transport(f, lower); }

namespace {

// Entries of m lie in t^n A; returns m / t^n as a matrix over the level-1 chart.
PolyMatrix divide_t(const PolyMatrix& m, int n, const std::string& what) {
  PolyMatrix out(m.rows, m.cols);
  for (std::size_t e = 0; e < m.entries.size(); ++e)
    for (const auto& [mono, c] : m.entries[e]) {
      if (mono.tpow < n)
        throw Error(ErrorKind::InvalidArgument, what + " has a term below t^" + std::to_string(n) +
                                                    " (the lifts do not reduce to a cocycle)");
      out.entries[e].emplace(rewrite::Monomial{mono.word, mono.tpow - n}, c);
    }
  return out;
}

std::string chain_name(const scheme::MeetPoset& P, const std::vector<int>& ch) {
  std::string s;
  for (int e : ch) s += (s.empty() ? "" : "<") + P.name(e);
  return s;
}

}  // namespace

ObstructionResult obstruction(const ChainComplex& f0, const LocallyFreeModule& lifted, int n) {
  const auto& S = *lifted.scheme();
  if (S.ring.order() != n + 1) throw Error(ErrorKind::InvalidArgument, "obstruction: lift is not at level n + 1");
  ObstructionResult r;
  r.order = n;
  r.weight = -(S.ring.t_weight() * n);
  r.cocycle.degree = 2;
  for (const auto& ch : f0.chains(2)) {
    int i = ch[0], j = ch[1], k = ch[2];
    const auto& A = *S.algebra(i);
    PolyMatrix m = qcoh::mat_add(A, qcoh::mat_mul(A, lifted.psi(i, j), qcoh::mat_map(S.phi(i, j), lifted.psi(j, k))),
                                 lifted.psi(i, k), -1);
    PolyMatrix d = divide_t(m, n, "delta on " + chain_name(*S.poset, ch));
    if (!d.is_zero()) r.cocycle.parts.emplace(ch, std::move(d));
  }
  r.closed = true;
  if (f0.top() >= 3) {
    ChainCochain dd = f0.coboundary(r.cocycle, r.weight);
    for (const auto& [ch, m] : dd.parts) {
      r.closed = false;
      r.closedness_failures.push_back(chain_name(*S.poset, ch));
    }
  }
  return r;
}

void solve_extension(const ChainComplex& f0, ObstructionResult& r) {
  const Field& k = f0.module()->scheme()->ring.field();
  ChainCochain zero;
  zero.degree = 1;
  if (f0.top() < 2 || f0.dim(2, r.weight) == 0) {
    r.solvable = true;
    r.particular = zero;
    return;
  }
  const Matrix& d1 = f0.differential(1, r.weight);
  Vec rhs = f0.encode(r.cocycle, r.weight);
  for (auto& x : rhs) x = k.neg(x);
  r.system_rank = rank(d1, k);
  Matrix aug(d1.rows(), d1.cols() + 1);
  for (std::size_t i = 0; i < d1.rows(); ++i) {
    for (std::size_t j = 0; j < d1.cols(); ++j) aug.at(i, j) = d1.at(i, j);
    aug.at(i, d1.cols()) = rhs[i];
  }
  r.augmented_rank = rank(aug, k);
  auto sol = solve(d1, rhs, k);
  if (sol) {
    r.solvable = true;
    r.particular = f0.decode(1, r.weight, *sol);
  } else {
    r.solvable = false;
    r.h2_witness = inconsistency_witness(d1, rhs, k);
  }
}

ExtensionCertificate apply_correction(const LocallyFreeModule& lifted, const ChainCochain& epsilon, int n,
                                      const LocallyFreeModule& below) {
  const auto& S = *lifted.scheme();
  std::map<std::pair<int, int>, PolyMatrix> psi;
  for (const auto& [key, m] : lifted.gluings()) {
    auto it = epsilon.parts.find({key.first, key.second});
    if (it == epsilon.parts.end()) {
      psi.emplace(key, m);
      continue;
    }
    psi.emplace(key, qcoh::mat_add(*S.algebra(key.first), m, qcoh::mat_scale_t(*S.algebra(key.first), it->second, n)));
  }
  ExtensionCertificate cert;
  auto mod = std::make_shared<LocallyFreeModule>(lifted.name(), lifted.scheme(), lifted.rank(), lifted.all_shifts(),
                                                 std::move(psi));
  auto rep = qcoh::validate_module(*mod);
  cert.cocycle_ok = rep.valid();
  for (const auto& d : rep.defects) cert.defects.push_back(d.kind + ": " + d.detail);
  auto red = reduce_module(*mod, below.scheme());
  cert.reduces = red.gluings() == below.gluings();
  if (!cert.reduces) cert.defects.push_back("reduction does not return the level-" +
                                            std::to_string(below.scheme()->ring.order()) + " module");
  cert.module = std::move(mod);
  return cert;
}

ChainCochain lift_difference(const LocallyFreeModule& a, const LocallyFreeModule& b, int n, const SchemePtr& level1) {
  const auto& S = *a.scheme();
  ChainCochain c;
  c.degree = 1;
  for (const auto& [key, m] : a.gluings()) {
    const auto& A = *S.algebra(key.first);
    PolyMatrix d = divide_t(qcoh::mat_add(A, b.psi(key.first, key.second), m, -1), n, "lift difference");
    d = qcoh::mat_truncate(d, level1->ring);
    if (!d.is_zero()) c.parts.emplace(std::vector<int>{key.first, key.second}, std::move(d));
  }
  return c;
}

TorsorReport torsor_structure(const ChainComplex& f0, const Window& window) {
  TorsorReport t;
  const Field& k = f0.module()->scheme()->ring.field();
  if (f0.top() < 1) {
    t.identity_holds = true;
    return t;
  }
  for (Weight w : window.weights()) {
    std::size_t n1 = f0.dim(1, w);
    if (n1 == 0) continue;
    std::vector<Vec> Z;
    if (f0.top() >= 2 && f0.dim(2, w) > 0) {
      Z = nullspace(f0.differential(1, w), k);
    } else {
      for (std::size_t i = 0; i < n1; ++i) {
        Vec e(n1);
        e[i] = 1;
        Z.push_back(e);
      }
    }
    std::vector<Vec> B;
    if (f0.dim(0, w) > 0) B = column_space(f0.differential(0, w), k);
    QuotientSpace q(n1, Z, B, k);
    t.closed_dim += Z.size();
    t.coboundary_dim += B.size();
    t.h1_dim += q.dim();
    if (q.dim()) t.h1_by_weight[w] = q.dim();
  }
  t.identity_holds = t.closed_dim == t.coboundary_dim + t.h1_dim;
  return t;
}

std::optional<Intertwiner> intertwiner(const ChainComplex& f0, const LocallyFreeModule& a, const LocallyFreeModule& b,
                                       int n) {
  const auto& S = *a.scheme();
  const Field& k = S.ring.field();
  const Weight w = -(S.ring.t_weight() * n);
  ChainCochain eta = lift_difference(a, b, n, f0.module()->scheme());
  Vec rhs = f0.encode(eta, w);
  for (auto& x : rhs) x = k.neg(x);
  Intertwiner out;
  if (f0.dim(0, w) == 0) {
    if (!is_zero(rhs)) return std::nullopt;
    out.gamma.degree = 0;
  } else {
    auto sol = solve(f0.differential(0, w), rhs, k);
    if (!sol) return std::nullopt;
    out.gamma = f0.decode(0, w, *sol);
  }
  const std::size_t r = a.rank();
  auto one_plus = [&](int i) {
    PolyMatrix g = PolyMatrix::identity(r);
    auto it = out.gamma.parts.find({i});
    if (it != out.gamma.parts.end()) g = qcoh::mat_add(*S.algebra(i), g, qcoh::mat_scale_t(*S.algebra(i), it->second, n));
    return g;
  };
  out.verified = true;
  for (const auto& [key, m] : a.gluings()) {
    auto [i, j] = key;
    const auto& A = *S.algebra(i);
    PolyMatrix lhs = qcoh::mat_mul(A, one_plus(i), m);
    PolyMatrix rhs2 = qcoh::mat_mul(A, b.psi(i, j), qcoh::mat_map(S.phi(i, j), one_plus(j)));
    if (!(lhs == rhs2)) out.verified = false;
  }
  return out;
}

namespace {

std::size_t end_dim(const ModulePtr& f, const Window& window) {
  cech::HomComplex h(f, qcoh::ModuleComplex::single(f), {}, window.length_cap);
  std::size_t s = 0;
  for (Weight w : window.weights()) s += cech::graded_hom(h, w).size();
  return s;
}

}  // namespace

TowerRun run_tower(const std::vector<SchemePtr>& levels, const ModulePtr& f0, const Window& window) {
  TowerRun run;
  if (levels.empty()) throw Error(ErrorKind::InvalidArgument, "run_tower: empty tower");
  ModulePtr base = f0->scheme() == levels[0] ? f0 : std::make_shared<LocallyFreeModule>(transport(*f0, levels[0]));
  for (const auto& d : qcoh::validate_module(*base).defects) run.tower_defects.push_back(d.kind + ": " + d.detail);
  ChainComplex cx(base, window.length_cap);
  run.base_end_dim = end_dim(base, window);
  ModulePtr cur = base;
  for (std::size_t n = 1; n < levels.size(); ++n) {
    LevelRecord rec;
    rec.level = static_cast<int>(n) + 1;
    auto lifted = lift_gluing(*cur, levels[n]);
    rec.obstruction = obstruction(cx, lifted, static_cast<int>(n));
    if (rec.obstruction.closed) solve_extension(cx, rec.obstruction);
    if (!rec.obstruction.closed || !rec.obstruction.solvable) {
      run.obstructed_level = rec.level;
      run.levels.push_back(std::move(rec));
      break;
    }
    rec.certificate = apply_correction(lifted, *rec.obstruction.particular, static_cast<int>(n), *cur);
    cur = rec.certificate->module;
    rec.end_dim = end_dim(cur, window);
    run.levels.push_back(std::move(rec));
  }
  run.top = cur;
  return run;
}

}  // namespace nccech::deform
