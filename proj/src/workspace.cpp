#include "nccech/workspace.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "nccech/error.hpp"

namespace nccech::workspace {

std::string Diagnostic::to_string() const {
  return "line " + std::to_string(line) + ": " + kind_name(kind) + ": " + message;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

int to_int(const std::string& s) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, "expected an integer, got '" + s + "'");
  }
  if (pos != s.size()) throw Error(ErrorKind::Parse, "expected an integer, got '" + s + "'");
  return v;
}

std::pair<int, int> to_range(const std::string& s) {
  auto c = s.find(':', 1);
  if (c == std::string::npos) throw Error(ErrorKind::Parse, "expected lo:hi, got '" + s + "'");
  int lo = to_int(s.substr(0, c)), hi = to_int(s.substr(c + 1));
  if (lo > hi) throw Error(ErrorKind::Parse, "empty range '" + s + "'");
  return {lo, hi};
}

// "key : value" with the head split into words.
std::pair<std::vector<std::string>, std::string> head_and_body(const std::string& line) {
  auto c = line.find(':');
  if (c == std::string::npos) throw Error(ErrorKind::Parse, "expected ':' in '" + line + "'");
  return {words(line.substr(0, c)), trim(line.substr(c + 1))};
}

}  // namespace

// ---------------------------------------------------------------------------
// Builders

struct Workspace::Cache {
  std::mutex mu;
  std::map<std::string, std::shared_ptr<const scheme::NcScheme>> schemes;
};

Workspace::Workspace() : cache_(std::make_shared<Cache>()) {}

namespace {

struct Overrides {
  std::vector<const GlueDecl*> glues;
  std::map<std::pair<std::string, std::string>, std::string> rules;  // (algebra, lhs) -> rhs
};

algebra::AlgebraPtr build_algebra(const std::string& name, const AlgebraDecl& d, const coeff::ArtinRing& ring,
                                  const Overrides& ov) {
  rewrite::Alphabet a;
  for (const auto& [n, w] : d.letters) a.add(n, w);
  std::vector<rewrite::RewriteRule> rules;
  for (const auto& [lhs, rhs0] : d.rules) {
    std::string rhs = rhs0;
    auto it = ov.rules.find({name, lhs});
    if (it != ov.rules.end()) rhs = it->second;
    rules.push_back({rewrite::parse_word(lhs, a), rewrite::parse_poly(rhs, a, ring)});
  }
  return std::make_shared<algebra::GradedAlgebra>(name, rewrite::RewriteSystem(a, rules, ring));
}

std::shared_ptr<const scheme::NcScheme> build_scheme(const Workspace& ws, const std::string& name,
                                                     const coeff::ArtinRing& ring, const Overrides& ov) {
  auto sit = ws.schemes.find(name);
  if (sit == ws.schemes.end()) throw Error(ErrorKind::Reference, "unknown scheme '" + name + "'");
  const SchemeDecl& d = sit->second;
  auto pit = ws.posets.find(d.poset);
  if (pit == ws.posets.end()) throw Error(ErrorKind::Reference, "unknown poset '" + d.poset + "'");
  const auto& P = pit->second;
  std::vector<algebra::AlgebraPtr> as(P->size());
  std::map<std::string, algebra::AlgebraPtr> built;
  for (const auto& [elem, alg] : d.charts) {
    int i = P->index(elem);
    if (i < 0) throw Error(ErrorKind::Reference, "unknown poset element '" + elem + "'");
    auto ait = ws.algebras.find(alg);
    if (ait == ws.algebras.end()) throw Error(ErrorKind::Reference, "unknown algebra '" + alg + "'");
    auto& a = built[alg];
    if (!a) a = build_algebra(alg, ait->second, ring, ov);
    as[static_cast<std::size_t>(i)] = a;
  }
  for (std::size_t i = 0; i < as.size(); ++i)
    if (!as[i]) throw Error(ErrorKind::Reference, "scheme " + name + ": no chart for element " + P->name(static_cast<int>(i)));
  std::map<std::pair<int, int>, const GlueDecl*> glue;
  for (const auto& g : d.glues) glue[{P->index(g.i), P->index(g.j)}] = &g;
  for (const auto* g : ov.glues) glue[{P->index(g->i), P->index(g->j)}] = g;
  std::map<std::pair<int, int>, algebra::AlgebraHom> homs;
  for (const auto& [key, g] : glue) {
    auto [i, j] = key;
    if (i < 0 || j < 0) throw Error(ErrorKind::Reference, "glue " + g->i + " " + g->j + ": unknown element");
    const auto& src = as[static_cast<std::size_t>(j)];
    const auto& dst = as[static_cast<std::size_t>(i)];
    if (g->images.size() != src->alphabet().size())
      throw Error(ErrorKind::InvalidArgument, "glue " + g->i + " " + g->j + ": " + std::to_string(g->images.size()) +
                                                  " images for " + std::to_string(src->alphabet().size()) + " letters");
    std::vector<rewrite::Poly> im;
    for (const auto& s : g->images) im.push_back(dst->parse(s));
    homs.emplace(key, algebra::AlgebraHom(src, dst, std::move(im)));
  }
  return std::make_shared<scheme::NcScheme>(scheme::make_scheme(name, P, std::move(as), std::move(homs)));
}

}  // namespace

std::shared_ptr<const scheme::NcScheme> Workspace::scheme(const std::string& name) const {
  if (towers.count(name)) return tower_level(name, 1);
  if (auto at = name.rfind('@'); at != std::string::npos) return tower_level(name.substr(0, at), to_int(name.substr(at + 1)));
  auto sit = schemes.find(name);
  if (sit == schemes.end()) throw Error(ErrorKind::Reference, "unknown scheme '" + name + "'");
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto& slot = cache_->schemes["S:" + name];
  if (!slot) {
    coeff::ArtinRing ring(field, sit->second.order.value_or(order), sit->second.tweight.value_or(tweight));
    slot = build_scheme(*this, name, ring, {});
  }
  return slot;
}

std::shared_ptr<const scheme::NcScheme> Workspace::tower_level(const std::string& name, int level) const {
  auto tit = towers.find(name);
  if (tit == towers.end()) throw Error(ErrorKind::Reference, "unknown tower '" + name + "'");
  const TowerDecl& t = tit->second;
  if (level < 1 || level > t.levels)
    throw Error(ErrorKind::InvalidArgument, "tower " + name + " has levels 1.." + std::to_string(t.levels));
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto& slot = cache_->schemes["T:" + name + "@" + std::to_string(level)];
  if (!slot) {
    const auto& sd = schemes.at(t.scheme);
    coeff::ArtinRing ring(field, level, t.tweight.value_or(sd.tweight.value_or(tweight)));
    Overrides ov;
    for (const auto& [lvl, g] : t.glues)
      if (lvl <= level) ov.glues.push_back(&g);
    for (const auto& r : t.rules)
      if (r.level <= level) ov.rules[{r.algebra, r.lhs}] = r.rhs;
    slot = build_scheme(*this, t.scheme, ring, ov);
  }
  return slot;
}

scheme::DeformationTower Workspace::tower(const std::string& name) const {
  scheme::DeformationTower t;
  t.name = name;
  auto tit = towers.find(name);
  if (tit == towers.end()) throw Error(ErrorKind::Reference, "unknown tower '" + name + "'");
  for (int n = 1; n <= tit->second.levels; ++n) t.levels.push_back(*tower_level(name, n));
  return t;
}

std::string Workspace::scheme_of(const std::string& name) const {
  std::string base = name;
  if (auto b = base.rfind('['); b != std::string::npos && base.back() == ']') base = base.substr(0, b);
  if (auto it = modules.find(base); it != modules.end())
    return it->second.summands.empty() ? it->second.scheme : scheme_of(it->second.summands.front());
  if (auto it = complexes.find(base); it != complexes.end()) return it->second.scheme;
  throw Error(ErrorKind::Reference, "unknown module or complex '" + name + "'");
}

qcoh::ModulePtr Workspace::module(const std::string& name) const { return module(name, scheme(scheme_of(name))); }

qcoh::ModulePtr Workspace::module(const std::string& name,
                                  const std::shared_ptr<const scheme::NcScheme>& on) const {
  auto it = modules.find(name);
  if (it == modules.end()) throw Error(ErrorKind::Reference, "unknown module '" + name + "'");
  const ModuleDecl& d = it->second;
  if (!d.summands.empty()) {
    qcoh::ModulePtr acc = module(d.summands.front(), on);
    for (std::size_t k = 1; k < d.summands.size(); ++k)
      acc = std::make_shared<qcoh::LocallyFreeModule>(qcoh::direct_sum(name, *acc, *module(d.summands[k], on)));
    if (d.summands.size() == 1)
      acc = std::make_shared<qcoh::LocallyFreeModule>(acc->renamed(name));
    return acc;
  }
  const auto& P = *on->poset;
  if (on->poset != scheme(d.scheme)->poset)
    throw Error(ErrorKind::Mismatch, "module " + name + " is declared on a different poset");
  std::vector<std::vector<Weight>> sh(P.size(), std::vector<Weight>(d.rank, Weight{}));
  for (const auto& [elem, ws] : d.shifts) {
    int i = P.index(elem);
    if (i < 0) throw Error(ErrorKind::Reference, "unknown poset element '" + elem + "'");
    if (ws.size() != d.rank) throw Error(ErrorKind::InvalidArgument, "shifts at " + elem + " do not match the rank");
    sh[static_cast<std::size_t>(i)] = ws;
  }
  std::map<std::pair<int, int>, qcoh::PolyMatrix> psi;
  for (const auto& m : d.psi) {
    int i = P.index(m.i), j = P.index(m.j);
    if (i < 0 || j < 0) throw Error(ErrorKind::Reference, "psi " + m.i + " " + m.j + ": unknown element");
    psi.emplace(std::make_pair(i, j), qcoh::parse_matrix(*on->algebra(i), m.text));
  }
  return std::make_shared<qcoh::LocallyFreeModule>(name, on, d.rank, std::move(sh), std::move(psi));
}

qcoh::ModuleComplex Workspace::object(const std::string& name,
                                      const std::shared_ptr<const scheme::NcScheme>& on) const {
  std::string base = name;
  int shift = 0;
  if (auto b = base.rfind('['); b != std::string::npos && base.back() == ']') {
    shift = to_int(base.substr(b + 1, base.size() - b - 2));
    base = base.substr(0, b);
  }
  qcoh::ModuleComplex x;
  if (auto it = complexes.find(base); it != complexes.end()) {
    const auto& d = it->second;
    x.name = base;
    for (const auto& [q, m] : d.terms) x.terms[q] = module(m, on);
    const auto& P = *on->poset;
    for (const auto& [q, m] : d.maps) {
      if (!x.terms.count(q) || !x.terms.count(q + 1))
        throw Error(ErrorKind::Reference, "map " + std::to_string(q) + ": no terms in degrees " + std::to_string(q) +
                                              " and " + std::to_string(q + 1));
      auto& v = x.maps[q];
      if (v.empty())
        for (std::size_t i = 0; i < P.size(); ++i) v.emplace_back(x.terms[q + 1]->rank(), x.terms[q]->rank());
      int i = P.index(m.i);
      if (i < 0) throw Error(ErrorKind::Reference, "unknown poset element '" + m.i + "'");
      v[static_cast<std::size_t>(i)] = qcoh::parse_matrix(*on->algebra(i), m.text);
    }
  } else {
    x = qcoh::ModuleComplex::single(module(base, on));
    x.name = base;
  }
  if (shift) {
    x = x.shifted(shift);
    x.name = name;
  }
  return x;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Block { None, Poset, Algebra, Scheme, Module, Complex, Tower, Skip };

struct PosetDraft {
  int line = 0;
  std::string name;
  std::vector<std::string> elements;
  std::vector<std::pair<std::string, std::string>> less;
  std::vector<scheme::MeetPoset::MeetEntry> meets;
};

class Parser {
 public:
  explicit Parser(std::string text) { ws_.source = std::move(text); }

  ParseResult run() {
    std::istringstream in(ws_.source);
    std::string raw;
    int n = 0;
    while (std::getline(in, raw)) {
      ++n;
      std::string line = raw;
      if (auto h = line.find('#'); h != std::string::npos) line = line.substr(0, h);
      line = trim(line);
      if (line.empty()) continue;
      try {
        statement(n, line);
      } catch (const Error& e) {
        error(n, e.kind(), e.what());
        // a broken block header: drop its body instead of reporting every line
        if (block_ == Block::None && opens_block(line)) block_ = Block::Skip;
      }
    }
    if (block_ != Block::None) error(block_line_, ErrorKind::Parse, "block '" + block_name_ + "' is not closed with 'end'");
    if (errors_.empty()) resolve();
    ParseResult r;
    r.errors = std::move(errors_);
    if (r.errors.empty()) r.workspace = std::move(ws_);
    return r;
  }

 private:
  Workspace ws_;
  std::vector<Diagnostic> errors_;
  Block block_ = Block::None;
  std::string block_name_;
  int block_line_ = 0;
  PosetDraft poset_;

  static bool opens_block(const std::string& line) {
    auto w = words(line);
    static const std::set<std::string> heads = {"poset", "algebra", "scheme", "module", "complex", "tower"};
    return heads.count(w[0]) > 0;
  }

  void error(int line, ErrorKind k, const std::string& msg) { errors_.push_back({line, k, msg}); }

  void need(bool ok, const std::string& msg) {
    if (!ok) throw Error(ErrorKind::Parse, msg);
  }

  void check_fresh(const std::string& name) {
    if (ws_.posets.count(name) || ws_.algebras.count(name) || ws_.schemes.count(name) || ws_.modules.count(name) ||
        ws_.complexes.count(name) || ws_.towers.count(name))
      throw Error(ErrorKind::Parse, "name '" + name + "' is already declared");
  }

  const scheme::MeetPoset& poset_of_scheme(const std::string& s) {
    std::string sc = s;
    if (auto at = s.rfind('@'); at != std::string::npos) {
      sc = s.substr(0, at);
      auto t = ws_.towers.find(sc);
      if (t == ws_.towers.end()) throw Error(ErrorKind::Reference, "unknown tower '" + sc + "'");
      int lv = to_int(s.substr(at + 1));
      if (lv < 1 || lv > t->second.levels)
        throw Error(ErrorKind::InvalidArgument, "tower " + sc + " has levels 1.." + std::to_string(t->second.levels));
      sc = t->second.scheme;
    }
    if (auto t = ws_.towers.find(sc); t != ws_.towers.end()) sc = t->second.scheme;
    auto it = ws_.schemes.find(sc);
    if (it == ws_.schemes.end()) throw Error(ErrorKind::Reference, "unknown scheme '" + s + "'");
    return *ws_.posets.at(it->second.poset);
  }

  void element(const scheme::MeetPoset& P, const std::string& e) {
    if (P.index(e) < 0) throw Error(ErrorKind::Reference, "unknown poset element '" + e + "'");
  }

  void element(const std::vector<std::string>& names, const std::string& e) {
    for (const auto& n : names)
      if (n == e) return;
    throw Error(ErrorKind::Reference, "unknown poset element '" + e + "'");
  }

  void statement(int n, const std::string& line) {
    auto w = words(line);
    const std::string& key = w[0];
    if (block_ == Block::None) return top(n, w);
    if (key == "end") {
      need(w.size() == 1, "stray text after 'end'");
      close(n);
      return;
    }
    switch (block_) {
      case Block::Poset: return poset_line(w);
      case Block::Algebra: return algebra_line(n, line, w);
      case Block::Scheme: return scheme_line(n, line, w);
      case Block::Module: return module_line(n, line, w);
      case Block::Complex: return complex_line(n, line, w);
      case Block::Tower: return tower_line(n, line, w);
      case Block::Skip:
      case Block::None: break;
    }
  }

  void open(Block b, const std::string& name, int n) {
    check_fresh(name);
    block_ = b;
    block_name_ = name;
    block_line_ = n;
  }

  void top(int n, const std::vector<std::string>& w) {
    const std::string& key = w[0];
    if (key == "field") {
      need(w.size() == 2, "usage: field Q | field GF(p)");
      if (w[1] == "Q") {
        ws_.field = Field::rationals();
      } else {
        need(w[1].rfind("GF(", 0) == 0 && w[1].back() == ')', "unknown field '" + w[1] + "'");
        ws_.field = Field::prime(to_int(w[1].substr(3, w[1].size() - 4)));
      }
    } else if (key == "ring") {
      for (std::size_t i = 1; i + 1 < w.size(); i += 2) {
        if (w[i] == "order") ws_.order = to_int(w[i + 1]);
        else if (w[i] == "tweight") ws_.tweight = parse_weight(w[i + 1]);
        else throw Error(ErrorKind::Parse, "unknown ring option '" + w[i] + "'");
      }
      need(w.size() % 2 == 1, "usage: ring order N tweight W");
      need(ws_.order >= 1, "ring order must be at least 1");
    } else if (key == "window") {
      need(w.size() >= 2, "usage: window lo:hi [secondary lo:hi] [cap N] [pmax P]");
      auto [lo, hi] = to_range(w[1]);
      ws_.window.lo = {lo, 0};
      ws_.window.hi = {hi, 0};
      for (std::size_t i = 2; i + 1 < w.size(); i += 2) {
        if (w[i] == "secondary") {
          auto [a, b] = to_range(w[i + 1]);
          ws_.window.lo.secondary = a;
          ws_.window.hi.secondary = b;
        } else if (w[i] == "cap") {
          ws_.window.length_cap = to_int(w[i + 1]);
        } else if (w[i] == "pmax") {
          ws_.pmax = to_int(w[i + 1]);
        } else {
          throw Error(ErrorKind::Parse, "unknown window option '" + w[i] + "'");
        }
      }
      need(w.size() % 2 == 0, "usage: window lo:hi [secondary lo:hi] [cap N] [pmax P]");
      ws_.window_declared = true;
    } else if (key == "poset") {
      need(w.size() == 2, "usage: poset NAME");
      open(Block::Poset, w[1], n);
      poset_ = PosetDraft{n, w[1], {}, {}, {}};
    } else if (key == "algebra") {
      need(w.size() == 2, "usage: algebra NAME");
      open(Block::Algebra, w[1], n);
      ws_.algebras[w[1]].line = n;
    } else if (key == "scheme") {
      need(w.size() >= 4 && w[2] == "on", "usage: scheme NAME on POSET [order N] [tweight W]");
      if (!ws_.posets.count(w[3])) throw Error(ErrorKind::Reference, "unknown poset '" + w[3] + "'");
      SchemeDecl d;
      d.line = n;
      d.poset = w[3];
      for (std::size_t i = 4; i + 1 < w.size(); i += 2) {
        if (w[i] == "order") d.order = to_int(w[i + 1]);
        else if (w[i] == "tweight") d.tweight = parse_weight(w[i + 1]);
        else throw Error(ErrorKind::Parse, "unknown scheme option '" + w[i] + "'");
      }
      open(Block::Scheme, w[1], n);
      ws_.schemes[w[1]] = std::move(d);
    } else if (key == "module" || key == "complex") {
      need(w.size() == 4 && w[2] == "on", "usage: " + key + " NAME on SCHEME");
      poset_of_scheme(w[3]);
      if (key == "module") {
        open(Block::Module, w[1], n);
        ModuleDecl d;
        d.line = n;
        d.scheme = w[3];
        ws_.modules[w[1]] = std::move(d);
        ws_.order_of_modules.push_back(w[1]);
      } else {
        open(Block::Complex, w[1], n);
        ComplexDecl d;
        d.line = n;
        d.scheme = w[3];
        ws_.complexes[w[1]] = std::move(d);
      }
    } else if (key == "sum") {
      need(w.size() >= 4 && w[2] == "=", "usage: sum NAME = M1 + M2 + ...");
      check_fresh(w[1]);
      ModuleDecl d;
      d.line = n;
      for (std::size_t i = 3; i < w.size(); ++i) {
        if (i % 2 == 0) {
          need(w[i] == "+", "expected '+' in sum");
          continue;
        }
        if (!ws_.modules.count(w[i])) throw Error(ErrorKind::Reference, "unknown module '" + w[i] + "'");
        d.summands.push_back(w[i]);
      }
      need(w.size() % 2 == 0, "sum ends with '+'");
      d.scheme = ws_.scheme_of(d.summands.front());
      for (const auto& s : d.summands)
        if (&poset_of_scheme(ws_.scheme_of(s)) != &poset_of_scheme(d.scheme))
          throw Error(ErrorKind::Mismatch, "summands of " + w[1] + " live on different posets");
      ws_.modules[w[1]] = std::move(d);
      ws_.order_of_modules.push_back(w[1]);
    } else if (key == "tower") {
      need(w.size() >= 6 && w[2] == "on" && w[4] == "levels", "usage: tower NAME on SCHEME levels N [tweight W]");
      if (!ws_.schemes.count(w[3])) throw Error(ErrorKind::Reference, "unknown scheme '" + w[3] + "'");
      TowerDecl d;
      d.line = n;
      d.scheme = w[3];
      d.levels = to_int(w[5]);
      need(d.levels >= 1, "a tower needs at least one level");
      for (std::size_t i = 6; i + 1 < w.size(); i += 2) {
        if (w[i] == "tweight") d.tweight = parse_weight(w[i + 1]);
        else throw Error(ErrorKind::Parse, "unknown tower option '" + w[i] + "'");
      }
      open(Block::Tower, w[1], n);
      ws_.towers[w[1]] = std::move(d);
    } else if (key == "end") {
      throw Error(ErrorKind::Parse, "'end' outside a block");
    } else {
      throw Error(ErrorKind::Parse, "unknown statement '" + key + "'");
    }
  }

  void close(int n) {
    if (block_ == Block::Poset) {
      try {
        ws_.posets[poset_.name] =
            std::make_shared<const scheme::MeetPoset>(poset_.elements, poset_.less, poset_.meets);
      } catch (const Error& e) {
        error(poset_.line, e.kind(), e.what());
      }
    }
    (void)n;
    block_ = Block::None;
  }

  void poset_line(const std::vector<std::string>& w) {
    if (w[0] == "elements") {
      for (std::size_t i = 1; i < w.size(); ++i) poset_.elements.push_back(w[i]);
    } else if (w[0] == "less") {
      need(w.size() == 3, "usage: less a b");
      element(poset_.elements, w[1]);
      element(poset_.elements, w[2]);
      poset_.less.emplace_back(w[1], w[2]);
    } else if (w[0] == "meet") {
      need(w.size() == 5 && w[3] == "=", "usage: meet a b = c");
      for (int i : {1, 2, 4}) element(poset_.elements, w[static_cast<std::size_t>(i)]);
      poset_.meets.push_back({w[1], w[2], w[4]});
    } else {
      throw Error(ErrorKind::Parse, "unknown poset statement '" + w[0] + "'");
    }
  }

  void algebra_line(int n, const std::string& line, const std::vector<std::string>& w) {
    auto& d = ws_.algebras[block_name_];
    if (w[0] == "letter") {
      need(w.size() == 3, "usage: letter NAME WEIGHT");
      d.letters.emplace_back(w[1], parse_weight(w[2]));
      rewrite::Alphabet a;
      for (const auto& [l, wt] : d.letters) a.add(l, wt);  // duplicate / reserved names
    } else if (w[0] == "rule") {
      auto body = trim(line.substr(4));
      auto arrow = body.find("->");
      need(arrow != std::string::npos, "usage: rule lhs -> rhs");
      std::string lhs = trim(body.substr(0, arrow)), rhs = trim(body.substr(arrow + 2));
      d.rules.emplace_back(lhs, rhs);
      d.rule_lines.push_back(n);
    } else {
      throw Error(ErrorKind::Parse, "unknown algebra statement '" + w[0] + "'");
    }
  }

  void scheme_line(int n, const std::string& line, const std::vector<std::string>& w) {
    auto& d = ws_.schemes[block_name_];
    const auto& P = *ws_.posets.at(d.poset);
    if (w[0] == "chart") {
      need(w.size() == 3, "usage: chart ELEMENT ALGEBRA");
      element(P, w[1]);
      if (!ws_.algebras.count(w[2])) throw Error(ErrorKind::Reference, "unknown algebra '" + w[2] + "'");
      d.charts.emplace_back(w[1], w[2]);
      d.chart_lines.push_back(n);
    } else if (w[0] == "glue") {
      auto [head, body] = head_and_body(line);
      need(head.size() == 3, "usage: glue i j : image, image, ...");
      element(P, head[1]);
      element(P, head[2]);
      GlueDecl g{n, head[1], head[2], body.empty() ? std::vector<std::string>{} : split(body, ',')};
      d.glues.push_back(std::move(g));
    } else {
      throw Error(ErrorKind::Parse, "unknown scheme statement '" + w[0] + "'");
    }
  }

  void module_line(int n, const std::string& line, const std::vector<std::string>& w) {
    auto& d = ws_.modules[block_name_];
    const auto& P = poset_of_scheme(d.scheme);
    if (w[0] == "rank") {
      need(w.size() == 2, "usage: rank R");
      int r = to_int(w[1]);
      need(r >= 1, "rank must be positive");
      d.rank = static_cast<std::size_t>(r);
    } else if (w[0] == "shifts") {
      auto [head, body] = head_and_body(line);
      need(head.size() == 2, "usage: shifts ELEMENT : w, w, ...");
      element(P, head[1]);
      std::vector<Weight> ws;
      for (const auto& s : words(body)) ws.push_back(parse_weight(s));
      d.shifts[head[1]] = std::move(ws);
    } else if (w[0] == "psi") {
      auto [head, body] = head_and_body(line);
      need(head.size() == 3, "usage: psi i j : matrix");
      element(P, head[1]);
      element(P, head[2]);
      d.psi.push_back({n, head[1], head[2], body});
    } else {
      throw Error(ErrorKind::Parse, "unknown module statement '" + w[0] + "'");
    }
  }

  void complex_line(int n, const std::string& line, const std::vector<std::string>& w) {
    auto& d = ws_.complexes[block_name_];
    const auto& P = poset_of_scheme(d.scheme);
    if (w[0] == "term") {
      need(w.size() == 3, "usage: term Q MODULE");
      if (!ws_.modules.count(w[2])) throw Error(ErrorKind::Reference, "unknown module '" + w[2] + "'");
      d.terms.emplace_back(to_int(w[1]), w[2]);
    } else if (w[0] == "map") {
      auto [head, body] = head_and_body(line);
      need(head.size() == 3, "usage: map Q ELEMENT : matrix");
      element(P, head[2]);
      d.maps.emplace_back(to_int(head[1]), MatrixDecl{n, head[2], "", body});
    } else {
      throw Error(ErrorKind::Parse, "unknown complex statement '" + w[0] + "'");
    }
  }

  void tower_line(int n, const std::string& line, const std::vector<std::string>& w) {
    auto& d = ws_.towers[block_name_];
    const auto& P = *ws_.posets.at(ws_.schemes.at(d.scheme).poset);
    if (w[0] == "glue") {
      auto [head, body] = head_and_body(line);
      need(head.size() == 4, "usage: glue LEVEL i j : images");
      int lvl = to_int(head[1]);
      element(P, head[2]);
      element(P, head[3]);
      d.glues.emplace_back(lvl, GlueDecl{n, head[2], head[3], body.empty() ? std::vector<std::string>{} : split(body, ',')});
    } else if (w[0] == "rule") {
      auto [head, body] = head_and_body(line);
      need(head.size() == 3, "usage: rule LEVEL ALGEBRA : lhs -> rhs");
      auto arrow = body.find("->");
      need(arrow != std::string::npos, "usage: rule LEVEL ALGEBRA : lhs -> rhs");
      if (!ws_.algebras.count(head[2])) throw Error(ErrorKind::Reference, "unknown algebra '" + head[2] + "'");
      d.rules.push_back({n, to_int(head[1]), head[2], trim(body.substr(0, arrow)), trim(body.substr(arrow + 2))});
    } else {
      throw Error(ErrorKind::Parse, "unknown tower statement '" + w[0] + "'");
    }
  }

  // Builds everything once at its declared ring so that errors surface with lines.
  void resolve() {
    auto attempt = [&](int line, auto&& f) {
      try {
        f();
        return true;
      } catch (const Error& e) {
        error(line, e.kind(), e.what());
        return false;
      }
    };
    for (const auto& [name, d] : ws_.algebras) {
      coeff::ArtinRing ring(ws_.field, ws_.order, ws_.tweight);
      rewrite::Alphabet a;
      for (const auto& [l, wt] : d.letters) a.add(l, wt);
      // rules are checked at a high order so that t-terms are not truncated away
      std::set<Weight> tws = {ws_.tweight};
      for (const auto& [sn, sd] : ws_.schemes)
        if (sd.tweight) tws.insert(*sd.tweight);
      for (const auto& [tn, td] : ws_.towers)
        if (td.tweight) tws.insert(*td.tweight);
      bool rules_ok = true;
      for (std::size_t r = 0; r < d.rules.size(); ++r)
        rules_ok &= attempt(d.rule_lines[r], [&] {
          for (Weight tw : tws) {
            coeff::ArtinRing high(ws_.field, 64, tw);
            rewrite::RewriteSystem(a, {{rewrite::parse_word(d.rules[r].first, a),
                                        rewrite::parse_poly(d.rules[r].second, a, high)}},
                                   high);
          }
        });
      if (rules_ok) attempt(d.line, [&] { build_algebra(name, d, ring, {}); });
    }
    if (!errors_.empty()) return;
    for (const auto& [name, d] : ws_.schemes) {
      const auto& P = *ws_.posets.at(d.poset);
      std::map<std::string, std::string> chart;
      for (const auto& [e, a] : d.charts) chart[e] = a;
      bool glue_ok = true;
      for (const auto& g : d.glues) {
        for (const auto& im : g.images)
          if (im.empty()) error(g.line, ErrorKind::Parse, "empty image in glue"), glue_ok = false;
        if (!P.less(P.index(g.i), P.index(g.j))) {
          error(g.line, ErrorKind::InvalidArgument, "glue " + g.i + " " + g.j + ": not along i < j");
          glue_ok = false;
        } else if (chart.count(g.j) && g.images.size() != ws_.algebras.at(chart[g.j]).letters.size()) {
          error(g.line, ErrorKind::InvalidArgument,
                "glue " + g.i + " " + g.j + ": " + std::to_string(g.images.size()) + " images for " +
                    std::to_string(ws_.algebras.at(chart[g.j]).letters.size()) + " letters");
          glue_ok = false;
        }
      }
      if (glue_ok) attempt(d.line, [&] { ws_.scheme(name); });
    }
    for (const auto& [name, d] : ws_.towers)
      attempt(d.line, [&] {
        for (int n = 1; n <= d.levels; ++n) ws_.tower_level(name, n);
      });
    if (!errors_.empty()) return;
    for (const auto& [name, d] : ws_.modules) {
      if (!d.summands.empty()) {
        attempt(d.line, [&] { ws_.module(name); });
        continue;
      }
      auto s = ws_.scheme(d.scheme);
      bool ok = true;
      for (const auto& m : d.psi)
        ok &= attempt(m.line, [&] { qcoh::parse_matrix(*s->algebra(s->poset->index(m.i)), m.text); });
      if (ok)
        attempt(d.line, [&] {
          auto rep = qcoh::validate_module(*ws_.module(name));
          if (!rep.valid())
            throw Error(ErrorKind::InvalidArgument, "module " + name + ": " + rep.defects.front().kind + " " +
                                                        rep.defects.front().detail);
        });
    }
    for (const auto& [name, d] : ws_.complexes) {
      auto s = ws_.scheme(d.scheme);
      bool ok = true;
      for (const auto& [q, m] : d.maps)
        ok &= attempt(m.line, [&] { qcoh::parse_matrix(*s->algebra(s->poset->index(m.i)), m.text); });
      if (ok)
        attempt(d.line, [&] {
          auto x = ws_.object(name, s);
          auto rep = qcoh::validate_complex(x);
          if (!rep.valid()) throw Error(ErrorKind::InvalidArgument, "complex " + name + ": " + rep.defects.front());
        });
    }
  }
};

}  // namespace

ParseResult parse(const std::string& text) { return Parser(text).run(); }

ParseResult parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParseResult r;
    r.errors.push_back({0, ErrorKind::Parse, "cannot read " + path});
    return r;
  }
  std::ostringstream s;
  s << in.rdbuf();
  return parse(s.str());
}

}  // namespace nccech::workspace
