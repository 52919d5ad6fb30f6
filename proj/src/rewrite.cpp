#include "nccech/rewrite.hpp"

#include <algorithm>
#include <cctype>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include "nccech/error.hpp"

namespace nccech::rewrite {

bool deglex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

void Alphabet::add(const std::string& name, Weight w) {
  if (name.empty() || name == "t") throw Error(ErrorKind::InvalidArgument, "invalid letter name '" + name + "'");
  if (find(name) >= 0) throw Error(ErrorKind::InvalidArgument, "duplicate letter '" + name + "'");
  names_.push_back(name);
  weights_.push_back(w);
}

Letter Alphabet::find(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return static_cast<Letter>(i);
  return -1;
}

Weight Alphabet::weight(const Word& w) const {
  Weight out;
  for (Letter l : w) out += weight(l);
  return out;
}

void add_term(Poly& p, const Monomial& m, const Scalar& c, const coeff::ArtinRing& ring) {
  if (m.tpow >= ring.order() || sgn(c) == 0) return;
  auto it = p.find(m);
  if (it == p.end()) {
    Scalar v = ring.field().normalize(c);
    if (sgn(v) != 0) p.emplace(m, std::move(v));
    return;
  }
  it->second = ring.field().add(it->second, c);
  if (sgn(it->second) == 0) p.erase(it);
}

void add_scaled(Poly& into, const Poly& p, const Scalar& c, int tshift, const coeff::ArtinRing& ring) {
  for (const auto& [m, v] : p) {
    if (m.tpow + tshift >= ring.order()) continue;
    add_term(into, Monomial{m.word, m.tpow + tshift}, v * c, ring);
  }
}

Poly poly_sub(const Poly& a, const Poly& b, const coeff::ArtinRing& ring) {
  Poly out = a;
  add_scaled(out, b, -1, 0, ring);
  return out;
}

Poly truncate(const Poly& p, const coeff::ArtinRing& ring) {
  Poly out;
  add_scaled(out, p, 1, 0, ring);
  return out;
}

Poly monomial_poly(const Word& w, int tpow, const Scalar& c) {
  Poly p;
  if (sgn(c) != 0) p.emplace(Monomial{w, tpow}, c);
  return p;
}

Weight monomial_weight(const Monomial& m, const Alphabet& a, const coeff::ArtinRing& ring) {
  return a.weight(m.word) + ring.t_weight() * m.tpow;
}

namespace {

int parse_exponent(const std::string& s, const std::string& context) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw Error(ErrorKind::Parse, "bad exponent in '" + context + "'");
  return std::stoi(s);
}

bool looks_numeric(const std::string& f) {
  return !f.empty() && (std::isdigit(static_cast<unsigned char>(f[0])) != 0);
}

}  // namespace

Word parse_word(const std::string& text, const Alphabet& a) {
  Poly p = parse_poly(text, a, coeff::ArtinRing(Field::rationals(), 1));
  if (p.size() != 1 || p.begin()->second != 1 || p.begin()->first.tpow != 0)
    throw Error(ErrorKind::Parse, "expected a word, got '" + text + "'");
  return p.begin()->first.word;
}

Poly parse_poly(const std::string& text, const Alphabet& a, const coeff::ArtinRing& ring) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw Error(ErrorKind::Parse, "empty element");
  Poly out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    Scalar sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      if (s[pos] == '-') sign = -1;
      ++pos;
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    std::string term = s.substr(pos, end - pos);
    if (term.empty()) throw Error(ErrorKind::Parse, "dangling sign in '" + text + "'");
    Scalar coef = sign;
    int tpow = 0;
    Word w;
    std::stringstream ss(term);
    std::string f;
    while (std::getline(ss, f, '*')) {
      if (f.empty()) throw Error(ErrorKind::Parse, "empty factor in '" + text + "'");
      if (looks_numeric(f)) {
        coef *= ring.field().parse(f);
        continue;
      }
      std::string base = f;
      int exp = 1;
      auto caret = f.find('^');
      if (caret != std::string::npos) {
        base = f.substr(0, caret);
        exp = parse_exponent(f.substr(caret + 1), text);
      }
      if (base == "t") {
        tpow += exp;
        continue;
      }
      Letter l = a.find(base);
      if (l < 0) throw Error(ErrorKind::Reference, "unknown letter '" + base + "' in '" + text + "'");
      for (int i = 0; i < exp; ++i) w.push_back(l);
    }
    add_term(out, Monomial{std::move(w), tpow}, coef, ring);
    pos = end;
  }
  return out;
}

std::string format_word(const Word& w, const Alphabet& a) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += "*";
    out += a.name(w[i]);
  }
  return out;
}

std::string format_poly(const Poly& p, const Alphabet& a, const Field& k) {
  if (p.empty()) return "0";
  std::vector<std::vector<std::pair<Monomial, Scalar>>> groups;
  for (const auto& [m, c] : p) {
    if (groups.empty() || groups.back().front().first.word != m.word) groups.emplace_back();
    groups.back().emplace_back(m, c);
  }
  std::ostringstream os;
  bool first = true;
  for (auto g = groups.rbegin(); g != groups.rend(); ++g) {
    for (const auto& [m, c] : *g) {
      Scalar mag = abs(c);
      if (first)
        os << (sgn(c) < 0 ? "-" : "");
      else
        os << (sgn(c) < 0 ? " - " : " + ");
      first = false;
      std::vector<std::string> factors;
      if (mag != 1 || (m.word.empty() && m.tpow == 0)) factors.push_back(k.format(mag));
      if (m.tpow == 1) factors.emplace_back("t");
      if (m.tpow > 1) factors.push_back("t^" + std::to_string(m.tpow));
      for (Letter l : m.word) factors.push_back(a.name(l));
      for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "*" : "") << factors[i];
    }
  }
  return os.str();
}

struct WordHash {
  std::size_t operator()(const Word& w) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (Letter l : w) h = (h ^ static_cast<std::size_t>(l + 1)) * 1099511628211ull;
    return h;
  }
};

struct RewriteSystem::Cache {
  std::mutex mu;
  std::unordered_map<Word, Poly, WordHash> nf;
};

RewriteSystem::RewriteSystem(Alphabet alphabet, std::vector<RewriteRule> rules, coeff::ArtinRing ring,
                             std::size_t step_budget)
    : alphabet_(std::move(alphabet)), ring_(std::move(ring)), step_budget_(step_budget),
      cache_(std::make_shared<Cache>()) {
  for (std::size_t i = 0; i < rules.size(); ++i) {
    RewriteRule& r = rules[i];
    const std::string label = "rule " + std::to_string(i + 1) + " (" + format_word(r.lhs, alphabet_) + ")";
    if (r.lhs.empty()) throw Error(ErrorKind::Rewrite, label + ": empty left-hand side");
    r.rhs = truncate(r.rhs, ring_);
    Weight lw = alphabet_.weight(r.lhs);
    for (const auto& [m, c] : r.rhs) {
      Weight mw = monomial_weight(m, alphabet_, ring_);
      if (mw != lw)
        throw Error(ErrorKind::Rewrite, label + ": inhomogeneous, lhs weight " + lw.to_string() + " vs term " +
                                            format_poly(monomial_poly(m.word, m.tpow), alphabet_, field()) +
                                            " of weight " + mw.to_string());
      if (!deglex_less(m.word, r.lhs))
        throw Error(ErrorKind::Rewrite, label + ": right-hand side word " + format_word(m.word, alphabet_) +
                                            " is not smaller than the left-hand side");
    }
  }
  for (std::size_t i = 0; i < rules.size(); ++i)
    for (std::size_t j = 0; j < rules.size(); ++j) {
      if (i == j) continue;
      const Word& a = rules[i].lhs;
      const Word& b = rules[j].lhs;
      if (b.size() <= a.size() && std::search(a.begin(), a.end(), b.begin(), b.end()) != a.end())
        throw Error(ErrorKind::Rewrite, "rules are not inter-reduced: " + format_word(b, alphabet_) +
                                            " occurs in " + format_word(a, alphabet_));
    }
  rules_ = std::move(rules);
}

bool RewriteSystem::find_redex(const Word& w, std::size_t& pos, std::size_t& rule) const {
  for (std::size_t p = 0; p < w.size(); ++p)
    for (std::size_t r = 0; r < rules_.size(); ++r) {
      const Word& l = rules_[r].lhs;
      if (p + l.size() <= w.size() && std::equal(l.begin(), l.end(), w.begin() + static_cast<long>(p))) {
        pos = p;
        rule = r;
        return true;
      }
    }
  return false;
}

bool RewriteSystem::is_normal(const Word& w) const {
  std::size_t p, r;
  return !find_redex(w, p, r);
}

const Poly& RewriteSystem::nf_word(const Word& w, std::size_t& steps) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->nf.find(w);
    if (it != cache_->nf.end()) return it->second;
  }
  Poly result;
  std::size_t pos = 0, r = 0;
  if (!find_redex(w, pos, r)) {
    result = monomial_poly(w);
  } else {
    if (++steps > step_budget_)
      throw Error(ErrorKind::Rewrite, "reduction step budget exceeded at " + format_word(w, alphabet_));
    const Word& lhs = rules_[r].lhs;
    for (const auto& [m, c] : rules_[r].rhs) {
      Word nw(w.begin(), w.begin() + static_cast<long>(pos));
      nw.insert(nw.end(), m.word.begin(), m.word.end());
      nw.insert(nw.end(), w.begin() + static_cast<long>(pos + lhs.size()), w.end());
      add_scaled(result, nf_word(nw, steps), c, m.tpow, ring_);
    }
  }
  std::lock_guard<std::mutex> lock(cache_->mu);
  return cache_->nf.try_emplace(w, std::move(result)).first->second;
}

Poly RewriteSystem::nf_poly(const Poly& p, std::size_t& steps) const {
  Poly out;
  for (const auto& [m, c] : p) add_scaled(out, nf_word(m.word, steps), c, m.tpow, ring_);
  return out;
}

Poly RewriteSystem::normal_form(const Poly& expr) const {
  std::size_t steps = 0;
  return nf_poly(expr, steps);
}

Poly RewriteSystem::normal_form(const Word& w) const {
  std::size_t steps = 0;
  return nf_word(w, steps);
}

Poly RewriteSystem::multiply(const Poly& a, const Poly& b) const {
  Poly prod;
  for (const auto& [ma, ca] : a)
    for (const auto& [mb, cb] : b) {
      if (ma.tpow + mb.tpow >= ring_.order()) continue;
      Word w = ma.word;
      w.insert(w.end(), mb.word.begin(), mb.word.end());
      add_term(prod, Monomial{std::move(w), ma.tpow + mb.tpow}, ca * cb, ring_);
    }
  return normal_form(prod);
}

ConfluenceReport RewriteSystem::check_local_confluence(int max_weight) const {
  ConfluenceReport report;
  auto splice = [&](const Word& pre, const Poly& mid, const Word& post) {
    Poly p;
    for (const auto& [m, c] : mid) {
      Word w = pre;
      w.insert(w.end(), m.word.begin(), m.word.end());
      w.insert(w.end(), post.begin(), post.end());
      add_term(p, Monomial{std::move(w), m.tpow}, c, ring_);
    }
    return normal_form(p);
  };
  auto record = [&](Word overlap, std::size_t a, std::size_t b, Poly va, Poly vb) {
    ++report.overlaps_checked;
    if (va != vb) report.unresolved.push_back({std::move(overlap), a, b, std::move(va), std::move(vb)});
  };
  for (std::size_t a = 0; a < rules_.size(); ++a) {
    const Word& la = rules_[a].lhs;
    for (std::size_t b = 0; b < rules_.size(); ++b) {
      const Word& lb = rules_[b].lhs;
      // suffix of la of length k equals prefix of lb
      for (std::size_t k = 1; k < la.size() && k < lb.size(); ++k) {
        if (!std::equal(la.end() - static_cast<long>(k), la.end(), lb.begin())) continue;
        Word overlap = la;
        overlap.insert(overlap.end(), lb.begin() + static_cast<long>(k), lb.end());
        if (alphabet_.weight(overlap).primary > max_weight) continue;
        Poly va = splice({}, rules_[a].rhs, Word(lb.begin() + static_cast<long>(k), lb.end()));
        Poly vb = splice(Word(la.begin(), la.end() - static_cast<long>(k)), rules_[b].rhs, {});
        record(std::move(overlap), a, b, std::move(va), std::move(vb));
      }
      if (a != b && lb.size() < la.size()) {
        auto it = std::search(la.begin(), la.end(), lb.begin(), lb.end());
        if (it != la.end() && alphabet_.weight(la).primary <= max_weight) {
          Poly va = normal_form(rules_[a].rhs);
          Poly vb = splice(Word(la.begin(), it), rules_[b].rhs, Word(it + static_cast<long>(lb.size()), la.end()));
          record(la, a, b, std::move(va), std::move(vb));
        }
      }
    }
  }
  return report;
}

NormalWords RewriteSystem::enumerate_normal_words(Weight target, int cap) const {
  NormalWords out;
  const std::size_t n = alphabet_.size();
  if (n == 0) {
    if (target.is_zero()) out.words.push_back({});
    return out;
  }
  Weight lo = alphabet_.weight(0), hi = alphabet_.weight(0);
  for (std::size_t i = 1; i < n; ++i) {
    Weight w = alphabet_.weight(static_cast<Letter>(i));
    lo = {std::min(lo.primary, w.primary), std::min(lo.secondary, w.secondary)};
    hi = {std::max(hi.primary, w.primary), std::max(hi.secondary, w.secondary)};
  }
  auto reachable = [&](Weight delta, int remaining) {
    for (int l = 0; l <= remaining; ++l)
      if (delta.primary >= l * lo.primary && delta.primary <= l * hi.primary && delta.secondary >= l * lo.secondary &&
          delta.secondary <= l * hi.secondary)
        return true;
    return false;
  };
  auto suffix_redex = [&](const Word& w) {
    for (const auto& r : rules_)
      if (r.lhs.size() <= w.size() && std::equal(r.lhs.begin(), r.lhs.end(), w.end() - static_cast<long>(r.lhs.size())))
        return true;
    return false;
  };
  Word cur;
  auto dfs = [&](auto&& self, Weight w) -> void {
    if (w == target) {
      out.words.push_back(cur);
      if (static_cast<int>(cur.size()) == cap) out.cap_insufficient = true;
    }
    if (static_cast<int>(cur.size()) >= cap) return;
    for (std::size_t l = 0; l < n; ++l) {
      Weight nw = w + alphabet_.weight(static_cast<Letter>(l));
      if (!reachable(target - nw, cap - static_cast<int>(cur.size()) - 1)) continue;
      cur.push_back(static_cast<Letter>(l));
      if (!suffix_redex(cur)) self(self, nw);
      cur.pop_back();
    }
  };
  if (reachable(target, cap)) dfs(dfs, Weight{});
  std::sort(out.words.begin(), out.words.end(), deglex_less);
  return out;
}

}  // namespace nccech::rewrite
