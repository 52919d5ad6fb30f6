#ifndef NCCECH_REWRITE_HPP
#define NCCECH_REWRITE_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nccech/coeff.hpp"
#include "nccech/field.hpp"
#include "nccech/weight.hpp"

namespace nccech::rewrite {

using Letter = int;
using Word = std::vector<Letter>;

// Degree-lexicographic order: shorter words first, then lexicographic by the
// declared letter order.
bool deglex_less(const Word& a, const Word& b);

// A word times a power of t.
struct Monomial {
  Word word;
  int tpow = 0;
};

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    if (a.word != b.word) return deglex_less(a.word, b.word);
    return a.tpow < b.tpow;
  }
};

inline bool operator==(const Monomial& a, const Monomial& b) { return a.word == b.word && a.tpow == b.tpow; }

// Formal R-linear combination of words with nonzero coefficients; terms with
// t-power at or above the ring order are never stored.
using Poly = std::map<Monomial, Scalar, MonomialLess>;

class Alphabet {
 public:
  Alphabet() = default;
  void add(const std::string& name, Weight w);

  std::size_t size() const { return names_.size(); }
  const std::string& name(Letter l) const { return names_[static_cast<std::size_t>(l)]; }
  Weight weight(Letter l) const { return weights_[static_cast<std::size_t>(l)]; }
  const std::vector<std::string>& names() const { return names_; }
  // -1 when the name is not a letter.
  Letter find(const std::string& name) const;

  Weight weight(const Word& w) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<Weight> weights_;
};

// Poly arithmetic over k[t]/t^n.
void add_term(Poly& p, const Monomial& m, const Scalar& c, const coeff::ArtinRing& ring);
void add_scaled(Poly& into, const Poly& p, const Scalar& c, int tshift, const coeff::ArtinRing& ring);
Poly poly_sub(const Poly& a, const Poly& b, const coeff::ArtinRing& ring);
Poly truncate(const Poly& p, const coeff::ArtinRing& ring);
Poly monomial_poly(const Word& w, int tpow = 0, const Scalar& c = 1);

Weight monomial_weight(const Monomial& m, const Alphabet& a, const coeff::ArtinRing& ring);

// Element-string syntax: terms joined by + or -, factors joined by *. A factor
// is an integer or fraction, t or t^k, a letter, or letter^k.
Poly parse_poly(const std::string& text, const Alphabet& a, const coeff::ArtinRing& ring);
Word parse_word(const std::string& text, const Alphabet& a);
// Terms descending by word, then ascending t-power; zero prints as "0".
std::string format_poly(const Poly& p, const Alphabet& a, const Field& k);
std::string format_word(const Word& w, const Alphabet& a);

struct RewriteRule {
  Word lhs;
  Poly rhs;
};

struct Ambiguity {
  Word overlap;
  std::size_t rule_a = 0;
  std::size_t rule_b = 0;
  Poly via_a;  // normal form after applying rule_a first
  Poly via_b;
};

struct ConfluenceReport {
  std::vector<Ambiguity> unresolved;
  std::size_t overlaps_checked = 0;
  bool confluent() const { return unresolved.empty(); }
};

struct NormalWords {
  std::vector<Word> words;
  bool cap_insufficient = false;
};

// Homogeneous, terminating rewriting system over an Artin ring. Immutable after
// construction apart from an internal, thread-safe normal-form cache.
class RewriteSystem {
 public:
  static constexpr std::size_t kDefaultStepBudget = 2'000'000;

  RewriteSystem() = default;
  RewriteSystem(Alphabet alphabet, std::vector<RewriteRule> rules, coeff::ArtinRing ring,
                std::size_t step_budget = kDefaultStepBudget);

  const Alphabet& alphabet() const { return alphabet_; }
  const std::vector<RewriteRule>& rules() const { return rules_; }
  const coeff::ArtinRing& ring() const { return ring_; }
  const Field& field() const { return ring_.field(); }

  Poly normal_form(const Poly& expr) const;
  Poly normal_form(const Word& w) const;
  Poly multiply(const Poly& a, const Poly& b) const;
  bool is_normal(const Word& w) const;

  ConfluenceReport check_local_confluence(int max_weight) const;

  // Normal words of the given weight and length at most cap, in deg-lex order.
  NormalWords enumerate_normal_words(Weight weight, int cap) const;

 private:
  struct Cache;

  const Poly& nf_word(const Word& w, std::size_t& steps) const;
  Poly nf_poly(const Poly& p, std::size_t& steps) const;
  // Position of the leftmost rule occurrence in w, with the rule index.
  bool find_redex(const Word& w, std::size_t& pos, std::size_t& rule) const;

  Alphabet alphabet_;
  std::vector<RewriteRule> rules_;
  coeff::ArtinRing ring_;
  std::size_t step_budget_ = kDefaultStepBudget;
  std::shared_ptr<Cache> cache_;
};

}  // namespace nccech::rewrite

#endif
