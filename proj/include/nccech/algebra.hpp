#ifndef NCCECH_ALGEBRA_HPP
#define NCCECH_ALGEBRA_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nccech/linalg.hpp"
#include "nccech/rewrite.hpp"

namespace nccech::algebra {

using rewrite::Monomial;
using rewrite::Poly;
using rewrite::Word;

// The graded piece of an algebra at one weight. The R-basis is the list of
// normal words; the k-basis pairs each word with the admissible t-powers.
struct GradedBasis {
  Weight weight;
  std::vector<Word> words;
  std::vector<Monomial> monomials;
  std::map<Monomial, std::size_t, rewrite::MonomialLess> index;
  bool cap_insufficient = false;

  std::size_t dim() const { return monomials.size(); }
};

class GradedAlgebra {
 public:
  GradedAlgebra(std::string name, rewrite::RewriteSystem presentation);

  const std::string& name() const { return name_; }
  const rewrite::RewriteSystem& presentation() const { return sys_; }
  const rewrite::Alphabet& alphabet() const { return sys_.alphabet(); }
  const coeff::ArtinRing& ring() const { return sys_.ring(); }
  const Field& field() const { return sys_.field(); }

  Poly one() const { return rewrite::monomial_poly({}); }
  Poly letter(rewrite::Letter l) const { return rewrite::monomial_poly({l}); }
  Poly normal_form(const Poly& p) const { return sys_.normal_form(p); }
  Poly multiply(const Poly& a, const Poly& b) const { return sys_.multiply(a, b); }

  // Parses an element string and brings it to normal form.
  Poly parse(const std::string& text) const;
  std::string format(const Poly& p) const { return rewrite::format_poly(p, alphabet(), field()); }

  Weight weight(const Monomial& m) const { return rewrite::monomial_weight(m, alphabet(), ring()); }
  // Common weight of all terms; nullopt for an inhomogeneous element, the
  // fallback for zero.
  std::optional<Weight> homogeneous_weight(const Poly& p, Weight fallback = {}) const;

  const GradedBasis& basis(Weight w, int cap) const;

  // Coordinates of a homogeneous normal-form element in basis(w, cap). Throws
  // when a term falls outside the enumerated basis.
  Vec coordinates(const Poly& p, Weight w, int cap) const;
  Poly from_coordinates(const Vec& v, Weight w, int cap) const;

 private:
  struct Cache;
  std::string name_;
  rewrite::RewriteSystem sys_;
  std::shared_ptr<Cache> cache_;
};

using AlgebraPtr = std::shared_ptr<const GradedAlgebra>;

struct AlgebraElement {
  AlgebraPtr parent;
  Poly value;

  std::string to_string() const { return parent->format(value); }
};

AlgebraElement make_element(const AlgebraPtr& a, const std::string& text);
// Product in the common parent; throws on parent mismatch.
AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b);

// R-algebra homomorphism given by the images of the source letters. Images
// must be homogeneous of the letter's weight.
class AlgebraHom {
 public:
  AlgebraHom() = default;
  AlgebraHom(AlgebraPtr source, AlgebraPtr target, std::vector<Poly> images);

  static AlgebraHom identity(const AlgebraPtr& a);

  const AlgebraPtr& source() const { return source_; }
  const AlgebraPtr& target() const { return target_; }
  const std::vector<Poly>& images() const { return images_; }

  Poly apply(const Poly& p) const;
  Poly apply_word(const Word& w) const;

 private:
  struct Cache;
  AlgebraPtr source_, target_;
  std::vector<Poly> images_;
  std::shared_ptr<Cache> cache_;
};

struct HomDefect {
  std::size_t rule = 0;  // index into the source presentation
  Poly difference;       // h(lhs) - h(rhs) in target normal form
};

struct HomReport {
  std::vector<HomDefect> defects;
  bool valid() const { return defects.empty(); }
};

HomReport check_hom(const AlgebraHom& h, int max_weight);

// g after h; requires h.target == g.source.
AlgebraHom compose_hom(const AlgebraHom& g, const AlgebraHom& h);

}  // namespace nccech::algebra

#endif
