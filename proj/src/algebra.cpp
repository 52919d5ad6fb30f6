#include "nccech/algebra.hpp"

#include <mutex>

#include "nccech/error.hpp"

namespace nccech::algebra {

struct BasisKey {
  Weight w;
  int cap;
  friend auto operator<=>(const BasisKey&, const BasisKey&) = default;
};

struct GradedAlgebra::Cache {
  std::mutex mu;
  std::map<BasisKey, std::unique_ptr<GradedBasis>> bases;
};

GradedAlgebra::GradedAlgebra(std::string name, rewrite::RewriteSystem presentation)
    : name_(std::move(name)), sys_(std::move(presentation)), cache_(std::make_shared<Cache>()) {}

Poly GradedAlgebra::parse(const std::string& text) const {
  return normal_form(rewrite::parse_poly(text, alphabet(), ring()));
}

std::optional<Weight> GradedAlgebra::homogeneous_weight(const Poly& p, Weight fallback) const {
  if (p.empty()) return fallback;
  Weight w = weight(p.begin()->first);
  for (const auto& [m, c] : p)
    if (weight(m) != w) return std::nullopt;
  return w;
}

const GradedBasis& GradedAlgebra::basis(Weight w, int cap) const {
  BasisKey key{w, cap};
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->bases.find(key);
    if (it != cache_->bases.end()) return *it->second;
  }
  auto b = std::make_unique<GradedBasis>();
  b->weight = w;
  const Weight tw = ring().t_weight();
  auto base = sys_.enumerate_normal_words(w, cap);
  b->words = base.words;
  b->cap_insufficient = base.cap_insufficient;
  // k-basis ordered by t-power, then word
  for (int j = 0; j < ring().order(); ++j) {
    auto nw = j == 0 ? base : sys_.enumerate_normal_words(w - tw * j, cap);
    b->cap_insufficient = b->cap_insufficient || nw.cap_insufficient;
    for (const auto& word : nw.words) {
      b->index.emplace(Monomial{word, j}, b->monomials.size());
      b->monomials.push_back(Monomial{word, j});
    }
  }
  std::lock_guard<std::mutex> lock(cache_->mu);
  return *cache_->bases.try_emplace(key, std::move(b)).first->second;
}

Vec GradedAlgebra::coordinates(const Poly& p, Weight w, int cap) const {
  const GradedBasis& b = basis(w, cap);
  Vec v(b.dim());
  for (const auto& [m, c] : p) {
    auto it = b.index.find(m);
    if (it == b.index.end())
      throw Error(ErrorKind::InvalidArgument, "term " + format(rewrite::monomial_poly(m.word, m.tpow)) +
                                                  " is not in the basis of " + name_ + " at weight " + w.to_string());
    v[it->second] = c;
  }
  return v;
}

Poly GradedAlgebra::from_coordinates(const Vec& v, Weight w, int cap) const {
  const GradedBasis& b = basis(w, cap);
  Poly p;
  for (std::size_t i = 0; i < v.size() && i < b.dim(); ++i) rewrite::add_term(p, b.monomials[i], v[i], ring());
  return p;
}

AlgebraElement make_element(const AlgebraPtr& a, const std::string& text) { return {a, a->parse(text)}; }

AlgebraElement multiply(const AlgebraElement& a, const AlgebraElement& b) {
  if (a.parent != b.parent) throw Error(ErrorKind::Mismatch, "multiply: elements of different algebras");
  return {a.parent, a.parent->multiply(a.value, b.value)};
}

struct AlgebraHom::Cache {
  std::mutex mu;
  std::map<Word, Poly> images;
};

AlgebraHom::AlgebraHom(AlgebraPtr source, AlgebraPtr target, std::vector<Poly> images)
    : source_(std::move(source)), target_(std::move(target)), cache_(std::make_shared<Cache>()) {
  const auto& alpha = source_->alphabet();
  if (images.size() != alpha.size())
    throw Error(ErrorKind::InvalidArgument, "homomorphism " + source_->name() + " -> " + target_->name() +
                                                ": expected " + std::to_string(alpha.size()) + " letter images");
  if (!(source_->ring() == target_->ring()))
    throw Error(ErrorKind::Mismatch, "homomorphism between algebras over different rings");
  for (std::size_t l = 0; l < images.size(); ++l) {
    images[l] = target_->normal_form(images[l]);
    Weight lw = alpha.weight(static_cast<rewrite::Letter>(l));
    auto w = target_->homogeneous_weight(images[l], lw);
    if (!w || *w != lw)
      throw Error(ErrorKind::InvalidArgument, "image of " + alpha.name(static_cast<rewrite::Letter>(l)) + " = " +
                                                  target_->format(images[l]) + " is not homogeneous of weight " +
                                                  lw.to_string());
  }
  images_ = std::move(images);
}

AlgebraHom AlgebraHom::identity(const AlgebraPtr& a) {
  std::vector<Poly> im;
  for (std::size_t l = 0; l < a->alphabet().size(); ++l) im.push_back(a->letter(static_cast<rewrite::Letter>(l)));
  return AlgebraHom(a, a, std::move(im));
}

Poly AlgebraHom::apply_word(const Word& w) const {
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->images.find(w);
    if (it != cache_->images.end()) return it->second;
  }
  Poly out;
  if (w.empty()) {
    out = target_->one();
  } else {
    Word prefix(w.begin(), w.end() - 1);
    out = target_->multiply(apply_word(prefix), images_[static_cast<std::size_t>(w.back())]);
  }
  std::lock_guard<std::mutex> lock(cache_->mu);
  cache_->images.try_emplace(w, out);
  return out;
}

Poly AlgebraHom::apply(const Poly& p) const {
  Poly out;
  for (const auto& [m, c] : p) rewrite::add_scaled(out, apply_word(m.word), c, m.tpow, target_->ring());
  return out;
}

HomReport check_hom(const AlgebraHom& h, int max_weight) {
  HomReport rep;
  const auto& rules = h.source()->presentation().rules();
  const auto& alpha = h.source()->alphabet();
  for (std::size_t r = 0; r < rules.size(); ++r) {
    if (alpha.weight(rules[r].lhs).primary > max_weight) continue;
    Poly diff = rewrite::poly_sub(h.apply_word(rules[r].lhs), h.apply(rules[r].rhs), h.target()->ring());
    diff = h.target()->normal_form(diff);
    if (!diff.empty()) rep.defects.push_back({r, std::move(diff)});
  }
  return rep;
}

AlgebraHom compose_hom(const AlgebraHom& g, const AlgebraHom& h) {
  if (h.target() != g.source())
    throw Error(ErrorKind::Mismatch, "compose_hom: " + h.target()->name() + " is not the source " +
                                         g.source()->name());
  std::vector<Poly> im;
  for (const Poly& p : h.images()) im.push_back(g.apply(p));
  return AlgebraHom(h.source(), g.target(), std::move(im));
}

}  // namespace nccech::algebra
