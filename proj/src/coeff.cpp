#include "nccech/coeff.hpp"

#include <sstream>

#include "nccech/error.hpp"

namespace nccech::coeff {

ArtinRing::ArtinRing(Field field, int order, Weight t_weight)
    : field_(std::move(field)), order_(order), t_weight_(t_weight) {
  if (order < 1) throw Error(ErrorKind::InvalidArgument, "Artin ring order must be positive");
}

RingElement::RingElement(const ArtinRing& ring, std::vector<Scalar> coeffs) : ring_(ring), coeffs_(std::move(coeffs)) {
  coeffs_.resize(static_cast<std::size_t>(ring.order()));
  for (auto& c : coeffs_) c = ring.field().normalize(c);
}

RingElement RingElement::zero(const ArtinRing& ring) { return RingElement(ring, {}); }
RingElement RingElement::one(const ArtinRing& ring) { return constant(ring, 1); }
RingElement RingElement::constant(const ArtinRing& ring, const Scalar& c) { return RingElement(ring, {c}); }

RingElement RingElement::t_power(const ArtinRing& ring, int j) {
  std::vector<Scalar> c(static_cast<std::size_t>(ring.order()));
  if (j < ring.order()) c[static_cast<std::size_t>(j)] = 1;
  return RingElement(ring, std::move(c));
}

bool RingElement::is_zero() const {
  for (const auto& c : coeffs_)
    if (sgn(c) != 0) return false;
  return true;
}

static void require_same(const ArtinRing& a, const ArtinRing& b) {
  if (!(a == b)) throw Error(ErrorKind::Mismatch, "ring elements over different Artin rings");
}

RingElement RingElement::operator+(const RingElement& o) const {
  require_same(ring_, o.ring_);
  std::vector<Scalar> c(coeffs_.size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = coeffs_[j] + o.coeffs_[j];
  return RingElement(ring_, std::move(c));
}

RingElement RingElement::operator-(const RingElement& o) const {
  require_same(ring_, o.ring_);
  std::vector<Scalar> c(coeffs_.size());
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = coeffs_[j] - o.coeffs_[j];
  return RingElement(ring_, std::move(c));
}

RingElement RingElement::operator*(const RingElement& o) const {
  require_same(ring_, o.ring_);
  std::vector<Scalar> c(coeffs_.size());
  for (std::size_t a = 0; a < c.size(); ++a)
    for (std::size_t b = 0; a + b < c.size(); ++b) c[a + b] += coeffs_[a] * o.coeffs_[b];
  return RingElement(ring_, std::move(c));
}

std::string RingElement::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t j = 0; j < coeffs_.size(); ++j) {
    const Scalar& c = coeffs_[j];
    if (sgn(c) == 0) continue;
    Scalar mag = abs(c);
    if (first) {
      if (sgn(c) < 0) os << "-";
    } else {
      os << (sgn(c) < 0 ? " - " : " + ");
    }
    first = false;
    if (j == 0) {
      os << mag.get_str();
    } else {
      if (mag != 1) os << mag.get_str() << "*";
      os << "t";
      if (j > 1) os << "^" << j;
    }
  }
  return first ? "0" : os.str();
}

RingElement RingElement::parse(const ArtinRing& ring, const std::string& text) {
  std::vector<Scalar> c(static_cast<std::size_t>(ring.order()));
  std::string s;
  for (char ch : text)
    if (ch != ' ') s += ch;
  if (s.empty()) throw Error(ErrorKind::Parse, "empty ring element");
  std::size_t pos = 0;
  while (pos < s.size()) {
    int sign = 1;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1 : 1;
      ++pos;
    }
    std::size_t end = pos;
    while (end < s.size() && s[end] != '+' && s[end] != '-') ++end;
    std::string term = s.substr(pos, end - pos);
    if (term.empty()) throw Error(ErrorKind::Parse, "bad ring element '" + text + "'");
    Scalar coef = 1;
    int power = 0;
    std::stringstream ss(term);
    std::string factor;
    while (std::getline(ss, factor, '*')) {
      if (factor == "t") {
        power += 1;
      } else if (factor.rfind("t^", 0) == 0) {
        power += std::stoi(factor.substr(2));
      } else {
        coef *= ring.field().parse(factor);
      }
    }
    if (power < ring.order()) c[static_cast<std::size_t>(power)] += sign * coef;
    pos = end;
  }
  return RingElement(ring, std::move(c));
}

RingElement reduce_scalar(const RingElement& x, const ArtinRing& target) {
  if (target.order() > x.ring().order())
    throw Error(ErrorKind::InvalidArgument, "reduce_scalar: target order exceeds source order");
  std::vector<Scalar> c(x.coeffs().begin(), x.coeffs().begin() + target.order());
  return RingElement(target, std::move(c));
}

RingElement canonical_lift(const RingElement& x, const SmallExtension& ext) {
  if (!(x.ring() == ext.target)) throw Error(ErrorKind::Mismatch, "canonical_lift: element not over the target ring");
  return RingElement(ext.source, x.coeffs());
}

FlatRankPattern flat_rank_pattern(const Matrix& action, int order, const Field& k) {
  if (action.rows() != action.cols()) throw Error(ErrorKind::InvalidArgument, "t-action must be square");
  const std::size_t dim = action.rows();
  Matrix tn = action.power(static_cast<unsigned>(order), k);
  if (!tn.is_zero())
    throw Error(ErrorKind::InvalidArgument,
                "t-action is not nilpotent of order <= " + std::to_string(order) + " (corrupted R-module data)");
  FlatRankPattern out;
  Matrix tj = Matrix::identity(dim);
  bool free = dim % static_cast<std::size_t>(order) == 0;
  const std::size_t r = dim / static_cast<std::size_t>(order);
  for (int j = 1; j <= order; ++j) {
    tj = tj.multiply(action, k);
    std::size_t ker = dim - rank(tj, k);
    out.kernel_dims.push_back(ker);
    if (ker * static_cast<std::size_t>(order) != static_cast<std::size_t>(j) * dim) free = false;
  }
  out.is_free = free;
  out.rank = free ? static_cast<int>(r) : 0;
  return out;
}

}  // namespace nccech::coeff
