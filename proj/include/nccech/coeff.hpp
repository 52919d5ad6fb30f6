#ifndef NCCECH_COEFF_HPP
#define NCCECH_COEFF_HPP

#include <string>
#include <vector>

#include "nccech/field.hpp"
#include "nccech/linalg.hpp"
#include "nccech/weight.hpp"

namespace nccech::coeff {

// The chain Artin ring k[t]/(t^n). n = 1 is the base field itself.
class ArtinRing {
 public:
  ArtinRing() = default;
  ArtinRing(Field field, int order, Weight t_weight = {});

  const Field& field() const { return field_; }
  int order() const { return order_; }
  Weight t_weight() const { return t_weight_; }

  ArtinRing with_order(int order) const { return ArtinRing(field_, order, t_weight_); }

  friend bool operator==(const ArtinRing&, const ArtinRing&) = default;

 private:
  Field field_;
  int order_ = 1;
  Weight t_weight_;
};

// Element of k[t]/(t^n): coefficient of t^j at index j, always of length n.
class RingElement {
 public:
  RingElement() = default;
  RingElement(const ArtinRing& ring, std::vector<Scalar> coeffs);
  static RingElement zero(const ArtinRing& ring);
  static RingElement one(const ArtinRing& ring);
  static RingElement constant(const ArtinRing& ring, const Scalar& c);
  static RingElement t_power(const ArtinRing& ring, int j);

  const ArtinRing& ring() const { return ring_; }
  const std::vector<Scalar>& coeffs() const { return coeffs_; }
  bool is_zero() const;

  RingElement operator+(const RingElement& o) const;
  RingElement operator-(const RingElement& o) const;
  RingElement operator*(const RingElement& o) const;

  // "a0 + a1*t + a2*t^2"; zero prints as "0".
  std::string to_string() const;
  static RingElement parse(const ArtinRing& ring, const std::string& text);

  friend bool operator==(const RingElement&, const RingElement&) = default;

 private:
  ArtinRing ring_;
  std::vector<Scalar> coeffs_;
};

// R' = k[t]/t^{n+1} -> R = k[t]/t^n with kernel J = (t^n).
struct SmallExtension {
  ArtinRing source;  // R'
  ArtinRing target;  // R

  static SmallExtension above(const ArtinRing& target) { return {target.with_order(target.order() + 1), target}; }
  int ideal_power() const { return target.order(); }
};

// Truncation R' -> R; throws when the target order exceeds the source order.
RingElement reduce_scalar(const RingElement& x, const ArtinRing& target);

// Coefficient-preserving section R -> R' of the small extension.
RingElement canonical_lift(const RingElement& x, const SmallExtension& ext);

struct FlatRankPattern {
  bool is_free = false;
  int rank = 0;                   // dim / n when free, otherwise 0
  std::vector<std::size_t> kernel_dims;  // dim ker(t^j), j = 1..n
};

// Freeness test for a finite-dimensional k[t]/t^n-module given by the matrix
// of multiplication by t. Throws when t^n does not act as zero.
FlatRankPattern flat_rank_pattern(const Matrix& action, int order, const Field& k);

}  // namespace nccech::coeff

#endif
