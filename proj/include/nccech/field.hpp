#ifndef NCCECH_FIELD_HPP
#define NCCECH_FIELD_HPP

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace nccech {

using Scalar = mpq_class;

// Exact base field: the rationals or a prime field GF(p). Prime-field values
// are stored as canonical representatives in [0, p) with denominator 1.
class Field {
 public:
  enum class Kind { Rationals, Prime };

  Field() = default;
  static Field rationals() { return Field{}; }
  static Field prime(long p);

  Kind kind() const { return kind_; }
  long characteristic() const { return p_; }
  bool is_prime() const { return kind_ == Kind::Prime; }

  Scalar normalize(const Scalar& x) const;
  Scalar add(const Scalar& a, const Scalar& b) const { return normalize(a + b); }
  Scalar sub(const Scalar& a, const Scalar& b) const { return normalize(a - b); }
  Scalar mul(const Scalar& a, const Scalar& b) const { return normalize(a * b); }
  Scalar neg(const Scalar& a) const { return normalize(-a); }
  Scalar inv(const Scalar& a) const;
  Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }
  static bool is_zero(const Scalar& a) { return sgn(a) == 0; }

  // Prime-field values print as their canonical integer representative.
  std::string format(const Scalar& a) const;
  Scalar parse(std::string_view text) const;
  std::string name() const;

  friend bool operator==(const Field& a, const Field& b) { return a.kind_ == b.kind_ && a.p_ == b.p_; }

 private:
  Kind kind_ = Kind::Rationals;
  long p_ = 0;
};

}  // namespace nccech

#endif
