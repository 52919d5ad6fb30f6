#include "nccech/field.hpp"

#include <charconv>
#include <sstream>

#include "nccech/error.hpp"
#include "nccech/weight.hpp"

namespace nccech {

std::string Weight::to_string() const {
  if (secondary == 0) return std::to_string(primary);
  return std::to_string(primary) + "," + std::to_string(secondary);
}

std::ostream& operator<<(std::ostream& os, Weight w) { return os << w.to_string(); }

static int parse_int(const std::string& s) {
  int v = 0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (b != e && *b == '+') ++b;
  auto [ptr, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || ptr != e || b == e) throw Error(ErrorKind::Parse, "bad integer '" + s + "'");
  return v;
}

Weight parse_weight(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos) return Weight(parse_int(text));
  return Weight(parse_int(text.substr(0, comma)), parse_int(text.substr(comma + 1)));
}

std::vector<Weight> Window::weights() const {
  std::vector<Weight> out;
  for (int p = lo.primary; p <= hi.primary; ++p)
    for (int s = lo.secondary; s <= hi.secondary; ++s) out.emplace_back(p, s);
  return out;
}

std::string Window::to_string() const {
  std::ostringstream os;
  os << lo.primary << ":" << hi.primary;
  if (lo.secondary != 0 || hi.secondary != 0) os << " x " << lo.secondary << ":" << hi.secondary;
  os << " cap " << length_cap;
  return os.str();
}

static bool is_prime_number(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

Field Field::prime(long p) {
  if (!is_prime_number(p)) throw Error(ErrorKind::InvalidArgument, "GF(" + std::to_string(p) + "): not a prime");
  Field f;
  f.kind_ = Kind::Prime;
  f.p_ = p;
  return f;
}

Scalar Field::normalize(const Scalar& x) const {
  if (kind_ == Kind::Rationals) {
    Scalar y = x;
    y.canonicalize();
    return y;
  }
  mpz_class p(p_);
  mpz_class num = x.get_num() % p;
  mpz_class den = x.get_den() % p;
  if (den == 0) throw Error(ErrorKind::Arithmetic, "denominator divisible by the characteristic");
  mpz_class den_inv;
  mpz_invert(den_inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
  mpz_class r = (num * den_inv) % p;
  if (r < 0) r += p;
  return Scalar(r);
}

Scalar Field::inv(const Scalar& a) const {
  if (is_zero(a)) throw Error(ErrorKind::Arithmetic, "inverse of zero");
  if (kind_ == Kind::Rationals) return Scalar(1) / a;
  mpz_class p(p_), r;
  mpz_class v = a.get_num();
  mpz_invert(r.get_mpz_t(), v.get_mpz_t(), p.get_mpz_t());
  return Scalar(r);
}

std::string Field::format(const Scalar& a) const { return a.get_str(); }

Scalar Field::parse(std::string_view text) const {
  std::string s(text);
  if (s.empty()) throw Error(ErrorKind::Parse, "empty scalar");
  Scalar v;
  try {
    std::string t = s[0] == '+' ? s.substr(1) : s;
    if (t.find('/') != std::string::npos) {
      auto slash = t.find('/');
      mpz_class n(t.substr(0, slash)), d(t.substr(slash + 1));
      if (d == 0) throw Error(ErrorKind::Arithmetic, "zero denominator in '" + s + "'");
      v = Scalar(n, d);
    } else {
      v = Scalar(mpz_class(t));
    }
  } catch (const std::invalid_argument&) {
    throw Error(ErrorKind::Parse, "bad scalar '" + s + "'");
  }
  return normalize(v);
}

std::string Field::name() const { return kind_ == Kind::Rationals ? "Q" : "GF(" + std::to_string(p_) + ")"; }

}  // namespace nccech
