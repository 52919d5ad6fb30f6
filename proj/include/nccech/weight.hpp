#ifndef NCCECH_WEIGHT_HPP
#define NCCECH_WEIGHT_HPP

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace nccech {

// Grading weight. The primary component is the user-facing weight; the
// secondary component refines it when a single grading leaves some graded
// pieces infinite-dimensional (it defaults to zero everywhere).
struct Weight {
  int primary = 0;
  int secondary = 0;

  constexpr Weight() = default;
  constexpr Weight(int p, int s = 0) : primary(p), secondary(s) {}

  constexpr Weight operator+(Weight o) const { return {primary + o.primary, secondary + o.secondary}; }
  constexpr Weight operator-(Weight o) const { return {primary - o.primary, secondary - o.secondary}; }
  constexpr Weight operator-() const { return {-primary, -secondary}; }
  constexpr Weight operator*(int k) const { return {primary * k, secondary * k}; }
  Weight& operator+=(Weight o) {
    primary += o.primary;
    secondary += o.secondary;
    return *this;
  }
  constexpr bool is_zero() const { return primary == 0 && secondary == 0; }

  friend constexpr bool operator==(Weight, Weight) = default;
  friend constexpr auto operator<=>(Weight, Weight) = default;

  std::string to_string() const;
};

std::ostream& operator<<(std::ostream& os, Weight w);

// Parses "3" or "3,1".
Weight parse_weight(const std::string& text);

// A box of weights plus the word-length cap used for enumerating graded pieces.
struct Window {
  Weight lo{-6, 0};
  Weight hi{6, 0};
  int length_cap = 16;

  bool contains(Weight w) const {
    return w.primary >= lo.primary && w.primary <= hi.primary && w.secondary >= lo.secondary &&
           w.secondary <= hi.secondary;
  }
  // All weights of the box in lexicographic order (primary, then secondary).
  std::vector<Weight> weights() const;
  std::string to_string() const;
};

}  // namespace nccech

#endif
