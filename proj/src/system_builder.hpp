#ifndef NCCECH_SYSTEM_BUILDER_HPP
#define NCCECH_SYSTEM_BUILDER_HPP

#include <map>
#include <tuple>
#include <vector>

#include "nccech/linalg.hpp"
#include "nccech/rewrite.hpp"

namespace nccech::detail {

// Sparse column-wise assembly of a linear system whose equations are indexed
// by (block, row, col, monomial): one equation per coefficient of a matrix
// entry of some polynomial identity.
class SystemBuilder {
 public:
  struct Key {
    int block;
    std::size_t x, y;
    rewrite::Monomial m;
  };

  std::size_t add_column() {
    cols_.emplace_back();
    return cols_.size() - 1;
  }

  void add(std::size_t col, int block, std::size_t x, std::size_t y, const rewrite::Poly& p, const Scalar& c = 1) {
    for (const auto& [m, v] : p) {
      auto [it, fresh] = rows_.try_emplace(Key{block, x, y, m}, rows_.size());
      cols_[col][it->second] += v * c;
    }
  }

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_.size(); }

  // Dense matrix over the listed columns, in that order.
  Matrix dense(const std::vector<std::size_t>& which, const Field& k) const {
    Matrix out(rows_.size(), which.size());
    for (std::size_t c = 0; c < which.size(); ++c)
      for (const auto& [r, v] : cols_[which[c]]) out.at(r, c) = k.normalize(v);
    return out;
  }

  Vec column(std::size_t col, const Field& k) const {
    Vec v(rows_.size());
    for (const auto& [r, x] : cols_[col]) v[r] = k.normalize(x);
    return v;
  }

 private:
  struct KeyLess {
    bool operator()(const Key& a, const Key& b) const {
      if (std::tie(a.block, a.x, a.y) != std::tie(b.block, b.x, b.y))
        return std::tie(a.block, a.x, a.y) < std::tie(b.block, b.x, b.y);
      return rewrite::MonomialLess{}(a.m, b.m);
    }
  };
  std::map<Key, std::size_t, KeyLess> rows_;
  std::vector<std::map<std::size_t, Scalar>> cols_;
};

}  // namespace nccech::detail

#endif
