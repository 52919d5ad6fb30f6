#ifndef NCCECH_SRC_MATRIX_PIECE_HPP
#define NCCECH_SRC_MATRIX_PIECE_HPP

#include <algorithm>
#include <functional>
#include <vector>

#include "nccech/error.hpp"
#include "nccech/qcoh.hpp"

namespace nccech::detail {

using qcoh::PolyMatrix;
using rewrite::Poly;

// k-basis of rows x cols matrices over one algebra whose entry (r, c) is
// homogeneous of a prescribed weight. Basis order: entries row-major, then the
// graded basis of the entry.
class MatrixPiece {
 public:
  struct Slot {
    std::size_t r, c;
    rewrite::Monomial m;
  };

  MatrixPiece() = default;
  MatrixPiece(const algebra::GradedAlgebra& a, std::size_t rows, std::size_t cols,
              const std::function<Weight(std::size_t, std::size_t)>& weight, int cap)
      : alg_(&a), rows_(rows), cols_(cols), cap_(cap) {
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c) {
        const auto& b = a.basis(weight(r, c), cap);
        cap_insufficient_ = cap_insufficient_ || b.cap_insufficient;
        offsets_.push_back(slots_.size());
        bases_.push_back(&b);
        for (const auto& m : b.monomials) slots_.push_back({r, c, m});
      }
  }

  std::size_t dim() const { return slots_.size(); }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool cap_insufficient() const { return cap_insufficient_; }
  const std::vector<Slot>& slots() const { return slots_; }
  const algebra::GradedAlgebra& algebra() const { return *alg_; }

  PolyMatrix decode(const Vec& v, std::size_t offset = 0) const {
    PolyMatrix out(rows_, cols_);
    for (std::size_t k = 0; k < slots_.size(); ++k)
      if (v[offset + k] != 0) rewrite::add_term(out.at(slots_[k].r, slots_[k].c), slots_[k].m, v[offset + k], alg_->ring());
    return out;
  }

  // Adds the coordinates of x into v starting at offset.
  void encode(const PolyMatrix& x, Vec& v, std::size_t offset = 0) const {
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) {
        const auto* b = bases_[r * cols_ + c];
        for (const auto& [m, coef] : x.at(r, c)) {
          auto it = b->index.find(m);
          if (it == b->index.end())
            throw Error(ErrorKind::InvalidArgument,
                        "term of " + alg_->format(x.at(r, c)) + " outside the graded piece at weight " +
                            b->weight.to_string() + " (raise the length cap)");
          auto& slot = v[offset + offsets_[r * cols_ + c] + it->second];
          slot = alg_->ring().field().add(slot, coef);
        }
      }
  }

 private:
  const algebra::GradedAlgebra* alg_ = nullptr;
  std::size_t rows_ = 0, cols_ = 0;
  int cap_ = 0;
  bool cap_insufficient_ = false;
  std::vector<Slot> slots_;
  std::vector<std::size_t> offsets_;
  std::vector<const algebra::GradedBasis*> bases_;
};

// Writes the matrix of H -> sign * L phi(H) R (from `from` into `to`) into the
// block of m at (row_off, col_off).
inline void add_induced_map(Matrix& m, std::size_t row_off, std::size_t col_off, const MatrixPiece& from,
                            const MatrixPiece& to, const algebra::AlgebraHom& phi, const PolyMatrix& L,
                            const PolyMatrix& R, const Scalar& sign) {
  const auto& A = to.algebra();
  const Field& k = A.ring().field();
  Vec col(to.dim());
  for (std::size_t j = 0; j < from.dim(); ++j) {
    const auto& s = from.slots()[j];
    Poly img = phi.apply(rewrite::monomial_poly(s.m.word, s.m.tpow));
    PolyMatrix out(L.rows, R.cols);
    for (std::size_t x = 0; x < L.rows; ++x) {
      if (L.at(x, s.r).empty()) continue;
      Poly left = A.multiply(L.at(x, s.r), img);
      if (left.empty()) continue;
      for (std::size_t y = 0; y < R.cols; ++y)
        if (!R.at(s.c, y).empty()) out.at(x, y) = A.multiply(left, R.at(s.c, y));
    }
    std::fill(col.begin(), col.end(), Scalar(0));
    to.encode(out, col);
    for (std::size_t r = 0; r < col.size(); ++r)
      if (col[r] != 0) m.at(row_off + r, col_off + j) = k.add(m.at(row_off + r, col_off + j), k.mul(sign, col[r]));
  }
}

}  // namespace nccech::detail

#endif
