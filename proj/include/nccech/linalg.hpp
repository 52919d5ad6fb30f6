#ifndef NCCECH_LINALG_HPP
#define NCCECH_LINALG_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "nccech/field.hpp"

namespace nccech {

using Vec = std::vector<Scalar>;

// Dense row-major matrix of exact scalars.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n);
  static Matrix from_columns(const std::vector<Vec>& cols, std::size_t rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Scalar& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vec column(std::size_t c) const;
  Vec apply(const Vec& v, const Field& k) const;
  Matrix multiply(const Matrix& other, const Field& k) const;
  Matrix power(unsigned e, const Field& k) const;
  bool is_zero() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

// Reduced row echelon form with the leftmost-nonzero pivot policy; the pivot
// choice is deterministic so downstream bases are reproducible.
struct Echelon {
  Matrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

Echelon rref(Matrix m, const Field& k);
std::size_t rank(const Matrix& m, const Field& k);

// Basis of {v : m v = 0}, one vector per free column, in increasing order of
// the free column index.
std::vector<Vec> nullspace(const Matrix& m, const Field& k);

// Basis of the column space, taken as the reduced echelon rows of the transpose.
std::vector<Vec> column_space(const Matrix& m, const Field& k);

std::optional<Vec> solve(const Matrix& m, const Vec& rhs, const Field& k);

// Left-kernel witness: y with y m = 0 and y rhs != 0, when rhs is not in the
// column space.
std::optional<Vec> inconsistency_witness(const Matrix& m, const Vec& rhs, const Field& k);

bool is_zero(const Vec& v);

// Quotient Z/B of a subspace pair B <= Z inside a common ambient space. The
// representatives are chosen greedily from the given Z basis, skipping those
// already in the span of B and earlier picks.
class QuotientSpace {
 public:
  QuotientSpace() = default;
  QuotientSpace(std::size_t ambient, const std::vector<Vec>& cycles, const std::vector<Vec>& boundaries,
                const Field& k);

  std::size_t dim() const { return reps_.size(); }
  std::size_t ambient() const { return ambient_; }
  const std::vector<Vec>& representatives() const { return reps_; }
  const std::vector<Vec>& boundaries() const { return bounds_; }

  // Coordinates of the class of z (z must lie in Z).
  Vec coordinates(const Vec& z) const;

 private:
  std::size_t ambient_ = 0;
  Field field_;
  std::vector<Vec> reps_;
  std::vector<Vec> bounds_;
  Matrix combined_;  // columns: reps then boundary basis
};

}  // namespace nccech

#endif
