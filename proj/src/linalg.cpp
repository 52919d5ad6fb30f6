#include "nccech/linalg.hpp"

#include <utility>

#include "nccech/error.hpp"

namespace nccech {

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vec>& cols, std::size_t rows) {
  Matrix m(rows, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != rows) throw Error(ErrorKind::InvalidArgument, "column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m.at(r, c) = cols[c][r];
  }
  return m;
}

Vec Matrix::column(std::size_t c) const {
  Vec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, c);
  return v;
}

Vec Matrix::apply(const Vec& v, const Field& k) const {
  if (v.size() != cols_) throw Error(ErrorKind::InvalidArgument, "matrix-vector size mismatch");
  Vec out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    Scalar acc = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      const Scalar& a = at(r, c);
      if (sgn(a) != 0 && sgn(v[c]) != 0) acc += a * v[c];
    }
    out[r] = k.normalize(acc);
  }
  return out;
}

Matrix Matrix::multiply(const Matrix& o, const Field& k) const {
  if (cols_ != o.rows_) throw Error(ErrorKind::InvalidArgument, "matrix product size mismatch");
  Matrix out(rows_, o.cols_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t m = 0; m < cols_; ++m) {
      const Scalar& a = at(r, m);
      if (sgn(a) == 0) continue;
      for (std::size_t c = 0; c < o.cols_; ++c)
        if (sgn(o.at(m, c)) != 0) out.at(r, c) += a * o.at(m, c);
    }
  for (auto& x : out.data_) x = k.normalize(x);
  return out;
}

Matrix Matrix::power(unsigned e, const Field& k) const {
  if (rows_ != cols_) throw Error(ErrorKind::InvalidArgument, "power of a non-square matrix");
  Matrix out = identity(rows_);
  for (unsigned i = 0; i < e; ++i) out = out.multiply(*this, k);
  return out;
}

bool Matrix::is_zero() const {
  for (const auto& x : data_)
    if (sgn(x) != 0) return false;
  return true;
}

Echelon rref(Matrix m, const Field& k) {
  Echelon e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t piv = row;
    while (piv < m.rows() && sgn(m.at(piv, col)) == 0) ++piv;
    if (piv == m.rows()) continue;
    if (piv != row)
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m.at(piv, c), m.at(row, c));
    Scalar inv = k.inv(m.at(row, col));
    for (std::size_t c = col; c < m.cols(); ++c) m.at(row, c) = k.mul(m.at(row, c), inv);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == row || sgn(m.at(r, col)) == 0) continue;
      Scalar f = m.at(r, col);
      for (std::size_t c = col; c < m.cols(); ++c)
        if (sgn(m.at(row, c)) != 0) m.at(r, c) = k.sub(m.at(r, c), f * m.at(row, c));
    }
    e.pivots.push_back(col);
    ++row;
  }
  e.reduced = std::move(m);
  return e;
}

std::size_t rank(const Matrix& m, const Field& k) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  return rref(m, k).pivots.size();
}

std::vector<Vec> nullspace(const Matrix& m, const Field& k) {
  std::vector<Vec> basis;
  if (m.cols() == 0) return basis;
  Echelon e = rref(m, k);
  std::vector<int> pivot_row(m.cols(), -1);
  for (std::size_t r = 0; r < e.pivots.size(); ++r) pivot_row[e.pivots[r]] = static_cast<int>(r);
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (pivot_row[free] >= 0) continue;
    Vec v(m.cols());
    v[free] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) v[e.pivots[r]] = k.neg(e.reduced.at(r, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Vec> column_space(const Matrix& m, const Field& k) {
  Matrix t(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) t.at(c, r) = m.at(r, c);
  Echelon e = rref(std::move(t), k);
  std::vector<Vec> out;
  for (std::size_t r = 0; r < e.pivots.size(); ++r) {
    Vec v(m.rows());
    for (std::size_t c = 0; c < m.rows(); ++c) v[c] = e.reduced.at(r, c);
    out.push_back(std::move(v));
  }
  return out;
}

std::optional<Vec> solve(const Matrix& m, const Vec& rhs, const Field& k) {
  if (rhs.size() != m.rows()) throw Error(ErrorKind::InvalidArgument, "solve: rhs length mismatch");
  Matrix aug(m.rows(), m.cols() + 1);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) aug.at(r, c) = m.at(r, c);
    aug.at(r, m.cols()) = rhs[r];
  }
  Echelon e = rref(std::move(aug), k);
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vec x(m.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced.at(r, m.cols());
  return x;
}

std::optional<Vec> inconsistency_witness(const Matrix& m, const Vec& rhs, const Field& k) {
  // y spans the left kernel of m; pick the first one pairing nontrivially with rhs.
  Matrix t(m.cols(), m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) t.at(c, r) = m.at(r, c);
  for (const Vec& y : nullspace(t, k)) {
    Scalar dot = 0;
    for (std::size_t i = 0; i < y.size(); ++i) dot += y[i] * rhs[i];
    if (sgn(k.normalize(dot)) != 0) return y;
  }
  return std::nullopt;
}

bool is_zero(const Vec& v) {
  for (const auto& x : v)
    if (sgn(x) != 0) return false;
  return true;
}

namespace {

// Incrementally maintained echelon basis; insert() reports whether the vector
// was independent of everything inserted before.
class SpanBuilder {
 public:
  SpanBuilder(std::size_t n, const Field& k) : n_(n), k_(k) {}

  bool insert(Vec v) {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      const Scalar& c = v[pivots_[i]];
      if (sgn(c) == 0) continue;
      Scalar f = c;
      for (std::size_t j = 0; j < n_; ++j)
        if (sgn(rows_[i][j]) != 0) v[j] = k_.sub(v[j], f * rows_[i][j]);
    }
    std::size_t p = 0;
    while (p < n_ && sgn(v[p]) == 0) ++p;
    if (p == n_) return false;
    Scalar inv = k_.inv(v[p]);
    for (auto& x : v) x = k_.mul(x, inv);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      Scalar f = rows_[i][p];
      if (sgn(f) == 0) continue;
      for (std::size_t j = 0; j < n_; ++j)
        if (sgn(v[j]) != 0) rows_[i][j] = k_.sub(rows_[i][j], f * v[j]);
    }
    rows_.push_back(std::move(v));
    pivots_.push_back(p);
    return true;
  }

 private:
  std::size_t n_;
  Field k_;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace

QuotientSpace::QuotientSpace(std::size_t ambient, const std::vector<Vec>& cycles,
                             const std::vector<Vec>& boundaries, const Field& k)
    : ambient_(ambient), field_(k) {
  // Echelon basis of B first, then extend greedily by the cycle basis.
  if (!boundaries.empty()) {
    Matrix b = Matrix::from_columns(boundaries, ambient);
    bounds_ = column_space(b, k);
  }
  SpanBuilder span(ambient, k);
  for (const Vec& b : bounds_) span.insert(b);
  for (const Vec& z : cycles)
    if (span.insert(z)) reps_.push_back(z);
  std::vector<Vec> cols = reps_;
  cols.insert(cols.end(), bounds_.begin(), bounds_.end());
  combined_ = Matrix::from_columns(cols, ambient_);
}

Vec QuotientSpace::coordinates(const Vec& z) const {
  if (reps_.empty()) return {};
  auto x = solve(combined_, z, field_);
  if (!x) throw Error(ErrorKind::InvalidArgument, "vector is not a cycle of this quotient");
  return Vec(x->begin(), x->begin() + static_cast<long>(reps_.size()));
}

}  // namespace nccech
