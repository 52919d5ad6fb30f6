#ifndef NCCECH_QCOH_HPP
#define NCCECH_QCOH_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nccech/scheme.hpp"

namespace nccech::qcoh {

using algebra::GradedAlgebra;
using rewrite::Monomial;
using rewrite::Poly;
using scheme::NcScheme;
using SchemePtr = std::shared_ptr<const NcScheme>;

// Matrix with entries in one algebra, row-major.
struct PolyMatrix {
  std::size_t rows = 0, cols = 0;
  std::vector<Poly> entries;

  PolyMatrix() = default;
  PolyMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), entries(r * c) {}
  static PolyMatrix identity(std::size_t n);

  Poly& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }
  const Poly& at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
  bool is_zero() const;

  friend bool operator==(const PolyMatrix&, const PolyMatrix&) = default;
};

PolyMatrix mat_mul(const GradedAlgebra& a, const PolyMatrix& x, const PolyMatrix& y);
PolyMatrix mat_add(const GradedAlgebra& a, const PolyMatrix& x, const PolyMatrix& y, const Scalar& c = 1);
PolyMatrix mat_scale_t(const GradedAlgebra& a, const PolyMatrix& x, int tpow, const Scalar& c = 1);
PolyMatrix mat_map(const algebra::AlgebraHom& h, const PolyMatrix& x);
PolyMatrix mat_truncate(const PolyMatrix& x, const coeff::ArtinRing& ring);
// Rows separated by ';', entries by ','.
std::string format_matrix(const GradedAlgebra& a, const PolyMatrix& x);
PolyMatrix parse_matrix(const GradedAlgebra& a, const std::string& text);

// Linear conditions sum_k L_k U R_k = rhs on an unknown matrix U over one
// algebra. Entry (r, c) of U ranges over the k-span of the graded pieces at
// entry_weights[r][c] (an empty list pins the entry to zero).
struct MatrixTerm {
  PolyMatrix left, right;
};

struct LinearCondition {
  std::vector<MatrixTerm> terms;
  PolyMatrix rhs;
};

std::optional<PolyMatrix> solve_matrix(const GradedAlgebra& a, std::size_t rows, std::size_t cols,
                                       const std::vector<std::vector<std::vector<Weight>>>& entry_weights,
                                       const std::vector<LinearCondition>& conditions, int cap);

// Locally free right module: M_i = A_i^r with generator e_a of degree
// -shift_i[a], and gluings psi_ij : M_j (x) A_i -> M_i for i < j acting on
// coefficient columns by c -> Psi_ij phi_ij(c).
class LocallyFreeModule {
 public:
  LocallyFreeModule() = default;
  // Gluings missing for some i < j are completed by composition.
  LocallyFreeModule(std::string name, SchemePtr scheme, std::size_t rank, std::vector<std::vector<Weight>> shifts,
                    std::map<std::pair<int, int>, PolyMatrix> psi, int cap = 16);

  const std::string& name() const { return name_; }
  const SchemePtr& scheme() const { return scheme_; }
  std::size_t rank() const { return rank_; }
  const std::vector<Weight>& shifts(int i) const { return shifts_[static_cast<std::size_t>(i)]; }
  const std::vector<std::vector<Weight>>& all_shifts() const { return shifts_; }
  const std::map<std::pair<int, int>, PolyMatrix>& gluings() const { return psi_; }

  // psi_ij for i <= j.
  const PolyMatrix& psi(int i, int j) const;
  // Two-sided inverse of psi_ij over A_i, when one was found.
  const PolyMatrix* psi_inverse(int i, int j) const;

  LocallyFreeModule renamed(std::string name) const;

 private:
  std::string name_;
  SchemePtr scheme_;
  std::size_t rank_ = 0;
  std::vector<std::vector<Weight>> shifts_;
  std::map<std::pair<int, int>, PolyMatrix> psi_;
  std::map<std::pair<int, int>, PolyMatrix> inverse_;
  std::vector<PolyMatrix> identity_;
};

using ModulePtr = std::shared_ptr<const LocallyFreeModule>;

LocallyFreeModule direct_sum(const std::string& name, const LocallyFreeModule& a, const LocallyFreeModule& b);

struct ModuleDefect {
  std::string kind;  // homogeneity | invertibility | cocycle
  std::vector<int> chain;
  std::string detail;
};

struct ModuleReport {
  std::vector<ModuleDefect> defects;
  std::size_t cocycle_checks = 0;
  bool valid() const { return defects.empty(); }
};

ModuleReport validate_module(const LocallyFreeModule& m);

// [M_s]: component at i is M_s (x) A_p with p = i n s, realised through the
// isomorphism psi_ps as the free A_p-module M_p.
struct PushforwardModule {
  ModulePtr module;
  int origin = 0;

  int component(int i) const;
  const std::vector<Weight>& shifts(int i) const { return module->shifts(component(i)); }
  // Gluing [M_s]_j (x) A_i -> [M_s]_i: matrix over A_{p_i}, coefficients moved
  // by phi_{p_i p_j}.
  const PolyMatrix& gluing(int i, int j) const;
};

PushforwardModule pushforward(const ModulePtr& m, int s);
PushforwardModule pushforward(const PushforwardModule& p, int s);

// Componentwise map M_i -> [M_s]_i = M_p: c -> Psi_pi phi_pi(c).
struct ComponentMap {
  int target_component = 0;
  PolyMatrix matrix;
};

std::vector<ComponentMap> restriction(const LocallyFreeModule& m, int s);
// r_j on [M_s]: [M_s] -> [M_{s n j}].
std::vector<ComponentMap> restriction(const PushforwardModule& p, int j);

// Global homomorphisms M -> target solved directly from the gluing
// compatibility h_i psi^M_ij = psi^T_ij phi(h_j), one weight at a time.
struct HomBasis {
  Weight weight;
  std::vector<std::vector<PolyMatrix>> basis;  // per basis vector, one matrix per component
};

HomBasis direct_hom(const LocallyFreeModule& m, const LocallyFreeModule& n, Weight w, int cap);
HomBasis direct_hom(const LocallyFreeModule& m, const PushforwardModule& n, Weight w, int cap);
// dim Hom_{A_s}(M_s, N_s) at weight w, counted from graded pieces of A_s.
std::size_t local_hom_dim(const LocallyFreeModule& m, const LocallyFreeModule& n, int s, Weight w, int cap);

// Bounded complex of locally free modules over one scheme: term q and the
// differential D_q : X^q -> X^{q+1}, given per component as matrices over A_i.
struct ModuleComplex {
  std::string name;
  std::map<int, ModulePtr> terms;
  std::map<int, std::vector<PolyMatrix>> maps;

  static ModuleComplex single(const ModulePtr& m, int degree = 0);
  // x[k]: term q of the result is term q + k of x; differentials change sign
  // when k is odd.
  ModuleComplex shifted(int k) const;
  SchemePtr scheme() const;
  // Zero matrix when the differential is absent.
  PolyMatrix differential(int q, int i) const;
};

struct ComplexReport {
  std::vector<std::string> defects;
  bool valid() const { return defects.empty(); }
};

ComplexReport validate_complex(const ModuleComplex& x);

}  // namespace nccech::qcoh

#endif
