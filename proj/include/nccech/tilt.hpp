#ifndef NCCECH_TILT_HPP
#define NCCECH_TILT_HPP

#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "nccech/cech.hpp"
#include "nccech/coeff.hpp"

namespace nccech::tilt {

using qcoh::ModuleComplex;
using qcoh::ModulePtr;
using qcoh::PolyMatrix;

// One graded global endomorphism: a matrix over A_i for every element i.
struct Endo {
  Weight weight;
  std::vector<PolyMatrix> charts;
};

struct StructureConstant {
  std::size_t a, b, c;
  Scalar value;  // e_a e_b = sum_c value e_c, product = composition a after b
  friend bool operator==(const StructureConstant&, const StructureConstant&) = default;
};

// Graded global endomorphisms. The basis covers the window widened by
// (order - 1) * wt(t) so that t-multiples of the window part are kept; core()
// lists the basis elements whose weight lies in the requested window.
class EndomorphismAlgebra {
 public:
  EndomorphismAlgebra() = default;
  EndomorphismAlgebra(ModulePtr f, const Window& window);

  const ModulePtr& module() const { return f_; }
  const Window& window() const { return window_; }
  const std::vector<std::size_t>& core() const { return core_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Endo>& basis() const { return basis_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<StructureConstant>& constants() const { return constants_; }
  const Matrix& t_action() const { return t_; }
  const Vec& unit() const { return unit_; }
  int order() const;
  const Field& field() const;
  // products that left the window and were dropped
  const std::vector<std::string>& warnings() const { return warnings_; }

  Vec multiply(const Vec& x, const Vec& y) const;
  // Coordinates of an endomorphism of weight w; nullopt when it is not in the span.
  std::optional<Vec> coordinates(const Endo& e) const;
  Endo element(const Vec& v) const;  // only for vectors supported in one weight

  // Associativity, unit laws, t central and nilpotent. Empty when all hold.
  std::vector<std::string> axiom_failures() const;

 private:
  ModulePtr f_;
  Window window_, wide_;
  std::vector<std::size_t> core_;
  std::vector<Endo> basis_;
  std::vector<Vec> term_vecs_;  // basis in Hom-complex degree-0 coordinates
  std::vector<std::string> labels_;
  std::map<Weight, std::vector<std::size_t>> by_weight_;
  std::vector<StructureConstant> constants_;
  std::vector<std::vector<Vec>> table_;  // table_[a][b] = e_a e_b
  Matrix t_;
  Vec unit_;
  std::vector<std::string> warnings_;
  std::shared_ptr<const cech::HomComplex> hom_;
};

EndomorphismAlgebra end_algebra(const ModulePtr& f, const Window& window);

struct FlatnessVerdict {
  bool flat = false;
  std::size_t generated_dim = 0;  // k[t]-submodule generated by the core
  coeff::FlatRankPattern pattern;
  // E/tE against E0 (only when a level-1 algebra is supplied)
  std::optional<bool> reduction_matches;
  std::vector<std::string> reduction_failures;
};

// flat_rank_pattern of t on the k[t]-submodule N generated by the core; with
// e0, the structure constants of N/tN in a basis lifting the core basis of e0
// are compared entrywise with e0's. N is free exactly when E is, provided the
// window reaches the bottom of E in the t direction.
FlatnessVerdict flatness_check(const EndomorphismAlgebra& e, const EndomorphismAlgebra* e0 = nullptr);

struct TiltingReport {
  std::map<std::pair<int, Weight>, std::size_t> ext;  // nonzero entries
  int pmax = 0;
  bool pretilting = false;
  bool in_window_only = true;  // verdicts are always window-restricted
  std::vector<std::string> warnings;
  std::optional<std::size_t> end_dim;
  std::optional<FlatnessVerdict> flatness;
};

TiltingReport pretilting_check(const ModulePtr& f, int pmax, const Window& window);

struct GenerationResult {
  std::string object;
  std::map<int, std::size_t> dims;  // nonzero H^p of RHom(F, x)
  std::optional<int> witness;       // the largest p with H^p != 0
  std::vector<std::string> warnings;
};

GenerationResult generation_check(const ModulePtr& f, const ModuleComplex& x, const Window& window);

struct PhiDegree {
  int degree = 0;
  std::size_t dim = 0;
  std::vector<std::pair<Weight, std::size_t>> weights;  // class basis order
  Matrix t_action;                                      // dim x dim
  std::vector<Matrix> e_action;                         // right action of each basis element
};

struct PhiImage {
  std::string object;
  std::vector<PhiDegree> degrees;
  long euler = 0;             // sum of (-1)^p dim H^p
  long euler_from_terms = 0;  // from the Hom complex term dimensions
  std::vector<std::string> action_failures;
  std::vector<std::string> warnings;

  std::size_t dim(int p) const;
};

PhiImage phi_image(const EndomorphismAlgebra& e, const ModuleComplex& x, const Window& window);

}  // namespace nccech::tilt

#endif
