#ifndef NCCECH_CECH_HPP
#define NCCECH_CECH_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nccech/coeff.hpp"
#include "nccech/qcoh.hpp"

namespace nccech::cech {

using qcoh::ModuleComplex;
using qcoh::ModulePtr;
using qcoh::PolyMatrix;
using scheme::Chain;

// C^p(M) = sum over chains j_0 < ... < j_p of enumeration positions of
// [M_{meet}], for 0 <= p < d.
struct CechComplex {
  ModulePtr module;
  std::vector<int> enumeration;
  std::vector<std::vector<Chain>> chains;  // chains[p]

  int length() const { return static_cast<int>(chains.size()); }
  std::size_t term_count(int p) const { return chains.at(static_cast<std::size_t>(p)).size(); }
};

// Empty enumeration means the declaration order.
CechComplex build_cech(const ModulePtr& m, std::vector<int> enumeration = {});

// One block of a Čech differential: chain `from` in degree p maps to chain
// `to` in degree p + 1 (from = -1 stands for the augmentation source M).
struct CechBlock {
  int degree;  // -1 for the augmentation M -> C^0
  int from, to;
  int sign;
};

std::vector<CechBlock> cech_blocks(const CechComplex& c);

// Flips the sign of one block, for mutation tests.
struct SignMutation {
  std::size_t block;  // index into cech_blocks
};

struct ExactnessFailure {
  Weight weight;
  int chart;
  int position;  // -1 for M, p for C^p
  std::size_t kernel = 0, image = 0;
};

struct ExactnessReport {
  std::vector<ExactnessFailure> failures;
  std::vector<std::string> dd_failures;  // "chart c weight w degree p"
  std::vector<std::string> cap_warnings;
  std::size_t positions_checked = 0;
  bool exact() const { return failures.empty() && dd_failures.empty(); }
};

// Exactness of 0 -> M -> C^0 -> ... -> C^{d-1} -> 0, checked locally at every
// chart and weight of the window.
ExactnessReport resolution_exactness_check(const CechComplex& c, const Window& window,
                                           std::optional<SignMutation> mutation = std::nullopt);

// Hom(F, C^p(N^q)) with total degree p + q, realised per weight through
// Hom(F, [N_s]) = Hom_{A_s}(F_s, N_s). The differential is the Čech one plus
// (-1)^p times the differential of N.
class HomComplex {
 public:
  struct Term {
    int q;            // degree in the target complex
    int p;            // Čech degree
    std::size_t chain;
    int site;         // meet of the chain
  };

  HomComplex(ModulePtr source, ModuleComplex target, std::vector<int> enumeration = {}, int cap = 16);

  const ModulePtr& source() const { return source_; }
  const ModuleComplex& target() const { return target_; }
  const std::vector<int>& enumeration() const { return enumeration_; }
  const std::vector<std::vector<Chain>>& chains() const { return chains_; }
  int min_degree() const;
  int max_degree() const;
  const std::vector<Term>& terms(int n) const;

  std::size_t dim(int n, Weight w) const;
  bool cap_insufficient(int n, Weight w) const;
  // n -> n + 1 at weight w.
  const Matrix& differential(int n, Weight w) const;
  // Multiplication by t: weight w -> w + wt(t), same degree.
  Matrix t_action(int n, Weight w) const;
  // Per term: the matrix H_s of the component, in the order of terms(n).
  std::vector<PolyMatrix> decode(int n, Weight w, const Vec& v) const;
  Vec encode(int n, Weight w, const std::vector<PolyMatrix>& parts) const;

 private:
  struct Cache;
  ModulePtr source_;
  ModuleComplex target_;
  std::vector<int> enumeration_;
  std::vector<std::vector<Chain>> chains_;
  std::map<int, std::vector<Term>> terms_;
  int cap_;
  std::shared_ptr<Cache> cache_;
};

struct CohomologyGroup {
  int degree = 0;
  Weight weight;
  std::size_t dim = 0;
  std::vector<Vec> representatives;  // cocycles in the term basis
  // Columns: images of the representatives under t, in the class coordinates
  // of weight + wt(t).
  Matrix t_action;
};

struct CohomologyReport {
  std::vector<CohomologyGroup> groups;  // ordered by degree, then weight
  std::vector<std::string> warnings;
  std::vector<std::string> dd_failures;
  Weight t_weight;
  Field field;

  std::size_t dim(int degree) const;
  std::size_t dim(int degree, Weight w) const;
  const CohomologyGroup* group(int degree, Weight w) const;
  // Flat rank pattern of the degree-p groups in the report as an R-module.
  coeff::FlatRankPattern rank_pattern(int degree, int order) const;
};

CohomologyReport cohomology(const HomComplex& h, const Window& window, int pmin, int pmax);
CohomologyReport cohomology(const HomComplex& h, const Window& window);

// Ext^p(F, N) for 0 <= p <= pmax (pmax < 0: up to the top of the complex).
CohomologyReport ext(const ModulePtr& f, const ModulePtr& n, const Window& window, int pmax = -1,
                     std::vector<int> enumeration = {});
CohomologyReport ext(const ModulePtr& f, const ModuleComplex& n, const Window& window,
                     std::vector<int> enumeration = {});

// Graded global homomorphisms F -> N at weight w: the degree-0 cocycles, each
// given as the family of components over the Čech degree-0 chains.
std::vector<Vec> graded_hom(const HomComplex& h, Weight w);

// Coordinates of the class of a degree-n cocycle at weight w, in the basis of
// the representatives that cohomology() reports for (n, w).
Vec class_coordinates(const HomComplex& h, int n, Weight w, const Vec& cocycle);

// Alternating sum of term dimensions per weight.
std::map<Weight, long> euler_characteristic(const HomComplex& h, const Window& window);

}  // namespace nccech::cech

#endif
