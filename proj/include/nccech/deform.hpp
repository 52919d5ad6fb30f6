#ifndef NCCECH_DEFORM_HPP
#define NCCECH_DEFORM_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nccech/qcoh.hpp"

namespace nccech::deform {

using qcoh::LocallyFreeModule;
using qcoh::ModulePtr;
using qcoh::PolyMatrix;
using qcoh::SchemePtr;

// Cochain on poset chains i_0 < ... < i_p with values in matrices over
// A_{i_0} (rank x rank); chains absent from the map are zero.
struct ChainCochain {
  int degree = 0;
  std::map<std::vector<int>, PolyMatrix> parts;
  bool is_zero() const;
};

// C^p = sum over chains of Hom_{A_{i_0}}(F_{i_p} (x) A_{i_0}, F_{i_0}) for a module
// F over a level-1 scheme, with
//   (dc)_{i_0..i_{p+1}} = psi_{i_0 i_1} phi(c_{i_1..}) + sum_{0<k<=p} (-1)^k c_{..^k..}
//                         + (-1)^{p+1} c_{i_0..i_p} phi(psi_{i_p i_{p+1}}).
class ChainComplex {
 public:
  ChainComplex(ModulePtr f, int cap);

  const ModulePtr& module() const { return f_; }
  int top() const { return static_cast<int>(chains_.size()) - 1; }
  const std::vector<std::vector<int>>& chains(int p) const;

  std::size_t dim(int p, Weight w) const;
  // C^p -> C^{p+1} at weight w (zero-row matrix above the top degree).
  const Matrix& differential(int p, Weight w) const;
  Vec encode(const ChainCochain& c, Weight w) const;
  ChainCochain decode(int p, Weight w, const Vec& v) const;
  ChainCochain coboundary(const ChainCochain& c, Weight w) const;

 private:
  struct Cache;
  ModulePtr f_;
  int cap_;
  std::vector<std::vector<std::vector<int>>> chains_;
  std::shared_ptr<Cache> cache_;
};

struct ChainCohomology {
  std::map<std::pair<int, Weight>, std::size_t> dims;  // nonzero entries only
  std::size_t dim(int p) const;
};

ChainCohomology chain_cohomology(const ChainComplex& c, const Window& window);

// Same gluing data on another scheme with the same charts and alphabets.
LocallyFreeModule transport(const LocallyFreeModule& f, const SchemePtr& target);
// Entrywise coefficient-preserving lift of every psi_ij (i < j) to `next`.
LocallyFreeModule lift_gluing(const LocallyFreeModule& f, const SchemePtr& next);
// Truncation of every gluing entry to `lower`.
LocallyFreeModule reduce_module(const LocallyFreeModule& f, const SchemePtr& lower);

struct ObstructionResult {
  int order = 1;  // n: the lift goes from k[t]/t^n to k[t]/t^{n+1}
  Weight weight;  // weight of delta in the chain complex of F^0
  ChainCochain cocycle;
  bool closed = false;
  std::vector<std::string> closedness_failures;
  bool solvable = false;
  std::optional<ChainCochain> particular;  // epsilon with d(epsilon) = -delta
  std::size_t system_rank = 0, augmented_rank = 0;
  std::optional<Vec> h2_witness;  // y with y d = 0 and y delta != 0
};

// delta_ijk = psi'_ij phi'_ij(psi'_jk) - psi'_ik over A', divided by t^n.
// `lifted` lives over level n+1, `f0` is the level-1 module.
ObstructionResult obstruction(const ChainComplex& f0, const LocallyFreeModule& lifted, int n);
void solve_extension(const ChainComplex& f0, ObstructionResult& r);

struct ExtensionCertificate {
  ModulePtr module;
  bool cocycle_ok = false;
  bool reduces = false;
  std::vector<std::string> defects;
};

// psi' + t^n epsilon, re-verified over A' and against the level-n module.
ExtensionCertificate apply_correction(const LocallyFreeModule& lifted, const ChainCochain& epsilon, int n,
                                      const LocallyFreeModule& below);

// (psi'_ij - psi_ij) / t^n over all pairs, for two lifts of the same module.
ChainCochain lift_difference(const LocallyFreeModule& a, const LocallyFreeModule& b, int n,
                             const SchemePtr& level1);

struct TorsorReport {
  std::size_t closed_dim = 0;      // dim Z^1 over the window
  std::size_t coboundary_dim = 0;  // dim B^1 over the window
  std::size_t h1_dim = 0;          // dim Z^1 / B^1 computed as a quotient
  bool identity_holds = false;     // closed = coboundary + h1
  std::map<Weight, std::size_t> h1_by_weight;
};

TorsorReport torsor_structure(const ChainComplex& f0, const Window& window);

struct Intertwiner {
  ChainCochain gamma;  // degree 0
  bool verified = false;
};

// gamma with (1 + t^n gamma_i) psi^a_ij = psi^b_ij phi'_ij(1 + t^n gamma_j), when
// the two extensions differ by a coboundary.
std::optional<Intertwiner> intertwiner(const ChainComplex& f0, const LocallyFreeModule& a,
                                       const LocallyFreeModule& b, int n);

struct LevelRecord {
  int level = 0;  // the level reached (n + 1)
  ObstructionResult obstruction;
  std::optional<ExtensionCertificate> certificate;
  std::size_t end_dim = 0;  // dim_k of graded global endomorphisms in the window
};

struct TowerRun {
  std::vector<LevelRecord> levels;
  int obstructed_level = 0;  // 0 when every level extended
  ModulePtr top;
  std::size_t base_end_dim = 0;
  std::vector<std::string> tower_defects;
};

// Extends f0 (over levels[0]) level by level.
TowerRun run_tower(const std::vector<SchemePtr>& levels, const ModulePtr& f0, const Window& window);

}  // namespace nccech::deform

#endif
