#ifndef NCCECH_SCHEME_HPP
#define NCCECH_SCHEME_HPP

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nccech/algebra.hpp"

namespace nccech::scheme {

using algebra::AlgebraHom;
using algebra::AlgebraPtr;
using rewrite::Poly;

// Finite poset with an explicit meet table. Elements are indexed in declaration
// order, which is also the default enumeration i(1), ..., i(d).
class MeetPoset {
 public:
  struct MeetEntry {
    std::string a, b, meet;
  };

  MeetPoset() = default;
  MeetPoset(std::vector<std::string> names, const std::vector<std::pair<std::string, std::string>>& less,
            const std::vector<MeetEntry>& meets);

  std::size_t size() const { return names_.size(); }
  const std::string& name(int i) const { return names_[static_cast<std::size_t>(i)]; }
  const std::vector<std::string>& names() const { return names_; }
  int index(const std::string& name) const;  // -1 when absent

  bool leq(int i, int j) const { return leq_[static_cast<std::size_t>(i) * size() + static_cast<std::size_t>(j)]; }
  bool less(int i, int j) const { return i != j && leq(i, j); }
  bool comparable(int i, int j) const { return leq(i, j) || leq(j, i); }
  int meet(int i, int j) const { return meet_[static_cast<std::size_t>(i) * size() + static_cast<std::size_t>(j)]; }
  int meet(const std::vector<int>& elems) const;

 private:
  std::vector<std::string> names_;
  std::vector<bool> leq_;
  std::vector<int> meet_;
};

// A tuple j_0 < ... < j_p of enumeration positions (1-based), the elements
// i(j_0), ..., i(j_p) and their meet.
struct Chain {
  std::vector<int> positions;
  std::vector<int> elements;
  int meet = 0;
};

// An enumeration lists the element indices in the order i(1), ..., i(d).
std::vector<int> default_enumeration(const MeetPoset& p);
std::vector<Chain> enumerate_chains(const MeetPoset& p, int degree, const std::vector<int>& enumeration);
std::vector<Chain> enumerate_chains(const MeetPoset& p, int degree);

// Strictly increasing chains i_0 < ... < i_q in the poset order.
std::vector<std::vector<int>> order_chains(const MeetPoset& p, int length);

struct TensorAssumption {
  int j = 0, k = 0;
  Weight weight;
  std::size_t dim = 0;
};

struct NcScheme {
  std::string name;
  std::shared_ptr<const MeetPoset> poset;
  coeff::ArtinRing ring;
  std::vector<AlgebraPtr> algebras;                 // per element
  std::map<std::pair<int, int>, AlgebraHom> gluings;  // (i, j), i < j: A_j -> A_i
  std::vector<TensorAssumption> tensor_assumptions;

  std::size_t size() const { return algebras.size(); }
  const AlgebraPtr& algebra(int i) const { return algebras[static_cast<std::size_t>(i)]; }
  // phi_ij for i <= j (identity when i == j).
  const AlgebraHom& phi(int i, int j) const;

 private:
  friend NcScheme make_scheme(std::string, std::shared_ptr<const MeetPoset>, std::vector<AlgebraPtr>,
                              std::map<std::pair<int, int>, AlgebraHom>);
  std::vector<AlgebraHom> identities_;
};

// Assembles a scheme; gluings missing for some i < j are filled in by
// composing along chains i < k < j.
NcScheme make_scheme(std::string name, std::shared_ptr<const MeetPoset> poset, std::vector<AlgebraPtr> algebras,
                     std::map<std::pair<int, int>, AlgebraHom> gluings);

struct CocycleFailure {
  int i, j, k;
  std::string letter;
  std::string composed, direct;
};

struct SurjectivityFailure {
  int j, k, i;
  Weight weight;
  std::size_t dim = 0, rank = 0;
};

struct TensorCheck {
  TensorAssumption assumption;
  int meet = 0;
  std::size_t computed = 0;
  bool matches = false;
};

struct SchemeReport {
  std::vector<std::pair<std::string, algebra::HomReport>> hom_failures;  // keyed "i<j"
  std::vector<std::pair<std::string, rewrite::ConfluenceReport>> confluence_failures;
  std::vector<CocycleFailure> cocycle_failures;
  std::vector<SurjectivityFailure> surjectivity_failures;
  std::vector<TensorCheck> tensor_checks;
  std::vector<std::string> cap_warnings;
  std::size_t cocycle_checks = 0;
  std::size_t surjectivity_checks = 0;
  int confluence_bound = 0;

  bool valid() const;
};

SchemeReport validate_scheme(const NcScheme& s, const Window& window);

struct DeformationTower {
  std::string name;
  std::vector<NcScheme> levels;  // levels[n-1] lives over k[t]/t^n

  int top() const { return static_cast<int>(levels.size()); }
  const NcScheme& level(int n) const { return levels.at(static_cast<std::size_t>(n - 1)); }
};

struct FlatnessFailure {
  int level;
  std::string algebra;
  Weight weight;
  std::size_t dim = 0, expected = 0;
};

struct ReductionFailure {
  int level;  // level n+1 reduced to level n
  std::string what;
};

struct TowerReport {
  std::vector<SchemeReport> levels;
  std::vector<FlatnessFailure> flatness_failures;
  std::vector<ReductionFailure> reduction_failures;
  bool valid() const;
};

TowerReport validate_tower(const DeformationTower& t, const Window& window);

// Truncation of a level-(n+1) element to level n.
rewrite::Poly reduce_poly(const rewrite::Poly& p, const coeff::ArtinRing& target);

}  // namespace nccech::scheme

#endif
