#ifndef NCCECH_WORKSPACE_HPP
#define NCCECH_WORKSPACE_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nccech/error.hpp"
#include "nccech/qcoh.hpp"
#include "nccech/scheme.hpp"

// Line-oriented workspace files. Blank lines and text after '#' are ignored.
//
//   field Q                      | field GF(7)
//   ring order 1 tweight 0
//   window -6:6 secondary 0:0 cap 16 pmax 2
//   poset P ... end              elements / less a b / meet a b = c
//   algebra A ... end            letter x 1 / letter s 0,1 / rule lhs -> rhs
//   scheme S on P ... end        chart <elem> <algebra> / glue i j : img, img
//   module M on S ... end        rank r / shifts <elem> : w w / psi i j : matrix
//   sum T = M1 + M2
//   complex K on S ... end       term q M / map q <elem> : matrix
//   tower T on S levels n ... end  tweight w / glue <lvl> i j : imgs / rule <lvl> A : lhs -> rhs
//
// Weights are "a" or "a,b"; shift lists are separated by spaces. A module
// on a tower means a module on its level-1 scheme.
namespace nccech::workspace {

struct Diagnostic {
  int line = 0;
  ErrorKind kind = ErrorKind::Parse;
  std::string message;
  std::string to_string() const;
};

struct AlgebraDecl {
  int line = 0;
  std::vector<std::pair<std::string, Weight>> letters;
  std::vector<std::pair<std::string, std::string>> rules;
  std::vector<int> rule_lines;
};

struct GlueDecl {
  int line = 0;
  std::string i, j;
  std::vector<std::string> images;
};

struct SchemeDecl {
  int line = 0;
  std::string poset;
  std::optional<int> order;
  std::optional<Weight> tweight;
  std::vector<std::pair<std::string, std::string>> charts;  // element, algebra
  std::vector<int> chart_lines;
  std::vector<GlueDecl> glues;
};

struct MatrixDecl {
  int line = 0;
  std::string i, j;
  std::string text;
};

struct ModuleDecl {
  int line = 0;
  std::string scheme;
  std::size_t rank = 1;
  std::map<std::string, std::vector<Weight>> shifts;
  std::vector<MatrixDecl> psi;
  std::vector<std::string> summands;  // non-empty for `sum`
};

struct ComplexDecl {
  int line = 0;
  std::string scheme;
  std::vector<std::pair<int, std::string>> terms;
  std::vector<std::pair<int, MatrixDecl>> maps;  // degree, matrix at element i
};

struct TowerDecl {
  int line = 0;
  std::string scheme;
  int levels = 1;
  std::optional<Weight> tweight;
  std::vector<std::pair<int, GlueDecl>> glues;
  struct RuleOverride {
    int line = 0;
    int level;
    std::string algebra, lhs, rhs;
  };
  std::vector<RuleOverride> rules;
};

struct Workspace {
  Workspace();

  std::string source;  // the file text, for the digest
  Field field = Field::rationals();
  int order = 1;
  Weight tweight;
  Window window;
  int pmax = -1;
  bool window_declared = false;

  std::map<std::string, std::shared_ptr<const scheme::MeetPoset>> posets;
  std::map<std::string, AlgebraDecl> algebras;
  std::map<std::string, SchemeDecl> schemes;
  std::map<std::string, ModuleDecl> modules;
  std::map<std::string, ComplexDecl> complexes;
  std::map<std::string, TowerDecl> towers;
  std::vector<std::string> order_of_modules;  // declaration order

  // Level `level` of tower `tower` (level 0 or no tower: the scheme's own ring).
  std::shared_ptr<const scheme::NcScheme> scheme(const std::string& name) const;
  std::shared_ptr<const scheme::NcScheme> tower_level(const std::string& tower, int level) const;
  scheme::DeformationTower tower(const std::string& name) const;
  // The module on the given scheme (which must share the declared poset and
  // chart alphabets).
  qcoh::ModulePtr module(const std::string& name, const std::shared_ptr<const scheme::NcScheme>& on) const;
  qcoh::ModulePtr module(const std::string& name) const;
  // Complex, module, or either with a shift suffix "[k]".
  qcoh::ModuleComplex object(const std::string& name, const std::shared_ptr<const scheme::NcScheme>& on) const;
  std::string scheme_of(const std::string& module_or_complex) const;

 private:
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

struct ParseResult {
  std::optional<Workspace> workspace;
  std::vector<Diagnostic> errors;
  bool ok() const { return errors.empty(); }
};

// Parses and resolves every declaration; all errors carry line numbers.
ParseResult parse(const std::string& text);
ParseResult parse_file(const std::string& path);

std::string sha256_hex(const std::string& data);

struct RunOptions {
  std::optional<std::pair<int, int>> window;      // primary range
  std::optional<std::pair<int, int>> secondary;   // secondary range
  std::optional<int> length_cap;
  std::optional<int> pmax;
};

// Runs one command and returns the JSON report (envelope "nccech-report/1").
// Throws Error(Command) for unknown commands or missing arguments.
std::string run(const Workspace& ws, const std::string& command, const std::map<std::string, std::string>& args,
                const RunOptions& options = {});

const std::vector<std::string>& commands();

}  // namespace nccech::workspace

#endif
