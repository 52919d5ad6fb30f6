#include <nlohmann/json.hpp>

#include "nccech/deform.hpp"
#include "nccech/error.hpp"
#include "nccech/tilt.hpp"
#include "nccech/workspace.hpp"

namespace nccech::workspace {

namespace {

using json = nlohmann::json;
using Args = std::map<std::string, std::string>;
using SchemePtr = std::shared_ptr<const scheme::NcScheme>;

constexpr const char* kSchema = "nccech-report/1";
constexpr const char* kVersion = "0.1.0";

// ---- serialization helpers -------------------------------------------------

json scalar(const Scalar& s) { return s.get_str(); }

json vec(const Vec& v) {
  json a = json::array();
  for (const auto& s : v) a.push_back(scalar(s));
  return a;
}

json matrix(const Matrix& m) {
  json a = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(scalar(m.at(r, c)));
    a.push_back(row);
  }
  return a;
}

json poly_matrix(const algebra::GradedAlgebra& a, const qcoh::PolyMatrix& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols; ++c) row.push_back(a.format(m.at(r, c)));
    out.push_back(row);
  }
  return out;
}

json pattern(const coeff::FlatRankPattern& p) {
  return {{"free", p.is_free}, {"rank", p.rank}, {"kernel_dims", p.kernel_dims}};
}

json window_json(const Window& w, int pmax) {
  json j = {{"lo", w.lo.to_string()}, {"hi", w.hi.to_string()}, {"length_cap", w.length_cap}};
  if (pmax >= 0) j["pmax"] = pmax;
  return j;
}

std::string chain_key(const scheme::MeetPoset& P, const std::vector<int>& c) {
  std::string s;
  for (std::size_t k = 0; k < c.size(); ++k) s += (k ? "<" : "") + P.name(c[k]);
  return s;
}

json cochain(const scheme::NcScheme& s, const deform::ChainCochain& c) {
  json parts = json::object();
  for (const auto& [chain, m] : c.parts)
    if (!m.is_zero()) parts[chain_key(*s.poset, chain)] = poly_matrix(*s.algebra(chain.front()), m);
  return {{"degree", c.degree}, {"parts", parts}};
}

json gluings(const qcoh::LocallyFreeModule& m) {
  const auto& s = *m.scheme();
  json g = json::object();
  for (const auto& [key, psi] : m.gluings())
    g[s.poset->name(key.first) + " " + s.poset->name(key.second)] = poly_matrix(*s.algebra(key.first), psi);
  json shifts = json::object();
  for (std::size_t i = 0; i < s.size(); ++i) {
    json w = json::array();
    for (Weight x : m.shifts(static_cast<int>(i))) w.push_back(x.to_string());
    shifts[s.poset->name(static_cast<int>(i))] = w;
  }
  return {{"name", m.name()}, {"rank", m.rank()}, {"shifts", shifts}, {"psi", g}};
}

// The module as a workspace block that parses back on scheme `on`.
std::string declaration(const qcoh::LocallyFreeModule& m, const std::string& name, const std::string& on) {
  const auto& s = *m.scheme();
  std::string out = "module " + name + " on " + on + "\n  rank " + std::to_string(m.rank()) + "\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += "  shifts " + s.poset->name(static_cast<int>(i)) + " :";
    for (Weight x : m.shifts(static_cast<int>(i))) out += " " + x.to_string();
    out += "\n";
  }
  for (const auto& [key, psi] : m.gluings()) {
    out += "  psi " + s.poset->name(key.first) + " " + s.poset->name(key.second) + " : ";
    for (std::size_t r = 0; r < psi.rows; ++r)
      for (std::size_t c = 0; c < psi.cols; ++c)
        out += (c ? ", " : r ? "; " : "") + s.algebra(key.first)->format(psi.at(r, c));
    out += "\n";
  }
  return out + "end\n";
}

json cohomology_json(const cech::CohomologyReport& r, int order, int pmin, int pmax) {
  json groups = json::array();
  for (const auto& g : r.groups) {
    json reps = json::array();
    for (const auto& v : g.representatives) reps.push_back(vec(v));
    groups.push_back({{"p", g.degree}, {"weight", g.weight.to_string()}, {"dim", g.dim}, {"representatives", reps}});
  }
  json totals = json::object(), patterns = json::object();
  for (int p = pmin; p <= pmax; ++p) {
    totals[std::to_string(p)] = r.dim(p);
    patterns[std::to_string(p)] = pattern(r.rank_pattern(p, order));
  }
  return {{"groups", groups}, {"dims", totals}, {"t_rank_pattern", patterns}, {"dd_failures", r.dd_failures}};
}

// ---- argument helpers ------------------------------------------------------

const std::string& need(const Args& a, const std::string& key, const std::string& command) {
  auto it = a.find(key);
  if (it == a.end() || it->second.empty())
    throw Error(ErrorKind::Command, command + ": missing argument " + key + "=");
  return it->second;
}

std::optional<std::string> opt(const Args& a, const std::string& key) {
  auto it = a.find(key);
  if (it == a.end() || it->second.empty()) return std::nullopt;
  return it->second;
}

template <class Map>
std::string pick(const Args& a, const std::string& key, const Map& decls, const std::string& what,
                 const std::string& command) {
  if (auto v = opt(a, key)) return *v;
  if (decls.size() == 1) return decls.begin()->first;
  throw Error(ErrorKind::Command, command + ": missing argument " + key + "= (which " + what + "?)");
}

int to_level(const std::string& s) {
  try {
    std::size_t pos = 0;
    int v = std::stoi(s, &pos);
    if (pos == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::Command, "level must be an integer, got '" + s + "'");
}

std::vector<std::string> object_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  return out;
}

qcoh::ModulePtr structure_sheaf(const SchemePtr& s) {
  const auto& P = *s->poset;
  std::map<std::pair<int, int>, qcoh::PolyMatrix> psi;
  for (int i = 0; i < static_cast<int>(P.size()); ++i)
    for (int j = 0; j < static_cast<int>(P.size()); ++j)
      if (P.less(i, j)) psi.emplace(std::make_pair(i, j), qcoh::PolyMatrix::identity(1));
  return std::make_shared<qcoh::LocallyFreeModule>("O", s, 1, std::vector<std::vector<Weight>>(P.size(), {Weight{}}),
                                                   std::move(psi));
}

// ---- command context ---------------------------------------------------------

struct Ctx {
  const Workspace& ws;
  std::string command;
  const Args& args;
  Window window;
  int pmax = -1;
  json warnings = json::array();
  json assumptions = json::array();

  void warn(const std::vector<std::string>& w) {
    for (const auto& s : w) warnings.push_back(s);
  }

  std::vector<SchemePtr> levels(const std::string& tower, int upto) const {
    std::vector<SchemePtr> out;
    for (int n = 1; n <= upto; ++n) out.push_back(ws.tower_level(tower, n));
    return out;
  }

  int top_level(const std::string& tower) const { return ws.towers.at(tower).levels; }
};

// The module F at the requested level: either declared directly, or F extended
// along a tower. Returns null with the obstructed level when extension fails.
struct Resolved {
  SchemePtr scheme;
  qcoh::ModulePtr module;
  qcoh::ModulePtr base;  // level 1, when a tower is used
  int level = 1;
  int obstructed_level = 0;
  std::optional<deform::TowerRun> run;
};

Resolved resolve_f(Ctx& c) {
  Resolved r;
  const std::string f = need(c.args, "F", c.command);
  auto tower = opt(c.args, "tower");
  if (!tower) {
    r.module = c.ws.module(f);
    r.scheme = r.module->scheme();
    return r;
  }
  if (!c.ws.towers.count(*tower)) throw Error(ErrorKind::Reference, "unknown tower '" + *tower + "'");
  r.level = opt(c.args, "level") ? to_level(*opt(c.args, "level")) : c.top_level(*tower);
  auto lv = c.levels(*tower, r.level);
  r.scheme = lv.back();
  r.base = c.ws.module(f, lv.front());
  if (r.level == 1) {
    r.module = r.base;
    return r;
  }
  r.run = deform::run_tower(lv, r.base, c.window);
  c.warn(r.run->tower_defects);
  r.obstructed_level = r.run->obstructed_level;
  if (!r.obstructed_level) r.module = r.run->top;
  c.assumptions.push_back("F at level " + std::to_string(r.level) + " is the extension built by the obstruction calculus");
  return r;
}

// ---- commands ------------------------------------------------------------------

json scheme_report(Ctx& c, const scheme::NcScheme& s) {
  auto rep = scheme::validate_scheme(s, c.window);
  const auto& P = *s.poset;
  json hom = json::array();
  for (const auto& [key, h] : rep.hom_failures) {
    auto lt = key.find('<');
    const auto& target = *s.algebra(P.index(key.substr(0, lt)));
    for (const auto& d : h.defects)
      hom.push_back({{"pair", key}, {"rule", d.rule}, {"difference", target.format(d.difference)}});
  }
  json conf = json::array();
  for (const auto& [elem, cr] : rep.confluence_failures) {
    const auto& a = *s.algebra(P.index(elem));
    for (const auto& amb : cr.unresolved)
      conf.push_back({{"chart", elem},
                      {"algebra", a.name()},
                      {"overlap", rewrite::format_word(amb.overlap, a.alphabet())},
                      {"rules", {amb.rule_a, amb.rule_b}},
                      {"via_a", a.format(amb.via_a)},
                      {"via_b", a.format(amb.via_b)}});
  }
  json coc = json::array();
  for (const auto& f : rep.cocycle_failures)
    coc.push_back({{"chain", {P.name(f.i), P.name(f.j), P.name(f.k)}},
                   {"letter", f.letter},
                   {"composed", f.composed},
                   {"direct", f.direct}});
  json sur = json::array();
  for (const auto& f : rep.surjectivity_failures)
    sur.push_back({{"charts", {P.name(f.j), P.name(f.k)}},
                   {"meet", P.name(f.i)},
                   {"weight", f.weight.to_string()},
                   {"dim", f.dim},
                   {"rank", f.rank}});
  json ten = json::array();
  for (const auto& t : rep.tensor_checks)
    ten.push_back({{"charts", {P.name(t.assumption.j), P.name(t.assumption.k)}},
                   {"weight", t.assumption.weight.to_string()},
                   {"asserted", t.assumption.dim},
                   {"computed", t.computed},
                   {"matches", t.matches}});
  c.warn(rep.cap_warnings);
  return {{"scheme", s.name},
          {"order", s.ring.order()},
          {"valid", rep.valid()},
          {"hom_failures", hom},
          {"confluence_failures", conf},
          {"confluence_bound", rep.confluence_bound},
          {"cocycle_checks", rep.cocycle_checks},
          {"cocycle_failures", coc},
          {"surjectivity_checks", rep.surjectivity_checks},
          {"surjectivity_failures", sur},
          {"tensor_checks", ten}};
}

json cmd_validate_scheme(Ctx& c) {
  auto name = pick(c.args, "S", c.ws.schemes, "scheme", c.command);
  c.assumptions.push_back("flatness of the gluing homomorphisms is asserted, not checked");
  c.assumptions.push_back("birationality is checked as surjectivity onto the meet inside the window");
  return scheme_report(c, *c.ws.scheme(name));
}

json cmd_validate_tower(Ctx& c) {
  auto name = pick(c.args, "name", c.ws.towers, "tower", c.command);
  auto t = c.ws.tower(name);
  auto rep = scheme::validate_tower(t, c.window);
  json levels = json::array();
  for (int n = 1; n <= t.top(); ++n) levels.push_back(scheme_report(c, t.level(n)));
  json flat = json::array();
  for (const auto& f : rep.flatness_failures)
    flat.push_back({{"level", f.level}, {"algebra", f.algebra}, {"weight", f.weight.to_string()}, {"dim", f.dim},
                    {"expected", f.expected}});
  json red = json::array();
  for (const auto& f : rep.reduction_failures) red.push_back({{"level", f.level}, {"what", f.what}});
  c.assumptions.push_back("flatness over k[t]/t^n is checked by graded dimension counts inside the window");
  return {{"tower", name}, {"levels", levels}, {"flatness_failures", flat}, {"reduction_failures", red},
          {"valid", rep.valid()}};
}

std::pair<cech::CohomologyReport, int> ext_of(Ctx& c, const qcoh::ModulePtr& f, const std::string& target,
                                              const SchemePtr& on) {
  auto x = c.ws.object(target, on);
  if (x.terms.size() == 1 && x.terms.begin()->first == 0 && x.maps.empty()) {
    auto r = cech::ext(f, x.terms.begin()->second, c.window, c.pmax);
    int top = c.pmax >= 0 ? c.pmax : static_cast<int>(on->size()) - 1;
    return {r, top};
  }
  return {cech::ext(f, x, c.window), static_cast<int>(on->size()) - 1 + x.terms.rbegin()->first};
}

json cmd_cohomology(Ctx& c) {
  const auto& m = need(c.args, "M", c.command);
  auto s = c.ws.scheme(c.ws.scheme_of(m));
  auto [r, top] = ext_of(c, structure_sheaf(s), m, s);
  c.warn(r.warnings);
  int lo = 0;
  for (const auto& g : r.groups) lo = std::min(lo, g.degree);
  return {{"M", m}, {"cohomology", cohomology_json(r, s->ring.order(), lo, std::max(top, 0))}};
}

json cmd_ext(Ctx& c) {
  auto f = c.ws.module(need(c.args, "F", c.command));
  const auto& n = need(c.args, "N", c.command);
  auto [r, top] = ext_of(c, f, n, f->scheme());
  c.warn(r.warnings);
  int lo = 0;
  for (const auto& g : r.groups) lo = std::min(lo, g.degree);
  return {{"F", f->name()}, {"N", n}, {"ext", cohomology_json(r, f->scheme()->ring.order(), lo, std::max(top, 0))}};
}

json cmd_hom(Ctx& c) {
  auto f = c.ws.module(need(c.args, "F", c.command));
  auto n = c.ws.module(need(c.args, "N", c.command), f->scheme());
  cech::HomComplex h(f, qcoh::ModuleComplex::single(n), {}, c.window.length_cap);
  const auto& s = *f->scheme();
  json weights = json::array();
  std::size_t total = 0;
  for (Weight w : c.window.weights()) {
    auto basis = cech::graded_hom(h, w);
    if (h.cap_insufficient(0, w)) c.warnings.push_back("Hom at weight " + w.to_string() + ": length cap reached");
    if (basis.empty()) continue;
    total += basis.size();
    json maps = json::array();
    for (const auto& v : basis) {
      auto parts = h.decode(0, w, v);
      json comp = json::object();
      const auto& terms = h.terms(0);
      for (std::size_t k = 0; k < terms.size(); ++k)
        comp[s.poset->name(terms[k].site)] = poly_matrix(*s.algebra(terms[k].site), parts[k]);
      maps.push_back(comp);
    }
    weights.push_back({{"weight", w.to_string()}, {"dim", basis.size()}, {"basis", maps}});
  }
  return {{"F", f->name()}, {"N", n->name()}, {"dim", total}, {"weights", weights}};
}

json level_json(const scheme::NcScheme& lower, const scheme::NcScheme& upper, const deform::LevelRecord& lv,
                bool with_certificate) {
  const auto& o = lv.obstruction;
  json j = {{"level", lv.level},
            {"order", o.order},
            {"weight", o.weight.to_string()},
            {"delta", cochain(lower, o.cocycle)},
            {"delta_zero", o.cocycle.is_zero()},
            {"closed", o.closed},
            {"closedness_failures", o.closedness_failures},
            {"solvable", o.solvable},
            {"system_rank", o.system_rank},
            {"augmented_rank", o.augmented_rank}};
  if (o.h2_witness) j["h2_witness"] = vec(*o.h2_witness);
  if (with_certificate) {
    if (o.particular) j["epsilon"] = cochain(lower, *o.particular);
    if (lv.certificate) {
      const auto& cert = *lv.certificate;
      j["certificate"] = {{"module", gluings(*cert.module)},
                          {"cocycle_ok", cert.cocycle_ok},
                          {"reduces", cert.reduces},
                          {"defects", cert.defects}};
      j["end_dim"] = lv.end_dim;
    }
  }
  (void)upper;
  return j;
}

struct TowerInputs {
  std::string tower;
  int level;
  std::vector<SchemePtr> lv;
  qcoh::ModulePtr f0;
};

TowerInputs tower_inputs(Ctx& c) {
  TowerInputs t;
  t.tower = pick(c.args, "name", c.ws.towers, "tower", c.command);
  if (!c.ws.towers.count(t.tower)) throw Error(ErrorKind::Reference, "unknown tower '" + t.tower + "'");
  t.level = opt(c.args, "level") ? to_level(*opt(c.args, "level")) : c.top_level(t.tower);
  if (t.level < 2) throw Error(ErrorKind::Command, c.command + ": level must be at least 2");
  t.lv = c.levels(t.tower, t.level);
  t.f0 = c.ws.module(need(c.args, "F", c.command), t.lv.front());
  return t;
}

json run_levels(Ctx& c, const TowerInputs& t, const deform::TowerRun& run, bool certificates) {
  json levels = json::array();
  for (const auto& lv : run.levels)
    levels.push_back(level_json(*t.lv.front(), *t.lv[static_cast<std::size_t>(lv.level - 1)], lv, certificates));
  c.warn(run.tower_defects);
  return levels;
}

json cmd_obstruct(Ctx& c) {
  auto t = tower_inputs(c);
  auto run = deform::run_tower(t.lv, t.f0, c.window);
  json levels = run_levels(c, t, run, false);
  const auto& last = run.levels.back().obstruction;
  return {{"tower", t.tower},
          {"F", t.f0->name()},
          {"level", t.level},
          {"levels", levels},
          {"obstructed_level", run.obstructed_level},
          {"obstruction_zero", run.obstructed_level == 0 && last.solvable}};
}

json cmd_extend(Ctx& c) {
  auto t = tower_inputs(c);
  auto run = deform::run_tower(t.lv, t.f0, c.window);
  json levels = run_levels(c, t, run, true);
  deform::ChainComplex cx(t.f0, c.window.length_cap);
  auto tor = deform::torsor_structure(cx, c.window);
  json h1 = json::object();
  for (const auto& [w, d] : tor.h1_by_weight) h1[w.to_string()] = d;
  json r = {{"tower", t.tower},
            {"F", t.f0->name()},
            {"level", t.level},
            {"levels", levels},
            {"extends", run.obstructed_level == 0},
            {"obstructed_level", run.obstructed_level},
            {"torsor",
             {{"closed_dim", tor.closed_dim},
              {"coboundary_dim", tor.coboundary_dim},
              {"h1_dim", tor.h1_dim},
              {"h1_by_weight", h1},
              {"identity_holds", tor.identity_holds}}}};
  if (run.top && run.obstructed_level == 0) {
    r["module"] = gluings(*run.top);
    r["declaration"] = declaration(*run.top, t.f0->name() + "_" + std::to_string(t.level),
                                   t.tower + "@" + std::to_string(t.level));
  }
  c.assumptions.push_back("extensions are classified up to isomorphism by H^1 of the chain complex inside the window");
  return r;
}

json flatness_json(const tilt::FlatnessVerdict& v) {
  json j = {{"flat", v.flat}, {"generated_dim", v.generated_dim}, {"pattern", pattern(v.pattern)}};
  if (v.reduction_matches) {
    j["reduction_matches"] = *v.reduction_matches;
    j["reduction_failures"] = v.reduction_failures;
  }
  return j;
}

json cmd_tower(Ctx& c) {
  auto t = tower_inputs(c);
  auto tv = scheme::validate_tower(c.ws.tower(t.tower), c.window);
  auto run = deform::run_tower(t.lv, t.f0, c.window);
  json levels = run_levels(c, t, run, true);
  json r = {{"tower", t.tower},
            {"F", t.f0->name()},
            {"level", t.level},
            {"tower_valid", tv.valid()},
            {"levels", levels},
            {"base_end_dim", run.base_end_dim},
            {"obstructed_level", run.obstructed_level}};
  if (run.obstructed_level == 0 && run.top) {
    auto e0 = tilt::end_algebra(t.f0, c.window);
    auto e = tilt::end_algebra(run.top, c.window);
    auto flat = tilt::flatness_check(e, &e0);
    r["end_dim"] = flat.generated_dim;
    r["end_window_dim"] = e.core().size();
    r["flatness"] = flatness_json(flat);
    c.warn(e.warnings());
  }
  c.assumptions.push_back("flatness of the tower algebras is checked by dimension counts inside the window");
  return r;
}

json algebra_json(const tilt::EndomorphismAlgebra& e) {
  json basis = json::array();
  for (std::size_t a = 0; a < e.dim(); ++a) basis.push_back({{"label", e.labels()[a]}, {"weight", e.basis()[a].weight.to_string()}});
  json consts = json::array();
  for (const auto& k : e.constants()) consts.push_back({k.a, k.b, k.c, scalar(k.value)});
  return {{"dim", e.dim()},
          {"core", e.core()},
          {"basis", basis},
          {"structure_constants", consts},
          {"t_action", matrix(e.t_action())},
          {"unit", vec(e.unit())},
          {"axiom_failures", e.axiom_failures()}};
}

json cmd_endalg(Ctx& c) {
  auto r = resolve_f(c);
  json j = {{"F", need(c.args, "F", c.command)}, {"level", r.level}};
  if (!r.module) {
    j["obstructed_level"] = r.obstructed_level;
    return j;
  }
  auto e = tilt::end_algebra(r.module, c.window);
  c.warn(e.warnings());
  j["algebra"] = algebra_json(e);
  return j;
}

json cmd_tilt_check(Ctx& c) {
  auto r = resolve_f(c);
  json j = {{"F", need(c.args, "F", c.command)}, {"level", r.level}};
  if (!r.module) {
    j["obstructed_level"] = r.obstructed_level;
    return j;
  }
  auto rep = tilt::pretilting_check(r.module, c.pmax >= 0 ? c.pmax : 1 << 20, c.window);
  c.warn(rep.warnings);
  json ext = json::array();
  for (const auto& [key, d] : rep.ext) ext.push_back({{"p", key.first}, {"weight", key.second.to_string()}, {"dim", d}});
  auto e = tilt::end_algebra(r.module, c.window);
  c.warn(e.warnings());
  std::optional<tilt::EndomorphismAlgebra> e0;
  if (r.base && r.level > 1) e0 = tilt::end_algebra(r.base, c.window);
  auto flat = tilt::flatness_check(e, e0 ? &*e0 : nullptr);
  j["pretilting"] = rep.pretilting;
  j["pmax"] = rep.pmax;
  j["ext"] = ext;
  j["end_dim"] = flat.generated_dim;
  j["end_window_dim"] = e.core().size();
  j["flatness"] = flatness_json(flat);
  j["axiom_failures"] = e.axiom_failures();
  c.assumptions.push_back("Ext vanishing is verified inside the window only");
  return j;
}

json cmd_generate_check(Ctx& c) {
  auto r = resolve_f(c);
  auto objs = object_list(need(c.args, "X", c.command));
  json j = {{"F", need(c.args, "F", c.command)}, {"level", r.level}, {"test_objects", objs}};
  if (!r.module) {
    j["obstructed_level"] = r.obstructed_level;
    return j;
  }
  json res = json::array();
  for (const auto& x : objs) {
    auto g = tilt::generation_check(r.module, c.ws.object(x, r.scheme), c.window);
    c.warn(g.warnings);
    json dims = json::object();
    for (const auto& [p, d] : g.dims) dims[std::to_string(p)] = d;
    json row = {{"object", x}, {"dims", dims}};
    if (g.witness) {
      row["verdict"] = "witness";
      row["witness"] = *g.witness;
    } else {
      row["verdict"] = "inconclusive";
    }
    res.push_back(row);
  }
  j["results"] = res;
  c.assumptions.push_back("generation is tested only against the listed objects, not all of D^-coh");
  return j;
}

json cmd_phi(Ctx& c) {
  auto r = resolve_f(c);
  auto objs = object_list(need(c.args, "X", c.command));
  json j = {{"F", need(c.args, "F", c.command)}, {"level", r.level}};
  if (!r.module) {
    j["obstructed_level"] = r.obstructed_level;
    return j;
  }
  auto e = tilt::end_algebra(r.module, c.window);
  c.warn(e.warnings());
  json res = json::array();
  for (const auto& x : objs) {
    auto img = tilt::phi_image(e, c.ws.object(x, r.scheme), c.window);
    c.warn(img.warnings);
    json degs = json::array();
    for (const auto& d : img.degrees) {
      json ws = json::array();
      for (const auto& [w, n] : d.weights) ws.push_back({{"weight", w.to_string()}, {"dim", n}});
      json act = json::array();
      for (const auto& m : d.e_action) act.push_back(matrix(m));
      degs.push_back({{"degree", d.degree}, {"dim", d.dim}, {"weights", ws}, {"t_action", matrix(d.t_action)},
                      {"e_action", act}});
    }
    res.push_back({{"object", x},
                   {"degrees", degs},
                   {"euler", img.euler},
                   {"euler_from_terms", img.euler_from_terms},
                   {"action_failures", img.action_failures}});
  }
  j["end_dim"] = e.dim();
  j["images"] = res;
  return j;
}

using Handler = json (*)(Ctx&);

const std::vector<std::pair<std::string, Handler>>& table() {
  static const std::vector<std::pair<std::string, Handler>> t = {
      {"validate-scheme", cmd_validate_scheme}, {"validate-tower", cmd_validate_tower},
      {"cohomology", cmd_cohomology},           {"ext", cmd_ext},
      {"hom", cmd_hom},                         {"obstruct", cmd_obstruct},
      {"extend", cmd_extend},                   {"tower", cmd_tower},
      {"endalg", cmd_endalg},                   {"tilt-check", cmd_tilt_check},
      {"generate-check", cmd_generate_check},   {"phi", cmd_phi}};
  return t;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [n, h] : table()) v.push_back(n);
    return v;
  }();
  return names;
}

std::string run(const Workspace& ws, const std::string& command, const Args& args, const RunOptions& options) {
  Handler h = nullptr;
  for (const auto& [n, f] : table())
    if (n == command) h = f;
  if (!h) throw Error(ErrorKind::Command, "unknown command '" + command + "'");
  if (!ws.window_declared && !options.window)
    throw Error(ErrorKind::Command, command + ": no window declared in the workspace or on the command line");

  Ctx c{ws, command, args, ws.window, ws.pmax};
  if (options.window) {
    c.window.lo.primary = options.window->first;
    c.window.hi.primary = options.window->second;
  }
  if (options.secondary) {
    c.window.lo.secondary = options.secondary->first;
    c.window.hi.secondary = options.secondary->second;
  }
  if (options.length_cap) c.window.length_cap = *options.length_cap;
  if (options.pmax) c.pmax = *options.pmax;

  json results = h(c);
  json env = {{"schema", kSchema},
              {"tool", "nccech"},
              {"version", kVersion},
              {"input_digest", "sha256:" + sha256_hex(ws.source)},
              {"command", command},
              {"args", args},
              {"window", window_json(c.window, c.pmax)},
              {"results", results},
              {"scope", "window-relative result"},
              {"warnings", c.warnings},
              {"assumptions", c.assumptions}};
  return env.dump(2) + "\n";
}

}  // namespace nccech::workspace
