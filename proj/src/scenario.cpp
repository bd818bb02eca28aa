#include "fibplan/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace fibplan {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::configuration, what); }

void allow_keys(const json& j, std::initializer_list<const char*> keys, const std::string& where) {
  if (!j.is_object()) bad(where + " must be an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : j.items()) {
    if (!allowed.count(k)) bad("unknown key '" + k + "' in " + where);
  }
}

const json& need(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) bad(where + " needs '" + key + "'");
  return j.at(key);
}

std::string need_string(const json& j, const char* key, const std::string& where) {
  const json& v = need(j, key, where);
  if (!v.is_string()) bad(where + ": '" + key + "' must be a string");
  return v.get<std::string>();
}

double as_number(const json& v, const std::string& what) {
  if (!v.is_number()) bad(what + " must be a number");
  return v.get<double>();
}

std::size_t as_count(const json& v, const std::string& what) {
  if (!v.is_number_integer() || v.get<long long>() < 0) bad(what + " must be a non-negative integer");
  return v.get<std::size_t>();
}

Point as_point(const json& v, const std::string& what) {
  if (!v.is_array()) bad(what + " must be an array of coordinates");
  std::vector<double> c;
  for (const auto& x : v) c.push_back(as_number(x, what));
  return Point(std::move(c));
}

std::shared_ptr<const QuotientSpace> quotient_named(const std::string& name) {
  auto q = std::dynamic_pointer_cast<const QuotientSpace>(space_by_name(name));
  if (!q) bad(name + " is not a quotient space");
  return q;
}

int sphere_dimension(const SpacePtr& space) {
  const auto* s = dynamic_cast<const Sphere*>(space.get());
  if (!s) bad("expected a sphere, got " + space->id());
  return s->n();
}

}  // namespace

// ---------------------------------------------------------------------------
// Maps and domains

MapSpec map_from_json(const json& j, const SpacePtr& source) {
  json spec = j;
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    const auto colon = s.find(':');
    spec = json::object();
    spec["map"] = s.substr(0, colon);
    if (colon != std::string::npos) spec["quotient"] = s.substr(colon + 1);
  }
  const std::string where = "map " + j.dump();
  const std::string kind = need_string(spec, "map", where);
  if (kind == "identity") {
    allow_keys(spec, {"map"}, where);
    return MapSpec::identity(source);
  }
  if (kind == "point") {
    allow_keys(spec, {"map"}, where);
    return MapSpec::constant(source, point_space(), Point{});
  }
  if (kind == "constant") {
    allow_keys(spec, {"map", "base"}, where);
    if (!spec.contains("base")) return MapSpec::constant(source, point_space(), Point{});
    Point base = as_point(spec["base"], where + " base");
    source->require_member(base);
    return MapSpec::constant(source, source, std::move(base));
  }
  if (kind == "quotient") {
    allow_keys(spec, {"map", "quotient"}, where);
    auto q = quotient_named(need_string(spec, "quotient", where));
    if (q->total()->id() != source->id()) bad(q->id() + " is not a quotient of " + source->id());
    return MapSpec::quotient_projection(q);
  }
  if (kind == "rotation" || kind == "rotation_inverse") {
    allow_keys(spec, {"map", "angle"}, where);
    if (source->id() != "S1") bad("rotations act on S1, not " + source->id());
    auto [fwd, back] = circle_rotation(as_number(need(spec, "angle", where), where + " angle"));
    return kind == "rotation" ? fwd : back;
  }
  if (kind == "swap") {
    allow_keys(spec, {"map"}, where);
    if (source->id() != "T2") bad("the factor swap acts on T2, not " + source->id());
    return torus_factor_swap();
  }
  bad("unknown map '" + kind + "'");
}

DomainPtr domain_from_json(const json& j, const SpacePtr& space) {
  json spec = j;
  if (j.is_string()) spec = json{{"domain", j}};
  const std::string where = "domain " + j.dump();
  const std::string kind = need_string(spec, "domain", where);
  if (kind == "full") {
    allow_keys(spec, {"domain"}, where);
    return full_product(space);
  }
  if (kind == "diagonal") {
    allow_keys(spec, {"domain"}, where);
    return diagonal_domain(space);
  }
  if (kind == "base_fiber") {
    allow_keys(spec, {"domain", "base"}, where);
    Point base = as_point(need(spec, "base", where), where + " base");
    space->require_member(base);
    return base_fiber_domain(space, std::move(base));
  }
  if (kind == "klein") {
    allow_keys(spec, {"domain"}, where);
    if (space->id() != "T2") bad("the Klein domain lives on T2, not " + space->id());
    return klein_domain();
  }
  if (kind == "antipodal") {
    allow_keys(spec, {"domain"}, where);
    return antipodal_domain(sphere_dimension(space));
  }
  if (kind == "fibered") {
    allow_keys(spec, {"domain", "f", "g", "tol"}, where);
    const double tol = spec.contains("tol") ? as_number(spec["tol"], where + " tol") : kFiberTol;
    return fibered_domain(map_from_json(need(spec, "f", where), space), map_from_json(need(spec, "g", where), space),
                          tol);
  }
  bad("unknown domain '" + kind + "'");
}

// ---------------------------------------------------------------------------
// Recipes

namespace {

BuiltPlanner build(const json& r, const std::string& where);

BuiltPlanner child(const json& r, const std::string& where) {
  return build(need(r, "planner", where), where + ".planner");
}

std::vector<BuiltPlanner> children(const json& r, const std::string& where, std::size_t min_count) {
  const json& list = need(r, "planners", where);
  if (!list.is_array() || list.size() < min_count) {
    bad(where + ": 'planners' must list at least " + std::to_string(min_count) + " recipes");
  }
  std::vector<BuiltPlanner> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    out.push_back(build(list[i], where + ".planners[" + std::to_string(i) + "]"));
  }
  return out;
}

Planner builtin(const json& r, const std::string& where) {
  const std::string name = need_string(r, "name", where);
  if (name == "sphere_antipodal") {
    allow_keys(r, {"op", "name", "n"}, where);
    const json& n = need(r, "n", where);
    if (!n.is_number_integer()) bad(where + ": n must be an integer");
    return sphere_antipodal_planner(n.get<int>());
  }
  if (name == "diagonal") {
    allow_keys(r, {"op", "name", "space"}, where);
    return diagonal_planner(space_by_name(need_string(r, "space", where)));
  }
  allow_keys(r, {"op", "name"}, where);
  if (name == "circle") return circle_planner();
  if (name == "torus") return torus_planner();
  if (name == "shorter_arc_half") return shorter_arc_half_planner();
  if (name == "counterclockwise_half") return counterclockwise_half_planner();
  if (name == "seam") return seam_planner();
  bad(where + ": unknown builtin '" + name + "'");
}

HomotopyEquivalence equivalence(const json& r, const std::string& where) {
  const std::string name = need_string(r, "equivalence", where);
  if (name == "cylinder") return cylinder_equivalence();
  bad(where + ": unknown homotopy equivalence '" + name + "'");
}

BuiltPlanner build(const json& r, const std::string& where) {
  const std::string op = need_string(r, "op", where);
  if (op == "builtin") return {builtin(r, where), std::nullopt};
  if (op == "restrict") {
    allow_keys(r, {"op", "planner", "domain"}, where);
    const auto inner = child(r, where);
    return {restrict_planner(inner.planner, domain_from_json(need(r, "domain", where), inner.planner.space())),
            std::nullopt};
  }
  if (op == "transport_iso") {
    allow_keys(r, {"op", "planner", "map", "inverse"}, where);
    const auto inner = child(r, where);
    const SpacePtr& space = inner.planner.space();
    const MapSpec phi = map_from_json(need(r, "map", where), space);
    MapSpec phi_inv = phi;
    if (r.contains("inverse")) {
      phi_inv = map_from_json(r["inverse"], phi.target());
    } else {
      const json& m = r["map"];
      if (m.is_object() && m.value("map", "") == "rotation") {
        phi_inv = circle_rotation(m.at("angle").get<double>()).second;
      } else if (!(m == "swap" || (m.is_object() && m.value("map", "") == "swap"))) {
        bad(where + ": give 'inverse' for map " + m.dump());
      }
    }
    return {transport_bundle_iso(inner.planner, phi, phi_inv), std::nullopt};
  }
  if (op == "transport_fhe" || op == "transport_fhe_back") {
    allow_keys(r, {"op", "planner", "equivalence"}, where);
    const auto inner = child(r, where);
    const auto eq = equivalence(r, where);
    return {op == "transport_fhe" ? transport_fhe(inner.planner, eq) : transport_fhe_inverse(inner.planner, eq),
            std::nullopt};
  }
  if (op == "dominate") {
    allow_keys(r, {"op", "planner", "domination", "base"}, where);
    const auto inner = child(r, where);
    const std::string kind = need_string(r, "domination", where);
    Domination d;
    if (kind == "band_to_diagonal") {
      d = band_to_diagonal();
    } else if (kind == "cap_to_base_fiber") {
      d = cap_to_base_fiber(as_point(need(r, "base", where), where + " base"));
    } else {
      bad(where + ": unknown domination '" + kind + "'");
    }
    return {dominate_planner(inner.planner, d.domain, d.deformation), std::nullopt};
  }
  if (op == "product") {
    allow_keys(r, {"op", "planners"}, where);
    auto parts = children(r, where, 2);
    if (parts.size() != 2) bad(where + ": product takes exactly two planners");
    return {product_planner(parts[0].planner, parts[1].planner), std::nullopt};
  }
  if (op == "combine") {
    allow_keys(r, {"op", "planners"}, where);
    std::vector<Planner> pls;
    for (auto& p : children(r, where, 1)) pls.push_back(std::move(p.planner));
    return {combine_cover_planners(pls), std::nullopt};
  }
  if (op == "to_loop") {
    allow_keys(r, {"op", "planner"}, where);
    auto inner = child(r, where);
    return {to_loop_planner(inner.planner), std::move(inner.witness)};
  }
  if (op == "cat_round_trip" || op == "based_loop_from_cat") {
    allow_keys(r, {"op", "planner"}, where);
    const auto inner = child(r, where);
    CatWitness w = planner_to_cat_cover(inner.planner);
    Planner pl = op == "cat_round_trip" ? cat_cover_to_planner(w) : based_loop_planner_from_cat(w);
    return {std::move(pl), std::move(w)};
  }
  if (op == "corrupt") {
    allow_keys(r, {"op", "planner", "kind", "index", "amount"}, where);
    auto inner = child(r, where);
    const std::string kind = need_string(r, "kind", where);
    if (kind == "gap") {
      const std::size_t index = r.contains("index") ? as_count(r["index"], where + " index") : 1;
      return {with_gap(inner.planner, index), std::move(inner.witness)};
    }
    if (kind == "overlap") return {with_overlap(inner.planner), std::move(inner.witness)};
    if (kind == "broken_endpoint") return {with_broken_endpoint(inner.planner), std::move(inner.witness)};
    if (kind == "perturbed_midpoint") {
      const double amount = as_number(need(r, "amount", where), where + " amount");
      return {with_perturbed_midpoint(inner.planner, amount), std::move(inner.witness)};
    }
    bad(where + ": unknown corruption '" + kind + "'");
  }
  bad(where + ": unknown op '" + op + "'");
}

}  // namespace

BuiltPlanner build_planner(const json& recipe) { return build(recipe, "planner"); }

// ---------------------------------------------------------------------------
// Configuration

ScenarioConfig ScenarioConfig::from_json(const json& j) {
  try {
    allow_keys(j, {"name", "space", "f", "g", "planner", "verification", "expected_piece_count", "exports"},
               "scenario");
    ScenarioConfig c;
    c.name = need_string(j, "name", "scenario");
    c.space = need_string(j, "space", "scenario");
    const SpacePtr space = space_by_name(c.space);
    if (j.contains("f") != j.contains("g")) bad("scenario: give both 'f' and 'g' or neither");
    if (j.contains("f")) {
      map_from_json(j["f"], space);
      map_from_json(j["g"], space);
      c.f = j["f"];
      c.g = j["g"];
    }
    c.planner = need(j, "planner", "scenario");
    if (!c.planner.is_object()) bad("scenario: 'planner' must be a recipe object");

    if (j.contains("verification")) {
      const json& v = j["verification"];
      allow_keys(v, {"seed", "n_samples", "n_path_samples", "delta", "modulus_bound", "eps_space", "eps_glue",
                     "fiber_tol", "workers"},
                 "verification");
      auto& cfg = c.verification;
      if (v.contains("seed")) {
        const json& s = v["seed"];
        if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<long long>() < 0)) {
          bad("verification: seed must be a non-negative integer");
        }
        cfg.seed = v["seed"].get<std::uint64_t>();
      }
      if (v.contains("n_samples")) cfg.n_samples = as_count(v["n_samples"], "n_samples");
      if (v.contains("n_path_samples")) cfg.n_path_samples = as_count(v["n_path_samples"], "n_path_samples");
      if (v.contains("delta")) cfg.delta = as_number(v["delta"], "delta");
      if (v.contains("modulus_bound")) cfg.modulus_bound = as_number(v["modulus_bound"], "modulus_bound");
      if (v.contains("eps_space")) cfg.eps_space = as_number(v["eps_space"], "eps_space");
      if (v.contains("eps_glue")) cfg.eps_glue = as_number(v["eps_glue"], "eps_glue");
      if (v.contains("fiber_tol")) cfg.fiber_tol = as_number(v["fiber_tol"], "fiber_tol");
      if (v.contains("workers")) cfg.workers = as_count(v["workers"], "workers");
    }
    c.verification.validate();

    if (j.contains("expected_piece_count") && !j["expected_piece_count"].is_null()) {
      const json& e = j["expected_piece_count"];
      ExpectedCount ec;
      if (e.is_object()) {
        allow_keys(e, {"value", "note"}, "expected_piece_count");
        ec.value = as_count(need(e, "value", "expected_piece_count"), "expected_piece_count.value");
        if (e.contains("note")) {
          if (!e["note"].is_string()) bad("expected_piece_count.note must be a string");
          ec.note = e["note"].get<std::string>();
        }
      } else {
        ec.value = as_count(e, "expected_piece_count");
      }
      c.expected_piece_count = ec;
    }

    if (j.contains("exports")) {
      if (!j["exports"].is_array()) bad("exports must be an array");
      for (const auto& e : j["exports"]) {
        allow_keys(e, {"pair", "samples", "file"}, "export");
        const json& pair = need(e, "pair", "export");
        if (!pair.is_array() || pair.size() != 2) bad("export pair must be [x, y]");
        ExportRequest req{{as_point(pair[0], "export x"), as_point(pair[1], "export y")},
                          e.contains("samples") ? as_count(e["samples"], "export samples") : 64,
                          need_string(e, "file", "export")};
        if (req.samples == 0) bad("export samples must be at least 1");
        if (req.file.empty() || std::filesystem::path(req.file).has_parent_path()) {
          bad("export file must be a plain file name: '" + req.file + "'");
        }
        c.exports.push_back(std::move(req));
      }
    }
    return c;
  } catch (const json::exception& e) {
    bad(std::string("malformed scenario: ") + e.what());
  }
}

ScenarioConfig ScenarioConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read scenario " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    bad(path.string() + ": " + e.what());
  }
  return from_json(j);
}

ordered_json ScenarioConfig::to_json() const {
  ordered_json j;
  j["name"] = name;
  j["space"] = space;
  if (f) j["f"] = *f;
  if (g) j["g"] = *g;
  j["planner"] = planner;
  j["verification"] = fibplan::to_json(verification);
  if (expected_piece_count) {
    ordered_json e;
    e["value"] = expected_piece_count->value;
    e["note"] = expected_piece_count->note;
    j["expected_piece_count"] = std::move(e);
  }
  if (!exports.empty()) {
    j["exports"] = ordered_json::array();
    for (const auto& e : exports) {
      ordered_json r;
      r["pair"] = {e.pair.x.coords, e.pair.y.coords};
      r["samples"] = e.samples;
      r["file"] = e.file;
      j["exports"].push_back(std::move(r));
    }
  }
  return j;
}

// ---------------------------------------------------------------------------

ScenarioOutcome run_scenario(const ScenarioConfig& cfg, const std::optional<std::filesystem::path>& export_dir) {
  const BuiltPlanner built = build_planner(cfg.planner);
  const Planner& pl = built.planner;
  if (pl.space()->id() != cfg.space) {
    bad("scenario " + cfg.name + " declares space " + cfg.space + " but the planner lives on " + pl.space()->id());
  }
  if (cfg.f) {
    const SpacePtr space = pl.space();
    const auto declared = fibered_domain(map_from_json(*cfg.f, space), map_from_json(*cfg.g, space));
    for (const auto& s : pl.domain()->sample(256, cfg.verification.seed)) {
      if (!declared->contains(s.x, s.y)) {
        bad("planner domain " + pl.domain()->name() + " is not inside the declared fiber product " +
            declared->name() + ": (" + format_point(s.x) + ", " + format_point(s.y) + ")");
      }
    }
  }

  ScenarioOutcome out;
  out.report = verify_planner(pl, cfg.verification, built.witness ? &*built.witness : nullptr);
  if (cfg.expected_piece_count) out.count_matches = out.report.piece_count() == cfg.expected_piece_count->value;
  const bool pass = out.report.pass() && out.count_matches;
  out.exit_status = pass ? 0 : 1;

  ordered_json j;
  j["scenario"] = cfg.name;
  j["configuration"] = cfg.to_json();
  j["piece_count"] = out.report.piece_count();
  if (cfg.expected_piece_count) {
    j["expected_piece_count"] = cfg.expected_piece_count->value;
    j["count_matches"] = out.count_matches;
  }
  j["verification"] = out.report.to_json();
  j["pass"] = pass;
  j["exit_status"] = out.exit_status;

  if (export_dir && !cfg.exports.empty()) {
    std::filesystem::create_directories(*export_dir);
    ordered_json files = ordered_json::array();
    for (const auto& e : cfg.exports) {
      export_path_samples(pl, {e.pair}, e.samples, *export_dir / e.file);
      files.push_back(e.file);
    }
    j["exports"] = std::move(files);
  }
  out.json = std::move(j);
  return out;
}

void export_path_samples(const Planner& pl, const std::vector<PointPair>& pairs, std::size_t n_path_samples,
                         const std::filesystem::path& out) {
  if (n_path_samples == 0) throw Error(ErrorKind::parameter, "export needs at least one sample per path");
  std::vector<double> ts = sample_grid(n_path_samples);
  if (pl.mode() != PathMode::path && std::find(ts.begin(), ts.end(), 0.5) == ts.end()) {
    ts.insert(std::upper_bound(ts.begin(), ts.end(), 0.5), 0.5);
  }
  std::vector<Evaluation> evals;
  for (const auto& p : pairs) {
    bool member = false;
    try {
      member = fibered_domain_membership(*pl.domain(), p.x, p.y);
    } catch (const Error& e) {
      throw Error(ErrorKind::membership, std::string("cannot export: ") + e.what());
    }
    if (!member) {
      throw Error(ErrorKind::membership, "cannot export (" + format_point(p.x) + ", " + format_point(p.y) +
                                             "): not in " + pl.domain()->name());
    }
    evals.push_back(evaluate_planner(pl, p.x, p.y));
  }

  std::ofstream os(out);
  if (!os) throw Error(ErrorKind::configuration, "cannot write " + out.string());
  const bool jsonl = out.extension() == ".jsonl";
  if (jsonl) {
    ordered_json header;
    header["planner"] = pl.name();
    header["space"] = pl.space()->id();
    header["mode"] = to_string(pl.mode());
    header["pairs"] = pairs.size();
    header["samples_per_pair"] = ts.size();
    os << header.dump() << '\n';
  } else {
    os << "# planner " << pl.name() << " space " << pl.space()->id() << " mode " << to_string(pl.mode()) << '\n';
    os << "# pair piece subpart t coords...\n";
    os.precision(17);
  }
  for (std::size_t i = 0; i < evals.size(); ++i) {
    const auto& ev = evals[i];
    const std::string& label = pl.pieces()[ev.piece].label;
    for (double t : ts) {
      const Point p = ev.path.at(t);
      if (jsonl) {
        ordered_json r;
        r["pair"] = i;
        r["piece"] = label;
        r["subpart"] = ev.subpart;
        r["t"] = t;
        r["coords"] = p.coords;
        os << r.dump() << '\n';
      } else {
        os << i << ' ' << label << ' ' << ev.subpart << ' ' << t;
        for (double c : p.coords) os << ' ' << c;
        os << '\n';
      }
    }
  }
}

}  // namespace fibplan
