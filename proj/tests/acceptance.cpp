// Acceptance suite: one [PASS]/[FAIL] line per criterion, exit 1 if any fails.

#include <chrono>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "fibplan/scenario.hpp"

using namespace fibplan;
namespace fs = std::filesystem;

namespace {

constexpr double kEndpointTol = 1e-9;
constexpr double kRuntimeLimit = 10.0;

struct Run {
  ScenarioConfig cfg;
  ScenarioOutcome out;
  double seconds = 0.0;
};

std::map<std::string, Run> g_runs;

Run run_file(const fs::path& p, std::size_t workers = 1) {
  Run r{ScenarioConfig::load(p), {}, 0.0};
  r.cfg.verification.workers = workers;
  const auto t0 = std::chrono::steady_clock::now();
  r.out = run_scenario(r.cfg);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

// Collects failure reasons for one criterion.
class Criterion {
 public:
  void require(bool ok, const std::string& why) {
    if (!ok) problems_.push_back(why);
  }
  bool ok() const { return problems_.empty(); }
  std::string detail() const {
    std::string s;
    for (const auto& p : problems_) s += (s.empty() ? "" : "; ") + p;
    return s;
  }

 private:
  std::vector<std::string> problems_;
};

const Run& scenario(const std::string& stem) {
  const auto it = g_runs.find(stem);
  if (it == g_runs.end()) throw std::runtime_error("scenario " + stem + " missing");
  return it->second;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Passing run with the given count, exact endpoints and the runtime budget.
void expect_pass(Criterion& c, const std::string& stem, std::optional<std::size_t> count,
                 std::optional<std::size_t> at_most = std::nullopt) {
  const Run& r = scenario(stem);
  const auto& rep = r.out.report;
  c.require(rep.pass(), stem + " has a failing check");
  c.require(r.out.exit_status == 0, stem + " exits " + std::to_string(r.out.exit_status));
  if (count) c.require(rep.piece_count() == *count, stem + " has " + std::to_string(rep.piece_count()) + " pieces");
  if (at_most) c.require(rep.piece_count() <= *at_most, stem + " has " + std::to_string(rep.piece_count()) + " pieces");
  c.require(rep.section_contract.worst <= kEndpointTol, stem + " endpoint defect " + fmt(rep.section_contract.worst));
  c.require(rep.config.n_samples >= 10000, stem + " ran fewer than 1e4 samples");
  c.require(r.seconds < kRuntimeLimit, stem + " took " + fmt(r.seconds) + " s");
}

void criterion_1(Criterion& c) {
  expect_pass(c, "01_sphere_odd_s1", 1);
  expect_pass(c, "01_sphere_odd_s3", 1);
  for (int n : {1, 3}) {
    const auto pl = sphere_antipodal_planner(n);
    c.require(pl.domain()->structure() == DomainStructure::orbit_graphs, "S" + std::to_string(n) + " domain is not A");
  }
}

void criterion_2(Criterion& c) { expect_pass(c, "02_sphere_even_s2", 2); }

void criterion_3(Criterion& c) {
  expect_pass(c, "03_torus", 3);
  expect_pass(c, "03_klein_quotient", std::nullopt, 3);
}

void criterion_4(Criterion& c) {
  expect_pass(c, "04_cylinder_fhe", 2);
  expect_pass(c, "04_cylinder_fhe_back", 2);
  c.require(scenario("04_cylinder_fhe").out.report.space == "cylinder", "transport does not land on the cylinder");
}

void criterion_5(Criterion& c) {
  expect_pass(c, "05_rotation_iso", circle_planner().piece_count());
  expect_pass(c, "05_torus_swap_iso", torus_planner().piece_count());
}

void criterion_6(Criterion& c) {
  const std::vector<Planner> builtins{circle_planner(),
                                      torus_planner(),
                                      sphere_antipodal_planner(1),
                                      sphere_antipodal_planner(2),
                                      sphere_antipodal_planner(3),
                                      diagonal_planner(sphere(1)),
                                      diagonal_planner(sphere(2)),
                                      diagonal_planner(torus()),
                                      diagonal_planner(klein_bottle()),
                                      shorter_arc_half_planner(),
                                      counterclockwise_half_planner()};
  VerificationConfig cfg;
  cfg.n_samples = 10000;
  for (const auto& pl : builtins) {
    const auto loops = to_loop_planner(pl);
    c.require(loops.piece_count() == pl.piece_count(), pl.name() + ": loop count differs");
    const auto rep = verify_planner(loops, cfg);
    c.require(rep.pass(), pl.name() + ": loop planner fails a check");
    c.require(rep.loop_contract.status == CheckStatus::pass && rep.loop_contract.worst <= kEndpointTol,
              pl.name() + ": loop contract defect " + fmt(rep.loop_contract.worst));
  }
  expect_pass(c, "06_loop_circle", 2);
  expect_pass(c, "06_loop_sphere_even", 2);
  expect_pass(c, "06_loop_torus", 3);
}

void criterion_7(Criterion& c) {
  const auto restricted = restrict_planner(circle_planner(), base_fiber_domain(sphere(1), Point{1, 0}));
  const auto w = planner_to_cat_cover(restricted);
  c.require(w.entries.size() == 2, "witness has " + std::to_string(w.entries.size()) + " entries");
  VerificationConfig cfg;
  c.require(check_cat_witness(w, cfg).status == CheckStatus::pass, "cat witness fails");
  expect_pass(c, "07_cat_round_trip", 2);
  expect_pass(c, "07_based_loop_cat", 2);
  const auto& based = scenario("07_based_loop_cat").out.report;
  c.require(based.mode == PathMode::based_loop && based.loop_contract.status == CheckStatus::pass,
            "based-loop contract not certified");
  c.require(based.cat_witness.status == CheckStatus::pass, "based-loop witness not certified");

  // round trip over every {x0} x X planner: shipped scenarios plus restrictions
  std::vector<Planner> suite{restricted,
                             restrict_planner(torus_planner(), base_fiber_domain(torus(), Point{1, 0, 1, 0})),
                             restrict_planner(circle_planner(), base_fiber_domain(sphere(1), Point{0.6, -0.8}))};
  for (const auto& [stem, r] : g_runs) {
    auto pl = build_planner(r.cfg.planner).planner;
    if (pl.domain()->structure() == DomainStructure::base_fiber && pl.mode() == PathMode::path) suite.push_back(pl);
  }
  for (const auto& pl : suite) {
    const auto wi = planner_to_cat_cover(pl);
    const auto back = cat_cover_to_planner(wi);
    c.require(wi.entries.size() == pl.piece_count() && back.piece_count() == pl.piece_count(),
              pl.name() + ": round trip changes the count");
    c.require(verify_planner(back, cfg, &wi).pass(), pl.name() + ": round-trip planner fails");
  }
}

void criterion_8(Criterion& c) {
  expect_pass(c, "08_combine_halves", std::nullopt, 2);
  expect_pass(c, "08_diagonal", 1);
  c.require(scenario("08_combine_halves").out.report.domain == full_product(sphere(1))->name(),
            "combined planner is not on S1 x S1");
}

void criterion_9(Criterion& c) {
  const std::map<std::string, std::string> intended{{"09_neg_gap", "partition"},
                                                    {"09_neg_overlap", "partition"},
                                                    {"09_neg_broken_endpoint", "section_contract"},
                                                    {"09_neg_perturbed_midpoint", "loop_contract"},
                                                    {"09_neg_seam", "continuity_modulus"},
                                                    {"09_neg_count_mismatch", ""}};
  for (const auto& [stem, check] : intended) {
    const Run& r = scenario(stem);
    c.require(r.out.exit_status != 0, stem + " exits 0");
    std::vector<std::string> failing;
    for (const auto& [name, res] : r.out.report.checks()) {
      if (res->status == CheckStatus::fail) failing.push_back(name);
    }
    if (check.empty()) {
      c.require(failing.empty() && !r.out.count_matches, stem + " does not fail on the count alone");
    } else {
      c.require(failing == std::vector<std::string>{check}, stem + " does not fail exactly " + check);
    }
  }
}

void criterion_10(Criterion& c) {
  for (const auto& entry : fs::directory_iterator(FIBPLAN_SCENARIO_DIR)) {
    const std::string stem = entry.path().stem().string();
    const std::string first = scenario(stem).out.json.dump();
    c.require(run_file(entry.path()).out.json.dump() == first, stem + " differs between runs");
    c.require(run_file(entry.path(), 4).out.json.dump() == first, stem + " differs with 4 workers");
  }
}

}  // namespace

int main() {
  try {
    for (const auto& entry : fs::directory_iterator(FIBPLAN_SCENARIO_DIR)) {
      if (entry.path().extension() == ".json") g_runs.emplace(entry.path().stem().string(), run_file(entry.path()));
    }
  } catch (const std::exception& e) {
    std::cout << "[FAIL] setup: " << e.what() << '\n';
    return 1;
  }

  const std::vector<std::pair<std::string, std::function<void(Criterion&)>>> criteria{
      {"sphere quotient, odd case: 1 piece for n = 1, 3", criterion_1},
      {"sphere quotient, even case: 2 pieces for n = 2", criterion_2},
      {"torus 3 pieces, Klein restriction <= 3", criterion_3},
      {"homotopy-equivalence transport to the cylinder and back, 2 pieces", criterion_4},
      {"bundle-isomorphism transport keeps counts", criterion_5},
      {"loop planners keep counts and the loop contract", criterion_6},
      {"category witnesses and round trips", criterion_7},
      {"subadditivity and diagonal", criterion_8},
      {"negative controls fail exactly the intended check", criterion_9},
      {"determinism across runs and worker counts", criterion_10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Criterion c;
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("threw: ") + e.what());
    }
    std::cout << (c.ok() ? "[PASS]" : "[FAIL]") << " criterion " << i + 1 << ": " << criteria[i].first;
    if (!c.ok()) std::cout << " -- " << c.detail();
    std::cout << '\n';
    failed += !c.ok();
  }
  return failed == 0 ? 0 : 1;
}
