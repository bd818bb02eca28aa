#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fibplan/scenario.hpp"
#include "oracles.hpp"

using namespace fibplan;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::configuration;
}

fs::path scenario(const std::string& file) { return fs::path(FIBPLAN_SCENARIO_DIR) / file; }

json minimal() {
  return json{{"name", "t"},
              {"space", "S1"},
              {"planner", {{"op", "builtin"}, {"name", "circle"}}},
              {"verification", {{"seed", 5}, {"n_samples", 500}}}};
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("fibplan_test_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + FIBPLAN_CLI + "\" " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream is(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("scenario config validation") {
  CHECK_NOTHROW((void)ScenarioConfig::from_json(minimal()));

  auto j = minimal();
  j["colour"] = "blue";
  CHECK(kind_of([&] { (void)ScenarioConfig::from_json(j); }) == ErrorKind::configuration);

  j = minimal();
  j.erase("planner");
  CHECK(kind_of([&] { (void)ScenarioConfig::from_json(j); }) == ErrorKind::configuration);

  j = minimal();
  j["f"] = "identity";  // g missing
  CHECK(kind_of([&] { (void)ScenarioConfig::from_json(j); }) == ErrorKind::configuration);

  j = minimal();
  j["verification"]["n_path_samples"] = 1;
  CHECK(kind_of([&] { (void)ScenarioConfig::from_json(j); }) == ErrorKind::configuration);

  j = minimal();
  j["space"] = "S7";
  CHECK_THROWS_AS((void)ScenarioConfig::from_json(j), Error);

  j = minimal();
  j["planner"] = {{"op", "levitate"}};
  const auto cfg = ScenarioConfig::from_json(j);
  CHECK(kind_of([&] { (void)run_scenario(cfg); }) == ErrorKind::configuration);

  CHECK(kind_of([] { (void)ScenarioConfig::load("/nonexistent/x.json"); }) == ErrorKind::configuration);
}

TEST_CASE("space mismatch and inconsistent f, g are configuration errors") {
  auto j = minimal();
  j["space"] = "S2";
  CHECK(kind_of([&] { (void)run_scenario(ScenarioConfig::from_json(j)); }) == ErrorKind::configuration);

  j = minimal();
  j["f"] = "identity";
  j["g"] = "identity";  // declares the diagonal, but the planner covers S1 x S1
  CHECK(kind_of([&] { (void)run_scenario(ScenarioConfig::from_json(j)); }) == ErrorKind::configuration);
}

TEST_CASE("config round trip gives byte-identical reports") {
  for (const auto& entry : fs::directory_iterator(FIBPLAN_SCENARIO_DIR)) {
    CAPTURE(entry.path().filename().string());
    auto cfg = ScenarioConfig::load(entry.path());
    cfg.verification.n_samples = 300;
    const auto again = ScenarioConfig::from_json(json::parse(cfg.to_json().dump()));
    CHECK(again.to_json().dump() == cfg.to_json().dump());
    CHECK(run_scenario(again).json.dump() == run_scenario(cfg).json.dump());
  }
}

TEST_CASE("run_scenario exit codes") {
  const auto ok = run_scenario(ScenarioConfig::load(scenario("01_sphere_odd_s1.json")));
  CHECK(ok.exit_status == 0);
  CHECK(ok.count_matches);
  CHECK(ok.json["pass"] == true);

  const auto mismatch = run_scenario(ScenarioConfig::load(scenario("09_neg_count_mismatch.json")));
  CHECK(mismatch.exit_status == 1);
  CHECK_FALSE(mismatch.count_matches);
  CHECK(mismatch.report.pass());

  const auto gap = run_scenario(ScenarioConfig::load(scenario("09_neg_gap.json")));
  CHECK(gap.exit_status == 1);
  CHECK(gap.report.partition.status == CheckStatus::fail);
}

TEST_CASE("export_path_samples jsonl") {
  const auto dir = scratch("jsonl");
  const auto pl = build_planner(json{{"op", "builtin"}, {"name", "circle"}}).planner;
  export_path_samples(pl, {PointPair{Point{1, 0}, Point{-1, 0}}}, 5, dir / "a.jsonl");
  const auto ls = lines_of(dir / "a.jsonl");
  REQUIRE(ls.size() == 6);
  const auto header = json::parse(ls[0]);
  CHECK(header["samples_per_pair"] == 5);
  CHECK(header["mode"] == "path");
  const auto mid = json::parse(ls[3]);
  CHECK(mid["t"] == 0.5);
  CHECK(mid["piece"] == "F2");
  const auto c = mid["coords"].get<std::vector<double>>();
  CHECK(oracle::max_abs_diff(Point{c}, Point{0, 1}) <= 1e-15);
  CHECK(json::parse(ls[5])["coords"].get<std::vector<double>>() == std::vector<double>{-1, 0});
}

TEST_CASE("export_path_samples loop mode includes t = 1/2 and text layout") {
  const auto dir = scratch("loop");
  const auto pl = build_planner(json{{"op", "to_loop"}, {"planner", {{"op", "builtin"}, {"name", "circle"}}}}).planner;
  export_path_samples(pl, {PointPair{Point{1, 0}, Point{0, 1}}}, 4, dir / "b.txt");
  const auto ls = lines_of(dir / "b.txt");
  REQUIRE_FALSE(ls.empty());
  CHECK(ls[0].rfind("#", 0) == 0);
  bool half = false;
  for (std::size_t i = 1; i < ls.size(); ++i) {
    std::istringstream is(ls[i]);
    std::size_t pair;
    std::string piece;
    std::size_t subpart;
    double t, x, y;
    is >> pair >> piece >> subpart >> t >> x >> y;
    if (t == 0.5) {
      half = true;
      CHECK(oracle::max_abs_diff(Point{x, y}, Point{0, 1}) <= 1e-15);
    }
  }
  CHECK(half);
}

TEST_CASE("export_path_samples rejects non-members") {
  const auto dir = scratch("member");
  const auto pl = build_planner(json{{"op", "builtin"}, {"name", "sphere_antipodal"}, {"n", 2}}).planner;
  CHECK(kind_of([&] {
          export_path_samples(pl, {PointPair{Point{1, 0, 0}, Point{0, 1, 0}}}, 4, dir / "c.jsonl");
        }) == ErrorKind::membership);
}

TEST_CASE("scenario exports land in the export directory") {
  const auto dir = scratch("scenario_exports");
  const auto out = run_scenario(ScenarioConfig::load(scenario("08_circle.json")), dir);
  CHECK(out.exit_status == 0);
  CHECK(fs::exists(dir / "circle_antipodal.jsonl"));
  CHECK(fs::exists(dir / "circle_quarter.txt"));
}

TEST_CASE("cli exit codes") {
  const auto dir = scratch("cli");
  const std::string rep = " --report \"" + (dir / "r.json").string() + "\"";
  CHECK(run_cli("run \"" + scenario("01_sphere_odd_s1.json").string() + "\" --samples 2000" + rep) == 0);
  CHECK(fs::exists(dir / "r.json"));
  const auto report = json::parse(std::ifstream(dir / "r.json"));
  CHECK(report["exit_status"] == 0);
  CHECK(report["verification"]["config"]["n_samples"] == 2000);

  CHECK(run_cli("run \"" + scenario("09_neg_count_mismatch.json").string() + "\" --samples 2000" + rep) == 1);
  CHECK(run_cli("run \"" + scenario("09_neg_seam.json").string() + "\"" + rep) == 1);

  std::ofstream(dir / "bad.json") << R"({"name": "bad", "space": "S1"})";
  CHECK(run_cli("run \"" + (dir / "bad.json").string() + "\"" + rep) == 2);
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK(run_cli("run \"" + (dir / "broken.json").string() + "\"" + rep) == 2);
  CHECK(run_cli("run \"" + scenario("01_sphere_odd_s1.json").string() + "\" --samples 0" + rep) == 2);
}

TEST_CASE("cli seed override changes the sampled stream but not the verdict") {
  const auto dir = scratch("seed");
  const auto path = scenario("03_torus.json").string();
  CHECK(run_cli("run \"" + path + "\" --samples 1500 --seed 1 --report \"" + (dir / "a.json").string() + "\"") == 0);
  CHECK(run_cli("run \"" + path + "\" --samples 1500 --seed 2 --workers 4 --report \"" + (dir / "b.json").string() +
                "\"") == 0);
  const auto a = json::parse(std::ifstream(dir / "a.json"));
  const auto b = json::parse(std::ifstream(dir / "b.json"));
  CHECK(a["verification"]["config"]["seed"] == 1);
  CHECK(b["verification"]["config"]["seed"] == 2);
  CHECK(a["verification"]["checks"] != b["verification"]["checks"]);
}
