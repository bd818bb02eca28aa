#include <doctest.h>

#include "fibplan/builtins.hpp"
#include "fibplan/verify.hpp"
#include "oracles.hpp"

using namespace fibplan;

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

VerificationConfig quick(std::size_t n = 2000) {
  VerificationConfig c;
  c.n_samples = n;
  return c;
}

Planner base_circle() { return restrict_planner(circle_planner(), base_fiber_domain(sphere(1), Point{1, 0})); }

}  // namespace

TEST_CASE("checks pass on the builtins") {
  for (const auto& pl : {circle_planner(), torus_planner(), sphere_antipodal_planner(1), sphere_antipodal_planner(2),
                         sphere_antipodal_planner(3), diagonal_planner(sphere(2))}) {
    CAPTURE(pl.name());
    const auto rep = verify_planner(pl, quick());
    CHECK(rep.pass());
    CHECK(rep.partition.status == CheckStatus::pass);
    CHECK(rep.section_contract.status == CheckStatus::pass);
    CHECK(rep.in_space.status == CheckStatus::pass);
    CHECK(rep.fibered_membership.status == CheckStatus::pass);
    CHECK(rep.continuity_modulus.status == CheckStatus::pass);
    CHECK(rep.loop_contract.status == CheckStatus::not_applicable);
    CHECK(rep.cat_witness.status == CheckStatus::not_applicable);
    CHECK(rep.partition.samples == 2000);
    CHECK(rep.continuity_modulus.compared > 0);
    CHECK(*rep.continuity_modulus.max_ratio <= 8.0);
  }
}

TEST_CASE("standalone checks agree with the full report") {
  const auto pl = circle_planner();
  const auto cfg = quick(500);
  const auto rep = verify_planner(pl, cfg);
  CHECK(to_json(check_partition(pl, cfg)) == to_json(rep.partition));
  CHECK(to_json(check_section_contract(pl, cfg)) == to_json(rep.section_contract));
  CHECK(to_json(check_continuity_modulus(pl, cfg)) == to_json(rep.continuity_modulus));
}

TEST_CASE("gap and overlap fail the partition and gate the dependent checks") {
  for (const auto& pl : {with_gap(circle_planner()), with_overlap(torus_planner())}) {
    CAPTURE(pl.name());
    const auto rep = verify_planner(pl, quick());
    CHECK_FALSE(rep.pass());
    CHECK(rep.partition.status == CheckStatus::fail);
    REQUIRE(rep.partition.witness);
    CHECK(rep.partition.witness->points.size() == 2);
    for (const auto* r : {&rep.section_contract, &rep.in_space, &rep.continuity_modulus}) {
      CHECK(r->status == CheckStatus::skipped);
      CHECK(r->message == "prerequisite failed: partition");
    }
    CHECK(rep.fibered_membership.status == CheckStatus::pass);
  }
}

TEST_CASE("broken endpoint fails the section contract") {
  const auto rep = verify_planner(with_broken_endpoint(circle_planner()), quick());
  CHECK(rep.partition.status == CheckStatus::pass);
  CHECK(rep.section_contract.status == CheckStatus::fail);
  // e(2t/3) ends a third of the way short; on the half-turn piece that is pi/3
  CHECK(rep.section_contract.worst == doctest::Approx(oracle::pi / 3).epsilon(1e-9));
}

TEST_CASE("the seam planner fails continuity near antipodal pairs") {
  const auto rep = verify_planner(seam_planner(), quick(10000));
  CHECK(rep.partition.status == CheckStatus::pass);
  CHECK(rep.section_contract.status == CheckStatus::pass);
  CHECK(rep.continuity_modulus.status == CheckStatus::fail);
  REQUIRE(rep.continuity_modulus.witness);
  const auto& pts = rep.continuity_modulus.witness->points;
  REQUIRE(pts.size() == 4);
  // the witness straddles the antipodal set
  CHECK(oracle::arc(pts[0], pts[1]) > oracle::pi - 0.01);
}

TEST_CASE("perturbed midpoint fails the loop contract") {
  const auto loops = to_loop_planner(circle_planner());
  CHECK(verify_planner(loops, quick()).loop_contract.status == CheckStatus::pass);
  const auto rep = verify_planner(with_perturbed_midpoint(loops, 0.01), quick());
  CHECK(rep.loop_contract.status == CheckStatus::fail);
  CHECK(rep.loop_contract.worst == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("check_loop_contract rejects path-mode planners") {
  CHECK(kind_of([] { (void)check_loop_contract(circle_planner(), quick(10)); }) == ErrorKind::mode);
}

TEST_CASE("cat witness checks") {
  const auto w = planner_to_cat_cover(base_circle());
  CHECK(check_cat_witness(w, quick()).status == CheckStatus::pass);

  auto missing = w;
  missing.entries.pop_back();
  const auto r1 = check_cat_witness(missing, quick());
  CHECK(r1.status == CheckStatus::fail);
  REQUIRE(r1.witness);
  CHECK(r1.witness->detail == "point lies in no cover set");

  auto bad = w;
  bad.entries[0].contraction.eval = [](const Point& y, double) { return y; };
  const auto r2 = check_cat_witness(bad, quick());
  CHECK(r2.status == CheckStatus::fail);
  REQUIRE(r2.witness);
  CHECK(r2.witness->detail.find("entry " + w.entries[0].label) == 0);
  CHECK(r2.witness->detail.find("h(y,0) != x0") != std::string::npos);
}

TEST_CASE("report json layout") {
  const auto j = verify_planner(circle_planner(), quick(200)).to_json();
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  CHECK(keys == std::vector<std::string>{"planner", "space", "domain", "mode", "piece_count", "pieces", "provenance",
                                         "config", "checks", "pass"});
  CHECK(j["piece_count"] == 2);
  CHECK_FALSE(j["config"].contains("workers"));
  std::vector<std::string> checks;
  for (const auto& [k, v] : j["checks"].items()) checks.push_back(k);
  CHECK(checks == std::vector<std::string>{"partition", "section_contract", "in_space", "fibered_membership",
                                           "continuity_modulus", "loop_contract", "cat_witness"});
}

TEST_CASE("config validation") {
  auto c = quick();
  c.n_path_samples = 1;
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::configuration);
  c = quick(0);
  CHECK(kind_of([&] { (void)verify_planner(circle_planner(), c); }) == ErrorKind::configuration);
  c = quick();
  c.delta = 0.0;
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::configuration);
  c = quick();
  c.eps_space = -1.0;
  CHECK(kind_of([&] { c.validate(); }) == ErrorKind::configuration);
}

// ---------------------------------------------------------------------------
// Properties

TEST_CASE("property: reports are byte-identical across runs and worker counts") {
  const auto w = planner_to_cat_cover(base_circle());
  const auto based = based_loop_planner_from_cat(w);
  for (const auto& pl : {circle_planner(), torus_planner(), seam_planner(), with_gap(circle_planner()), based}) {
    CAPTURE(pl.name());
    auto cfg = quick(3000);
    const auto* wit = pl.mode() == PathMode::based_loop ? &w : nullptr;
    const auto ref = verify_planner(pl, cfg, wit).to_json().dump();
    CHECK(verify_planner(pl, cfg, wit).to_json().dump() == ref);
    for (std::size_t workers : {3u, 7u}) {
      cfg.workers = workers;
      CHECK(verify_planner(pl, cfg, wit).to_json().dump() == ref);
    }
  }
}

TEST_CASE("property: more samples never hide a failure") {
  // samples are a prefix-stable stream, so failure counts grow with n
  for (const auto& pl : {seam_planner(), with_gap(circle_planner()), circle_planner()}) {
    CAPTURE(pl.name());
    std::size_t prev_fail = 0;
    bool prev_failed = false;
    for (std::size_t n : {500u, 2000u, 8000u}) {
      const auto rep = verify_planner(pl, quick(n));
      const std::size_t f = rep.partition.failures + rep.continuity_modulus.failures;
      CHECK(f >= prev_fail);
      if (prev_failed) CHECK_FALSE(rep.pass());
      prev_fail = f;
      prev_failed = !rep.pass();
    }
  }
}
