#include "fibplan/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

namespace fibplan {

std::string_view to_string(CheckStatus s) noexcept {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::skipped: return "skipped";
    case CheckStatus::not_applicable: return "not_applicable";
  }
  return "?";
}

void VerificationConfig::validate() const {
  auto bad = [](const std::string& what) { throw Error(ErrorKind::configuration, what); };
  if (n_samples == 0) bad("n_samples must be at least 1");
  if (n_path_samples < 2) bad("n_path_samples must be at least 2");
  if (workers == 0) bad("workers must be at least 1");
  if (!(delta > 0.0)) bad("delta must be positive");
  if (!(modulus_bound > 0.0)) bad("modulus_bound must be positive");
  if (!(eps_space > 0.0) || !(eps_glue > 0.0) || !(fiber_tol > 0.0)) bad("tolerances must be positive");
}

namespace {

// Running state of one check over a range of samples. Merging is
// associative: counts add, maxima take the max, the witness is the failing
// sample with the lowest index.
struct Acc {
  std::size_t samples = 0;
  std::size_t compared = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  std::optional<double> max_ratio;
  std::optional<Witness> witness;

  void observe(double value) {
    if (std::isnan(value)) value = std::numeric_limits<double>::infinity();
    worst = std::max(worst, value);
  }
  void ratio(double r) { max_ratio = max_ratio ? std::max(*max_ratio, r) : r; }
  void fail(std::size_t index, std::vector<Point> pts, std::string detail) {
    ++failures;
    if (!witness || index < witness->index) witness = Witness{index, std::move(pts), std::move(detail)};
  }
  void merge(const Acc& o) {
    samples += o.samples;
    compared += o.compared;
    failures += o.failures;
    worst = std::max(worst, o.worst);
    if (o.max_ratio) ratio(*o.max_ratio);
    if (o.witness && (!witness || o.witness->index < witness->index)) witness = o.witness;
  }
  CheckResult result() const {
    CheckResult r;
    r.status = failures ? CheckStatus::fail : CheckStatus::pass;
    r.samples = samples;
    r.compared = compared;
    r.failures = failures;
    r.worst = worst;
    r.max_ratio = max_ratio;
    r.witness = witness;
    return r;
  }
};

// Splits [0, n) into contiguous chunks, runs `body(begin, end, acc)` on each
// chunk (in parallel when workers > 1) and merges the chunk states in order.
template <class State, class Body>
State run_chunks(std::size_t n, std::size_t workers, Body body) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  std::vector<State> parts(workers);
  auto bounds = [n, workers](std::size_t w) { return n * w / workers; };
  if (workers == 1) {
    body(0, n, parts[0]);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      threads.emplace_back([&, w] {
        try {
          body(bounds(w), bounds(w + 1), parts[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  State total = parts[0];
  for (std::size_t w = 1; w < workers; ++w) total.merge(parts[w]);
  return total;
}

std::string describe(double value) {
  std::ostringstream s;
  s.precision(6);
  s << value;
  return s.str();
}

double pair_distance(const Space& space, const PointPair& a, const PointPair& b) {
  return std::hypot(space.raw_distance(a.x, b.x), space.raw_distance(a.y, b.y));
}

struct PlannerState {
  Acc partition, section, space, member, continuity, loop;
  void merge(const PlannerState& o) {
    partition.merge(o.partition);
    section.merge(o.section);
    space.merge(o.space);
    member.merge(o.member);
    continuity.merge(o.continuity);
    loop.merge(o.loop);
  }
};

constexpr std::uint64_t kContinuitySalt = 0xC0471;
constexpr std::uint64_t kCatSalt = 0xCA7;

class PlannerChecker {
 public:
  PlannerChecker(const Planner& pl, const VerificationConfig& cfg)
      : pl_(pl), cfg_(cfg), space_(*pl.space()), grid_(sample_grid(cfg.n_path_samples)) {
    cfg.validate();
    samples_ = pl.domain()->sample(cfg.n_samples, cfg.seed);
  }

  PlannerState run() const {
    return run_chunks<PlannerState>(samples_.size(), cfg_.workers,
                                    [this](std::size_t b, std::size_t e, PlannerState& st) {
                                      for (std::size_t i = b; i < e; ++i) sample(i, st);
                                    });
  }

 private:
  void membership(std::size_t i, const PointPair& s, PlannerState& st) const {
    ++st.member.samples;
    double d = 0.0;
    bool ok = space_.contains(s.x, cfg_.eps_space) && space_.contains(s.y, cfg_.eps_space);
    if (const FiberMaps* fm = pl_.domain()->fiber(); ok && fm) {
      d = fm->f.target()->raw_distance(fm->f(s.x), fm->g(s.y));
      ok = d <= cfg_.fiber_tol;
    } else if (ok) {
      ok = pl_.domain()->contains(s.x, s.y);
    }
    st.member.observe(d);
    if (!ok) st.member.fail(i, {s.x, s.y}, "sampled pair is not in " + pl_.domain()->name() + " (fiber gap " +
                                               describe(d) + ")");
  }

  std::optional<std::size_t> locate(std::size_t i, const PointPair& s, Acc& acc) const {
    ++acc.samples;
    std::vector<std::size_t> hits;
    try {
      hits = pl_.pieces_containing(s.x, s.y);
    } catch (const std::exception& e) {
      acc.observe(1.0);
      acc.fail(i, {s.x, s.y}, std::string("membership test threw: ") + e.what());
      return std::nullopt;
    }
    if (hits.size() == 1) return hits.front();
    acc.observe(hits.empty() ? 1.0 : static_cast<double>(hits.size() - 1));
    if (hits.empty()) {
      acc.fail(i, {s.x, s.y}, "coverage gap: pair lies in no piece");
    } else {
      std::string names;
      for (auto h : hits) names += (names.empty() ? "" : ", ") + pl_.pieces()[h].label;
      acc.fail(i, {s.x, s.y}, "overlap: pair lies in pieces " + names);
    }
    return std::nullopt;
  }

  void sample(std::size_t i, PlannerState& st) const {
    const PointPair& s = samples_[i];
    membership(i, s, st);
    const auto piece_index = locate(i, s, st.partition);
    if (!piece_index) return;
    const Piece& piece = pl_.pieces()[*piece_index];

    ++st.section.samples;
    ++st.space.samples;
    std::optional<ParamPath> path;
    try {
      path = piece.section(s.x, s.y);
    } catch (const std::exception& e) {
      st.section.observe(std::numeric_limits<double>::infinity());
      st.section.fail(i, {s.x, s.y}, "section of " + piece.label + " threw: " + e.what());
      return;
    }
    const bool loop = pl_.mode() != PathMode::path;
    const Point& end = loop ? s.x : s.y;
    try {
      const double d0 = space_.raw_distance(path->at(0.0), s.x);
      const double d1 = space_.raw_distance(path->at(1.0), end);
      const double dev = std::max(d0, d1);
      st.section.observe(dev);
      if (!(dev <= cfg_.eps_space)) {
        st.section.fail(i, {s.x, s.y},
                        "piece " + piece.label + ": " + (d1 >= d0 ? "s(1)" : "s(0)") + " misses its end point by " +
                            describe(dev));
      }

      double defect = 0.0;
      double defect_t = 0.0;
      for (double t : grid_) {
        const double d = space_.membership_defect((*path)(t));
        if (!(d <= defect)) {
          defect = std::isnan(d) ? std::numeric_limits<double>::infinity() : d;
          defect_t = t;
        }
      }
      st.space.observe(defect);
      if (!(defect <= cfg_.eps_space)) {
        st.space.fail(i, {s.x, s.y}, "path leaves " + space_.id() + " at t = " + describe(defect_t) + " by " +
                                         describe(defect));
      }

      if (loop) {
        ++st.loop.samples;
        double dev_loop = std::max({space_.raw_distance(path->at(0.0), s.x),
                                    space_.raw_distance(path->at(1.0), s.x),
                                    space_.raw_distance(path->at(0.5), s.y)});
        if (pl_.mode() == PathMode::based_loop) {
          dev_loop = std::max(dev_loop, space_.raw_distance(s.x, *pl_.base()));
        }
        st.loop.observe(dev_loop);
        if (!(dev_loop <= cfg_.eps_space)) {
          st.loop.fail(i, {s.x, s.y}, "loop contract off by " + describe(dev_loop));
        }
      }
    } catch (const std::exception& e) {
      st.section.observe(std::numeric_limits<double>::infinity());
      st.section.fail(i, {s.x, s.y}, "evaluating the section of " + piece.label + " threw: " + e.what());
      return;
    }

    continuity(i, s, piece, *piece_index, *path, st.continuity);
  }

  void continuity(std::size_t i, const PointPair& a, const Piece& piece, std::size_t piece_index,
                  const ParamPath& pa, Acc& acc) const {
    ++acc.samples;
    Rng rng(mix_seed(cfg_.seed, i, kContinuitySalt));
    std::optional<PointPair> b;
    try {
      b = pl_.domain()->perturb(a, cfg_.delta, rng);
    } catch (const std::exception&) {
      return;
    }
    if (!b) return;
    const auto hits = pl_.pieces_containing(b->x, b->y);
    if (hits.size() != 1 || hits.front() != piece_index) return;
    if (piece.subpart(a.x, a.y) != piece.subpart(b->x, b->y)) return;
    const double dab = pair_distance(space_, a, *b);
    if (!(dab > 0.0)) return;
    if (!(dab < std::min(piece.frontier_distance(a.x, a.y), piece.frontier_distance(b->x, b->y)))) return;

    ++acc.compared;
    double sup = 0.0;
    try {
      const ParamPath pb = piece.section(b->x, b->y);
      for (double t : grid_) sup = std::max(sup, space_.raw_distance(pa(t), pb(t)));
    } catch (const std::exception& e) {
      acc.observe(std::numeric_limits<double>::infinity());
      acc.fail(i, {a.x, a.y, b->x, b->y}, "section of " + piece.label + " threw at a nearby pair: " + e.what());
      return;
    }
    if (std::isnan(sup)) sup = std::numeric_limits<double>::infinity();
    acc.observe(sup);
    acc.ratio(sup / dab);
    if (!(sup <= cfg_.modulus_bound * dab + cfg_.eps_space)) {
      acc.fail(i, {a.x, a.y, b->x, b->y},
               "piece " + piece.label + ": paths " + describe(sup) + " apart for pairs " + describe(dab) +
                   " apart (ratio " + describe(sup / dab) + " > L = " + describe(cfg_.modulus_bound) + ")");
    }
  }

  const Planner& pl_;
  const VerificationConfig& cfg_;
  const Space& space_;
  std::vector<double> grid_;
  std::vector<PointPair> samples_;
};

CheckResult gated(const Acc& acc, bool prerequisite_ok, const std::string& prerequisite) {
  CheckResult r = acc.result();
  if (!prerequisite_ok) {
    r = CheckResult{};
    r.status = CheckStatus::skipped;
    r.message = "prerequisite failed: " + prerequisite;
  }
  return r;
}

struct CatState {
  Acc acc;
  void merge(const CatState& o) { acc.merge(o.acc); }
};

}  // namespace

bool VerificationReport::pass() const noexcept {
  const auto all = checks();
  return std::all_of(all.begin(), all.end(), [](const auto& c) { return c.second->ok(); });
}

std::vector<std::pair<std::string, const CheckResult*>> VerificationReport::checks() const {
  return {{"partition", &partition},
          {"section_contract", &section_contract},
          {"in_space", &in_space},
          {"fibered_membership", &fibered_membership},
          {"continuity_modulus", &continuity_modulus},
          {"loop_contract", &loop_contract},
          {"cat_witness", &cat_witness}};
}

nlohmann::ordered_json to_json(const CheckResult& r) {
  nlohmann::ordered_json j;
  j["status"] = to_string(r.status);
  j["samples"] = r.samples;
  j["failures"] = r.failures;
  j["worst"] = r.worst;
  if (r.compared) j["compared_pairs"] = r.compared;
  if (r.max_ratio) j["max_ratio"] = *r.max_ratio;
  if (r.witness) {
    nlohmann::ordered_json w;
    w["index"] = r.witness->index;
    w["points"] = nlohmann::ordered_json::array();
    for (const auto& p : r.witness->points) w["points"].push_back(p.coords);
    w["detail"] = r.witness->detail;
    j["witness"] = std::move(w);
  }
  if (!r.message.empty()) j["message"] = r.message;
  return j;
}

nlohmann::ordered_json to_json(const VerificationConfig& cfg) {
  nlohmann::ordered_json j;
  j["seed"] = cfg.seed;
  j["n_samples"] = cfg.n_samples;
  j["n_path_samples"] = cfg.n_path_samples;
  j["delta"] = cfg.delta;
  j["modulus_bound"] = cfg.modulus_bound;
  j["eps_space"] = cfg.eps_space;
  j["eps_glue"] = cfg.eps_glue;
  j["fiber_tol"] = cfg.fiber_tol;
  return j;
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["planner"] = planner;
  j["space"] = space;
  j["domain"] = domain;
  j["mode"] = fibplan::to_string(mode);
  j["piece_count"] = piece_count();
  j["pieces"] = piece_labels;
  j["provenance"] = provenance;
  j["config"] = fibplan::to_json(config);
  nlohmann::ordered_json cs;
  for (const auto& [name, r] : checks()) cs[name] = fibplan::to_json(*r);
  j["checks"] = std::move(cs);
  if (cat_witness.status != CheckStatus::not_applicable) j["cat_entries"] = cat_entries;
  j["pass"] = pass();
  return j;
}

VerificationReport verify_planner(const Planner& pl, const VerificationConfig& cfg, const CatWitness* witness) {
  const PlannerChecker checker(pl, cfg);
  const PlannerState st = checker.run();

  VerificationReport rep;
  rep.planner = pl.name();
  rep.space = pl.space()->id();
  rep.domain = pl.domain()->name();
  rep.mode = pl.mode();
  for (const auto& p : pl.pieces()) rep.piece_labels.push_back(p.label);
  rep.provenance = pl.provenance();
  rep.config = cfg;

  rep.partition = st.partition.result();
  const bool partition_ok = rep.partition.status == CheckStatus::pass;
  rep.section_contract = gated(st.section, partition_ok, "partition");
  rep.in_space = gated(st.space, partition_ok, "partition");
  rep.fibered_membership = st.member.result();
  rep.continuity_modulus = gated(st.continuity, partition_ok, "partition");
  if (rep.continuity_modulus.status == CheckStatus::pass && rep.continuity_modulus.compared == 0) {
    rep.continuity_modulus.message = "no comparable nearby pairs";
  }
  if (pl.mode() == PathMode::path) {
    rep.loop_contract.status = CheckStatus::not_applicable;
  } else {
    rep.loop_contract = gated(st.loop, partition_ok, "partition");
  }
  if (witness) {
    rep.cat_witness = check_cat_witness(*witness, cfg);
    rep.cat_entries = witness->entries.size();
  }
  return rep;
}

CheckResult check_partition(const Planner& pl, const VerificationConfig& cfg) {
  return verify_planner(pl, cfg).partition;
}

CheckResult check_section_contract(const Planner& pl, const VerificationConfig& cfg) {
  return verify_planner(pl, cfg).section_contract;
}

CheckResult check_continuity_modulus(const Planner& pl, const VerificationConfig& cfg) {
  return verify_planner(pl, cfg).continuity_modulus;
}

CheckResult check_loop_contract(const Planner& pl, const VerificationConfig& cfg) {
  if (pl.mode() == PathMode::path) {
    throw Error(ErrorKind::mode, "loop contract asked of path-mode planner " + pl.name());
  }
  return verify_planner(pl, cfg).loop_contract;
}

CheckResult check_cat_witness(const CatWitness& w, const VerificationConfig& cfg) {
  cfg.validate();
  const Space& space = *w.space;
  const auto grid = sample_grid(cfg.n_path_samples);
  const auto st = run_chunks<CatState>(cfg.n_samples, cfg.workers, [&](std::size_t b, std::size_t e, CatState& s) {
    Acc& acc = s.acc;
    for (std::size_t i = b; i < e; ++i) {
      Rng rng(mix_seed(cfg.seed, i, kCatSalt));
      const Point y = space.sample(rng);
      ++acc.samples;
      std::optional<std::size_t> first;
      try {
        for (std::size_t k = 0; k < w.entries.size(); ++k) {
          const CatEntry& entry = w.entries[k];
          if (!entry.covers(y)) continue;
          if (!first) first = k;
          const double d0 = space.raw_distance(entry.contraction.eval(y, 0.0), w.base);
          const double d1 = space.raw_distance(entry.contraction.eval(y, 1.0), y);
          const double dev = std::max(d0, d1);
          acc.observe(dev);
          if (!(dev <= cfg.eps_space)) {
            acc.fail(i, {y}, "entry " + entry.label + ": " + (d0 >= d1 ? "h(y,0) != x0" : "h(y,1) != y") +
                                 " by " + describe(dev));
          }
        }
      } catch (const std::exception& ex) {
        acc.observe(std::numeric_limits<double>::infinity());
        acc.fail(i, {y}, std::string("evaluating a contraction threw: ") + ex.what());
        continue;
      }
      if (!first) {
        acc.observe(std::numeric_limits<double>::infinity());
        acc.fail(i, {y}, "point lies in no cover set");
        continue;
      }
      const CatEntry& entry = w.entries[*first];
      const Point z = space.perturb(y, cfg.delta, rng);
      const double d = space.raw_distance(y, z);
      if (!entry.covers(z) || !(d > 0.0)) continue;
      if (!(d < std::min(entry.frontier_distance(y), entry.frontier_distance(z)))) continue;
      ++acc.compared;
      double sup = 0.0;
      const ParamPath hy = entry.contraction.track(y);
      const ParamPath hz = entry.contraction.track(z);
      for (double t : grid) sup = std::max(sup, space.raw_distance(hy(t), hz(t)));
      acc.ratio(sup / d);
      if (!(sup <= cfg.modulus_bound * d + cfg.eps_space)) {
        acc.fail(i, {y, z}, "entry " + entry.label + ": contraction moves " + describe(sup) + " for points " +
                                describe(d) + " apart");
      }
    }
  });
  CheckResult r = st.acc.result();
  r.message = std::to_string(w.entries.size()) + " entries, base " + format_point(w.base);
  return r;
}

}  // namespace fibplan
