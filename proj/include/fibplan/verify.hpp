#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "fibplan/planner.hpp"

namespace fibplan {

struct VerificationConfig {
  std::uint64_t seed = 1;
  std::size_t n_samples = 10000;
  std::size_t n_path_samples = 64;
  double delta = 1e-3;
  /// L in sup_t d(s(a)(t), s(b)(t)) <= L d(a, b) + eps_space.
  double modulus_bound = 8.0;
  double eps_space = kSpaceTol;
  double eps_glue = kGlueTol;
  double fiber_tol = kFiberTol;
  /// Worker threads; results do not depend on it and it is not serialized.
  std::size_t workers = 1;

  /// Throws a configuration error for zero counts or non-positive tolerances.
  void validate() const;
};

enum class CheckStatus { pass, fail, skipped, not_applicable };

std::string_view to_string(CheckStatus s) noexcept;

struct Witness {
  std::size_t index = 0;
  std::vector<Point> points;
  std::string detail;
};

struct CheckResult {
  CheckStatus status = CheckStatus::not_applicable;
  std::size_t samples = 0;
  std::size_t compared = 0;  // continuity: sample pairs actually compared
  std::size_t failures = 0;
  double worst = 0.0;
  std::optional<double> max_ratio;
  std::optional<Witness> witness;  // first failing sample
  std::string message;

  bool ok() const noexcept { return status == CheckStatus::pass || status == CheckStatus::not_applicable; }
};

struct VerificationReport {
  std::string planner;
  std::string space;
  std::string domain;
  PathMode mode = PathMode::path;
  std::vector<std::string> piece_labels;
  std::vector<std::string> provenance;
  VerificationConfig config;

  CheckResult partition;
  CheckResult section_contract;
  CheckResult in_space;
  CheckResult fibered_membership;
  CheckResult continuity_modulus;
  CheckResult loop_contract;
  CheckResult cat_witness;
  std::size_t cat_entries = 0;

  std::size_t piece_count() const noexcept { return piece_labels.size(); }
  bool pass() const noexcept;
  /// (name, result) in report order.
  std::vector<std::pair<std::string, const CheckResult*>> checks() const;
  /// Stable key order; `workers` is omitted.
  nlohmann::ordered_json to_json() const;
};

CheckResult check_partition(const Planner& pl, const VerificationConfig& cfg);
CheckResult check_section_contract(const Planner& pl, const VerificationConfig& cfg);
CheckResult check_continuity_modulus(const Planner& pl, const VerificationConfig& cfg);
/// Throws a mode error for path-mode planners.
CheckResult check_loop_contract(const Planner& pl, const VerificationConfig& cfg);
CheckResult check_cat_witness(const CatWitness& w, const VerificationConfig& cfg);

/// Runs every applicable check in one pass over the sampled members.
VerificationReport verify_planner(const Planner& pl, const VerificationConfig& cfg,
                                  const CatWitness* witness = nullptr);

nlohmann::ordered_json to_json(const CheckResult& r);
nlohmann::ordered_json to_json(const VerificationConfig& cfg);

}  // namespace fibplan
