#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fibplan/builtins.hpp"
#include "fibplan/verify.hpp"

namespace fibplan {

struct ExpectedCount {
  std::size_t value = 0;
  std::string note;
};

struct ExportRequest {
  PointPair pair;
  std::size_t samples = 64;
  std::string file;  // .jsonl for JSON lines, anything else for columnar text
};

/// A declarative scenario: which planner to build and how to certify it.
///
/// The recipe is a tree of {"op": ...} nodes; see README for the grammar.
struct ScenarioConfig {
  std::string name;
  std::string space;
  std::optional<nlohmann::json> f;
  std::optional<nlohmann::json> g;
  nlohmann::json planner;
  VerificationConfig verification;
  std::optional<ExpectedCount> expected_piece_count;
  std::vector<ExportRequest> exports;

  /// Parses and validates; errors are configuration errors.
  static ScenarioConfig from_json(const nlohmann::json& j);
  static ScenarioConfig load(const std::filesystem::path& path);
  /// Normalized form; parsing it again gives the same scenario.
  nlohmann::ordered_json to_json() const;
};

/// A planner built from a recipe, with the category witness when the recipe
/// went through one.
struct BuiltPlanner {
  Planner planner;
  std::optional<CatWitness> witness;
};

BuiltPlanner build_planner(const nlohmann::json& recipe);

/// Maps and domains referenced from recipes.
MapSpec map_from_json(const nlohmann::json& j, const SpacePtr& source);
DomainPtr domain_from_json(const nlohmann::json& j, const SpacePtr& space);

struct ScenarioOutcome {
  int exit_status = 2;
  bool count_matches = true;
  VerificationReport report;
  nlohmann::ordered_json json;
};

/// Builds, verifies and compares the piece count. Exit status 0 iff every
/// applicable check passes and the count matches, 1 otherwise. Construction
/// and configuration problems propagate as exceptions. Path exports are
/// written below `export_dir` when one is given.
ScenarioOutcome run_scenario(const ScenarioConfig& cfg,
                             const std::optional<std::filesystem::path>& export_dir = std::nullopt);

/// One record per (pair, t): pair index, piece, subpart, t, coordinates.
/// Loop-mode exports always include t = 1/2. Pairs outside the planner's
/// domain raise a membership error.
void export_path_samples(const Planner& pl, const std::vector<PointPair>& pairs, std::size_t n_path_samples,
                         const std::filesystem::path& out);

}  // namespace fibplan
