#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fibplan/scenario.hpp"

namespace {

int run(const std::string& config_path, const std::optional<std::uint64_t>& seed,
        const std::optional<std::size_t>& samples, const std::optional<std::size_t>& workers,
        const std::string& report_path, const std::string& export_dir) {
  using namespace fibplan;
  ScenarioConfig cfg = ScenarioConfig::load(config_path);
  if (seed) cfg.verification.seed = *seed;
  if (samples) cfg.verification.n_samples = *samples;
  if (workers) cfg.verification.workers = *workers;
  cfg.verification.validate();

  std::optional<std::filesystem::path> exports;
  if (!export_dir.empty()) exports = export_dir;
  const ScenarioOutcome out = run_scenario(cfg, exports);

  const std::filesystem::path report = report_path.empty() ? cfg.name + ".report.json" : report_path;
  if (report.has_parent_path()) std::filesystem::create_directories(report.parent_path());
  std::ofstream os(report);
  if (!os) throw Error(ErrorKind::configuration, "cannot write report " + report.string());
  os << out.json.dump(2) << '\n';

  std::cout << cfg.name << ": " << (out.exit_status == 0 ? "PASS" : "FAIL") << ", " << out.report.piece_count()
            << " piece(s)";
  if (cfg.expected_piece_count) {
    std::cout << ", expected " << cfg.expected_piece_count->value << (out.count_matches ? "" : " (MISMATCH)");
  }
  std::cout << '\n';
  for (const auto& [name, r] : out.report.checks()) {
    std::cout << "  " << name << ": " << to_string(r->status);
    if (r->witness) std::cout << " [" << r->witness->detail << "]";
    if (!r->message.empty() && r->status != CheckStatus::pass) std::cout << " (" << r->message << ")";
    std::cout << '\n';
  }
  std::cout << "report: " << report.string() << '\n';
  return out.exit_status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build and numerically certify partition motion planners"};
  app.require_subcommand(1);
  auto* cmd = app.add_subcommand("run", "Run one scenario configuration");
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> workers;
  std::string report;
  std::string export_dir;
  cmd->add_option("config", config, "Scenario JSON file")->required();
  cmd->add_option("--seed", seed, "Override the verification seed");
  cmd->add_option("--samples", samples, "Override the number of sampled domain members");
  cmd->add_option("--report", report, "Report path (default <name>.report.json)");
  cmd->add_option("--export-dir", export_dir, "Directory for path exports");
  cmd->add_option("--workers", workers, "Verification worker threads");
  CLI11_PARSE(app, argc, argv);

  try {
    return run(config, seed, samples, workers, report, export_dir);
  } catch (const fibplan::Error& e) {
    std::cerr << "fibplan: " << fibplan::to_string(e.kind()) << " error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fibplan: " << e.what() << '\n';
    return 2;
  }
}
