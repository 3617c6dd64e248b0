// specshare: solve contract scenarios, run the experiment suite, and
// cross-check contract feasibility.
//
// Exit codes: 0 success, 1 invalid input, 2 internal inconsistency.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "specshare/config.hpp"
#include "specshare/experiments.hpp"
#include "specshare/feasibility.hpp"
#include "specshare/kernels.hpp"

namespace fs = std::filesystem;
using namespace specshare;

namespace {

constexpr int kInvalidInput = 1;
constexpr int kInconsistency = 2;

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + path.string());
  out << text;
}

int cmd_solve(const std::string& config_path, std::string out_path, const std::string& format) {
  const auto cfg = load_config(config_path);
  const auto result = run_solve(cfg);
  const std::string text =
      format == "csv" ? report_csv(result, cfg) : report_json(result, cfg);
  if (out_path.empty() && cfg.output) out_path = *cfg.output;
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return 0;
}

int cmd_experiment(const std::string& id, const std::string& out_dir, std::uint64_t seed,
                   const std::string& params_path, unsigned threads) {
  std::vector<std::string> ids;
  if (id == "all")
    ids = experiment_ids();
  else
    ids = {id};
  nlohmann::json overrides = nlohmann::json::object();
  if (!params_path.empty()) {
    std::ifstream in(params_path);
    if (!in) throw InvalidInput("cannot open " + params_path);
    try {
      overrides = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw InvalidInput(std::string("malformed params JSON: ") + e.what());
    }
  }
  for (const auto& name : ids) {
    auto spec = default_experiment(name, seed);
    if (!params_path.empty()) apply_overrides(spec, overrides);
    const auto table = run_experiment(spec, threads);
    std::ostringstream os;
    write_table(os, spec, table);
    const fs::path path = fs::path(out_dir) / (name + ".csv");
    write_file(path, os.str());
    std::cout << name << ": " << table.rows.size() << " rows -> " << path.string() << '\n';
  }
  return 0;
}

void print_verdict(const char* name, const FeasibilityVerdict& v) {
  std::cout << name << ": " << (v.feasible ? "feasible" : "infeasible");
  for (const auto& viol : v.violations) std::cout << ' ' << viol.to_string();
  std::cout << '\n';
}

int cmd_check(const std::string& config_path) {
  const auto cfg = load_config(config_path);
  if (!cfg.contract) throw ConfigError("/contract", "missing (required by check-feasible)");
  const auto brute = feasible_bruteforce(*cfg.contract, cfg.thetas);
  const auto cond = feasible_by_conditions(*cfg.contract, cfg.thetas);
  print_verdict("bruteforce", brute);
  print_verdict("conditions", cond);
  for (const auto& flag : check_necessary_props(*cfg.contract, cfg.thetas))
    std::cout << "necessary-property flag: " << flag.to_string() << '\n';
  if (brute.feasible != cond.feasible) {
    std::cout << "verdicts DISAGREE\n";
    throw InconsistencyError("feasibility checkers disagree");
  }
  std::cout << "verdicts agree: " << (brute.feasible ? "feasible" : "infeasible") << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contract design for cooperative spectrum sharing"};
  app.require_subcommand(1);

  std::string backend;
  app.add_option("--kernel", backend, "Kernel backend override")
      ->check(CLI::IsMember({"scalar", "avx2"}));

  auto* solve = app.add_subcommand("solve", "Solve one scenario");
  std::string config_path, out_path, format = "json";
  solve->add_option("--config", config_path, "Scenario JSON")->required();
  solve->add_option("--out", out_path, "Output file (default: stdout or config 'output')");
  solve->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  auto* experiment = app.add_subcommand("experiment", "Run an experiment sweep");
  std::string id, out_dir = "results", params_path;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  experiment->add_option("id", id, "Experiment id or 'all'")->required();
  experiment->add_option("--out-dir", out_dir, "Directory for CSV files");
  experiment->add_option("--seed", seed, "Base seed");
  experiment->add_option("--params", params_path, "JSON overrides for the sweep parameters");
  experiment->add_option("--threads", threads, "Worker threads (0 = all cores)");

  auto* check = app.add_subcommand("check-feasible", "Run both feasibility checkers");
  std::string check_path;
  check->add_option("--config", check_path, "Config with thetas and contract")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalidInput;
  }

  try {
    if (backend == "scalar") kernels::set_backend(kernels::Backend::scalar);
    if (backend == "avx2") kernels::set_backend(kernels::Backend::avx2);
    if (*solve) return cmd_solve(config_path, out_path, format);
    if (*experiment) return cmd_experiment(id, out_dir, seed, params_path, threads);
    if (*check) return cmd_check(check_path);
  } catch (const InconsistencyError& e) {
    std::cerr << "inconsistency: " << e.what() << '\n';
    return kInconsistency;
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
  return 0;
}
