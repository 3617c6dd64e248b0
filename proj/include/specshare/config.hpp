#pragma once

// Scenario configuration files (JSON). Every object rejects unknown keys and
// every error names the offending field as a JSON pointer.
//
//   {
//     "mode": "complete" | "weak" | "strong",
//     "thetas": [4, 10],
//     "counts": [1, 1],                  // complete, weak
//     "population": 2, "probs": [0.9, 0.1],  // strong
//     "r_dir": 1.0,                      // or "snr": 1.718
//     "n0": 1.0,
//     "log_base": "natural" | "base2",
//     "solver": {
//       "t_max": 100, "t_max_cap": 1600, "grid_points": 10000, "refine_tol": 1e-9,
//       "strong_method": "decompose" | "exhaustive",
//       "exhaustive": {"points_per_dim": 200, "t_max": 0, "t_max_cap": 1600}
//     },
//     "contract": [{"power": 0, "time": 0}, ...],   // check-feasible
//     "output": "result.json"
//   }

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "specshare/model.hpp"
#include "specshare/scalar_opt.hpp"
#include "specshare/solver_strong.hpp"
#include "specshare/solver_weak.hpp"

namespace specshare {

/// Invalid configuration; what() starts with the field path.
class ConfigError : public InvalidInput {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : InvalidInput(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

enum class Mode { complete, weak, strong };
std::string to_string(Mode m);

enum class StrongMethod { decompose, exhaustive };

struct ScenarioConfig {
  std::optional<Mode> mode;
  std::vector<double> thetas;
  std::vector<Count> counts;
  std::optional<Count> population;
  std::vector<double> probs;
  PUParams pu;
  GridOptions grid;
  ExhaustiveGrid exhaustive;
  StrongMethod strong_method = StrongMethod::decompose;
  std::optional<Contract> contract;
  std::optional<std::string> output;

  WeakScenario weak_scenario() const;
  StrongScenario strong_scenario() const;
};

/// Parses and validates the mode-independent parts; mode-specific fields are
/// checked here too when a mode is given.
ScenarioConfig parse_config(const std::string& json_text);
ScenarioConfig load_config(const std::filesystem::path& path);

struct SolveOutput {
  Mode mode;
  SolveReport report;
};

SolveOutput run_solve(const ScenarioConfig& config);

std::string report_json(const SolveOutput& out, const ScenarioConfig& config);
std::string report_csv(const SolveOutput& out, const ScenarioConfig& config);

}  // namespace specshare
