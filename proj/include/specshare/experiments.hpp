#pragma once

// Parameter sweeps producing the CSV tables behind each figure and the
// headline numbers. Sweep points run concurrently; rows keep sweep order.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace specshare {

struct ExperimentSpec {
  std::string id;
  std::uint64_t seed = 1;
  nlohmann::json params;  ///< sweep ranges and model constants

  /// Hash of id, seed and params in canonical form.
  std::string config_hash() const;
};

const std::vector<std::string>& experiment_ids();

/// Documented default sweep for `id`; throws InvalidInput for unknown ids.
ExperimentSpec default_experiment(const std::string& id, std::uint64_t seed = 1);

/// Replaces params entries with those in `overrides`; keys absent from the
/// defaults are rejected.
void apply_overrides(ExperimentSpec& spec, const nlohmann::json& overrides);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  /// Optional leading text column (e.g. sweep name or log base).
  std::string label_column;
  std::vector<std::string> labels;

  std::size_t column(const std::string& name) const;
};

Table run_experiment(const ExperimentSpec& spec, unsigned threads = 0);

/// Header comments with the config hash and params, then the table.
void write_table(std::ostream& out, const ExperimentSpec& spec, const Table& table);

}  // namespace specshare
