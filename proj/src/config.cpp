#include "specshare/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "specshare/csv.hpp"

namespace specshare {

using nlohmann::json;

std::string to_string(Mode m) {
  switch (m) {
    case Mode::complete: return "complete";
    case Mode::weak: return "weak";
    case Mode::strong: return "strong";
  }
  return "?";
}

namespace {

std::string child(const std::string& path, const std::string& key) { return path + "/" + key; }

std::string child(const std::string& path, std::size_t i) {
  return path + "/" + std::to_string(i);
}

void require_object(const json& j, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "/" : path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(child(path, key), "unknown key");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
  return x;
}

std::uint64_t get_unsigned(const json& j, const std::string& path) {
  if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<long long>() < 0))
    throw ConfigError(path, "expected a nonnegative integer");
  return j.get<std::uint64_t>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ConfigError(path, "expected a string");
  return j.get<std::string>();
}

const json& get_array(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw ConfigError(path, "expected a nonempty array");
  return j;
}

std::vector<double> number_list(const json& j, const std::string& path) {
  std::vector<double> out;
  for (std::size_t i = 0; i < get_array(j, path).size(); ++i)
    out.push_back(get_number(j[i], child(path, i)));
  return out;
}

template <class Fn>
void rethrow_at(const std::string& path, Fn fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ConfigError(path, e.what());
  }
}

void parse_solver(const json& j, const std::string& path, ScenarioConfig& cfg) {
  require_object(j, path,
                 {"t_max", "t_max_cap", "grid_points", "refine_tol", "strong_method", "exhaustive"});
  if (j.contains("t_max")) cfg.grid.t_max = get_number(j["t_max"], child(path, "t_max"));
  if (j.contains("t_max_cap"))
    cfg.grid.t_max_cap = get_number(j["t_max_cap"], child(path, "t_max_cap"));
  if (j.contains("grid_points"))
    cfg.grid.grid_points = get_unsigned(j["grid_points"], child(path, "grid_points"));
  if (j.contains("refine_tol"))
    cfg.grid.refine_tol = get_number(j["refine_tol"], child(path, "refine_tol"));
  rethrow_at(path, [&] { cfg.grid.validate(); });

  if (j.contains("strong_method")) {
    const auto p = child(path, "strong_method");
    const auto m = get_string(j["strong_method"], p);
    if (m == "decompose") cfg.strong_method = StrongMethod::decompose;
    else if (m == "exhaustive") cfg.strong_method = StrongMethod::exhaustive;
    else throw ConfigError(p, "expected \"decompose\" or \"exhaustive\"");
  }
  if (j.contains("exhaustive")) {
    const auto p = child(path, "exhaustive");
    const auto& e = j["exhaustive"];
    require_object(e, p, {"points_per_dim", "t_max", "t_max_cap"});
    if (e.contains("points_per_dim")) {
      cfg.exhaustive.points_per_dim = get_unsigned(e["points_per_dim"], child(p, "points_per_dim"));
      if (cfg.exhaustive.points_per_dim < 2)
        throw ConfigError(child(p, "points_per_dim"), "must be >= 2");
    }
    if (e.contains("t_max")) cfg.exhaustive.t_max = get_number(e["t_max"], child(p, "t_max"));
    if (e.contains("t_max_cap"))
      cfg.exhaustive.t_max_cap = get_number(e["t_max_cap"], child(p, "t_max_cap"));
  }
}

Contract parse_contract(const json& j, const std::string& path) {
  std::vector<ContractItem> items;
  for (std::size_t i = 0; i < get_array(j, path).size(); ++i) {
    const auto p = child(path, i);
    require_object(j[i], p, {"power", "time"});
    if (!j[i].contains("power")) throw ConfigError(child(p, "power"), "missing");
    if (!j[i].contains("time")) throw ConfigError(child(p, "time"), "missing");
    items.push_back({get_number(j[i]["power"], child(p, "power")),
                     get_number(j[i]["time"], child(p, "time"))});
  }
  Contract out;
  rethrow_at(path, [&] { out = Contract(std::move(items)); });
  return out;
}

}  // namespace

WeakScenario ScenarioConfig::weak_scenario() const {
  WeakScenario s{TypeSpace::with_counts(thetas, counts), pu, grid};
  s.validate();
  return s;
}

StrongScenario ScenarioConfig::strong_scenario() const {
  if (!population) throw ConfigError("/population", "missing");
  StrongScenario s{TypeSpace::with_probs(thetas, probs, *population), pu, grid, exhaustive};
  s.validate();
  return s;
}

ScenarioConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("/", std::string("malformed JSON: ") + e.what());
  }
  require_object(j, "", {"mode", "thetas", "counts", "population", "probs", "r_dir", "snr", "n0",
                         "log_base", "solver", "contract", "output"});
  ScenarioConfig cfg;

  if (j.contains("mode")) {
    const auto m = get_string(j["mode"], "/mode");
    if (m == "complete") cfg.mode = Mode::complete;
    else if (m == "weak") cfg.mode = Mode::weak;
    else if (m == "strong") cfg.mode = Mode::strong;
    else throw ConfigError("/mode", "expected \"complete\", \"weak\" or \"strong\"");
  }

  if (!j.contains("thetas")) throw ConfigError("/thetas", "missing");
  cfg.thetas = number_list(j["thetas"], "/thetas");
  rethrow_at("/thetas", [&] { validate_thetas(cfg.thetas); });

  if (j.contains("log_base")) {
    const auto b = get_string(j["log_base"], "/log_base");
    rethrow_at("/log_base", [&] { cfg.pu.log_base = parse_log_base(b); });
  }
  if (j.contains("n0")) {
    cfg.pu.n0 = get_number(j["n0"], "/n0");
    if (!(cfg.pu.n0 > 0.0)) throw ConfigError("/n0", "must be > 0");
  }
  if (j.contains("r_dir") && j.contains("snr"))
    throw ConfigError("/snr", "give either r_dir or snr, not both");
  if (j.contains("r_dir")) cfg.pu.r_dir = get_number(j["r_dir"], "/r_dir");
  if (j.contains("snr")) {
    const double snr = get_number(j["snr"], "/snr");
    rethrow_at("/snr", [&] { cfg.pu = PUParams::from_snr(snr, cfg.pu.n0, cfg.pu.log_base); });
  }
  rethrow_at("/r_dir", [&] { cfg.pu.validate(); });

  if (j.contains("counts")) {
    const auto& arr = get_array(j["counts"], "/counts");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto v = get_unsigned(arr[i], child("/counts", i));
      if (v > 1'000'000'000ULL) throw ConfigError(child("/counts", i), "too large");
      cfg.counts.push_back(static_cast<Count>(v));
    }
  }
  if (j.contains("population")) {
    const auto v = get_unsigned(j["population"], "/population");
    if (v < 1 || v > 1'000'000'000ULL) throw ConfigError("/population", "must be in [1, 1e9]");
    cfg.population = static_cast<Count>(v);
  }
  if (j.contains("probs")) cfg.probs = number_list(j["probs"], "/probs");
  if (j.contains("solver")) parse_solver(j["solver"], "/solver", cfg);
  if (j.contains("contract")) {
    cfg.contract = parse_contract(j["contract"], "/contract");
    if (cfg.contract->size() != cfg.thetas.size())
      throw ConfigError("/contract", "must have one item per theta");
  }
  if (j.contains("output")) cfg.output = get_string(j["output"], "/output");

  if (cfg.mode == Mode::complete || cfg.mode == Mode::weak) {
    if (cfg.counts.empty()) throw ConfigError("/counts", "missing (required by mode)");
    if (cfg.counts.size() != cfg.thetas.size())
      throw ConfigError("/counts", "must have one entry per theta");
    for (std::size_t i = 0; i < cfg.counts.size(); ++i)
      if (cfg.counts[i] < 1) throw ConfigError(child("/counts", i), "must be >= 1");
    if (j.contains("probs")) throw ConfigError("/probs", "not used by this mode");
    if (j.contains("population")) throw ConfigError("/population", "not used by this mode");
  } else if (cfg.mode == Mode::strong) {
    if (!cfg.population) throw ConfigError("/population", "missing (required by mode)");
    if (cfg.probs.empty()) throw ConfigError("/probs", "missing (required by mode)");
    if (cfg.probs.size() != cfg.thetas.size())
      throw ConfigError("/probs", "must have one entry per theta");
    if (j.contains("counts")) throw ConfigError("/counts", "not used by this mode");
    rethrow_at("/probs", [&] { TypeSpace::with_probs(cfg.thetas, cfg.probs, *cfg.population); });
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

SolveOutput run_solve(const ScenarioConfig& config) {
  if (!config.mode) throw ConfigError("/mode", "missing");
  SolveOutput out{*config.mode, {}};
  switch (*config.mode) {
    case Mode::complete: out.report = solve_complete(config.weak_scenario()); break;
    case Mode::weak: out.report = solve_weak(config.weak_scenario()); break;
    case Mode::strong: {
      const auto s = config.strong_scenario();
      out.report = config.strong_method == StrongMethod::exhaustive
                       ? exhaustive_search(s)
                       : decompose_and_compare(s).report;
      break;
    }
  }
  return out;
}

std::string report_json(const SolveOutput& out, const ScenarioConfig& config) {
  json j;
  j["mode"] = to_string(out.mode);
  j["log_base"] = to_string(config.pu.log_base);
  j["r_dir"] = config.pu.r_dir;
  json items = json::array();
  for (std::size_t k = 0; k < out.report.contract.size(); ++k) {
    const auto& it = out.report.contract[k];
    items.push_back({{"type", k + 1},
                     {"theta", config.thetas[k]},
                     {"power", it.power},
                     {"time", it.time},
                     {"su_payoff", su_payoff(config.thetas[k], it)}});
  }
  j["contract"] = items;
  j["pu_value"] = out.report.pu_value;
  j["decision"] = to_string(out.report.decision);
  j["effective_value"] = out.report.effective_value(config.pu);
  j["diagnostics"] = out.report.diagnostics;
  return j.dump(2) + "\n";
}

std::string report_csv(const SolveOutput& out, const ScenarioConfig& config) {
  std::ostringstream os;
  csv::Writer w(os);
  w.comment("mode=" + to_string(out.mode) + " log_base=" + to_string(config.pu.log_base));
  w.comment("pu_value=" + csv::number(out.report.pu_value) +
            " decision=" + to_string(out.report.decision) +
            " effective_value=" + csv::number(out.report.effective_value(config.pu)));
  for (const auto& [key, value] : out.report.diagnostics)
    w.comment(key + "=" + csv::number(value));
  w.row({"type", "theta", "power", "time", "su_payoff"});
  for (std::size_t k = 0; k < out.report.contract.size(); ++k) {
    const auto& it = out.report.contract[k];
    w.row({std::to_string(k + 1), csv::number(config.thetas[k]), csv::number(it.power),
           csv::number(it.time), csv::number(su_payoff(config.thetas[k], it))});
  }
  return os.str();
}

}  // namespace specshare
