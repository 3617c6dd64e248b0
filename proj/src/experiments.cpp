#include "specshare/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "specshare/csv.hpp"
#include "specshare/market_sim.hpp"
#include "specshare/parallel.hpp"
#include "specshare/scalar_opt.hpp"
#include "specshare/solver_strong.hpp"

namespace specshare {

using nlohmann::json;

std::string ExperimentSpec::config_hash() const {
  const json canonical = {{"id", id}, {"seed", seed}, {"params", params}};
  return csv::hex64(csv::fnv1a64(canonical.dump()));
}

const std::vector<std::string>& experiment_ids() {
  static const std::vector<std::string> ids = {"fig2", "fig3", "fig4", "fig5",
                                               "fig6", "ratio", "gap"};
  return ids;
}

namespace {

json range(double from, double to, double step) {
  return {{"from", from}, {"to", to}, {"step", step}};
}

json strong_sweep(std::vector<double> probs, unsigned population) {
  return {{"thetas", {4.0, 10.0}},      {"probs", probs},
          {"population", population},   {"r_dir", range(0.0, 3.0, 0.25)},
          {"points_per_dim", 200},      {"mc_replications", 20000},
          {"log_base", "natural"}};
}

json realization_params() {
  return {{"thetas", {10.0, 20.0}}, {"probs", {0.5, 0.5}}, {"population", 12},
          {"r_dir", 1.0},           {"points_per_dim", 200}};
}

json default_params(const std::string& id) {
  if (id == "fig2")
    return {{"theta", 10.0},
            {"r_dir", {0.0, 1.0, 2.0, 3.0}},
            {"total_time", range(0.0, 3.0, 0.01)},
            {"log_base", "natural"}};
  if (id == "fig3")
    return {{"theta_k", range(1.0, 20.0, 1.0)},
            {"r_dir", range(0.0, 10.0, 0.25)},
            {"log_base", "natural"}};
  if (id == "fig4") return strong_sweep({0.9, 0.1}, 2);
  if (id == "fig5") return strong_sweep({0.5, 0.5}, 5);
  if (id == "fig6") {
    auto p = realization_params();
    p["log_base"] = "natural";
    return p;
  }
  if (id == "ratio") {
    auto p = realization_params();
    p["log_bases"] = {"natural", "base2"};
    return p;
  }
  if (id == "gap") {
    auto fig4 = strong_sweep({0.9, 0.1}, 2);
    auto fig5 = strong_sweep({0.5, 0.5}, 5);
    for (auto* sweep : {&fig4, &fig5}) {
      sweep->erase("mc_replications");
      sweep->erase("log_base");
    }
    return {{"fig4", fig4}, {"fig5", fig5}, {"log_bases", {"natural", "base2"}}};
  }
  throw InvalidInput("unknown experiment '" + id + "'");
}

void merge_checked(json& target, const json& overrides, const std::string& path) {
  if (!overrides.is_object()) throw InvalidInput(path + ": expected an object");
  for (const auto& [key, value] : overrides.items()) {
    if (!target.contains(key)) throw InvalidInput(path + "/" + key + ": unknown key");
    if (target[key].is_object() && value.is_object() && !target[key].contains("from"))
      merge_checked(target[key], value, path + "/" + key);
    else
      target[key] = value;
  }
}

// Number list from an array or a {"from", "to", "step"} range.
std::vector<double> sweep(const json& j, const std::string& name) {
  std::vector<double> out;
  if (j.is_number()) {
    out.push_back(j.get<double>());
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (!v.is_number()) throw InvalidInput(name + ": expected numbers");
      out.push_back(v.get<double>());
    }
  } else if (j.is_object()) {
    const double from = j.at("from").get<double>();
    const double to = j.at("to").get<double>();
    const double step = j.at("step").get<double>();
    if (!(step > 0.0) || !(to >= from)) throw InvalidInput(name + ": need step > 0 and to >= from");
    const auto n = static_cast<std::size_t>(std::floor((to - from) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < n; ++i) out.push_back(from + step * static_cast<double>(i));
  }
  if (out.empty()) throw InvalidInput(name + ": sweep must be nonempty");
  return out;
}

std::vector<double> numbers(const json& j) { return j.get<std::vector<double>>(); }

LogBase base_of(const json& j) { return parse_log_base(j.get<std::string>()); }

StrongScenario strong_from(const json& p, double r_dir, LogBase base) {
  StrongScenario s{TypeSpace::with_probs(numbers(p.at("thetas")), numbers(p.at("probs")),
                                         p.at("population").get<Count>()),
                   PUParams{r_dir, 1.0, base}, {}, {}};
  s.exhaustive.points_per_dim = p.at("points_per_dim").get<std::size_t>();
  s.validate();
  return s;
}

Table fig2(const ExperimentSpec& spec, unsigned threads) {
  const auto& p = spec.params;
  const double theta = p.at("theta").get<double>();
  const auto rates = sweep(p.at("r_dir"), "r_dir");
  const auto times = sweep(p.at("total_time"), "total_time");
  const auto base = base_of(p.at("log_base"));

  Table t{{"r_dir", "total_time", "utility", "is_optimum"}, {}, {}, {}};
  const auto blocks = parallel_map(
      rates.size(),
      [&](std::size_t i) {
        const PUParams pu{rates[i], 1.0, base};
        const auto f = RelayMixture::single_type(theta, pu);
        std::vector<double> values(times.size());
        f.evaluate(times, values);
        const auto best = std::max_element(values.begin(), values.end()) - values.begin();
        std::vector<std::vector<double>> rows;
        for (std::size_t j = 0; j < times.size(); ++j)
          rows.push_back({rates[i], times[j], values[j], j == std::size_t(best) ? 1.0 : 0.0});
        return rows;
      },
      threads);
  for (const auto& b : blocks) t.rows.insert(t.rows.end(), b.begin(), b.end());
  return t;
}

Table fig3(const ExperimentSpec& spec, unsigned threads) {
  const auto& p = spec.params;
  const auto thetas = sweep(p.at("theta_k"), "theta_k");
  const auto rates = sweep(p.at("r_dir"), "r_dir");
  const auto base = base_of(p.at("log_base"));

  Table t{{"theta_k", "r_dir", "relay_value", "total_time", "baseline", "optimal_value", "relay"},
          {}, {}, {}};
  t.rows = parallel_map(
      thetas.size() * rates.size(),
      [&](std::size_t i) {
        const double theta = thetas[i / rates.size()];
        const PUParams pu{rates[i % rates.size()], 1.0, base};
        const auto opt = maximize_scalar({theta, pu, {}});
        const bool relay = relay_or_direct(opt.value, pu) == Decision::relay;
        return std::vector<double>{theta, pu.r_dir, opt.value, opt.argmax, pu.r_dir,
                                   relay ? opt.value : pu.r_dir, relay ? 1.0 : 0.0};
      },
      threads);
  return t;
}

Table heuristic_sweep(const ExperimentSpec& spec, unsigned threads) {
  const auto& p = spec.params;
  const auto rates = sweep(p.at("r_dir"), "r_dir");
  const auto base = base_of(p.at("log_base"));
  const auto reps = p.at("mc_replications").get<std::size_t>();
  const std::size_t k = p.at("thetas").size();

  Table t;
  t.columns.push_back("r_dir");
  for (std::size_t c = 0; c < k; ++c) t.columns.push_back("candidate_" + std::to_string(c + 1));
  for (const char* c : {"heuristic", "exhaustive", "relative_gap", "chosen", "mc_mean", "mc_se"})
    t.columns.push_back(c);

  // Sweep points run concurrently; the Monte Carlo inside each stays serial.
  t.rows = parallel_map(
      rates.size(),
      [&](std::size_t i) {
        const auto s = strong_from(p, rates[i], base);
        const auto dc = decompose_and_compare(s);
        const auto ex = exhaustive_search(s);
        const auto mc = monte_carlo_utility(dc.report.contract, s.types, s.pu, reps,
                                            derive_seed(spec.seed, i), 1);
        std::vector<double> row{rates[i]};
        row.insert(row.end(), dc.candidate_values.begin(), dc.candidate_values.end());
        const double h = dc.report.pu_value;
        const double e = ex.pu_value;
        for (double v : {h, e, (e - h) / e, double(dc.chosen + 1), mc.mean, mc.std_error})
          row.push_back(v);
        return row;
      },
      threads);
  return t;
}

Table fig6(const ExperimentSpec& spec, unsigned) {
  const auto& p = spec.params;
  const auto s = strong_from(p, p.at("r_dir").get<double>(), base_of(p.at("log_base")));
  const auto ex = exhaustive_search(s);
  const auto dc = decompose_and_compare(s);
  const auto bench = complete_info_benchmark(s);

  Table t;
  for (std::size_t c = 0; c < s.types.size(); ++c) t.columns.push_back("n_" + std::to_string(c + 1));
  for (const char* c : {"probability", "strong_optimal", "strong_heuristic", "complete"})
    t.columns.push_back(c);
  // Order by the count of the highest type, as in the per-realization plot.
  auto outcomes = bench.outcomes;
  std::stable_sort(outcomes.begin(), outcomes.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.counts.rbegin(), a.counts.rend(), b.counts.rbegin(),
                                        b.counts.rend());
  });
  for (const auto& o : outcomes) {
    std::vector<double> row(o.counts.begin(), o.counts.end());
    row.push_back(o.probability);
    row.push_back(realized_utility_under_strong_contract(ex.contract, o.counts, s.pu));
    row.push_back(realized_utility_under_strong_contract(dc.report.contract, o.counts, s.pu));
    row.push_back(o.utility);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table ratio(const ExperimentSpec& spec, unsigned threads) {
  const auto& p = spec.params;
  const auto bases = p.at("log_bases").get<std::vector<std::string>>();
  if (bases.empty()) throw InvalidInput("log_bases: must be nonempty");
  Table t{{"strong_optimal", "complete_average", "ratio", "loss", "strong_heuristic",
           "grid_t_max"},
          {}, "log_base", bases};
  t.rows = parallel_map(
      bases.size(),
      [&](std::size_t i) {
        const auto s = strong_from(p, p.at("r_dir").get<double>(), parse_log_base(bases[i]));
        const auto ex = exhaustive_search(s);
        const double avg = complete_info_benchmark(s).average;
        const double r = ex.pu_value / avg;
        return std::vector<double>{ex.pu_value, avg, r, 1.0 - r,
                                   decompose_and_compare(s).report.pu_value,
                                   ex.diagnostics.at("grid_t_max")};
      },
      threads);
  return t;
}

Table gap(const ExperimentSpec& spec, unsigned threads) {
  const auto& p = spec.params;
  const auto bases = p.at("log_bases").get<std::vector<std::string>>();
  struct Point {
    std::string sweep;
    std::string base;
    double r_dir;
  };
  std::vector<Point> points;
  for (const char* name : {"fig4", "fig5"})
    for (const auto& b : bases)
      for (double r : sweep(p.at(name).at("r_dir"), "r_dir")) points.push_back({name, b, r});

  Table t{{"r_dir", "heuristic", "exhaustive", "relative_gap"}, {}, "sweep", {}};
  t.rows = parallel_map(
      points.size(),
      [&](std::size_t i) {
        const auto& pt = points[i];
        const auto s = strong_from(p.at(pt.sweep), pt.r_dir, parse_log_base(pt.base));
        const double h = decompose_and_compare(s).report.pu_value;
        const double e = exhaustive_search(s).pu_value;
        return std::vector<double>{pt.r_dir, h, e, (e - h) / e};
      },
      threads);
  for (const auto& pt : points) t.labels.push_back(pt.sweep + ":" + to_string(parse_log_base(pt.base)));
  return t;
}

}  // namespace

ExperimentSpec default_experiment(const std::string& id, std::uint64_t seed) {
  return {id, seed, default_params(id)};
}

void apply_overrides(ExperimentSpec& spec, const json& overrides) {
  merge_checked(spec.params, overrides, "");
}

std::size_t Table::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw InvalidInput("no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

Table run_experiment(const ExperimentSpec& spec, unsigned threads) {
  if (threads == 0) threads = default_threads();
  try {
    if (spec.id == "fig2") return fig2(spec, threads);
    if (spec.id == "fig3") return fig3(spec, threads);
    if (spec.id == "fig4" || spec.id == "fig5") return heuristic_sweep(spec, threads);
    if (spec.id == "fig6") return fig6(spec, threads);
    if (spec.id == "ratio") return ratio(spec, threads);
    if (spec.id == "gap") return gap(spec, threads);
  } catch (const json::exception& e) {
    throw InvalidInput("experiment " + spec.id + " params: " + e.what());
  }
  throw InvalidInput("unknown experiment '" + spec.id + "'");
}

void write_table(std::ostream& out, const ExperimentSpec& spec, const Table& table) {
  csv::Writer w(out);
  w.comment("experiment=" + spec.id + " seed=" + std::to_string(spec.seed) +
            " config_hash=" + spec.config_hash());
  w.comment("params=" + spec.params.dump());
  std::vector<std::string> header;
  if (!table.label_column.empty()) header.push_back(table.label_column);
  header.insert(header.end(), table.columns.begin(), table.columns.end());
  w.row(header);
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    std::vector<std::string> fields;
    if (!table.label_column.empty()) fields.push_back(table.labels[i]);
    for (double v : table.rows[i]) fields.push_back(csv::number(v));
    w.row(fields);
  }
}

}  // namespace specshare
