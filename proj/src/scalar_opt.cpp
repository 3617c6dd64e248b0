#include "specshare/scalar_opt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace specshare {

void GridOptions::validate() const {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InvalidInput("t_max must be > 0");
  if (!(t_max_cap >= t_max)) throw InvalidInput("t_max_cap must be >= t_max");
  if (grid_points < 1000) throw InvalidInput("grid_points must be >= 1000");
  if (!(refine_tol > 0.0)) throw InvalidInput("refine_tol must be > 0");
}

double ScalarObjective::value(double x) const {
  double out = 0.0;
  evaluate(std::span<const double>(&x, 1), std::span<double>(&out, 1));
  return out;
}

std::optional<double> ScalarObjective::derivative(double) const {
  return std::nullopt;
}

RelayMixture::RelayMixture(const PUParams& pu, std::vector<Term> terms)
    : h_(0.5 * pu.r_dir), s_(0.5 * pu.log_scale()), terms_(std::move(terms)) {
  pu.validate();
  for (const auto& t : terms_)
    if (!(t.a >= 0.0 && t.b >= 0.0 && t.weight >= 0.0))
      throw InvalidInput("mixture terms need nonnegative weight and slopes");
}

RelayMixture RelayMixture::single_type(double theta, const PUParams& pu) {
  if (!(theta > 0.0)) throw InvalidInput("theta must be > 0");
  return RelayMixture(pu, {{1.0, theta / pu.n0, 1.0}});
}

void RelayMixture::evaluate(std::span<const double> xs, std::span<double> out) const {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& t : terms_) {
    if (t.weight == 0.0) continue;
    kernels::accumulate_linear(xs, {h_, s_, t.a, t.b, t.weight}, out);
  }
}

double RelayMixture::value(double x) const {
  double sum = 0.0;
  for (const auto& t : terms_)
    sum += t.weight * (h_ + s_ * std::log1p(t.a * x)) / (1.0 + t.b * x);
  return sum;
}

std::optional<double> RelayMixture::derivative(double x) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    const double den = 1.0 + t.b * x;
    const double num = s_ * t.a * den / (1.0 + t.a * x) - t.b * (h_ + s_ * std::log1p(t.a * x));
    sum += t.weight * num / (den * den);
  }
  return sum;
}

void FunctionObjective::evaluate(std::span<const double> xs, std::span<double> out) const {
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = fn_(xs[i]);
}

namespace {

struct Point {
  double x;
  double v;
};

bool better(const Point& a, const Point& b) {
  return a.v > b.v || (a.v == b.v && a.x < b.x);
}

Point golden_section(const ScalarObjective& f, double lo, double hi, Point seed, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  Point best = seed;
  auto consider = [&](double x, double v) {
    if (better({x, v}, best)) best = {x, v};
  };
  consider(lo, f.value(lo));
  consider(hi, f.value(hi));

  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f.value(c);
  double fd = f.value(d);
  consider(c, fc);
  consider(d, fd);
  for (int iter = 0; iter < 200 && b - a > tol; ++iter) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f.value(c);
      consider(c, fc);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f.value(d);
      consider(d, fd);
    }
  }
  return best;
}

// Stationary point of f in [lo, hi] when f' changes sign from + to -.
std::optional<Point> derivative_polish(const ScalarObjective& f, double lo, double hi) {
  const auto dlo = f.derivative(lo);
  const auto dhi = f.derivative(hi);
  if (!dlo || !dhi || !(*dlo > 0.0) || !(*dhi < 0.0)) return std::nullopt;
  double a = lo;
  double b = hi;
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double d = *f.derivative(mid);
    if (d > 0.0) {
      a = mid;
    } else if (d < 0.0) {
      b = mid;
    } else {
      a = b = mid;
      break;
    }
  }
  const double x = 0.5 * (a + b);
  return Point{x, f.value(x)};
}

}  // namespace

ScalarOptimum maximize_on_grid(const ScalarObjective& f, const GridOptions& options) {
  options.validate();
  const std::size_t n = options.grid_points;
  std::vector<double> xs(n);
  std::vector<double> vals(n);
  const auto edge = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(n - 1)));

  double t_max = options.t_max;
  std::size_t best = 0;
  for (;;) {
    for (std::size_t i = 0; i < n; ++i)
      xs[i] = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
    f.evaluate(xs, vals);
    best = 0;
    for (std::size_t i = 1; i < n; ++i)
      if (vals[i] > vals[best]) best = i;
    if (best < edge || 2.0 * t_max > options.t_max_cap) break;
    t_max *= 2.0;
  }

  ScalarOptimum result;
  result.t_max_used = t_max;
  result.hit_upper_bound = best >= edge;

  // Best three cells; left-to-right order breaks ties.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t starts = std::min<std::size_t>(3, n);
  std::partial_sort(order.begin(), order.begin() + starts, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return vals[a] > vals[b] || (vals[a] == vals[b] && a < b);
                    });

  Point overall{xs[best], vals[best]};
  for (std::size_t s = 0; s < starts; ++s) {
    const std::size_t c = order[s];
    const double lo = xs[c == 0 ? 0 : c - 1];
    const double hi = xs[std::min(c + 1, n - 1)];
    Point local = golden_section(f, lo, hi, {xs[c], f.value(xs[c])}, options.refine_tol);
    if (auto polished = derivative_polish(f, lo, hi);
        polished && polished->v >= local.v - 1e-14 * std::abs(local.v)) {
      local = *polished;
    }
    if (better(local, overall)) overall = local;
  }
  result.argmax = overall.x;
  result.value = overall.v;
  return result;
}

ScalarOptimum maximize_scalar(const ScalarProblem& problem) {
  return maximize_on_grid(RelayMixture::single_type(problem.theta, problem.pu), problem.grid);
}

double foc_residual_rdir0(double theta, double total_time) {
  const double z = theta * total_time;
  return theta * (1.0 + total_time) - (1.0 + z) * std::log1p(z);
}

double solve_foc_rdir0(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta)) throw InvalidInput("theta must be > 0");
  // F(theta, 0) = theta > 0 and F is strictly decreasing in T on (0, inf).
  double lo = 0.0;
  double hi = 1.0;
  while (foc_residual_rdir0(theta, hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  for (int iter = 0; iter < 2000; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (foc_residual_rdir0(theta, mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Decision relay_or_direct(double f_star, const PUParams& pu) {
  return f_star > pu.r_dir ? Decision::relay : Decision::direct_only;
}

}  // namespace specshare
