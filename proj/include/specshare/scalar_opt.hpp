#pragma once

// Global maximization of one-dimensional PU objectives on [0, t_max].
//
// The objectives here are sums of terms (h + s log(1 + a x)) / (1 + b x), which
// need not be concave, so the search is a dense grid followed by local
// refinement around the best few cells.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "specshare/kernels.hpp"
#include "specshare/model.hpp"

namespace specshare {

struct GridOptions {
  double t_max = 100.0;
  /// t_max doubles while the grid argmax sits in the last 1% of the interval.
  double t_max_cap = 1600.0;
  std::size_t grid_points = 10000;
  double refine_tol = 1e-9;

  void validate() const;
};

struct ScalarOptimum {
  double argmax = 0.0;
  double value = 0.0;
  double t_max_used = 0.0;
  /// The maximizer is still at the right edge after expanding to t_max_cap.
  bool hit_upper_bound = false;
};

/// A function of one nonnegative variable that can be evaluated in batches.
class ScalarObjective {
 public:
  virtual ~ScalarObjective() = default;
  /// out[i] = f(xs[i]); out has the same size as xs.
  virtual void evaluate(std::span<const double> xs, std::span<double> out) const = 0;
  virtual double value(double x) const;
  /// f'(x) when available in closed form.
  virtual std::optional<double> derivative(double x) const;
};

/// sum_j w_j (h + s ln(1 + a_j x)) / (1 + b_j x)
class RelayMixture final : public ScalarObjective {
 public:
  struct Term {
    double weight;
    double a;
    double b;
  };

  RelayMixture(const PUParams& pu, std::vector<Term> terms);

  /// f(T) = (R_dir/2 + 1/2 log(1 + theta T / n0)) / (1 + T)
  static RelayMixture single_type(double theta, const PUParams& pu);

  void evaluate(std::span<const double> xs, std::span<double> out) const override;
  double value(double x) const override;
  std::optional<double> derivative(double x) const override;

  std::span<const Term> terms() const { return terms_; }

 private:
  double h_;
  double s_;
  std::vector<Term> terms_;
};

/// Wraps a plain callable; evaluated point by point, no derivative.
class FunctionObjective final : public ScalarObjective {
 public:
  explicit FunctionObjective(std::function<double(double)> fn) : fn_(std::move(fn)) {}
  void evaluate(std::span<const double> xs, std::span<double> out) const override;
  double value(double x) const override { return fn_(x); }

 private:
  std::function<double(double)> fn_;
};

/// Uniform grid over [0, t_max], then golden-section search on the
/// neighborhoods of the three best grid cells, polished by bisection on f'
/// when the objective provides it. Among equal maxima the smallest argument
/// wins. x = 0 is a legal answer.
ScalarOptimum maximize_on_grid(const ScalarObjective& objective, const GridOptions& options = {});

struct ScalarProblem {
  double theta = 1.0;
  PUParams pu;
  GridOptions grid;
};

/// Maximizes f(T) = (R_dir/2 + 1/2 log(1 + theta T / n0)) / (1 + T) over T >= 0.
ScalarOptimum maximize_scalar(const ScalarProblem& problem);

/// F(theta, T) = theta (1 + T) - (1 + theta T) ln(1 + theta T)
double foc_residual_rdir0(double theta, double total_time);

/// Unique positive root of F(theta, .) -- the maximizer of f when R_dir = 0
/// (theta taken relative to n0 = 1).
double solve_foc_rdir0(double theta);

/// relay iff f_star > R_dir; ties go to direct transmission.
Decision relay_or_direct(double f_star, const PUParams& pu);

}  // namespace specshare
