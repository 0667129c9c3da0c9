#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "degenlab/errors.hpp"
#include "degenlab/geometry.hpp"

namespace degenlab {

/// The weight d^beta, beta < 1. Degenerate at the boundary for beta > 0, singular for beta < 0.
template <class Scalar = double>
class PowerWeight {
 public:
  explicit PowerWeight(Scalar beta) : beta_(beta) {
    if (!(beta < Scalar(1))) throw DomainError("power weight requires beta < 1");
  }

  Scalar beta() const noexcept { return beta_; }
  /// d^beta is a Muckenhoupt A2 weight exactly for -1 < beta < 1.
  bool in_a2() const noexcept { return beta_ > Scalar(-1) && beta_ < Scalar(1); }

 private:
  Scalar beta_;
};

template <class Scalar>
Scalar eval_weight(const PowerWeight<Scalar>& pw, Scalar d) {
  using std::pow;
  if (!(d > Scalar(0))) throw DomainError("weight evaluated at d <= 0");
  if (pw.beta() == Scalar(0)) return Scalar(1);
  return pow(d, pw.beta());
}

/// A2 product of averages of t^beta and t^-beta; `value` is +inf when `divergent`.
struct A2Result {
  double value = 0.0;
  bool divergent = false;
};

/// Closed form of (avg_{(0,s)} t^beta)(avg_{(0,s)} t^-beta) = 1/((1+beta)(1-beta)), independent of s.
A2Result a2_product(const PowerWeight<double>& pw, double s);

struct A2Scan {
  std::vector<double> running_max;  // sup over dyadic intervals down to level j, j = 0..depth
  double value = 0.0;
  bool divergent = false;
};

/// Sup of the A2 product of d^beta over dyadic subintervals of a 1-D domain down to scale
/// 2^-depth. An estimate of the A2 constant (dyadic intervals only, not all balls).
A2Scan a2_supremum_estimate(const PowerWeight<double>& pw, const Domain& dom, int depth);

/// Average of d^p over [x0, x1] inside an interval domain; +inf when non-integrable at the boundary.
IntegralResult<double> dyadic_power_average(const Domain& dom, double p, double x0, double x1);

/// Distance-like profile rho replacing d in the weight rho^beta.
///
/// rho is C^2, positive inside a boundary neighbourhood and free of critical points on the
/// boundary, so 1/C <= |grad rho|^2 <= C there. Profiles receive both the point and its exact
/// distance, so they can be written in whichever variable is accurate near the boundary.
class GeneralWeight {
 public:
  using Profile = std::function<double(const Point&, double)>;
  using Gradient = std::function<Point(const Point&, double)>;

  GeneralWeight(Profile profile, Gradient gradient, double beta, double bound);

  double beta() const noexcept { return beta_; }
  double bound() const noexcept { return bound_; }
  double profile(const Point& x, double d) const { return profile_(x, d); }
  Point gradient(const Point& x, double d) const { return gradient_(x, d); }
  /// rho(x)^beta; rho must be positive at x.
  double operator()(const Point& x, double d) const;

 private:
  Profile profile_;
  Gradient gradient_;
  double beta_;
  double bound_;
};

struct WeightCheck {
  bool ok = false;
  double min_profile = 0.0;
  double min_grad_sq = 0.0;
  double max_grad_sq = 0.0;
  int samples = 0;
};

/// Samples a fixed lattice in Gamma_sigma (minus the boundary) and checks rho > 0 and
/// 1/C - 1e-8 <= |grad rho|^2 <= C + 1e-8.
WeightCheck check_general_weight(const GeneralWeight& w, const Domain& dom, double sigma);

}  // namespace degenlab
