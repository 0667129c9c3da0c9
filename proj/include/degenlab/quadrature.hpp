#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>

#include "degenlab/errors.hpp"

namespace degenlab {

template <class Scalar = double>
struct IntegralResult {
  Scalar value = 0;
  bool divergent = false;
  int levels = 0;  // dyadic panels consumed
};

/// Adaptive 15-point Gauss-Kronrod over a finite interval with an integrand regular on [a, b].
template <class Scalar = double, class F>
Scalar integrate(F&& f, Scalar a, Scalar b, Scalar tol = Scalar(1e-13)) {
  if (a == b) return Scalar(0);
  // Mapped onto [-1, 1] by hand: the library's own affine map stalls at full depth on short
  // intervals away from 0.
  const Scalar c = (a + b) / 2;
  const Scalar h = (b - a) / 2;
  const auto mapped = [&](Scalar x) { return f(c + h * x); };
  return h * boost::math::quadrature::gauss_kronrod<Scalar, 15>::integrate(mapped, Scalar(-1), Scalar(1), 15, tol);
}

namespace detail {
inline constexpr int kMaxDyadicLevels = 1000;
inline constexpr double kDivergenceOnset = 1e-12;   // lower/upper ratio after which growth is judged
inline constexpr double kGrowthFraction = 0.01;     // per-level growth above this counts as "still growing"
inline constexpr int kGrowthRun = 5;
}  // namespace detail

/// Integral of a nonnegative g over (0, upper] with g possibly singular at 0.
///
/// The lower limit is pushed toward 0 by halving; each panel [upper 2^{-k-1}, upper 2^{-k}] is
/// integrated by Gauss-Kronrod. Once the lower limit has dropped below 1e-12 * upper, five
/// consecutive panels each adding more than 1% of the running total flag the integral divergent.
/// Refinement stops when a panel no longer changes the total in working precision.
template <class Scalar = double, class G>
IntegralResult<Scalar> integrate_from_zero(G&& g, Scalar upper) {
  using std::isfinite;
  if (!(upper > 0)) throw DomainError("integrate_from_zero: upper limit must be positive");
  const auto checked = [&g](Scalar t) {
    const Scalar v = g(t);
    if (v < 0) throw ContractViolation("integrand must be nonnegative");
    return v;
  };
  IntegralResult<Scalar> out;
  Scalar hi = upper;
  int growth_run = 0;
  int quiet_run = 0;
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  for (int k = 0; k < detail::kMaxDyadicLevels; ++k) {
    const Scalar lo = hi / 2;
    if (!(lo > std::numeric_limits<Scalar>::min())) break;
    const Scalar panel = integrate<Scalar>(checked, lo, hi);
    out.levels = k + 1;
    if (!isfinite(panel)) {
      out.value = std::numeric_limits<Scalar>::infinity();
      out.divergent = true;
      return out;
    }
    const Scalar before = out.value;
    out.value += panel;
    if (lo / upper <= Scalar(detail::kDivergenceOnset)) {
      growth_run = (panel > Scalar(detail::kGrowthFraction) * before) ? growth_run + 1 : 0;
      if (growth_run >= detail::kGrowthRun) {
        out.divergent = true;
        out.value = std::numeric_limits<Scalar>::infinity();
        return out;
      }
    }
    quiet_run = (panel <= eps * out.value / 4) ? quiet_run + 1 : 0;
    if (quiet_run >= 3) break;
    hi = lo;
  }
  return out;
}

}  // namespace degenlab
