#include "degenlab/weights.hpp"

#include <algorithm>
#include <limits>

namespace degenlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// int_{t0}^{t1} t^p dt with 0 <= t0 <= t1.
IntegralResult<double> power_integral(double p, double t0, double t1) {
  IntegralResult<double> out;
  if (t1 <= t0) return out;
  if (p == 0.0) {
    out.value = t1 - t0;
    return out;
  }
  const auto g = [p](double t) { return std::pow(t, p); };
  if (t0 == 0.0) return integrate_from_zero<double>(g, t1);
  out.value = integrate<double>(g, t0, t1);
  return out;
}

}  // namespace

A2Result a2_product(const PowerWeight<double>& pw, double s) {
  if (!(s > 0)) throw DomainError("a2_product needs s > 0");
  const double beta = pw.beta();
  if (!(std::abs(beta) < 1.0)) return {kInf, true};
  return {1.0 / ((1.0 + beta) * (1.0 - beta)), false};
}

IntegralResult<double> dyadic_power_average(const Domain& dom, double p, double x0, double x1) {
  if (dom.kind() != DomainKind::interval) throw ConfigurationError("dyadic averages need an interval domain");
  if (!(x1 > x0) || x0 < dom.a() || x1 > dom.b()) throw DomainError("averaging interval outside the domain");
  IntegralResult<double> out;
  if (p == 0.0) {
    out.value = 1.0;
    return out;
  }
  const double mid = 0.5 * (dom.a() + dom.b());
  double total = 0.0;
  if (x0 < mid) {
    const auto left = power_integral(p, x0 - dom.a(), std::min(x1, mid) - dom.a());
    if (left.divergent) return {kInf, true, left.levels};
    total += left.value;
  }
  if (x1 > mid) {
    const auto right = power_integral(p, dom.b() - x1, dom.b() - std::max(x0, mid));
    if (right.divergent) return {kInf, true, right.levels};
    total += right.value;
  }
  out.value = total / (x1 - x0);
  return out;
}

A2Scan a2_supremum_estimate(const PowerWeight<double>& pw, const Domain& dom, int depth) {
  if (dom.kind() != DomainKind::interval) throw ConfigurationError("A2 scan is implemented for 1-D domains");
  if (depth < 4) throw ConfigurationError("A2 scan needs depth >= 4");
  const double beta = pw.beta();
  A2Scan scan;
  double best = 0.0;
  const double length = dom.b() - dom.a();
  for (int level = 0; level <= depth; ++level) {
    const long count = 1L << level;
    for (long k = 0; k < count && !scan.divergent; ++k) {
      const double x0 = dom.a() + length * (static_cast<double>(k) / count);
      const double x1 = (k + 1 == count) ? dom.b() : dom.a() + length * (static_cast<double>(k + 1) / count);
      double product = 1.0;
      if (beta != 0.0) {
        const auto plus = dyadic_power_average(dom, beta, x0, x1);
        const auto minus = dyadic_power_average(dom, -beta, x0, x1);
        if (plus.divergent || minus.divergent) {
          scan.divergent = true;
          break;
        }
        product = plus.value * minus.value;
      }
      best = std::max(best, product);
    }
    scan.running_max.push_back(scan.divergent ? kInf : best);
    if (scan.divergent) break;
  }
  const auto& m = scan.running_max;
  if (!scan.divergent && m.size() >= 3 && m.back() > 1.05 * m[m.size() - 3]) scan.divergent = true;
  scan.value = scan.divergent ? kInf : m.back();
  return scan;
}

GeneralWeight::GeneralWeight(Profile profile, Gradient gradient, double beta, double bound)
    : profile_(std::move(profile)), gradient_(std::move(gradient)), beta_(beta), bound_(bound) {
  if (!profile_ || !gradient_) throw ConfigurationError("general weight needs a profile and its gradient");
  if (!(beta < 1.0)) throw DomainError("general weight requires beta < 1");
  if (!(bound >= 1.0)) throw ConfigurationError("gradient bound C must be >= 1");
}

double GeneralWeight::operator()(const Point& x, double d) const {
  const double rho = profile_(x, d);
  if (!(rho > 0)) throw DomainError("general weight profile must be positive away from the boundary");
  if (beta_ == 0.0) return 1.0;
  return std::pow(rho, beta_);
}

WeightCheck check_general_weight(const GeneralWeight& w, const Domain& dom, double sigma) {
  const TubularNeighborhood nbhd(dom, sigma);
  constexpr int kDepthSamples = 64;
  constexpr int kTangentSamples = 9;
  constexpr double kTol = 1e-8;

  std::vector<std::pair<Point, double>> lattice;
  for (int k = 1; k <= kDepthSamples; ++k) {
    const double d = nbhd.sigma() * k / (kDepthSamples + 1.0);
    switch (dom.kind()) {
      case DomainKind::interval:
        lattice.emplace_back(Point::Constant(1, dom.a() + d), d);
        lattice.emplace_back(Point::Constant(1, dom.b() - d), d);
        break;
      case DomainKind::ball:
        for (int axis = 0; axis < dom.dimension(); ++axis) {
          for (double sign : {1.0, -1.0}) {
            Point x = Point::Zero(dom.dimension());
            x(axis) = sign * (dom.radius() - d);
            lattice.emplace_back(x, d);
          }
        }
        break;
      case DomainKind::rectangle:
        for (int j = 1; j <= kTangentSamples; ++j) {
          const double s = static_cast<double>(j) / (kTangentSamples + 1);
          // Stay off the corner diagonals.
          const double tx = dom.lx() * (0.25 + 0.5 * s);
          const double ty = dom.ly() * (0.25 + 0.5 * s);
          lattice.emplace_back((Point(2) << tx, d).finished(), d);
          lattice.emplace_back((Point(2) << tx, dom.ly() - d).finished(), d);
          lattice.emplace_back((Point(2) << d, ty).finished(), d);
          lattice.emplace_back((Point(2) << dom.lx() - d, ty).finished(), d);
        }
        break;
    }
  }

  WeightCheck check;
  check.ok = true;
  check.min_profile = kInf;
  check.min_grad_sq = kInf;
  check.max_grad_sq = 0.0;
  const double c = w.bound();
  for (const auto& [x, d] : lattice) {
    const double rho = w.profile(x, d);
    const double g2 = w.gradient(x, d).squaredNorm();
    check.min_profile = std::min(check.min_profile, rho);
    check.min_grad_sq = std::min(check.min_grad_sq, g2);
    check.max_grad_sq = std::max(check.max_grad_sq, g2);
    if (!(rho > 0) || g2 < 1.0 / c - kTol || g2 > c + kTol) check.ok = false;
    ++check.samples;
  }
  return check;
}

}  // namespace degenlab
