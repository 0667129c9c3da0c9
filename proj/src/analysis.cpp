#include "degenlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace degenlab {

using Eigen::Index;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMinFitNodes = 8;
constexpr std::size_t kResolvedNode = 10;

double resolved_distance(const Grid& grid) {
  const auto line = grid.inward_line();
  if (line.size() <= kResolvedNode) throw InsufficientData("inward line shorter than 10 nodes");
  return grid.distance(line[kResolvedNode]);
}

struct Sample {
  double d;
  double u;
};

std::vector<Sample> window_samples(const DiscreteField& field, double d_min, double d_max) {
  const Grid& g = field.mesh();
  std::vector<Sample> out;
  for (Index k : g.inward_line()) {
    const double d = g.distance(k);
    if (d >= d_min && d <= d_max) out.push_back({d, field.values(k)});
  }
  return out;
}

void check_window(const Grid& grid, const Window& w) {
  if (!(w.d_min > 0.0) || !(w.d_min < w.d_max)) throw ContractViolation("window needs 0 < d_min < d_max");
  if (w.d_min < 10.0 * grid.first_cell() * (1.0 - 1e-12))
    throw ContractViolation("window starts inside the first 10 cells of the mesh");
}

}  // namespace

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) throw InsufficientData("line fit needs at least two points");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InsufficientData("line fit with a single abscissa");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

double correlation(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return 0.0;
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

Window default_window(const Grid& grid, double sigma) {
  if (!(sigma > 0.0)) sigma = default_sigma(grid.domain());
  Window w;
  w.d_min = std::max(resolved_distance(grid), 1e-6);
  w.d_max = std::min(sigma, std::max(1e-2, 4.0 * w.d_min));
  return w;
}

RateReport boundary_rate_fit(const DiscreteField& field, const Window& window, double eta1, double eta2) {
  check_window(field.mesh(), window);
  std::vector<double> lx, ly;
  for (const Sample& s : window_samples(field, window.d_min, window.d_max)) {
    if (!(s.u > 0.0)) continue;
    lx.push_back(std::log(s.d));
    ly.push_back(std::log(s.u));
  }
  if (lx.size() < kMinFitNodes) throw InsufficientData("fewer than 8 positive nodes in the fit window");
  const LineFit f = fit_line(lx, ly);
  RateReport r;
  r.alpha_hat = f.slope;
  r.c_hat = std::exp(f.intercept);
  r.fit_window = window;
  r.nodes = static_cast<int>(lx.size());
  for (std::size_t i = 0; i < lx.size(); ++i)
    r.residual = std::max(r.residual, std::abs(ly[i] - (f.intercept + f.slope * lx[i])));
  if (!std::isfinite(r.alpha_hat)) throw InternalError("non-finite rate exponent");
  r.bracket.eta1 = eta1;
  r.bracket.eta2 = eta2;
  return r;
}

namespace {

struct Ratios {
  double lower = kInf;   // min u / (d^{1-beta} l^{-eta1})
  double upper = 0.0;    // max u / (d^{1-beta} l^{eta2})
  double plain = 0.0;    // max u / d^{1-beta}
  std::size_t count = 0;
};

Ratios bracket_ratios(const std::vector<Sample>& samples, double beta, double eta1, double eta2) {
  Ratios r;
  for (const Sample& s : samples) {
    const double l = -std::log(s.d);
    const double base = s.u / std::pow(s.d, 1.0 - beta);
    r.lower = std::min(r.lower, base * std::pow(l, eta1));
    r.upper = std::max(r.upper, base * std::pow(l, -eta2));
    r.plain = std::max(r.plain, base);
    ++r.count;
  }
  return r;
}

bool stable(double a, double b) {
  if (!(std::isfinite(a) && std::isfinite(b)) || !(a > 0.0) || !(b > 0.0)) return false;
  return std::abs(a - b) <= kBracketStability * std::max(a, b);
}

}  // namespace

BracketCheck log_bracket_check(const DiscreteField& field, double beta, double eta1, double eta2, const Window& window) {
  if (!(beta < 1.0)) throw DomainError("bracket requires beta < 1");
  if (eta1 < 0.0 || eta2 < 0.0) throw ConfigurationError("log exponents must be nonnegative");
  if (!(window.d_max < 1.0)) throw ContractViolation("bracket window must stay below d = 1");
  check_window(field.mesh(), window);
  const auto inner = window_samples(field, window.d_min, window.d_max);
  if (inner.size() < kMinFitNodes) throw InsufficientData("fewer than 8 nodes in the bracket window");
  const auto wide = window_samples(field, 0.5 * window.d_min, window.d_max);
  const Ratios a = bracket_ratios(inner, beta, eta1, eta2);
  const Ratios b = bracket_ratios(wide, beta, eta1, eta2);

  BracketCheck c;
  c.d1_hat = a.lower;
  c.d2_hat = a.upper;
  c.d1_halved = b.lower;
  c.d2_halved = b.upper;
  c.bracket_pass = stable(a.lower, b.lower) && stable(a.upper, b.upper);
  // Every supported domain is convex.
  c.convex_checked = true;
  c.d2_convex = a.plain;
  c.d2_convex_halved = b.plain;
  c.convex_pass = stable(a.plain, b.plain);
  c.pass = c.bracket_pass && (!c.convex_checked || c.convex_pass);
  return c;
}

std::vector<double> default_holder_scales(const Window& window, double ceiling) {
  std::vector<double> scales;
  for (int k = 0; k < 200; ++k) {
    const double r = std::ldexp(1.0, -k);
    if (r > window.d_max) continue;
    if (r < window.d_min) break;
    scales.push_back(r);
  }
  // Coarse meshes resolve few scales below d_max; borrow larger ones.
  double r = scales.empty() ? std::ldexp(1.0, std::ilogb(window.d_max)) : scales.front();
  while (scales.size() < 3 && 2.0 * r <= ceiling) {
    r *= 2.0;
    scales.insert(scales.begin(), r);
  }
  return scales;
}

namespace {

// Separation of nodes i and j of one mesh axis, without cancellation near the graded ends.
double separation(const Mesh& m, Index i, Index j, bool radial) {
  if (radial) return std::abs(m.offsets(i) - m.offsets(j));
  const Index half = m.n / 2;
  if ((i <= half) == (j <= half)) return std::abs(m.offsets(i) - m.offsets(j));
  return std::abs(m.nodes(i) - m.nodes(j));
}

// Farthest index along the axis from i in direction dir with separation <= r.
Index farthest_within(const Mesh& m, Index i, int dir, double r, bool radial) {
  Index lo = i, hi = dir > 0 ? m.size() - 1 : 0;
  if (separation(m, i, hi, radial) <= r) return hi;
  // invariant: lo within r, hi beyond r
  while (std::abs(hi - lo) > 1) {
    const Index mid = (lo + hi) / 2;
    if (separation(m, i, mid, radial) <= r) lo = mid;
    else hi = mid;
  }
  return lo;
}

Index nearest_boundary_node(const Grid& g, Index k) {
  const Mesh& mx = g.axis_x();
  switch (g.layout()) {
    case Layout::interval:
      return k <= mx.n / 2 ? 0 : mx.size() - 1;
    case Layout::radial:
      return mx.size() - 1;
    case Layout::tensor: {
      const Mesh& my = g.axis_y();
      const Index nx = mx.size();
      const Index i = k % nx, j = k / nx;
      if (mx.offsets(i) <= my.offsets(j)) return g.index(i <= mx.n / 2 ? 0 : nx - 1, j);
      return g.index(i, j <= my.n / 2 ? 0 : my.size() - 1);
    }
  }
  return 0;
}

}  // namespace

HolderReport holder_estimate(const DiscreteField& field, const std::vector<double>& scales, std::uint64_t seed,
                             int anchors) {
  if (scales.size() < 3) throw InsufficientData("Hölder fit needs at least three scales");
  for (std::size_t k = 0; k < scales.size(); ++k)
    if (!(scales[k] > 0.0)) throw ContractViolation("Hölder scales must be positive");
  const Grid& g = field.mesh();
  const Eigen::VectorXd& u = field.values;
  HolderReport rep;
  rep.scales = scales;
  if (u.size() == 0 || u.maxCoeff() == u.minCoeff()) {
    rep.lipschitz_or_better = true;
    rep.moduli.assign(scales.size(), 0.0);
    return rep;
  }

  // Boundary-normal pairs: node against its nearest boundary node at distance d.
  std::vector<std::pair<double, double>> normal;  // (d, |u - u_boundary|)
  for (Index k = 0; k < g.size(); ++k) {
    if (g.is_boundary(k)) continue;
    normal.emplace_back(g.distance(k), std::abs(u(k) - u(nearest_boundary_node(g, k))));
  }
  std::sort(normal.begin(), normal.end());
  std::vector<double> prefix(normal.size());
  double run = 0.0;
  for (std::size_t i = 0; i < normal.size(); ++i) prefix[i] = run = std::max(run, normal[i].second);

  const bool radial = g.layout() == Layout::radial;
  const bool tensor = g.layout() == Layout::tensor;
  const Mesh& mx = g.axis_x();
  const Mesh& my = g.axis_y();
  const Index nx = mx.size();
  std::mt19937_64 rng(seed);
  const auto draw = [&rng](std::uint64_t n) { return static_cast<Index>(rng() % n); };

  for (double r : scales) {
    double h = 0.0;
    const auto it = std::upper_bound(normal.begin(), normal.end(), std::make_pair(r, kInf));
    if (it != normal.begin()) h = prefix[static_cast<std::size_t>(it - normal.begin()) - 1];
    for (int a = 0; a < anchors; ++a) {
      const Index k = draw(static_cast<std::uint64_t>(g.size()));
      const int dir = (rng() & 1u) ? 1 : -1;
      Index partner;
      if (tensor && (rng() & 1u)) {
        const Index i = k % nx, j = k / nx;
        partner = g.index(i, farthest_within(my, j, dir, r, false));
      } else if (tensor) {
        const Index i = k % nx, j = k / nx;
        partner = g.index(farthest_within(mx, i, dir, r, false), j);
      } else {
        partner = farthest_within(mx, k, dir, r, radial);
      }
      h = std::max(h, std::abs(u(k) - u(partner)));
    }
    rep.moduli.push_back(h);
  }

  std::vector<double> lx, ly;
  for (std::size_t k = 0; k < scales.size(); ++k) {
    if (!(rep.moduli[k] > 0.0)) continue;
    lx.push_back(std::log(scales[k]));
    ly.push_back(std::log(rep.moduli[k]));
  }
  if (lx.size() < 2) {
    rep.lipschitz_or_better = true;
    return rep;
  }
  rep.alpha_hat = fit_line(lx, ly).slope;
  return rep;
}

double weighted_sobolev_norm(const DiscreteField& field, const Weight& weight, int order, int p) {
  if (p != 2) throw ConfigurationError("weighted Sobolev norm is implemented for p = 2");
  if (order != 0 && order != 1) throw ConfigurationError("weighted Sobolev norm order must be 0 or 1");
  const Grid& g = field.mesh();
  const Eigen::VectorXd& u = field.values;
  double total = 0.0;
  for (Index k = 0; k < g.size(); ++k) {
    if (u(k) == 0.0 || !(g.distance(k) > 0.0)) continue;
    total += g.dual_volume()(k) * eval_coefficient(weight, g.point(k), g.distance(k)) * u(k) * u(k);
  }
  if (order == 1) {
    for (const Face& f : g.faces()) {
      const double du = u(f.b) - u(f.a);
      if (du == 0.0) continue;
      total += eval_coefficient(weight, f.midpoint, f.distance) * f.cross * du * du / f.span;
    }
  }
  return std::sqrt(total);
}

std::string to_string(SobolevVerdict v) {
  switch (v) {
    case SobolevVerdict::finite:
      return "finite";
    case SobolevVerdict::log_divergent:
      return "log-divergent";
    case SobolevVerdict::power_divergent:
      return "power-divergent";
  }
  return "unknown";
}

std::vector<double> default_deltas(const Grid& grid) {
  const double floor = std::max(resolved_distance(grid), 1e-12);
  std::vector<double> deltas;
  for (int k = 3; k < 200; ++k) {
    const double d = std::ldexp(1.0, -k);
    if (d < floor) break;
    deltas.push_back(d);
  }
  return deltas;
}

double truncated_energy(const DiscreteField& field, double delta) {
  const Grid& g = field.mesh();
  const Eigen::VectorXd& u = field.values;
  double e = 0.0;
  for (const Face& f : g.faces()) {
    if (!(f.distance > delta)) continue;
    const double du = u(f.b) - u(f.a);
    e += f.cross * du * du / f.span;
  }
  return e;
}

SobolevReport truncated_energy_scan(const DiscreteField& field, const std::vector<double>& deltas) {
  if (deltas.size() < static_cast<std::size_t>(kVerdictPoints))
    throw InsufficientData("energy scan needs at least five deltas");
  for (std::size_t k = 1; k < deltas.size(); ++k)
    if (!(deltas[k] < deltas[k - 1])) throw ContractViolation("deltas must be strictly decreasing");
  SobolevReport rep;
  rep.deltas = deltas;
  for (double d : deltas) rep.truncated_energies.push_back(truncated_energy(field, d));
  const auto& e = rep.truncated_energies;
  for (std::size_t k = 1; k < e.size(); ++k)
    if (e[k] < e[k - 1]) throw InternalError("truncated energy decreased as delta decreased");

  const std::size_t first = e.size() - kVerdictPoints;
  if (!(e.back() > 0.0)) {
    rep.verdict = SobolevVerdict::finite;
    return rep;
  }
  std::vector<double> ld, le, neg_log, ev;
  bool small_increments = true;
  for (std::size_t k = first; k < e.size(); ++k) {
    if (!(e[k] > 0.0)) continue;
    ld.push_back(std::log(deltas[k]));
    le.push_back(std::log(e[k]));
    neg_log.push_back(-std::log(deltas[k]));
    ev.push_back(e[k]);
    if (k > first && e[k - 1] > 0.0 && (e[k] - e[k - 1]) / e[k - 1] >= kFiniteIncrement) small_increments = false;
  }
  if (ld.size() < 2) {
    rep.verdict = SobolevVerdict::finite;
    return rep;
  }
  rep.slope_hat = fit_line(ld, le).slope;
  rep.correlation = correlation(neg_log, ev);
  if (std::abs(rep.slope_hat) < kFiniteSlope && small_increments) rep.verdict = SobolevVerdict::finite;
  else if (rep.correlation > kLogCorrelation) rep.verdict = SobolevVerdict::log_divergent;
  else rep.verdict = SobolevVerdict::power_divergent;
  return rep;
}

Quotient hardy_quotient(const DiscreteField& field) {
  const Grid& g = field.mesh();
  const double delta = resolved_distance(g);
  const Eigen::VectorXd& u = field.values;
  double den = 0.0;
  for (Index k = 0; k < g.size(); ++k) {
    const double d = g.distance(k);
    if (!(d > delta) || u(k) == 0.0) continue;
    den += g.dual_volume()(k) * u(k) * u(k) / (d * d);
  }
  if (!(den > 0.0)) return {0.0, true};
  return {truncated_energy(field, delta) / den, false};
}

Quotient poincare_quotient(const DiscreteField& field, const Weight& weight) {
  const Grid& g = field.mesh();
  const Eigen::VectorXd& u = field.values;
  double num = 0.0;
  for (Index k = 0; k < g.size(); ++k) {
    if (u(k) == 0.0 || !(g.distance(k) > 0.0)) continue;
    num += g.dual_volume()(k) * eval_coefficient(weight, g.point(k), g.distance(k)) * u(k) * u(k);
  }
  double den = 0.0;
  for (const Face& f : g.faces()) {
    const double du = u(f.b) - u(f.a);
    if (du == 0.0) continue;
    den += eval_coefficient(weight, f.midpoint, f.distance) * f.cross * du * du / f.span;
  }
  if (!(num > 0.0) || !(den > 0.0)) return {0.0, true};
  return {num / den, false};
}

}  // namespace degenlab
