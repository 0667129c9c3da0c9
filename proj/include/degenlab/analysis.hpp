#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "degenlab/solver.hpp"

namespace degenlab {

/// Distance band (d_min, d_max) used by the boundary estimators.
struct Window {
  double d_min = 0.0;
  double d_max = 0.0;
};

/// d_min = max(distance of the 10th node on the inward line, 1e-6);
/// d_max = min(sigma, max(1e-2, 4 d_min)). sigma <= 0 selects default_sigma of the grid's domain.
Window default_window(const Grid& grid, double sigma = 0.0);

struct Bracket {
  double d1_hat = 0.0;
  double d2_hat = 0.0;
  double eta1 = 0.5;
  double eta2 = 0.5;
};

struct RateReport {
  double alpha_hat = 0.0;
  double c_hat = 0.0;
  Window fit_window;
  double residual = 0.0;  // max |log u - (log c + alpha log d)| over the fitted nodes
  Bracket bracket;
  int nodes = 0;
};

/// Least-squares fit of log u against log d over the inward-line nodes with d in the window.
/// Throws InsufficientData with fewer than 8 nodes in the window. The bracket constants are
/// left for log_bracket_check to fill; only the exponents are recorded here.
RateReport boundary_rate_fit(const DiscreteField& field, const Window& window, double eta1 = 0.5, double eta2 = 0.5);

struct BracketCheck {
  double d1_hat = 0.0;
  double d2_hat = 0.0;
  double d1_halved = 0.0;  // same ratios with d_min halved
  double d2_halved = 0.0;
  bool bracket_pass = false;
  /// u <= D2 d^{1-beta} without a log factor; checked on convex domains.
  bool convex_checked = false;
  double d2_convex = 0.0;
  double d2_convex_halved = 0.0;
  bool convex_pass = false;
  bool pass = false;
};

/// Relative change allowed in D1/D2 when d_min halves.
inline constexpr double kBracketStability = 0.05;

/// D1 = min u / [d^{1-beta} l^{-eta1}], D2 = max u / [d^{1-beta} l^{eta2}], l = -log d, over the
/// inward-line nodes in the window. Passes when both are positive, finite and change by
/// less than 5% when d_min halves.
BracketCheck log_bracket_check(const DiscreteField& field, double beta, double eta1, double eta2, const Window& window);

struct HolderReport {
  double alpha_hat = 0.0;
  bool lipschitz_or_better = false;  // constant field: nothing to fit
  std::vector<double> scales;
  std::vector<double> moduli;  // H(r_k)
};

/// Dyadic scales 2^-k inside the window, extended upward (up to `ceiling`) until there are three.
std::vector<double> default_holder_scales(const Window& window, double ceiling = 0.125);

/// H(r) = max |u(x) - u(y)| over sampled pairs with |x - y| <= r, and the least-squares slope
/// of log H against log r. Pairs are every node with d <= r against its nearest boundary node,
/// plus `anchors` seeded random nodes paired with the farthest node within r along a random
/// axis direction.
HolderReport holder_estimate(const DiscreteField& field, const std::vector<double>& scales,
                             std::uint64_t seed = 42, int anchors = 10000);

/// (int u^2 w + int |grad u|^2 w)^{1/2} for order 1, the first term only for order 0.
/// Nodal terms use dual cells, gradient terms the faces. Only p = 2.
double weighted_sobolev_norm(const DiscreteField& field, const Weight& weight, int order = 1, int p = 2);

enum class SobolevVerdict { finite, log_divergent, power_divergent };

std::string to_string(SobolevVerdict v);

struct SobolevReport {
  std::vector<double> deltas;              // strictly decreasing
  std::vector<double> truncated_energies;  // E(delta_k)
  double slope_hat = 0.0;
  double correlation = 0.0;  // of E against -log delta over the last points
  SobolevVerdict verdict = SobolevVerdict::finite;
  double weighted_norm = 0.0;  // weighted W^{1,2} norm, filled when a weight is supplied
};

inline constexpr double kFiniteSlope = 0.05;
inline constexpr double kFiniteIncrement = 0.01;
inline constexpr double kLogCorrelation = 0.999;
inline constexpr int kVerdictPoints = 5;

/// 2^-k from 1/8 down to the distance of the 10th inward node (at least 1e-12).
std::vector<double> default_deltas(const Grid& grid);

/// Unweighted truncated energy at d > delta (same face quadrature as the solver).
double truncated_energy(const DiscreteField& field, double delta);

/// E(delta) over the deltas and a verdict from the last 5 points.
SobolevReport truncated_energy_scan(const DiscreteField& field, const std::vector<double>& deltas);

struct Quotient {
  double value = 0.0;
  bool undefined = false;
};

/// int_{d>delta} |grad u|^2 / int_{d>delta} u^2/d^2 with delta the distance of the 10th inward node.
Quotient hardy_quotient(const DiscreteField& field);

/// int u^2 w / int |grad u|^2 w.
Quotient poincare_quotient(const DiscreteField& field, const Weight& weight);

/// Least-squares slope and intercept of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);
double correlation(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace degenlab
