// One PASS/FAIL line per acceptance criterion; exit status 0 iff all pass.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "degenlab/analysis.hpp"
#include "degenlab/analytic.hpp"
#include "degenlab/commands.hpp"
#include "degenlab/solver.hpp"

using namespace degenlab;
using Eigen::Index;

namespace {

const std::vector<double> kBetas{-1.0, -0.5, 0.0, 0.25, 0.5, 0.75};
constexpr int kCells = 1 << 14;
constexpr int kSquareCells = 512;

struct Case {
  std::string name;
  double beta;
  ProblemSpec spec;
  Solution sol;
};

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const Outcome& o) {
  std::printf("criterion %2d: %s  %s  [%s]\n", id, o.pass ? "PASS" : "FAIL", title.c_str(), o.detail.c_str());
  if (!o.pass) ++failures;
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Case make_case(const std::string& name, const Domain& dom, double beta, int n, double gamma) {
  ProblemSpec spec{dom, PowerWeight<double>(beta), constant_source(1.0), n, gamma};
  Solution sol = solve(spec);
  return {name, beta, std::move(spec), std::move(sol)};
}

double max_abs(const Eigen::VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

template <class Exact>
double relative_error(const Case& c, Exact&& exact) {
  const Grid& g = c.sol.field.mesh();
  double err = 0.0;
  for (Index i = 0; i < g.size(); ++i) err = std::max(err, std::abs(c.sol.field.values(i) - exact(g, i)));
  return err / max_abs(c.sol.field.values);
}

RunConfig config(const std::string& command, KeyValues flags, const std::string& out) {
  flags["out"] = out;
  return make_config(command, {}, flags);
}

}  // namespace

int main() {
  const std::filesystem::path scratch = std::filesystem::temp_directory_path() / "degenlab_acceptance";
  std::filesystem::remove_all(scratch);

  std::vector<Case> line_cases, ball_cases, square_cases;
  for (double beta : kBetas) {
    line_cases.push_back(make_case("interval", Domain::interval(0, 1), beta, kCells, default_gamma(beta)));
    ball_cases.push_back(make_case("ball", Domain::ball(2, 1), beta, kCells, default_gamma(beta)));
  }
  for (double beta : {0.0, 0.5})
    square_cases.push_back(make_case("square", Domain::rectangle(1, 1), beta, kSquareCells, default_gamma(beta)));

  std::vector<const Case*> oracle_cases, all_cases;
  for (const auto& c : line_cases) oracle_cases.push_back(&c);
  for (const auto& c : ball_cases) oracle_cases.push_back(&c);
  all_cases = oracle_cases;
  for (const auto& c : square_cases) all_cases.push_back(&c);

  {
    Outcome o;
    double worst = 0.0;
    for (const Case& c : line_cases) {
      const double e = relative_error(c, [&](const Grid& g, Index i) {
        return exact_1d_source_one_at_depth(c.beta, g.distance(i));
      });
      worst = std::max(worst, e);
      o.pass = o.pass && e <= 1e-3;
    }
    o.detail = "max error / max u = " + sci(worst) + " <= 1e-3";
    report(1, "1-D oracle solves", o);
  }

  {
    Outcome o;
    double worst = 0.0, classical = 0.0;
    for (const Case& c : ball_cases) {
      const double e = relative_error(c, [&](const Grid& g, Index i) {
        return exact_radial_source_one_at_depth(c.beta, 2, g.distance(i));
      });
      worst = std::max(worst, e);
      o.pass = o.pass && e <= 1e-3;
      if (c.beta == 0.0) {
        const Grid& g = c.sol.field.mesh();
        for (Index i = 0; i < g.size(); ++i) {
          const double r = g.point(i).norm();
          classical = std::max(classical, std::abs(c.sol.field.values(i) - (1 - r * r) / 4));
        }
        o.pass = o.pass && classical <= 1e-6;
      }
    }
    o.detail = "max error / max u = " + sci(worst) + " <= 1e-3; beta=0 vs (1-r^2)/4: " + sci(classical) + " <= 1e-6";
    report(2, "radial oracle solves", o);
  }

  {
    Outcome o;
    double worst = 0.0;
    int brackets = 0, convex = 0;
    for (const Case* c : oracle_cases) {
      const DiscreteField& f = c->sol.field;
      const Window w = default_window(f.mesh());
      const RateReport r = boundary_rate_fit(f, w);
      const BracketCheck b = log_bracket_check(f, c->beta, 0.5, 0.5, w);
      worst = std::max(worst, std::abs(r.alpha_hat - (1 - c->beta)));
      o.pass = o.pass && std::abs(r.alpha_hat - (1 - c->beta)) <= 0.03 && b.bracket_pass && b.convex_pass;
      brackets += b.bracket_pass;
      convex += b.convex_pass;
    }
    for (const Case& c : square_cases) {
      const DiscreteField& f = c.sol.field;
      const BracketCheck b = log_bracket_check(f, c.beta, 0.5, 0.5, default_window(f.mesh()));
      o.pass = o.pass && b.bracket_pass && b.convex_pass;
      brackets += b.bracket_pass;
      convex += b.convex_pass;
    }
    const int total = static_cast<int>(all_cases.size());
    o.detail = "max |alpha - (1-beta)| = " + sci(worst) + " <= 0.03; log bracket " + std::to_string(brackets) + "/" +
               std::to_string(total) + "; eta=0 bound " + std::to_string(convex) + "/" + std::to_string(total);
    report(3, "boundary rate and log bracket", o);
  }

  {
    Outcome o;
    double margin = INFINITY;
    std::string sharp;
    for (const Case* c : all_cases) {
      const DiscreteField& f = c->sol.field;
      const HolderReport h = holder_estimate(f, default_holder_scales(default_window(f.mesh())));
      const double cap = std::min(1.0, 1.0 - c->beta);
      if (h.lipschitz_or_better) continue;
      margin = std::min(margin, cap + 0.03 - h.alpha_hat);
      o.pass = o.pass && h.alpha_hat <= cap + 0.03;
      if (c->name == "interval" && (c->beta == 0.5 || c->beta == -1.0)) {
        o.pass = o.pass && h.alpha_hat >= cap - 0.03;
        sharp += " beta=" + sci(c->beta) + ": " + sci(h.alpha_hat);
      }
    }
    o.detail = "min cap margin " + sci(margin) + "; sharp" + sharp;
    report(4, "Hölder cap and sharpness", o);
  }

  {
    Outcome o;
    std::string detail;
    for (const Case* c : oracle_cases) {
      const DiscreteField& f = c->sol.field;
      const SobolevReport s = truncated_energy_scan(f, default_deltas(f.mesh()));
      bool ok;
      if (c->beta < 0.5) ok = s.verdict == SobolevVerdict::finite;
      else if (c->beta == 0.5) ok = s.verdict == SobolevVerdict::log_divergent;
      else ok = s.verdict == SobolevVerdict::power_divergent && std::abs(s.slope_hat - (1 - 2 * c->beta)) <= 0.05;
      o.pass = o.pass && ok;
      if (c->beta >= 0.5) detail += c->name + " beta=" + sci(c->beta) + ": " + to_string(s.verdict) + " slope " + sci(s.slope_hat) + "; ";
      if (!ok) detail += "MISMATCH " + c->name + " beta=" + sci(c->beta) + "; ";
    }
    o.detail = detail + "others finite";
    report(5, "Sobolev dichotomy", o);
  }

  {
    Outcome o;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> ub(-2.0, 0.95), ue(-2.0, 2.0), ud(1e-3, std::exp(-1.0));
    const long double sigma = 1.0L / std::exp(1.0L);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
      const long double beta = ub(rng), eta = ue(rng), d = ud(rng);
      const Domain dom = Domain::ball(2 + static_cast<int>(rng() % 2), 1.0);
      const Barrier<long double> b(eta, beta, sigma);
      const long double lap = laplacian_along_normal(dom, d);
      const long double h = std::min(1e-3L * d, 0.5L * (sigma - d));
      const long double fd = barrier_Lbeta_finite_difference(b, dom, d, h);
      const long double rel = std::abs(fd - barrier_Lbeta(b, d, lap)) / barrier_Lbeta_magnitude(b, d, lap);
      worst = std::max(worst, static_cast<double>(rel));
    }
    o.pass = worst <= 1e-8;
    bool exact = true;
    for (int k = 0; k < 1000; ++k) {
      const double beta = ub(rng), d = ud(rng);
      const double lap = -static_cast<double>(1 + rng() % 4) / (1.0 - d);
      exact = exact && barrier_Lbeta(Barrier<double>(0.0, beta), d, lap) == -(1 - beta) * lap;
    }
    o.pass = o.pass && exact;
    o.detail = "max relative deviation " + sci(worst) + " <= 1e-8 over 1000 samples; eta=0 identity " +
               (exact ? "exact" : "NOT exact");
    report(6, "barrier identity", o);
  }

  {
    Outcome o;
    const double pi = std::acos(-1.0);
    const auto disk = tubular_integral(TubularNeighborhood(Domain::ball(2, 1), 0.25),
                                       [](double t) { return 1.0 / std::sqrt(t); });
    const auto hardy = tubular_integral(TubularNeighborhood(Domain::interval(0, 1), 0.25),
                                        [](double t) { return 1.0 / t; });
    const double err = std::abs(disk.value - 2 * pi * 11.0 / 12.0);
    o.pass = !disk.divergent && err <= 1e-6 && hardy.divergent;
    o.detail = "2 pi (11/12) error " + sci(err) + " <= 1e-6; t^-1 " + (hardy.divergent ? "divergent" : "finite");
    report(7, "coarea integrals", o);
  }

  {
    Outcome o;
    std::ostringstream log;
    const RunConfig cfg = config("a2", {{"betas", "-1.5,-1,-0.9,-0.5,0,0.5,0.9"}}, (scratch / "a2").string());
    const int status = cmd_a2(cfg, log);
    const auto rows = run_a2(cfg);
    std::string flags;
    for (const A2Row& r : rows) {
      const bool want = r.beta <= -1.0;
      o.pass = o.pass && r.scan.divergent == want;
      if (r.beta == 0.0) o.pass = o.pass && r.scan.value == 1.0;
      flags += sci(r.beta) + (r.scan.divergent ? ":div " : ":fin ");
    }
    o.pass = o.pass && status == 0;
    o.detail = flags + "exit " + std::to_string(status);
    report(8, "A2 window", o);
  }

  {
    Outcome o;
    double worst = 0.0;
    bool lower = true, positive = true;
    for (const Case* c : all_cases) {
      worst = std::max(worst, max_abs(hat_residuals(c->spec, c->sol.field)));
      lower = lower && energy(c->spec, c->sol.field) < 0.0;
      positive = positive && positivity_check(c->sol.field);
    }
    o.pass = worst <= 1e-8 && lower && positive;
    o.detail = "max hat residual " + sci(worst) + " <= 1e-8; energy below F(0) " + (lower ? "yes" : "no") +
               "; u >= 0 " + (positive ? "yes" : "no") + " on " + std::to_string(all_cases.size()) + " solves";
    report(9, "variational consistency", o);
  }

  {
    Outcome o;
    std::ostringstream log;
    const KeyValues base{{"oracle", "source_one"}, {"beta", "0.5"}};
    KeyValues perturbed = base;
    perturbed["perturb"] = "1e-3";
    const int good = cmd_verify(config("verify", base, (scratch / "verify").string()), log);
    const int bad = cmd_verify(config("verify", perturbed, (scratch / "verify_perturbed").string()), log);
    o.pass = good == 0 && bad != 0;
    o.detail = "exact oracle exit " + std::to_string(good) + ", perturbed oracle exit " + std::to_string(bad);
    report(10, "negative control", o);
  }

  std::filesystem::remove_all(scratch);
  std::printf("%d of 10 criteria pass\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
