#include <doctest.h>

#include <cmath>

#include "degenlab/analysis.hpp"
#include "degenlab/analytic.hpp"

using namespace degenlab;
using Eigen::Index;

namespace {

const double pi = std::acos(-1.0);
constexpr int kFine = 1 << 14;

DiscreteField solve_on(const Domain& dom, double beta, int n = kFine) {
  const ProblemSpec spec{dom, PowerWeight<double>(beta), constant_source(1.0), n, default_gamma(beta)};
  return solve(spec).field;
}

DiscreteField solve_1d(double beta, int n = kFine) { return solve_on(Domain::interval(0, 1), beta, n); }

DiscreteField sample(double beta, int n, const std::function<double(double)>& fn) {
  const auto grid = Grid::build(Domain::interval(0, 1), n, default_gamma(beta));
  return sample_field(grid, [&fn](const Point&, double d) { return fn(d); });
}

}  // namespace

TEST_CASE("default window") {
  const auto grid = Grid::build(Domain::interval(0, 1), 4096, 4.0);
  const Window w = default_window(*grid);
  CHECK(w.d_min == 1e-6);
  CHECK(w.d_max == 1e-2);
  const auto coarse = Grid::build(Domain::interval(0, 1), 64, 1.0);
  const Window c = default_window(*coarse);
  CHECK(c.d_min == doctest::Approx(10.0 / 64));
  CHECK(c.d_max == doctest::Approx(0.25));
  CHECK(default_window(*grid, 0.005).d_max == 0.005);
}

TEST_CASE("boundary rate fit") {
  SUBCASE("exact power law") {
    const DiscreteField u = sample(0.5, 4096, [](double d) { return std::sqrt(d); });
    const RateReport r = boundary_rate_fit(u, default_window(u.mesh()));
    CHECK(r.alpha_hat == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.c_hat == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(r.residual <= 1e-12);
    CHECK(r.nodes >= 8);
  }
  SUBCASE("1-D and radial solves") {
    const DiscreteField u = solve_1d(0.5);
    const double a1 = boundary_rate_fit(u, default_window(u.mesh())).alpha_hat;
    CHECK(a1 >= 0.48);
    CHECK(a1 <= 0.52);
    const DiscreteField v = solve_on(Domain::ball(2, 1), 0.25);
    const double a2 = boundary_rate_fit(v, default_window(v.mesh())).alpha_hat;
    CHECK(a2 >= 0.73);
    CHECK(a2 <= 0.77);
  }
  SUBCASE("rate law across the sweep") {
    for (double beta : {-1.0, -0.5, 0.0, 0.25, 0.5, 0.75}) {
      for (const Domain& dom : {Domain::interval(0, 1), Domain::ball(2, 1), Domain::ball(3, 1)}) {
        const DiscreteField u = solve_on(dom, beta);
        CAPTURE(beta);
        CAPTURE(dom.name());
        CHECK(std::abs(boundary_rate_fit(u, default_window(u.mesh())).alpha_hat - (1 - beta)) <= 0.03);
      }
    }
  }
  SUBCASE("window preconditions") {
    const DiscreteField u = solve_1d(0.0, 64);
    CHECK_THROWS_AS(boundary_rate_fit(u, {0.2, 0.1}), ContractViolation);
    CHECK_THROWS_AS(boundary_rate_fit(u, {1e-3, 0.2}), ContractViolation);
    CHECK_THROWS_AS(boundary_rate_fit(u, {0.16, 0.2}), InsufficientData);
  }
}

TEST_CASE("log bracket") {
  SUBCASE("closed form with eta = 0") {
    const DiscreteField u = sample(0.5, 4096, [](double d) { return exact_1d_source_one_at_depth(0.5, d); });
    const BracketCheck c = log_bracket_check(u, 0.5, 0.0, 0.0, default_window(u.mesh()));
    CHECK(c.pass);
    CHECK(c.d1_hat < 1.0);
    CHECK(c.d1_hat > 0.98);
    // u / d^{1-beta} = 1 - 2d/3 stays below 1, so the upper constant also approaches 1 from below
    CHECK(c.d2_hat <= 1.0);
    CHECK(c.d2_hat > 0.999);
    CHECK(c.d1_hat <= c.d2_hat);
  }
  SUBCASE("radial solve, convex upper bound") {
    const DiscreteField u = solve_on(Domain::ball(2, 1), 0.5);
    const BracketCheck c = log_bracket_check(u, 0.5, 0.5, 0.5, default_window(u.mesh()));
    CHECK(c.convex_checked);
    CHECK(c.convex_pass);
    CHECK(c.pass);
  }
  SUBCASE("constructed log factor") {
    const auto fn = [](double d) { return std::sqrt(d) * -std::log(d); };
    const DiscreteField u = sample(0.5, 4096, fn);
    const Window w{1e-2, 1e-1};
    const BracketCheck plain = log_bracket_check(u, 0.5, 0.0, 0.0, w);
    CHECK_FALSE(plain.convex_pass);
    CHECK_FALSE(plain.pass);
    const BracketCheck logged = log_bracket_check(u, 0.5, 0.5, 1.5, w);
    CHECK(logged.bracket_pass);
  }
  SUBCASE("lower constant is a pointwise lower bound") {
    const DiscreteField u = solve_1d(0.25);
    const Window w = default_window(u.mesh());
    const BracketCheck c = log_bracket_check(u, 0.25, 0.5, 0.5, w);
    const Grid& g = u.mesh();
    int checked = 0;
    for (Index k : g.inward_line()) {
      const double d = g.distance(k);
      if (d < w.d_min || d > w.d_max) continue;
      CHECK(c.d1_hat <= u.values(k) / (std::pow(d, 0.75) * std::pow(-std::log(d), -0.5)) * (1 + 1e-12));
      ++checked;
    }
    CHECK(checked >= 8);
  }
  SUBCASE("preconditions") {
    const DiscreteField u = solve_1d(0.0, 64);
    CHECK_THROWS_AS(log_bracket_check(u, 0.0, -0.5, 0.5, default_window(u.mesh())), ConfigurationError);
    CHECK_THROWS_AS(log_bracket_check(u, 0.0, 0.5, 0.5, {0.16, 0.2}), InsufficientData);
  }
}

TEST_CASE("Hölder estimate") {
  SUBCASE("square root samples") {
    const DiscreteField u = sample(0.5, 4096, [](double d) { return std::sqrt(d); });
    const Window w = default_window(u.mesh());
    const HolderReport h = holder_estimate(u, default_holder_scales(w));
    CHECK(h.alpha_hat >= 0.48);
    CHECK(h.alpha_hat <= 0.52);
    CHECK(h.scales.size() == h.moduli.size());
  }
  SUBCASE("sharp caps on 1-D solves") {
    const DiscreteField half = solve_1d(0.5);
    const double a = holder_estimate(half, default_holder_scales(default_window(half.mesh()))).alpha_hat;
    CHECK(a >= 0.48);
    CHECK(a <= 0.52);
    const DiscreteField lip = solve_1d(-1.0);
    const double b = holder_estimate(lip, default_holder_scales(default_window(lip.mesh()))).alpha_hat;
    CHECK(b >= 0.95);
    CHECK(b <= 1.0 + 1e-9);
  }
  SUBCASE("cap is never exceeded") {
    for (double beta : {-1.0, 0.0, 0.25, 0.75}) {
      for (const Domain& dom : {Domain::interval(0, 1), Domain::ball(2, 1)}) {
        const DiscreteField u = solve_on(dom, beta);
        const HolderReport h = holder_estimate(u, default_holder_scales(default_window(u.mesh())));
        CAPTURE(beta);
        CAPTURE(dom.name());
        CHECK(h.alpha_hat <= std::min(1.0, 1.0 - beta) + 0.03);
      }
    }
  }
  SUBCASE("seeded sampling is reproducible") {
    const DiscreteField u = solve_1d(0.25, 1024);
    const auto scales = default_holder_scales(default_window(u.mesh()));
    CHECK(holder_estimate(u, scales, 7).moduli == holder_estimate(u, scales, 7).moduli);
  }
  SUBCASE("constant field and too few scales") {
    const DiscreteField zero = sample(0.0, 64, [](double) { return 0.0; });
    CHECK(holder_estimate(zero, {0.25, 0.125, 0.0625}).lipschitz_or_better);
    CHECK_THROWS_AS(holder_estimate(zero, {0.25, 0.125}), InsufficientData);
  }
  SUBCASE("scales extend upward on coarse meshes") {
    const auto scales = default_holder_scales({0.03, 0.05});
    REQUIRE(scales.size() == 3);
    CHECK(scales.front() == 0.125);
  }
}

TEST_CASE("weighted Sobolev norm") {
  const DiscreteField q = sample(0.0, 2048, [](double d) { return d * (1 - d) / 2; });
  CHECK(weighted_sobolev_norm(q, PowerWeight<double>(0.0)) == doctest::Approx(std::sqrt(1.0 / 120 + 1.0 / 12)).epsilon(1e-6));
  CHECK(weighted_sobolev_norm(q, PowerWeight<double>(0.0), 0) == doctest::Approx(std::sqrt(1.0 / 120)).epsilon(1e-6));
  const DiscreteField zero = sample(0.0, 64, [](double) { return 0.0; });
  CHECK(weighted_sobolev_norm(zero, PowerWeight<double>(0.5)) == 0.0);
  CHECK(weighted_sobolev_norm(q, PowerWeight<double>(0.5)) > 0.0);

  const double coarse = weighted_sobolev_norm(solve_1d(0.5, 4096), PowerWeight<double>(0.5));
  const double fine = weighted_sobolev_norm(solve_1d(0.5, 8192), PowerWeight<double>(0.5));
  CHECK(std::isfinite(fine));
  CHECK(std::abs(fine - coarse) <= 0.01 * fine);

  CHECK_THROWS_AS(weighted_sobolev_norm(q, PowerWeight<double>(0.0), 1, 3), ConfigurationError);
  CHECK_THROWS_AS(weighted_sobolev_norm(q, PowerWeight<double>(0.0), 2), ConfigurationError);
}

TEST_CASE("truncated energy scan") {
  SUBCASE("verdicts on 1-D solves") {
    const SobolevReport finite = truncated_energy_scan(solve_1d(0.25), default_deltas(solve_1d(0.25).mesh()));
    CHECK(finite.verdict == SobolevVerdict::finite);

    const DiscreteField u75 = solve_1d(0.75);
    const SobolevReport power = truncated_energy_scan(u75, default_deltas(u75.mesh()));
    CHECK(power.verdict == SobolevVerdict::power_divergent);
    CHECK(power.slope_hat >= -0.55);
    CHECK(power.slope_hat <= -0.45);

    const DiscreteField u50 = solve_1d(0.5);
    CHECK(truncated_energy_scan(u50, default_deltas(u50.mesh())).verdict == SobolevVerdict::log_divergent);
  }
  SUBCASE("dichotomy on solver and oracle fields") {
    for (double beta : {-1.0, 0.0, 0.25, 0.4, 0.5, 0.6, 0.75, 0.9}) {
      const bool finite = beta < 0.45;
      const DiscreteField solved = solve_1d(beta);
      const DiscreteField oracle =
          sample(beta, kFine, [beta](double d) { return exact_1d_source_one_at_depth(beta, d); });
      for (const DiscreteField* f : {&solved, &oracle}) {
        const SobolevReport r = truncated_energy_scan(*f, default_deltas(f->mesh()));
        CAPTURE(beta);
        CHECK((r.verdict == SobolevVerdict::finite) == finite);
      }
    }
  }
  SUBCASE("energy grows as delta shrinks") {
    const DiscreteField u = solve_1d(0.6, 4096);
    const SobolevReport r = truncated_energy_scan(u, default_deltas(u.mesh()));
    for (std::size_t k = 1; k < r.truncated_energies.size(); ++k)
      CHECK(r.truncated_energies[k] >= r.truncated_energies[k - 1]);
    CHECK(r.deltas.front() == 0.125);
  }
  SUBCASE("preconditions") {
    const DiscreteField u = solve_1d(0.0, 1024);
    CHECK_THROWS_AS(truncated_energy_scan(u, {0.1, 0.05, 0.02}), InsufficientData);
    CHECK_THROWS_AS(truncated_energy_scan(u, {0.1, 0.05, 0.05, 0.01, 0.001}), ContractViolation);
  }
  CHECK(to_string(SobolevVerdict::log_divergent) == "log-divergent");
}

TEST_CASE("Hardy and Poincaré quotients") {
  const DiscreteField s = sample(0.0, 4096, [](double d) { return std::sin(pi * d); });
  const Quotient hardy = hardy_quotient(s);
  CHECK_FALSE(hardy.undefined);
  CHECK(hardy.value >= 0.25);

  const DiscreteField q = sample(0.0, 4096, [](double d) { return d * (1 - d); });
  const Quotient hq = hardy_quotient(q);
  CHECK_FALSE(hq.undefined);
  CHECK(hq.value > 0.0);
  CHECK(std::isfinite(hq.value));

  const DiscreteField zero = sample(0.0, 64, [](double) { return 0.0; });
  CHECK(hardy_quotient(zero).undefined);
  CHECK(poincare_quotient(zero, PowerWeight<double>(0.0)).undefined);

  CHECK(poincare_quotient(s, PowerWeight<double>(0.0)).value == doctest::Approx(1 / (pi * pi)).epsilon(1e-5));
  const Quotient p = poincare_quotient(solve_1d(0.5, 4096), PowerWeight<double>(0.5));
  CHECK_FALSE(p.undefined);
  CHECK(p.value < 1.0);
}

TEST_CASE("line fit helpers") {
  const LineFit f = fit_line({0, 1, 2}, {1, 3, 5});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(correlation({0, 1, 2}, {1, 3, 5}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_line({1.0}, {1.0}), InsufficientData);
}
