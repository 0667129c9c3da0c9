#include "degenlab/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <thread>

namespace degenlab {

using Eigen::Index;

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

double gamma_for(const RunConfig& cfg, double beta) { return cfg.gamma ? *cfg.gamma : default_gamma(beta); }

int cells_for(const RunConfig& cfg, const Domain& dom) {
  if (dom.kind() == DomainKind::rectangle && !cfg.n_set) return 256;
  return cfg.n;
}

std::string source_name(const RunConfig& cfg) {
  switch (cfg.source) {
    case SourceKind::one:
      return "one";
    case SourceKind::dbeta:
      return "dbeta";
    case SourceKind::custom_poly: {
      std::string s = "custom-poly ";
      for (std::size_t i = 0; i < cfg.coeffs.size(); ++i) s += (i ? "," : "") + fmt(cfg.coeffs[i]);
      return s;
    }
  }
  return "unknown";
}

ProblemSpec problem_for(const RunConfig& cfg, const std::string& domain, double beta) {
  const Domain dom = cfg.domain(domain);
  return ProblemSpec{dom, PowerWeight<double>(beta), cfg.make_source(beta), cells_for(cfg, dom), gamma_for(cfg, beta)};
}

Index centre_node(const Grid& g) {
  switch (g.layout()) {
    case Layout::interval:
      return g.axis_x().n / 2;
    case Layout::radial:
      return 0;
    case Layout::tensor:
      return g.index(g.axis_x().n / 2, g.axis_y().n / 2);
  }
  return 0;
}

std::string field_csv(const DiscreteField& field, double beta) {
  std::ostringstream os;
  write_field_csv(os, field, beta);
  return os.str();
}

Json window_json(const Window& w) { return Json::array({w.d_min, w.d_max}); }

Json run_json(const RunConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["domains"] = cfg.domains;
  j["betas"] = cfg.betas;
  j["f"] = source_name(cfg);
  j["n"] = cfg.n;
  if (cfg.gamma) j["gamma"] = *cfg.gamma;
  if (cfg.sigma) j["sigma"] = *cfg.sigma;
  j["eta1"] = cfg.eta1;
  j["eta2"] = cfg.eta2;
  j["seed"] = cfg.seed;
  return j;
}

}  // namespace

SobolevVerdict expected_sobolev_verdict(double beta) {
  if (beta < 0.5) return SobolevVerdict::finite;
  if (beta == 0.5) return SobolevVerdict::log_divergent;
  return SobolevVerdict::power_divergent;
}

TheoremCase evaluate_case(const RunConfig& cfg, const std::string& domain, double beta, OutputBundle* bundle) {
  TheoremCase c;
  c.domain = domain;
  c.beta = beta;
  c.label = domain + "_beta" + fmt(beta);
  c.expected_sobolev = expected_sobolev_verdict(beta);
  try {
    const ProblemSpec spec = problem_for(cfg, domain, beta);
    const Solution sol = solve(spec);
    const DiscreteField& field = sol.field;
    const Grid& grid = field.mesh();
    const Window window = default_window(grid, cfg.sigma.value_or(0.0));

    c.rate = boundary_rate_fit(field, window, cfg.eta1, cfg.eta2);
    c.bracket = log_bracket_check(field, beta, cfg.eta1, cfg.eta2, window);
    c.rate.bracket.d1_hat = c.bracket.d1_hat;
    c.rate.bracket.d2_hat = c.bracket.d2_hat;
    c.rate_pass = std::abs(c.rate.alpha_hat - (1.0 - beta)) <= kRateTolerance && c.bracket.pass;

    // widen the window to [d_min, sigma] and halve sigma until both checks hold
    for (double s = cfg.sigma.value_or(default_sigma(grid.domain())); s > 2.0 * window.d_min; s *= 0.5) {
      try {
        const Window wide{window.d_min, s};
        const RateReport r = boundary_rate_fit(field, wide, cfg.eta1, cfg.eta2);
        if (std::abs(r.alpha_hat - (1.0 - beta)) <= kRateTolerance &&
            log_bracket_check(field, beta, cfg.eta1, cfg.eta2, wide).pass) {
          c.sigma_pass = s;
          break;
        }
      } catch (const InsufficientData&) {
        break;
      }
    }

    const double cap = std::min(1.0, 1.0 - beta);
    c.holder = holder_estimate(field, default_holder_scales(window), cfg.seed);
    c.holder_sharp = grid.layout() == Layout::interval && cfg.source == SourceKind::one && (beta == 0.5 || beta == -1.0);
    if (c.holder.lipschitz_or_better) c.holder_pass = true;
    else
      c.holder_pass = c.holder.alpha_hat <= cap + kHolderTolerance &&
                      (!c.holder_sharp || c.holder.alpha_hat >= cap - kHolderTolerance);

    c.sobolev = truncated_energy_scan(field, default_deltas(grid));
    c.sobolev.weighted_norm = weighted_sobolev_norm(field, spec.weight);
    c.sobolev_pass = c.sobolev.verdict == c.expected_sobolev;
    if (c.expected_sobolev == SobolevVerdict::power_divergent)
      c.sobolev_pass = c.sobolev_pass && std::abs(c.sobolev.slope_hat - (1.0 - 2.0 * beta)) <= kSobolevSlopeTolerance;
    c.ok = c.rate_pass && c.holder_pass && c.sobolev_pass;

    if (bundle) {
      const std::string dir = c.label + "/";
      bundle->write(dir + "field.csv", field_csv(field, beta));

      std::ostringstream rate_csv;
      rate_csv << "log_d,log_u\n" << std::setprecision(17);
      for (Index k : grid.inward_line()) {
        const double d = grid.distance(k);
        if (d >= window.d_min && d <= window.d_max && field.values(k) > 0.0)
          rate_csv << std::log(d) << ',' << std::log(field.values(k)) << '\n';
      }
      bundle->write(dir + "rate.csv", rate_csv.str());

      std::ostringstream energy_csv;
      energy_csv << "delta,E\n" << std::setprecision(17);
      for (std::size_t k = 0; k < c.sobolev.deltas.size(); ++k)
        energy_csv << c.sobolev.deltas[k] << ',' << c.sobolev.truncated_energies[k] << '\n';
      bundle->write(dir + "energy.csv", energy_csv.str());

      Json rate_est{{"alpha_hat", c.rate.alpha_hat},
                    {"c_hat", c.rate.c_hat},
                    {"residual", c.rate.residual},
                    {"nodes", c.rate.nodes},
                    {"expected_alpha", 1.0 - beta},
                    {"D1_hat", c.bracket.d1_hat},
                    {"D2_hat", c.bracket.d2_hat},
                    {"D1_hat_halved", c.bracket.d1_halved},
                    {"D2_hat_halved", c.bracket.d2_halved},
                    {"eta1", cfg.eta1},
                    {"eta2", cfg.eta2},
                    {"bracket_pass", c.bracket.bracket_pass},
                    {"convex_D2_hat", c.bracket.d2_convex},
                    {"convex_D2_hat_halved", c.bracket.d2_convex_halved},
                    {"convex_pass", c.bracket.convex_pass},
                    {"sigma_pass", c.sigma_pass},
                    {"solver_residual", sol.residual}};
      bundle->write_json(dir + "rate.json",
                         theorem_record("boundary-rate", beta, domain, rate_est, window_json(window),
                                        c.rate_pass ? "pass" : "fail",
                                        {{"alpha", kRateTolerance}, {"bracket_stability", kBracketStability}}));

      Json holder_est{{"alpha_hat", c.holder.alpha_hat},
                      {"lipschitz_or_better", c.holder.lipschitz_or_better},
                      {"cap", cap},
                      {"sharp", c.holder_sharp},
                      {"scales", c.holder.scales},
                      {"moduli", c.holder.moduli},
                      {"seed", cfg.seed}};
      bundle->write_json(dir + "holder.json",
                         theorem_record("holder-cap", beta, domain, holder_est, window_json(window),
                                        c.holder_pass ? "pass" : "fail", {{"alpha", kHolderTolerance}}));

      Json sob_est{{"verdict", to_string(c.sobolev.verdict)},
                   {"expected", to_string(c.expected_sobolev)},
                   {"slope_hat", c.sobolev.slope_hat},
                   {"correlation", c.sobolev.correlation},
                   {"weighted_norm", c.sobolev.weighted_norm},
                   {"final_energy", c.sobolev.truncated_energies.back()}};
      const Window scan{c.sobolev.deltas.back(), c.sobolev.deltas.front()};
      bundle->write_json(dir + "sobolev.json",
                         theorem_record("sobolev-dichotomy", beta, domain, sob_est, window_json(scan),
                                        to_string(c.sobolev.verdict),
                                        {{"slope_band", kFiniteSlope},
                                         {"increment_band", kFiniteIncrement},
                                         {"log_correlation", kLogCorrelation},
                                         {"power_slope", kSobolevSlopeTolerance},
                                         {"pass", c.sobolev_pass}}));
    }
  } catch (const std::exception& e) {
    c.ok = false;
    c.error = e.what();
  }
  return c;
}

VerifyOutcome run_verify(const RunConfig& cfg) {
  constexpr double kH0 = 1e-2;
  constexpr int kLevels = 8;
  constexpr int kOrderLevels = 4;
  const double beta = cfg.betas.front();
  VerifyOutcome out;

  if (cfg.oracle == "barrier") {
    const Domain dom = cfg.domain(cfg.domains.front());
    const long double sigma = cfg.sigma ? *cfg.sigma : 1.0L / std::exp(1.0L);
    const Barrier<long double> bar(cfg.eta, beta, sigma);
    std::vector<long double> depths;
    for (int k = 0; k < 8; ++k) depths.push_back(0.05L + (std::min<long double>(0.3L, sigma * 0.9L) - 0.05L) * k / 7);
    for (int lvl = 0; lvl < kLevels; ++lvl) {
      const long double h = kH0 * std::ldexp(1.0, -lvl);
      VerifyLevel v;
      v.h = static_cast<double>(h);
      for (long double d : depths) {
        const long double exact = barrier_Lbeta(bar, d, laplacian_along_normal(dom, d)) *
                                  (1.0L + cfg.perturb);
        const long double numeric = barrier_Lbeta_finite_difference(bar, dom, d, h);
        v.max_residual = std::max(v.max_residual, static_cast<double>(std::abs(numeric - exact)));
        v.max_reference = std::max(v.max_reference, static_cast<double>(std::abs(exact)));
      }
      out.levels.push_back(v);
    }
  } else {
    const OracleKind kind = parse_oracle_kind(cfg.oracle);
    const int dim = kind == OracleKind::one_d ? 1 : cfg.ball_dimension;
    const RadialSolution sol(kind, beta, dim, cfg.perturb);
    std::vector<double> samples;
    if (kind == OracleKind::one_d)
      for (int k = 1; k <= 9; ++k) samples.push_back(0.05 * k);
    else
      for (int k = 1; k <= 9; ++k) samples.push_back(0.1 * k);
    for (int lvl = 0; lvl < kLevels; ++lvl) {
      const double h = kH0 * std::ldexp(1.0, -lvl);
      const IdentityCheck chk = verify_operator_identity(sol, samples, h);
      out.levels.push_back({h, chk.max_residual, chk.max_reference});
    }
  }

  std::vector<double> lh, lr;
  double worst = 0.0;
  double ref = 0.0;
  for (const auto& v : out.levels) {
    worst = std::max(worst, v.max_residual);
    ref = std::max(ref, v.max_reference);
  }
  const double scale = std::max(1.0, ref);
  out.at_roundoff = worst <= 1e-10 * scale;
  for (int k = 0; k < kOrderLevels && k < static_cast<int>(out.levels.size()); ++k) {
    if (!(out.levels[k].max_residual > 0.0)) continue;
    lh.push_back(std::log(out.levels[k].h));
    lr.push_back(std::log(out.levels[k].max_residual));
  }
  if (lh.size() >= 2) out.order = fit_line(lh, lr).slope;
  out.finest_deviation = out.levels.back().max_residual / scale;
  out.pass = out.at_roundoff || out.order >= kVerifyOrder;
  if (cfg.oracle == "barrier") out.pass = out.pass && out.finest_deviation < kBarrierDeviation;
  return out;
}

std::vector<A2Row> run_a2(const RunConfig& cfg) {
  const Domain dom = Domain::interval(0.0, 1.0);
  std::vector<A2Row> rows;
  for (double beta : cfg.betas) {
    A2Row r;
    r.beta = beta;
    r.scan = a2_supremum_estimate(PowerWeight<double>(beta), dom, cfg.depth);
    r.expected_divergent = !(beta > -1.0 && beta < 1.0);
    r.match = r.scan.divergent == r.expected_divergent && (beta != 0.0 || r.scan.value == 1.0);
    rows.push_back(std::move(r));
  }
  return rows;
}

int cmd_solve(const RunConfig& cfg, std::ostream& log) {
  const double beta = cfg.betas.front();
  const std::string& domain = cfg.domains.front();
  const ProblemSpec spec = problem_for(cfg, domain, beta);
  OutputBundle bundle(cfg.out);
  Json run = run_json(cfg);
  const auto sol = [&]() {
    try {
      return solve(spec);
    } catch (const NonConvergence& e) {
      run["error"] = e.what();
      run["residual"] = e.residual();
      run["iterations"] = e.iterations();
      bundle.write_manifest(run);
      throw;
    }
  }();
  const Grid& grid = sol.field.mesh();
  const bool iterative = grid.layout() == Layout::tensor;
  bundle.write("field.csv", field_csv(sol.field, beta));
  const double e = energy(spec, sol.field);
  const bool positive = positivity_check(sol.field);
  run["domain"] = domain;
  run["beta"] = beta;
  run["n"] = spec.n;
  run["gamma"] = spec.gamma;
  run["residual"] = sol.residual;
  run["relative_residual"] = sol.relative_residual;
  run["iterations"] = sol.iterations;
  run["energy"] = e;
  run["positive"] = positive;
  run["center_value"] = sol.field.values(centre_node(grid));
  bundle.write_manifest(run);
  log << "solve " << domain << " beta=" << beta << " n=" << spec.n << " gamma=" << spec.gamma
      << " residual=" << sol.residual << " energy=" << e << " center=" << sol.field.values(centre_node(grid)) << '\n';
  if (!iterative && !(sol.residual <= kDirectResidual)) {
    log << "error: solver residual " << sol.residual << " exceeds " << kDirectResidual << '\n';
    return 3;
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& log) {
  const VerifyOutcome v = run_verify(cfg);
  OutputBundle bundle(cfg.out);
  std::ostringstream table;
  table << "h,max_residual,max_reference\n" << std::setprecision(17);
  for (const auto& l : v.levels) table << l.h << ',' << l.max_residual << ',' << l.max_reference << '\n';
  bundle.write("verify.csv", table.str());
  Json rep{{"oracle", cfg.oracle},
           {"beta", cfg.betas.front()},
           {"N", cfg.oracle == "one_d" ? 1 : cfg.ball_dimension},
           {"eta", cfg.eta},
           {"perturbation", cfg.perturb},
           {"order", v.order},
           {"at_roundoff", v.at_roundoff},
           {"finest_deviation", v.finest_deviation},
           {"required_order", kVerifyOrder},
           {"pass", v.pass}};
  if (cfg.oracle == "barrier") rep["domain"] = cfg.domains.front();
  bundle.write_json("verify.json", rep);
  Json run = run_json(cfg);
  run["oracle"] = cfg.oracle;
  bundle.write_manifest(run);
  log << "verify " << cfg.oracle << " beta=" << cfg.betas.front() << " order=" << v.order
      << " finest=" << v.finest_deviation << (v.pass ? " PASS" : " FAIL") << '\n';
  if (!v.pass) {
    log << "error: oracle regression: observed order " << v.order << " below " << kVerifyOrder << '\n';
    return 1;
  }
  return 0;
}

int cmd_theorems(const RunConfig& cfg, std::ostream& log) {
  if (cfg.betas.empty() || cfg.domains.empty()) throw ConfigurationError("empty sweep");
  struct Job {
    std::string domain;
    double beta;
  };
  std::vector<Job> jobs;
  for (const auto& d : cfg.domains)
    for (double b : cfg.betas) jobs.push_back({d, b});

  OutputBundle bundle(cfg.out);
  std::vector<TheoremCase> cases(jobs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();)
      cases[i] = evaluate_case(cfg, jobs[i].domain, jobs[i].beta, &bundle);
  };
  const int threads = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::ostringstream summary;
  summary << "domain,beta,alpha_rate,rate_pass,bracket_pass,convex_pass,sigma_pass,alpha_holder,holder_pass,sobolev_verdict,"
             "sobolev_slope,sobolev_pass,error\n"
          << std::setprecision(10);
  std::vector<std::string> failing;
  for (const auto& c : cases) {
    summary << c.domain << ',' << c.beta << ',' << c.rate.alpha_hat << ',' << c.rate_pass << ','
            << c.bracket.bracket_pass << ',' << c.bracket.convex_pass << ',' << c.sigma_pass << ',' << c.holder.alpha_hat << ','
            << c.holder_pass << ',' << to_string(c.sobolev.verdict) << ',' << c.sobolev.slope_hat << ','
            << c.sobolev_pass << ',' << '"' << c.error << '"' << '\n';
    if (!c.ok) failing.push_back(c.label + (c.error.empty() ? "" : " (" + c.error + ")"));
    log << std::left << std::setw(22) << c.label << " rate=" << std::setw(10) << c.rate.alpha_hat
        << " holder=" << std::setw(10) << c.holder.alpha_hat << " sobolev=" << to_string(c.sobolev.verdict)
        << (c.ok ? "  ok" : "  MISMATCH") << '\n';
  }
  bundle.write("summary.csv", summary.str());
  Json run = run_json(cfg);
  run["cases"] = cases.size();
  run["failing"] = failing;
  bundle.write_manifest(run);
  if (!failing.empty()) {
    log << "error: verdict mismatch in " << failing.size() << " case(s):\n";
    for (const auto& f : failing) log << "  " << f << '\n';
    return 1;
  }
  return 0;
}

int cmd_a2(const RunConfig& cfg, std::ostream& log) {
  const auto rows = run_a2(cfg);
  OutputBundle bundle(cfg.out);
  std::ostringstream table;
  table << "beta,value,divergent,expected_divergent,match\n" << std::setprecision(17);
  Json records = Json::array();
  bool ok = true;
  for (const auto& r : rows) {
    table << r.beta << ',' << r.scan.value << ',' << r.scan.divergent << ',' << r.expected_divergent << ','
          << r.match << '\n';
    Json est{{"value", r.scan.divergent ? Json(nullptr) : Json(r.scan.value)},
             {"divergent", r.scan.divergent},
             {"running_max", Json::array()}};
    for (double m : r.scan.running_max) est["running_max"].push_back(std::isfinite(m) ? Json(m) : Json(nullptr));
    records.push_back(theorem_record("a2-window", r.beta, "interval", est, Json::array({0.0, std::ldexp(1.0, -cfg.depth)}),
                                     r.scan.divergent ? "divergent" : "finite",
                                     {{"growth", 1.05}, {"depth", cfg.depth}}));
    log << "a2 beta=" << std::setw(6) << r.beta << ' ' << (r.scan.divergent ? "divergent" : "finite   ")
        << " value=" << r.scan.value << (r.match ? "" : "  MISMATCH") << '\n';
    ok = ok && r.match;
  }
  bundle.write("a2.csv", table.str());
  bundle.write_json("a2.json", records);
  Json run = run_json(cfg);
  run["depth"] = cfg.depth;
  bundle.write_manifest(run);
  return ok ? 0 : 1;
}

int run_command(const RunConfig& cfg, std::ostream& log) {
  if (cfg.command == "solve") return cmd_solve(cfg, log);
  if (cfg.command == "verify") return cmd_verify(cfg, log);
  if (cfg.command == "theorems") return cmd_theorems(cfg, log);
  if (cfg.command == "a2") return cmd_a2(cfg, log);
  throw ConfigurationError("unknown command " + cfg.command);
}

}  // namespace degenlab
