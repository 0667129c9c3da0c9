#include "degenlab/analytic.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

namespace degenlab {

namespace {

// Inward-normal metric factor: (R - d)^{N-1} in a ball, 1 next to flat sides.
long double normal_metric(const Domain& dom, long double d) {
  if (dom.kind() != DomainKind::ball) return 1.0L;
  return std::pow(static_cast<long double>(dom.radius()) - d, dom.dimension() - 1);
}

// Centred flux difference -(m w v')'/m at depth d, m and w sampled at the half points.
long double barrier_flux_difference(const Barrier<long double>& b, const Domain& dom, long double d, long double h) {
  if (!(d - h > 0.0L) || !(d + h < b.sigma()))
    throw StencilError("finite-difference stencil leaves the barrier's range (0, sigma)");
  const auto flux = [&](long double s) { return normal_metric(dom, s) * std::pow(s, b.beta()); };
  const long double vm = barrier_eval(b, d - h);
  const long double v0 = barrier_eval(b, d);
  const long double vp = barrier_eval(b, d + h);
  const long double outer = flux(d + 0.5L * h) * (vp - v0);
  const long double inner = flux(d - 0.5L * h) * (v0 - vm);
  return -(outer - inner) / (h * h * normal_metric(dom, d));
}

}  // namespace

OracleKind parse_oracle_kind(const std::string& name) {
  if (name == "source_dbeta") return OracleKind::source_dbeta;
  if (name == "source_one") return OracleKind::source_one;
  if (name == "one_d") return OracleKind::one_d;
  throw ConfigurationError("unknown oracle kind '" + name + "'");
}

std::string to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::source_dbeta:
      return "source_dbeta";
    case OracleKind::source_one:
      return "source_one";
    case OracleKind::one_d:
      return "one_d";
  }
  return "unknown";
}

RadialSolution::RadialSolution(OracleKind kind_, double beta_, int dimension_, double perturbation_)
    : kind(kind_), beta(beta_), dimension(dimension_), perturbation(perturbation_) {
  if (!(beta < 1.0)) throw DomainError("oracle requires beta < 1");
  if (kind == OracleKind::source_dbeta && beta < 0.0)
    throw DomainError("first radial example is stated for 0 <= beta < 1");
  if (kind == OracleKind::one_d) {
    dimension = 1;
  } else if (dimension < 2) {
    throw DomainError("radial oracles require N >= 2");
  }
}

long double RadialSolution::depth(long double s) const {
  if (kind == OracleKind::one_d) return std::min(s, 1.0L - s);
  return 1.0L - s;
}

long double RadialSolution::value(long double s) const {
  const long double b = beta;
  long double u = 0.0L;
  switch (kind) {
    case OracleKind::source_one:
      u = exact_radial_source_one<long double>(b, dimension, s);
      break;
    case OracleKind::source_dbeta:
      u = exact_radial_source_dbeta_at_depth<long double>(b, dimension, 1.0L - s);
      break;
    case OracleKind::one_d:
      u = exact_1d_source_one<long double>(b, s);
      break;
  }
  return u * (1.0L + static_cast<long double>(perturbation));
}

long double RadialSolution::source(long double s) const {
  if (kind == OracleKind::source_dbeta) return std::pow(depth(s), static_cast<long double>(beta));
  return 1.0L;
}

IdentityCheck verify_operator_identity(const RadialSolution& sol, const std::vector<double>& samples, double h) {
  if (!(h > 0)) throw ConfigurationError("finite-difference step must be positive");
  const long double step = h;
  const long double b = sol.beta;
  const int metric_power = sol.kind == OracleKind::one_d ? 0 : sol.dimension - 1;
  const auto metric = [&](long double s) { return std::pow(s, metric_power); };
  const auto weight = [&](long double s) { return std::pow(sol.depth(s), b); };

  IdentityCheck out;
  for (double sample : samples) {
    const long double s = sample;
    if (!(sol.depth(s) > step)) throw StencilError("sample point too close to the boundary for the stencil");
    if (sol.kind != OracleKind::one_d && !(s - step > 0.0L))
      throw StencilError("radial stencil reaches the centre");
    if (sol.kind == OracleKind::one_d && s - step < 0.5L && s + step > 0.5L && s != 0.5L)
      throw StencilError("stencil straddles the ridge x = 1/2");
    const long double um = sol.value(s - step);
    const long double u0 = sol.value(s);
    const long double up = sol.value(s + step);
    const long double outer = metric(s + step / 2) * weight(s + step / 2) * (up - u0);
    const long double inner = metric(s - step / 2) * weight(s - step / 2) * (u0 - um);
    const long double lu = -(outer - inner) / (step * step * metric(s));
    const long double f = sol.source(s);
    out.max_residual = std::max(out.max_residual, static_cast<double>(std::abs(lu - f)));
    out.max_reference = std::max(out.max_reference, static_cast<double>(std::abs(f)));
    ++out.samples;
  }
  return out;
}

long double laplacian_along_normal(const Domain& dom, long double d) {
  if (dom.kind() != DomainKind::ball) return 0.0L;
  return -static_cast<long double>(dom.dimension() - 1) / (static_cast<long double>(dom.radius()) - d);
}

IdentityCheck verify_operator_identity(const Barrier<long double>& b, const Domain& dom,
                                       const std::vector<double>& depths, double h) {
  if (!(h > 0)) throw ConfigurationError("finite-difference step must be positive");
  IdentityCheck out;
  for (double sample : depths) {
    const long double d = sample;
    const long double numeric = barrier_flux_difference(b, dom, d, h);
    const long double exact = barrier_Lbeta(b, d, laplacian_along_normal(dom, d));
    out.max_residual = std::max(out.max_residual, static_cast<double>(std::abs(numeric - exact)));
    out.max_reference = std::max(out.max_reference, static_cast<double>(std::abs(exact)));
    ++out.samples;
  }
  return out;
}

long double barrier_Lbeta_finite_difference(const Barrier<long double>& b, const Domain& dom, long double d,
                                            long double h) {
  const long double coarse = barrier_flux_difference(b, dom, d, h);
  const long double fine = barrier_flux_difference(b, dom, d, h / 2);
  return (4.0L * fine - coarse) / 3.0L;
}

double barrier_sign_radius(const Barrier<double>& b, const Domain& dom) {
  if (b.eta() == 0.0) throw ContractViolation("sign radius is defined for eta != 0");
  if (!(b.sigma() < dom.inradius())) throw ConfigurationError("barrier sigma must lie below the inradius");
  constexpr int kSamples = 4000;
  constexpr double kInnermost = 1e-12;
  const double expected = (1.0 - b.beta()) * b.eta() > 0 ? 1.0 : -1.0;
  const double log_lo = std::log(kInnermost);
  const double log_hi = std::log(b.sigma());
  for (int k = 0; k < kSamples; ++k) {
    const double d = std::exp(log_lo + (log_hi - log_lo) * k / kSamples);
    double lap = 0.0;
    if (dom.kind() == DomainKind::ball) lap = -(dom.dimension() - 1) / (dom.radius() - d);
    const double lv = barrier_Lbeta(b, d, lap);
    if (!(lv * expected > 0)) {
      if (k == 0) throw CertificationFailure("no sign-definite neighbourhood down to d = 1e-12");
      return d;
    }
  }
  return b.sigma();
}

void write_oracle_table(std::ostream& os, const RadialSolution& sol, const std::vector<double>& coords) {
  os << "r,u,beta,N,kind\n" << std::setprecision(17);
  for (double r : coords) {
    os << r << ',' << static_cast<double>(sol.value(r)) << ',' << sol.beta << ',' << sol.dimension << ','
       << to_string(sol.kind) << '\n';
  }
}

}  // namespace degenlab
