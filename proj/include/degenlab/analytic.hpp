#pragma once

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <iosfwd>
#include <string>
#include <vector>

#include "degenlab/errors.hpp"
#include "degenlab/geometry.hpp"

namespace degenlab {

/// v = d^{1-beta} (-log d)^eta on 0 < d < sigma <= 1/e.
template <class Scalar = double>
class Barrier {
 public:
  Barrier(Scalar eta, Scalar beta, Scalar sigma = Scalar(1) / std::exp(Scalar(1))) : eta_(eta), beta_(beta), sigma_(sigma) {
    using std::exp;
    if (!(beta < Scalar(1))) throw DomainError("barrier requires beta < 1");
    // -log d >= 1 on (0, sigma), so fractional powers stay real.
    if (!(sigma > Scalar(0)) || sigma > exp(-Scalar(1)) * (Scalar(1) + Scalar(1e-15)))
      throw DomainError("barrier sigma must lie in (0, 1/e]");
  }

  Scalar eta() const noexcept { return eta_; }
  Scalar beta() const noexcept { return beta_; }
  Scalar sigma() const noexcept { return sigma_; }

  void require_in_range(Scalar d) const {
    if (!(d > Scalar(0)) || !(d < sigma_)) throw DomainError("barrier evaluated outside 0 < d < sigma");
  }

 private:
  Scalar eta_;
  Scalar beta_;
  Scalar sigma_;
};

template <class Scalar>
Scalar barrier_eval(const Barrier<Scalar>& b, Scalar d) {
  using std::log;
  using std::pow;
  b.require_in_range(d);
  return pow(d, Scalar(1) - b.beta()) * pow(-log(d), b.eta());
}

/// L_beta v for v = d^{1-beta} l^eta, l = -log d, using |grad d| = 1:
///   -lap_d [(1-beta) l^eta - eta l^{eta-1}] + d^{-1} [(1-beta) eta l^{eta-1} - eta (eta-1) l^{eta-2}].
template <class Scalar>
Scalar barrier_Lbeta(const Barrier<Scalar>& b, Scalar d, Scalar lap_d) {
  using std::log;
  using std::pow;
  b.require_in_range(d);
  const Scalar l = -log(d);
  const Scalar eta = b.eta();
  const Scalar one_m_beta = Scalar(1) - b.beta();
  const Scalar curvature = -lap_d * (one_m_beta * pow(l, eta) - eta * pow(l, eta - 1));
  const Scalar normal = (one_m_beta * eta * pow(l, eta - 1) - eta * (eta - 1) * pow(l, eta - 2)) / d;
  return curvature + normal;
}

/// Sum of the absolute values of the four terms of barrier_Lbeta; the scale for relative comparisons.
template <class Scalar>
Scalar barrier_Lbeta_magnitude(const Barrier<Scalar>& b, Scalar d, Scalar lap_d) {
  using std::abs;
  using std::log;
  using std::pow;
  b.require_in_range(d);
  const Scalar l = -log(d);
  const Scalar eta = b.eta();
  const Scalar one_m_beta = Scalar(1) - b.beta();
  return abs(lap_d) * (abs(one_m_beta * pow(l, eta)) + abs(eta * pow(l, eta - 1))) +
         (abs(one_m_beta * eta * pow(l, eta - 1)) + abs(eta * (eta - 1) * pow(l, eta - 2))) / d;
}

/// Leading term (1-beta) eta / (d l^{1-eta}) of L_beta v as d -> 0.
template <class Scalar>
Scalar barrier_leading_term(const Barrier<Scalar>& b, Scalar d) {
  using std::log;
  using std::pow;
  return (Scalar(1) - b.beta()) * b.eta() / (d * pow(-log(d), Scalar(1) - b.eta()));
}

/// Largest sigma' <= sigma such that L_beta v keeps the sign of (1-beta) eta on a log-spaced
/// sample of d in (1e-12, sigma') along an inward normal. Throws CertificationFailure when the
/// sign is wrong already at d = 1e-12.
double barrier_sign_radius(const Barrier<double>& b, const Domain& dom);

/// u(r) = (1 + (1-beta) r) / (N (1-beta)(2-beta)) (1-r)^{1-beta}: solves L_beta u = 1 in the unit ball.
template <class Scalar>
Scalar exact_radial_source_one(Scalar beta, int n, Scalar r) {
  using std::pow;
  if (!(beta < Scalar(1))) throw DomainError("closed-form radial solution requires beta < 1");
  if (n < 2) throw DomainError("radial solution requires N >= 2");
  if (r < Scalar(0) || r > Scalar(1)) throw DomainError("radius outside [0, 1]");
  const Scalar one_m_beta = Scalar(1) - beta;
  return (Scalar(1) + one_m_beta * r) / (Scalar(n) * one_m_beta * (Scalar(2) - beta)) * pow(Scalar(1) - r, one_m_beta);
}

/// Same closed form written in the distance q = 1 - r, exact for q near 0.
template <class Scalar>
Scalar exact_radial_source_one_at_depth(Scalar beta, int n, Scalar q) {
  using std::pow;
  if (!(beta < Scalar(1))) throw DomainError("closed-form radial solution requires beta < 1");
  if (q < Scalar(0) || q > Scalar(1)) throw DomainError("depth outside [0, 1]");
  const Scalar one_m_beta = Scalar(1) - beta;
  return (Scalar(2) - beta - one_m_beta * q) / (Scalar(n) * one_m_beta * (Scalar(2) - beta)) * pow(q, one_m_beta);
}

/// 1-D problem -(d^beta u')' = 1 on (0,1), d = min(x, 1-x), u(0) = u(1) = 0:
///   u = t^{1-beta}/(2(1-beta)) - t^{2-beta}/(2-beta),  t = min(x, 1-x).
template <class Scalar>
Scalar exact_1d_source_one_at_depth(Scalar beta, Scalar t) {
  using std::pow;
  if (!(beta < Scalar(1))) throw DomainError("1-D closed form requires beta < 1");
  if (t < Scalar(0) || t > Scalar(0.5)) throw DomainError("depth outside [0, 1/2]");
  return pow(t, Scalar(1) - beta) / (Scalar(2) * (Scalar(1) - beta)) - pow(t, Scalar(2) - beta) / (Scalar(2) - beta);
}

template <class Scalar>
Scalar exact_1d_source_one(Scalar beta, Scalar x) {
  using std::min;
  if (x < Scalar(0) || x > Scalar(1)) throw DomainError("x outside [0, 1]");
  return exact_1d_source_one_at_depth(beta, min(x, Scalar(1) - x));
}

/// u(r) = int_r^1 s^{1-N} (1-s)^{-beta} I(s) ds with I(s) = int_0^s t^{N-1} (1-t)^beta dt,
/// the radial solution of L_beta u = d^beta in the unit ball, 0 <= beta < 1.
///
/// I is an incomplete beta function, B(N, beta+1) I_s(N, beta+1); the outer integral is taken
/// in q = 1 - s by tanh-sinh quadrature, which absorbs the q^{-beta} endpoint singularity.
template <class Scalar>
Scalar exact_radial_source_dbeta_at_depth(Scalar beta, int n, Scalar depth) {
  using std::pow;
  if (!(beta >= Scalar(0) && beta < Scalar(1))) throw DomainError("first radial example is stated for 0 <= beta < 1");
  if (n < 2) throw DomainError("radial solution requires N >= 2");
  if (depth < Scalar(0) || depth > Scalar(1)) throw DomainError("depth outside [0, 1]");
  if (depth == Scalar(0)) return Scalar(0);
  const Scalar a = Scalar(n);
  const Scalar b = beta + Scalar(1);
  const Scalar full = boost::math::beta(a, b);
  const auto integrand = [&](Scalar q) -> Scalar {
    if (q <= Scalar(0)) return Scalar(0);
    const Scalar s = Scalar(1) - q;
    if (s <= Scalar(0)) return Scalar(0);
    // I_{1-q}(a, b) = 1 - I_q(b, a), evaluated without forming 1 - q.
    const Scalar inner = full * boost::math::ibetac(b, a, q);
    return pow(s, Scalar(1) - a) * pow(q, -beta) * inner;
  };
  static thread_local boost::math::quadrature::tanh_sinh<Scalar> integrator;
  const Scalar tol = std::sqrt(std::numeric_limits<Scalar>::epsilon()) * Scalar(1e-3);
  return integrator.integrate(integrand, Scalar(0), depth, tol);
}

template <class Scalar>
Scalar exact_radial_source_dbeta(Scalar beta, int n, Scalar r) {
  if (r < Scalar(0) || r > Scalar(1)) throw DomainError("radius outside [0, 1]");
  return exact_radial_source_dbeta_at_depth(beta, n, Scalar(1) - r);
}

enum class OracleKind { source_dbeta, source_one, one_d };

OracleKind parse_oracle_kind(const std::string& name);
std::string to_string(OracleKind kind);

/// Closed-form solution of L_beta u = f with its source, as a function of radius (or x for one_d).
struct RadialSolution {
  OracleKind kind;
  double beta;
  int dimension;       // N; 1 for one_d
  double perturbation = 0.0;  // test fixture: u is scaled by (1 + perturbation)

  RadialSolution(OracleKind kind, double beta, int dimension, double perturbation = 0.0);

  long double value(long double s) const;
  long double source(long double s) const;
  /// Distance to the boundary of the sample coordinate.
  long double depth(long double s) const;
};

struct IdentityCheck {
  double max_residual = 0.0;
  double max_reference = 0.0;  // max |f| (or |L_beta v|) over the samples
  int samples = 0;
};

/// Max |L_h u - f| over interior sample coordinates, L_h the centred flux difference of step h
/// applied to the closed form (radial form for the balls, flat form for one_d).
IdentityCheck verify_operator_identity(const RadialSolution& sol, const std::vector<double>& samples, double h);

/// Delta d at depth d along an inward normal away from corners: -(N-1)/(R-d) in a ball, 0 otherwise.
long double laplacian_along_normal(const Domain& dom, long double d);

/// Max |L_h v - barrier_Lbeta(v)| over sample depths along an inward normal of dom, with Delta d
/// taken from the geometry.
IdentityCheck verify_operator_identity(const Barrier<long double>& b, const Domain& dom,
                                       const std::vector<double>& depths, double h);

/// Richardson-extrapolated flux difference of L_beta v at depth d (step h and h/2), in long double.
long double barrier_Lbeta_finite_difference(const Barrier<long double>& b, const Domain& dom, long double d,
                                            long double h);

/// CSV table `r,u,beta,N,kind` of a closed form at the given coordinates.
void write_oracle_table(std::ostream& os, const RadialSolution& sol, const std::vector<double>& coords);

}  // namespace degenlab
