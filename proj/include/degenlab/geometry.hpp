#pragma once

#include <Eigen/Core>

#include <boost/math/constants/constants.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <iosfwd>
#include <string>

#include "degenlab/errors.hpp"
#include "degenlab/quadrature.hpp"

namespace degenlab {

template <class Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Point = Eigen::VectorXd;

enum class DomainKind { interval, ball, rectangle };

/// Bounded convex region with a closed-form distance to its boundary.
///
///   interval(a, b)      (a, b) in R
///   ball(N, R)          |x| < R in R^N, centred at the origin
///   rectangle(Lx, Ly)   (0, Lx) x (0, Ly)
class Domain {
 public:
  static Domain interval(double a, double b);
  static Domain ball(int dimension, double radius);
  static Domain rectangle(double lx, double ly);

  DomainKind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return dimension_; }

  double a() const noexcept { return p0_; }
  double b() const noexcept { return p1_; }
  double radius() const noexcept { return p0_; }
  double lx() const noexcept { return p0_; }
  double ly() const noexcept { return p1_; }

  double inradius() const noexcept;
  /// Diameter-like length used to scale tolerances.
  double scale() const noexcept;
  std::string name() const;

 private:
  Domain(DomainKind kind, int dimension, double p0, double p1)
      : kind_(kind), dimension_(dimension), p0_(p0), p1_(p1) {}

  DomainKind kind_;
  int dimension_;
  double p0_;
  double p1_;
};

/// Surface area of the unit sphere S^{N-1}.
inline double unit_sphere_area(int n) {
  using boost::math::constants::pi;
  return 2.0 * std::pow(pi<double>(), 0.5 * n) / boost::math::tgamma(0.5 * n);
}

namespace detail {

template <class Scalar>
Scalar membership_slack(const Domain& dom) {
  return Scalar(64) * std::numeric_limits<double>::epsilon() * Scalar(dom.scale());
}

template <class Derived>
void require_dimension(const Domain& dom, const Eigen::MatrixBase<Derived>& x) {
  if (x.size() != dom.dimension()) throw ContractViolation("point dimension does not match domain " + dom.name());
}

// Distances to the four sides of a rectangle: left, right, bottom, top.
template <class Scalar>
std::array<Scalar, 4> side_distances(const Domain& dom, Scalar x, Scalar y) {
  return {x, Scalar(dom.lx()) - x, y, Scalar(dom.ly()) - y};
}

}  // namespace detail

/// Euclidean distance from x to the boundary; throws DomainError for points outside the closure.
template <class Derived>
typename Derived::Scalar distance(const Domain& dom, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  using std::min;
  detail::require_dimension(dom, x);
  const Scalar slack = detail::membership_slack<Scalar>(dom);
  Scalar d;
  switch (dom.kind()) {
    case DomainKind::interval:
      d = min(x(0) - Scalar(dom.a()), Scalar(dom.b()) - x(0));
      break;
    case DomainKind::ball:
      d = Scalar(dom.radius()) - x.norm();
      break;
    case DomainKind::rectangle: {
      const auto s = detail::side_distances<Scalar>(dom, x(0), x(1));
      d = *std::min_element(s.begin(), s.end());
      break;
    }
  }
  if (d < -slack) throw DomainError("point lies outside " + dom.name());
  return d < Scalar(0) ? Scalar(0) : d;
}

/// Unit inward normal of the nearest boundary piece, i.e. the gradient of d.
/// Refused on the medial axis (interval midpoint, ball centre, rectangle diagonals/midline).
template <class Derived>
VectorX<typename Derived::Scalar> grad_distance(const Domain& dom, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  (void)distance(dom, x);
  const Scalar tie = detail::membership_slack<Scalar>(dom);
  VectorX<Scalar> g = VectorX<Scalar>::Zero(dom.dimension());
  switch (dom.kind()) {
    case DomainKind::interval: {
      const Scalar left = x(0) - Scalar(dom.a());
      const Scalar right = Scalar(dom.b()) - x(0);
      if (abs(left - right) <= tie) throw NonSmoothPointError("interval midpoint is a ridge point of d");
      g(0) = left < right ? Scalar(1) : Scalar(-1);
      break;
    }
    case DomainKind::ball: {
      const Scalar r = x.norm();
      if (r <= tie) throw NonSmoothPointError("ball centre is a ridge point of d");
      g = -x / r;
      break;
    }
    case DomainKind::rectangle: {
      const auto s = detail::side_distances<Scalar>(dom, x(0), x(1));
      std::array<int, 4> order{0, 1, 2, 3};
      std::sort(order.begin(), order.end(), [&s](int i, int j) { return s[i] < s[j]; });
      if (abs(s[order[1]] - s[order[0]]) <= tie) throw NonSmoothPointError("point is equidistant from two sides");
      static constexpr std::array<std::array<int, 2>, 4> normals{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
      g(0) = Scalar(normals[order[0]][0]);
      g(1) = Scalar(normals[order[0]][1]);
      break;
    }
  }
  return g;
}

/// Laplacian of d off the medial axis: 0 for flat sides, -(N-1)/|x| in the ball. Never positive here.
template <class Derived>
typename Derived::Scalar laplacian_distance(const Domain& dom, const Eigen::MatrixBase<Derived>& x) {
  using Scalar = typename Derived::Scalar;
  (void)grad_distance(dom, x);
  if (dom.kind() == DomainKind::ball) return -Scalar(dom.dimension() - 1) / x.norm();
  return Scalar(0);
}

/// H^{N-1} measure of the level set {d = t}, 0 <= t < inradius.
template <class Scalar>
Scalar level_set_area(const Domain& dom, Scalar t) {
  using std::pow;
  if (t < 0 || !(t < Scalar(dom.inradius()))) throw DomainError("level set parameter outside [0, inradius)");
  switch (dom.kind()) {
    case DomainKind::interval:
      return Scalar(2);
    case DomainKind::ball:
      return Scalar(unit_sphere_area(dom.dimension())) * pow(Scalar(dom.radius()) - t, dom.dimension() - 1);
    case DomainKind::rectangle:
      return Scalar(2) * ((Scalar(dom.lx()) - 2 * t) + (Scalar(dom.ly()) - 2 * t));
  }
  return Scalar(0);
}

/// min(inradius / 2, 1/e); the cap keeps -log d >= 1 on the neighbourhood.
double default_sigma(const Domain& dom);

/// Gamma_sigma = { x in closure : d(x) < sigma } with sigma below the inradius.
class TubularNeighborhood {
 public:
  TubularNeighborhood(Domain parent, double sigma);
  explicit TubularNeighborhood(Domain parent) : TubularNeighborhood(parent, default_sigma(parent)) {}

  const Domain& parent() const noexcept { return parent_; }
  double sigma() const noexcept { return sigma_; }

 private:
  Domain parent_;
  double sigma_;
};

/// Integral of g(d(x)) over Gamma_sigma by the coarea formula,
///   int_0^sigma g(t) H^{N-1}({d = t}) dt,
/// with the divergence flag raised when g is not integrable at t = 0.
template <class G>
IntegralResult<double> tubular_integral(const TubularNeighborhood& nbhd, G&& g) {
  const Domain& dom = nbhd.parent();
  return integrate_from_zero<double>([&](double t) { return g(t) * level_set_area(dom, t); }, nbhd.sigma());
}

/// Nodes of a 1-D (or one tensor axis) mesh. `domain` is the tag written in mesh dumps.
///
/// `offsets` holds each node's distance to the nearest graded endpoint, computed directly rather
/// than as a difference of coordinates: with strong grading the nodes nearest the far endpoint
/// are not representable as distinct coordinates, but their offsets are.
struct Mesh {
  Eigen::VectorXd nodes;
  Eigen::VectorXd offsets;
  int n = 0;
  double gamma = 1.0;
  std::string domain;

  Eigen::Index size() const noexcept { return nodes.size(); }
  Eigen::Index cells() const noexcept { return nodes.size() - 1; }
  /// Width of cell [i, i+1], taken from whichever representation has the smaller magnitude.
  double cell(Eigen::Index i) const;
  /// Offset (distance to the nearest graded endpoint) of the midpoint of cell [i, i+1].
  double mid_offset(Eigen::Index i) const;
};

/// Interval mesh with n cells graded toward both endpoints:
/// node i on [a, mid] sits at a + (mid - a) (2i/n)^gamma, mirrored on the right half.
Mesh graded_mesh(const Domain& interval, int n, double gamma);

/// Radial mesh on [0, R] with n cells graded toward r = R only: r_i = R (1 - (1 - i/n)^gamma).
Mesh graded_radial_mesh(const Domain& ball, int n, double gamma);

/// `# mesh n=<n> gamma=<g> domain=<kind>` followed by one coordinate per line.
void write_mesh(std::ostream& os, const Mesh& mesh);

}  // namespace degenlab
