#include "degenlab/geometry.hpp"

#include <iomanip>
#include <ostream>
#include <sstream>

namespace degenlab {

Domain Domain::interval(double a, double b) {
  if (!(b > a)) throw ConfigurationError("interval requires b > a");
  return Domain(DomainKind::interval, 1, a, b);
}

Domain Domain::ball(int dimension, double radius) {
  if (dimension < 2) throw ConfigurationError("ball requires dimension N >= 2");
  if (!(radius > 0)) throw ConfigurationError("ball requires R > 0");
  return Domain(DomainKind::ball, dimension, radius, 0.0);
}

Domain Domain::rectangle(double lx, double ly) {
  if (!(lx > 0) || !(ly > 0)) throw ConfigurationError("rectangle requires Lx > 0 and Ly > 0");
  return Domain(DomainKind::rectangle, 2, lx, ly);
}

double Domain::inradius() const noexcept {
  switch (kind_) {
    case DomainKind::interval:
      return 0.5 * (p1_ - p0_);
    case DomainKind::ball:
      return p0_;
    case DomainKind::rectangle:
      return 0.5 * std::min(p0_, p1_);
  }
  return 0.0;
}

double Domain::scale() const noexcept {
  switch (kind_) {
    case DomainKind::interval:
      return p1_ - p0_;
    case DomainKind::ball:
      return 2.0 * p0_;
    case DomainKind::rectangle:
      return std::max(p0_, p1_);
  }
  return 1.0;
}

std::string Domain::name() const {
  switch (kind_) {
    case DomainKind::interval:
      return "interval";
    case DomainKind::ball:
      return "ball";
    case DomainKind::rectangle:
      return "rectangle";
  }
  return "unknown";
}

double default_sigma(const Domain& dom) { return std::min(0.5 * dom.inradius(), std::exp(-1.0)); }

TubularNeighborhood::TubularNeighborhood(Domain parent, double sigma) : parent_(parent), sigma_(sigma) {
  if (!(sigma > 0) || !(sigma < parent.inradius()))
    throw ConfigurationError("tubular neighbourhood needs 0 < sigma < inradius");
}

namespace {

void check_grading(int n, double gamma) {
  if (n < 4 || n % 2 != 0) throw ConfigurationError("graded mesh needs an even cell count n >= 4");
  if (!(gamma >= 1.0)) throw ConfigurationError("grading exponent gamma must be >= 1");
}

}  // namespace

Mesh graded_mesh(const Domain& interval, int n, double gamma) {
  if (interval.kind() != DomainKind::interval) throw ConfigurationError("graded_mesh expects an interval domain");
  check_grading(n, gamma);
  const double a = interval.a();
  const double b = interval.b();
  const double half = 0.5 * (b - a);
  const int m = n / 2;
  Mesh mesh;
  mesh.n = n;
  mesh.gamma = gamma;
  mesh.domain = interval.name();
  mesh.nodes.resize(n + 1);
  mesh.offsets.resize(n + 1);
  for (int i = 0; i <= m; ++i) {
    const double offset = half * std::pow(static_cast<double>(i) / m, gamma);
    mesh.nodes(i) = a + offset;
    mesh.nodes(n - i) = b - offset;
    mesh.offsets(i) = offset;
    mesh.offsets(n - i) = offset;
  }
  mesh.nodes(m) = a + half;
  mesh.offsets(m) = half;
  return mesh;
}

Mesh graded_radial_mesh(const Domain& ball, int n, double gamma) {
  if (ball.kind() != DomainKind::ball) throw ConfigurationError("graded_radial_mesh expects a ball domain");
  if (n < 4) throw ConfigurationError("radial mesh needs n >= 4 cells");
  if (!(gamma >= 1.0)) throw ConfigurationError("grading exponent gamma must be >= 1");
  const double radius = ball.radius();
  Mesh mesh;
  mesh.n = n;
  mesh.gamma = gamma;
  mesh.domain = ball.name();
  mesh.nodes.resize(n + 1);
  mesh.offsets.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    // d = R - r is graded, so nodes cluster at the sphere.
    mesh.offsets(i) = radius * std::pow(static_cast<double>(n - i) / n, gamma);
    mesh.nodes(i) = radius - mesh.offsets(i);
  }
  mesh.nodes(0) = 0.0;
  mesh.nodes(n) = radius;
  return mesh;
}

double Mesh::cell(Eigen::Index i) const {
  const double by_offset = std::abs(offsets(i + 1) - offsets(i));
  const double by_node = nodes(i + 1) - nodes(i);
  const double offset_scale = std::max(offsets(i), offsets(i + 1));
  const double node_scale = std::max(std::abs(nodes(i)), std::abs(nodes(i + 1)));
  return offset_scale <= node_scale ? by_offset : by_node;
}

double Mesh::mid_offset(Eigen::Index i) const { return 0.5 * (offsets(i) + offsets(i + 1)); }

void write_mesh(std::ostream& os, const Mesh& mesh) {
  os << "# mesh n=" << mesh.n << " gamma=" << mesh.gamma << " domain=" << mesh.domain << '\n';
  os << std::setprecision(17);
  for (Eigen::Index i = 0; i < mesh.size(); ++i) os << mesh.nodes(i) << '\n';
}

}  // namespace degenlab
