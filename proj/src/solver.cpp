#include "degenlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

namespace degenlab {

using Eigen::Index;
using Eigen::VectorXd;

double weight_beta(const Weight& w) {
  return std::visit([](const auto& x) { return x.beta(); }, w);
}

double eval_coefficient(const Weight& w, const Point& x, double d) {
  if (const auto* pw = std::get_if<PowerWeight<double>>(&w)) return eval_weight(*pw, d);
  return std::get<GeneralWeight>(w)(x, d);
}

double default_gamma(double beta) { return std::max(1.0, 2.0 / (1.0 - beta)); }

Source constant_source(double value) {
  return [value](const Point&, double) { return value; };
}

Source distance_power_source(double beta) {
  return [beta](const Point&, double d) { return beta == 0.0 ? 1.0 : std::pow(d, beta); };
}

Source distance_polynomial_source(std::vector<double> coeffs) {
  if (coeffs.empty()) throw ConfigurationError("polynomial source needs at least one coefficient");
  return [c = std::move(coeffs)](const Point&, double d) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * d + *it;
    return acc;
  };
}

namespace {

VectorXd dual_widths(const Mesh& m) {
  const Index n = m.size();
  VectorXd w = VectorXd::Zero(n);
  for (Index i = 0; i + 1 < n; ++i) {
    const double h = m.cell(i);
    w(i) += 0.5 * h;
    w(i + 1) += 0.5 * h;
  }
  return w;
}

Point axis_point(int dim, double first) {
  Point x = Point::Zero(dim);
  x(0) = first;
  return x;
}

}  // namespace

std::shared_ptr<const Grid> Grid::build(const Domain& dom, int n, double gamma) {
  std::shared_ptr<Grid> g;
  switch (dom.kind()) {
    case DomainKind::interval:
      g.reset(new Grid(Layout::interval, dom));
      g->x_ = graded_mesh(dom, n, gamma);
      break;
    case DomainKind::ball:
      g.reset(new Grid(Layout::radial, dom));
      g->x_ = graded_radial_mesh(dom, n, gamma);
      break;
    case DomainKind::rectangle:
      g.reset(new Grid(Layout::tensor, dom));
      g->x_ = graded_mesh(Domain::interval(0.0, dom.lx()), n, gamma);
      g->y_ = graded_mesh(Domain::interval(0.0, dom.ly()), n, gamma);
      g->x_.domain = g->y_.domain = dom.name();
      break;
  }
  g->finish();
  return g;
}

void Grid::finish() {
  const Index nx = x_.size();
  switch (layout_) {
    case Layout::interval: {
      distance_ = x_.offsets;
      boundary_.assign(static_cast<std::size_t>(nx), false);
      boundary_.front() = boundary_.back() = true;
      dual_ = dual_widths(x_);
      for (Index i = 0; i + 1 < nx; ++i) {
        Face f;
        f.a = i;
        f.b = i + 1;
        f.span = x_.cell(i);
        f.cross = 1.0;
        f.distance = x_.mid_offset(i);
        f.midpoint = axis_point(1, 0.5 * (x_.nodes(i) + x_.nodes(i + 1)));
        faces_.push_back(std::move(f));
      }
      break;
    }
    case Layout::radial: {
      const int dim = domain_.dimension();
      const double area = unit_sphere_area(dim);
      distance_ = x_.offsets;
      boundary_.assign(static_cast<std::size_t>(nx), false);
      boundary_.back() = true;
      dual_ = VectorXd::Zero(nx);
      for (Index i = 0; i < nx; ++i) {
        const double lo = i == 0 ? 0.0 : 0.5 * (x_.nodes(i - 1) + x_.nodes(i));
        const double hi = i + 1 == nx ? domain_.radius() : 0.5 * (x_.nodes(i) + x_.nodes(i + 1));
        dual_(i) = area / dim * (std::pow(hi, dim) - std::pow(lo, dim));
      }
      for (Index i = 0; i + 1 < nx; ++i) {
        const double rm = 0.5 * (x_.nodes(i) + x_.nodes(i + 1));
        Face f;
        f.a = i;
        f.b = i + 1;
        f.span = x_.cell(i);
        f.cross = area * std::pow(rm, dim - 1);
        f.distance = x_.mid_offset(i);
        f.midpoint = axis_point(dim, rm);
        faces_.push_back(std::move(f));
      }
      break;
    }
    case Layout::tensor: {
      const Index ny = y_.size();
      distance_.resize(nx * ny);
      boundary_.assign(static_cast<std::size_t>(nx * ny), false);
      dual_.resize(nx * ny);
      const VectorXd wx = dual_widths(x_);
      const VectorXd wy = dual_widths(y_);
      for (Index j = 0; j < ny; ++j) {
        for (Index i = 0; i < nx; ++i) {
          const Index k = index(i, j);
          distance_(k) = std::min(x_.offsets(i), y_.offsets(j));
          boundary_[static_cast<std::size_t>(k)] = i == 0 || j == 0 || i + 1 == nx || j + 1 == ny;
          dual_(k) = wx(i) * wy(j);
        }
      }
      for (Index j = 0; j < ny; ++j) {
        for (Index i = 0; i + 1 < nx; ++i) {
          const Index a = index(i, j);
          const Index b = index(i + 1, j);
          if (is_boundary(a) && is_boundary(b)) continue;
          Face f;
          f.a = a;
          f.b = b;
          f.span = x_.cell(i);
          f.cross = wy(j);
          f.distance = std::min(x_.mid_offset(i), y_.offsets(j));
          f.midpoint = (Point(2) << 0.5 * (x_.nodes(i) + x_.nodes(i + 1)), y_.nodes(j)).finished();
          faces_.push_back(std::move(f));
        }
      }
      for (Index j = 0; j + 1 < ny; ++j) {
        for (Index i = 0; i < nx; ++i) {
          const Index a = index(i, j);
          const Index b = index(i, j + 1);
          if (is_boundary(a) && is_boundary(b)) continue;
          Face f;
          f.a = a;
          f.b = b;
          f.span = y_.cell(j);
          f.cross = wx(i);
          f.distance = std::min(x_.offsets(i), y_.mid_offset(j));
          f.midpoint = (Point(2) << x_.nodes(i), 0.5 * (y_.nodes(j) + y_.nodes(j + 1))).finished();
          faces_.push_back(std::move(f));
        }
      }
      break;
    }
  }
}

Point Grid::point(Index k) const {
  switch (layout_) {
    case Layout::interval:
      return axis_point(1, x_.nodes(k));
    case Layout::radial:
      return axis_point(domain_.dimension(), x_.nodes(k));
    case Layout::tensor: {
      const Index nx = x_.size();
      return (Point(2) << x_.nodes(k % nx), y_.nodes(k / nx)).finished();
    }
  }
  return {};
}

double Grid::first_cell() const {
  if (layout_ == Layout::radial) return x_.cell(x_.cells() - 1);
  return x_.cell(0);
}

std::vector<Index> Grid::inward_line() const {
  std::vector<Index> line;
  const Index nx = x_.size();
  switch (layout_) {
    case Layout::interval:
      for (Index i = 0; i <= x_.n / 2; ++i) line.push_back(i);
      break;
    case Layout::radial:
      for (Index i = nx - 1; i >= 0; --i) line.push_back(i);
      break;
    case Layout::tensor: {
      const Index j = y_.n / 2;
      for (Index i = 0; i <= x_.n / 2; ++i) {
        const Index k = index(i, j);
        // Stop where the row meets the medial axis.
        if (i > 0 && !(x_.offsets(i) < y_.offsets(j))) break;
        line.push_back(k);
      }
      break;
    }
  }
  return line;
}

DiscreteField sample_field(std::shared_ptr<const Grid> grid, const std::function<double(const Point&, double)>& fn) {
  DiscreteField field{std::move(grid), {}};
  const Grid& g = *field.grid;
  field.values.resize(g.size());
  for (Index k = 0; k < g.size(); ++k) field.values(k) = fn(g.point(k), g.distance(k));
  return field;
}

LinearSystem make_tridiagonal(VectorXd lower, VectorXd diag, VectorXd upper, VectorXd rhs) {
  const Index n = diag.size();
  if (lower.size() != n || upper.size() != n || rhs.size() != n)
    throw ContractViolation("tridiagonal bands and right-hand side must have equal length");
  LinearSystem sys;
  sys.structure = LinearSystem::Structure::tridiagonal;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(3 * n));
  for (Index i = 0; i < n; ++i) {
    t.emplace_back(i, i, diag(i));
    if (i > 0 && lower(i) != 0.0) t.emplace_back(i, i - 1, lower(i));
    if (i + 1 < n && upper(i) != 0.0) t.emplace_back(i, i + 1, upper(i));
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(t.begin(), t.end());
  sys.lower = std::move(lower);
  sys.diag = std::move(diag);
  sys.upper = std::move(upper);
  sys.rhs = std::move(rhs);
  return sys;
}

LinearSystem make_sparse(Eigen::SparseMatrix<double> matrix, VectorXd rhs) {
  if (matrix.rows() != matrix.cols() || matrix.rows() != rhs.size())
    throw ContractViolation("sparse system must be square and match the right-hand side");
  LinearSystem sys;
  sys.structure = LinearSystem::Structure::five_point;
  sys.matrix = std::move(matrix);
  sys.matrix.makeCompressed();
  sys.rhs = std::move(rhs);
  return sys;
}

namespace {

struct Assembled {
  std::vector<Eigen::Triplet<double>> triplets;
  VectorXd diag;
  VectorXd rhs;
};

Assembled assemble_faces(const ProblemSpec& spec, const Grid& grid) {
  const Index n = grid.size();
  Assembled out;
  out.diag = VectorXd::Zero(n);
  out.rhs = VectorXd::Zero(n);
  for (const Face& f : grid.faces()) {
    if (!(f.span > 0.0)) throw AssemblyError("degenerate cell of zero width in the mesh");
    if (!(f.distance > 0.0)) throw AssemblyError("face midpoint lies on the boundary");
    const double w = eval_coefficient(spec.weight, f.midpoint, f.distance);
    const double k = w * f.cross / f.span;
    if (!std::isfinite(k) || !(k > 0.0)) throw AssemblyError("non-finite face coefficient");
    const bool a_free = !grid.is_boundary(f.a);
    const bool b_free = !grid.is_boundary(f.b);
    if (a_free) out.diag(f.a) += k;
    if (b_free) out.diag(f.b) += k;
    if (a_free && b_free) {
      out.triplets.emplace_back(f.a, f.b, -k);
      out.triplets.emplace_back(f.b, f.a, -k);
    }
  }
  for (Index i = 0; i < n; ++i) {
    if (grid.is_boundary(i)) {
      out.diag(i) = 1.0;
      continue;
    }
    out.rhs(i) = grid.dual_volume()(i) * spec.source(grid.point(i), grid.distance(i));
  }
  return out;
}

LinearSystem tridiagonal_from(const Assembled& a) {
  const Index n = a.diag.size();
  VectorXd lower = VectorXd::Zero(n);
  VectorXd upper = VectorXd::Zero(n);
  for (const auto& t : a.triplets) {
    if (t.col() == t.row() - 1) lower(t.row()) = t.value();
    else if (t.col() == t.row() + 1) upper(t.row()) = t.value();
    else throw InternalError("non-tridiagonal coupling in a 1-D assembly");
  }
  return make_tridiagonal(std::move(lower), a.diag, std::move(upper), a.rhs);
}

void require_layout(const Grid& grid, Layout layout, const char* what) {
  if (grid.layout() != layout) throw ConfigurationError(what);
}

}  // namespace

LinearSystem assemble_1d(const ProblemSpec& spec, const Grid& grid) {
  require_layout(grid, Layout::interval, "assemble_1d needs an interval grid");
  return tridiagonal_from(assemble_faces(spec, grid));
}

LinearSystem assemble_radial(const ProblemSpec& spec, const Grid& grid) {
  require_layout(grid, Layout::radial, "assemble_radial needs a ball grid");
  return tridiagonal_from(assemble_faces(spec, grid));
}

LinearSystem assemble_2d(const ProblemSpec& spec, const Grid& grid) {
  require_layout(grid, Layout::tensor, "assemble_2d needs a rectangle grid");
  Assembled a = assemble_faces(spec, grid);
  const Index n = grid.size();
  for (Index i = 0; i < n; ++i) a.triplets.emplace_back(i, i, a.diag(i));
  Eigen::SparseMatrix<double> m(n, n);
  m.setFromTriplets(a.triplets.begin(), a.triplets.end());
  return make_sparse(std::move(m), std::move(a.rhs));
}

namespace {

double backward_error(const Eigen::SparseMatrix<double>& a, const VectorXd& u, const VectorXd& b) {
  const VectorXd r = a * u - b;
  VectorXd row_sums = VectorXd::Zero(a.rows());
  for (Index k = 0; k < a.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, k); it; ++it) row_sums(it.row()) += std::abs(it.value());
  const double norm_a = row_sums.size() ? row_sums.maxCoeff() : 0.0;
  const double denom = norm_a * u.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>();
  return denom > 0.0 ? r.lpNorm<Eigen::Infinity>() / denom : 0.0;
}

void check_pivot(double p, double scale) {
  if (!std::isfinite(p) || std::abs(p) <= std::numeric_limits<double>::min() ||
      std::abs(p) <= 1e-300 * scale)
    throw SingularSystemError("zero pivot in tridiagonal elimination");
}

}  // namespace

SolveResult solve_tridiagonal(const LinearSystem& sys) {
  if (sys.structure != LinearSystem::Structure::tridiagonal)
    throw ContractViolation("solve_tridiagonal needs a tridiagonal system");
  const Index n = sys.size();
  SolveResult out;
  out.values = VectorXd::Zero(n);
  if (n == 0) return out;
  const VectorXd& lo = sys.lower;
  const VectorXd& di = sys.diag;
  const VectorXd& up = sys.upper;
  const VectorXd& b = sys.rhs;
  const double scale = di.cwiseAbs().maxCoeff();

  // Twist at the coupled row with the weakest off-diagonal coupling.
  Index twist = 0;
  double weakest = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < n; ++i) {
    const double c = (i > 0 ? std::abs(lo(i)) : 0.0) + (i + 1 < n ? std::abs(up(i)) : 0.0);
    if (c > 0.0 && c < weakest) {
      weakest = c;
      twist = i;
    }
  }

  // Top-down sweep: u_i = dp_i - cp_i u_{i+1} for i < twist.
  VectorXd cp = VectorXd::Zero(n), dp = VectorXd::Zero(n);
  for (Index i = 0; i < twist; ++i) {
    const double p = di(i) - (i > 0 ? lo(i) * cp(i - 1) : 0.0);
    check_pivot(p, scale);
    cp(i) = up(i) / p;
    dp(i) = (b(i) - (i > 0 ? lo(i) * dp(i - 1) : 0.0)) / p;
  }
  // Bottom-up sweep: u_i = fp_i - ep_i u_{i-1} for i > twist.
  VectorXd ep = VectorXd::Zero(n), fp = VectorXd::Zero(n);
  for (Index i = n - 1; i > twist; --i) {
    const double q = di(i) - (i + 1 < n ? up(i) * ep(i + 1) : 0.0);
    check_pivot(q, scale);
    ep(i) = lo(i) / q;
    fp(i) = (b(i) - (i + 1 < n ? up(i) * fp(i + 1) : 0.0)) / q;
  }
  double pivot = di(twist);
  double rhs = b(twist);
  if (twist > 0) {
    pivot -= lo(twist) * cp(twist - 1);
    rhs -= lo(twist) * dp(twist - 1);
  }
  if (twist + 1 < n) {
    pivot -= up(twist) * ep(twist + 1);
    rhs -= up(twist) * fp(twist + 1);
  }
  check_pivot(pivot, scale);
  VectorXd& u = out.values;
  u(twist) = rhs / pivot;
  for (Index i = twist - 1; i >= 0; --i) u(i) = dp(i) - cp(i) * u(i + 1);
  for (Index i = twist + 1; i < n; ++i) u(i) = fp(i) - ep(i) * u(i - 1);

  out.residual = backward_error(sys.matrix, u, b);
  return out;
}

SolveResult solve_cg(const LinearSystem& sys, const CgOptions& opts) {
  const auto& a = sys.matrix;
  const Index n = sys.size();
  const Eigen::SparseMatrix<double> at = a.transpose();
  const double asym = (a - at).norm();
  if (asym > 1e-13 * a.norm()) throw ContractViolation("conjugate gradients needs a symmetric matrix");
  const VectorXd d = a.diagonal();
  if ((d.array() <= 0.0).any()) throw ContractViolation("conjugate gradients needs a positive diagonal (SPD)");
  const VectorXd dinv = d.cwiseInverse();
  const int maxiter = opts.maxiter > 0 ? opts.maxiter : 50 * static_cast<int>(std::ceil(std::sqrt(double(n))));

  SolveResult out;
  out.values = VectorXd::Zero(n);
  const VectorXd& b = sys.rhs;
  const double bnorm = b.norm();
  if (bnorm == 0.0) return out;
  VectorXd& x = out.values;
  VectorXd r = b;
  VectorXd z(n), p(n), ap(n);
  double rel = 1.0;
  int it = 0;
  // The recurrence residual drifts from b - Ax; restart from the true residual until both agree.
  while (it < maxiter) {
    z = dinv.cwiseProduct(r);
    p = z;
    double rz = r.dot(z);
    while (it < maxiter) {
      ap.noalias() = a * p;
      const double pap = p.dot(ap);
      if (!(pap > 0.0)) throw ContractViolation("matrix is not positive definite");
      const double alpha = rz / pap;
      x += alpha * p;
      r -= alpha * ap;
      ++it;
      rel = r.norm() / bnorm;
      if (rel <= opts.tol) break;
      z = dinv.cwiseProduct(r);
      const double rz_next = r.dot(z);
      p = z + (rz_next / rz) * p;
      rz = rz_next;
    }
    r = b - a * x;
    rel = r.norm() / bnorm;
    if (rel <= opts.tol) break;
  }
  out.iterations = it;
  out.relative_residual = rel;
  if (rel > opts.tol)
    throw NonConvergence("conjugate gradients did not converge", out.relative_residual, out.iterations);
  out.residual = backward_error(a, x, b);
  return out;
}

Solution solve(const ProblemSpec& spec, const CgOptions& opts) {
  auto grid = Grid::build(spec.domain, spec.n, spec.gamma);
  SolveResult result;
  switch (grid->layout()) {
    case Layout::interval:
      result = solve_tridiagonal(assemble_1d(spec, *grid));
      break;
    case Layout::radial:
      result = solve_tridiagonal(assemble_radial(spec, *grid));
      break;
    case Layout::tensor: {
      CgOptions o = opts;
      if (o.maxiter <= 0) o.maxiter = 50 * static_cast<int>(grid->axis_x().size());
      result = solve_cg(assemble_2d(spec, *grid), o);
      break;
    }
  }
  Solution s;
  s.field = DiscreteField{grid, std::move(result.values)};
  s.residual = result.residual;
  s.relative_residual = result.relative_residual;
  s.iterations = result.iterations;
  return s;
}

namespace {

double face_weight(const ProblemSpec& spec, const Face& f) { return eval_coefficient(spec.weight, f.midpoint, f.distance); }

void require_same_grid(const ProblemSpec& spec, const Grid& grid) {
  if (spec.domain.kind() != grid.domain().kind()) throw ContractViolation("field does not live on the problem's domain");
}

}  // namespace

double energy(const ProblemSpec& spec, const DiscreteField& field) {
  const Grid& g = field.mesh();
  require_same_grid(spec, g);
  const VectorXd& u = field.values;
  double dirichlet = 0.0;
  for (const Face& f : g.faces()) {
    const double du = u(f.b) - u(f.a);
    if (du == 0.0) continue;
    dirichlet += face_weight(spec, f) * f.cross * du * du / f.span;
  }
  double work = 0.0;
  for (Index i = 0; i < g.size(); ++i) {
    if (g.is_boundary(i) || u(i) == 0.0) continue;
    work += g.dual_volume()(i) * spec.source(g.point(i), g.distance(i)) * u(i);
  }
  return 0.5 * dirichlet - work;
}

double weak_residual(const ProblemSpec& spec, const DiscreteField& field, const VectorXd& phi) {
  const Grid& g = field.mesh();
  require_same_grid(spec, g);
  if (phi.size() != g.size()) throw ContractViolation("test function size does not match the grid");
  const double scale = phi.cwiseAbs().maxCoeff();
  for (Index i = 0; i < g.size(); ++i)
    if (g.is_boundary(i) && std::abs(phi(i)) > 1e-12 * scale)
      throw ContractViolation("test function must vanish on the boundary");
  const VectorXd& u = field.values;
  double bilinear = 0.0;
  for (const Face& f : g.faces()) {
    const double dphi = phi(f.b) - phi(f.a);
    if (dphi == 0.0) continue;
    bilinear += face_weight(spec, f) * f.cross * (u(f.b) - u(f.a)) * dphi / f.span;
  }
  double load = 0.0;
  for (Index i = 0; i < g.size(); ++i) {
    if (g.is_boundary(i) || phi(i) == 0.0) continue;
    load += g.dual_volume()(i) * spec.source(g.point(i), g.distance(i)) * phi(i);
  }
  return std::abs(bilinear - load);
}

double weak_residual(const ProblemSpec& spec, const DiscreteField& field,
                     const std::function<double(const Point&, double)>& phi) {
  return weak_residual(spec, field, sample_field(field.grid, phi).values);
}

VectorXd hat_residuals(const ProblemSpec& spec, const DiscreteField& field) {
  const Grid& g = field.mesh();
  require_same_grid(spec, g);
  const VectorXd& u = field.values;
  VectorXd r = VectorXd::Zero(g.size());
  for (const Face& f : g.faces()) {
    const double flux = face_weight(spec, f) * f.cross * (u(f.b) - u(f.a)) / f.span;
    r(f.a) -= flux;
    r(f.b) += flux;
  }
  for (Index i = 0; i < g.size(); ++i) {
    if (g.is_boundary(i)) {
      r(i) = 0.0;
      continue;
    }
    r(i) = std::abs(r(i) - g.dual_volume()(i) * spec.source(g.point(i), g.distance(i)));
  }
  return r;
}

VectorXd hat_function(const Grid& grid, Index k) {
  if (k < 0 || k >= grid.size() || grid.is_boundary(k)) throw ContractViolation("hat functions live on interior nodes");
  VectorXd phi = VectorXd::Zero(grid.size());
  phi(k) = 1.0;
  return phi;
}

bool positivity_check(const DiscreteField& field) {
  const Grid& g = field.mesh();
  const double scale = field.values.cwiseAbs().maxCoeff();
  for (Index i = 0; i < g.size(); ++i)
    if (!g.is_boundary(i) && field.values(i) < -1e-12 * scale) return false;
  return true;
}

void write_field_csv(std::ostream& os, const DiscreteField& field, double beta) {
  const Grid& g = field.mesh();
  const Mesh& mx = g.axis_x();
  os << "# beta=" << beta << " n=" << mx.n << " gamma=" << mx.gamma << " domain=" << g.domain().name() << '\n';
  os << std::setprecision(17);
  if (g.layout() == Layout::tensor) {
    os << "x,y,u\n";
    for (Index k = 0; k < g.size(); ++k) {
      const Point p = g.point(k);
      os << p(0) << ',' << p(1) << ',' << field.values(k) << '\n';
    }
  } else {
    os << "x,u\n";
    for (Index k = 0; k < g.size(); ++k) os << mx.nodes(k) << ',' << field.values(k) << '\n';
  }
}

}  // namespace degenlab
