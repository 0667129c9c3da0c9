#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "degenlab/geometry.hpp"
#include "degenlab/weights.hpp"

namespace degenlab {

/// Source term f(x); `d` is the exact distance of x to the boundary.
using Source = std::function<double(const Point& x, double d)>;

using Weight = std::variant<PowerWeight<double>, GeneralWeight>;

double weight_beta(const Weight& w);
/// Coefficient of the operator at x: d^beta, or rho(x)^beta for a general weight.
double eval_coefficient(const Weight& w, const Point& x, double d);

/// max(1, 2/(1-beta)): grading that resolves the d^{1-beta} boundary layer.
double default_gamma(double beta);

/// One instance of -div(w grad u) = f in the domain, u = 0 on the boundary.
struct ProblemSpec {
  Domain domain;
  Weight weight;
  Source source;
  int n = 1024;         // cells per axis
  double gamma = 1.0;   // grading exponent

  double beta() const { return weight_beta(weight); }
};

Source constant_source(double value);
/// f = d^beta.
Source distance_power_source(double beta);
/// f = sum_k c_k d^k.
Source distance_polynomial_source(std::vector<double> coeffs);

enum class Layout { interval, radial, tensor };

/// A gradient sample between nodes a and b: span = |x_b - x_a|; `cross` is the transverse measure
/// (1 in 1-D, |S^{N-1}| r^{N-1} radially, the dual width in 2-D). A face contributes
/// cross * span * ((u_b - u_a)/span)^2 to the Dirichlet integral.
struct Face {
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  double span = 0.0;
  double cross = 0.0;
  double distance = 0.0;  // of the face midpoint
  Point midpoint;
};

/// Nodes of an interval, radial or tensor grid together with its faces and dual cells.
class Grid {
 public:
  static std::shared_ptr<const Grid> build(const Domain& dom, int n, double gamma);

  Layout layout() const noexcept { return layout_; }
  const Domain& domain() const noexcept { return domain_; }
  const Mesh& axis_x() const noexcept { return x_; }
  const Mesh& axis_y() const noexcept { return y_; }

  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(distance_.size()); }
  Eigen::Index index(Eigen::Index i, Eigen::Index j) const noexcept { return j * x_.size() + i; }
  bool is_boundary(Eigen::Index k) const { return boundary_[static_cast<std::size_t>(k)]; }
  double distance(Eigen::Index k) const { return distance_(k); }
  const Eigen::VectorXd& distances() const noexcept { return distance_; }
  Point point(Eigen::Index k) const;
  const std::vector<Face>& faces() const noexcept { return faces_; }
  /// Measure of each node's dual cell (half cells at the boundary).
  const Eigen::VectorXd& dual_volume() const noexcept { return dual_; }
  /// Width of the first cell next to the boundary.
  double first_cell() const;
  /// Indices of the nodes on the inward line from a boundary point to the ridge, ordered by
  /// increasing distance: x from a (interval), r from R (radial), the row y = Ly/2 from x = 0.
  std::vector<Eigen::Index> inward_line() const;

 private:
  Grid(Layout layout, Domain domain) : layout_(layout), domain_(domain) {}
  void finish();

  Layout layout_;
  Domain domain_;
  Mesh x_;
  Mesh y_;
  Eigen::VectorXd distance_;
  std::vector<bool> boundary_;
  std::vector<Face> faces_;
  Eigen::VectorXd dual_;
};

/// Nodal values on a grid; boundary nodes carry 0.
struct DiscreteField {
  std::shared_ptr<const Grid> grid;
  Eigen::VectorXd values;

  const Grid& mesh() const { return *grid; }
};

/// Samples fn(x, d) at every node (boundary nodes included).
DiscreteField sample_field(std::shared_ptr<const Grid> grid, const std::function<double(const Point&, double)>& fn);

/// Symmetric system K u = M f with boundary rows replaced by identity rows.
///
/// Row i of K is sum over faces at i of w_f cross_f / span_f (u_i - u_j); M is the diagonal of
/// dual volumes. `lower/diag/upper` are populated for tridiagonal systems.
struct LinearSystem {
  enum class Structure { tridiagonal, five_point };

  Structure structure = Structure::tridiagonal;
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd lower;  // lower(i) couples row i to i-1
  Eigen::VectorXd diag;
  Eigen::VectorXd upper;  // upper(i) couples row i to i+1
  Eigen::VectorXd rhs;

  Eigen::Index size() const noexcept { return rhs.size(); }
};

/// Flux-form assembly on an interval: face weights d(midpoint)^beta, never sampled at d = 0.
LinearSystem assemble_1d(const ProblemSpec& spec, const Grid& grid);
/// Radial reduction on a ball: -(r^{N-1} w u')' = r^{N-1} f, zero flux at r = 0.
LinearSystem assemble_radial(const ProblemSpec& spec, const Grid& grid);
/// Five-point flux scheme on a rectangle with face weights d(face midpoint)^beta.
LinearSystem assemble_2d(const ProblemSpec& spec, const Grid& grid);

LinearSystem make_tridiagonal(Eigen::VectorXd lower, Eigen::VectorXd diag, Eigen::VectorXd upper, Eigen::VectorXd rhs);
LinearSystem make_sparse(Eigen::SparseMatrix<double> matrix, Eigen::VectorXd rhs);

struct SolveResult {
  Eigen::VectorXd values;
  /// Normwise backward error |Au - b|_inf / (|A|_inf |u|_inf + |b|_inf).
  double residual = 0.0;
  /// |Au - b|_2 / |b|_2 as monitored by the iterative solver (0 for direct solves).
  double relative_residual = 0.0;
  int iterations = 0;
};

/// Twisted (two-sided) Gaussian elimination: rows are eliminated from both ends toward the row
/// with the weakest coupling, so on graded meshes each sweep runs from strong to weak couplings.
SolveResult solve_tridiagonal(const LinearSystem& sys);

struct CgOptions {
  double tol = 1e-10;  // relative residual |r|/|b|
  int maxiter = 0;     // 0: 50 * sqrt(n)
};

/// Conjugate gradients with diagonal scaling. Throws ContractViolation for a matrix that is not
/// symmetric with positive diagonal (or meets a non-positive curvature direction) and
/// NonConvergence carrying the last residual after maxiter iterations.
SolveResult solve_cg(const LinearSystem& sys, const CgOptions& opts = {});

struct Solution {
  DiscreteField field;
  double residual = 0.0;
  double relative_residual = 0.0;
  int iterations = 0;
};

/// Assembles for the domain kind and solves (direct for interval/radial, CG for rectangles).
Solution solve(const ProblemSpec& spec, const CgOptions& opts = {});

/// Discrete functional 1/2 int |grad u|^2 w - int f u (midpoint faces, dual-cell source).
double energy(const ProblemSpec& spec, const DiscreteField& field);

/// |int grad u . grad phi w - int f phi| for a test function vanishing on the boundary nodes.
double weak_residual(const ProblemSpec& spec, const DiscreteField& field, const Eigen::VectorXd& phi);
double weak_residual(const ProblemSpec& spec, const DiscreteField& field,
                     const std::function<double(const Point&, double)>& phi);
/// weak_residual against every interior hat function at once (0 on boundary nodes).
Eigen::VectorXd hat_residuals(const ProblemSpec& spec, const DiscreteField& field);
/// Interior hat function of node k as nodal values.
Eigen::VectorXd hat_function(const Grid& grid, Eigen::Index k);

/// True iff all interior values are >= -1e-12 max|u|.
bool positivity_check(const DiscreteField& field);

/// CSV dump `x[,y],u` preceded by a `# beta=... n=... gamma=... domain=...` line.
void write_field_csv(std::ostream& os, const DiscreteField& field, double beta);

}  // namespace degenlab
