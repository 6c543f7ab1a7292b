#pragma once

#include <functional>
#include <string>
#include <vector>

#include "pss/assembly.hpp"

namespace pss {

enum class ProblemKind { LeastSquares, Poisson, Biharmonic };

std::string problem_name(ProblemKind kind);
ProblemKind parse_problem(const std::string& name);

/// Exact solution with partial derivatives D_x^a D_y^b for a + b <= 4, and the
/// matching right-hand side.
struct ManufacturedCase {
  std::string name;
  ProblemKind kind = ProblemKind::LeastSquares;
  std::function<double(Point, int, int)> u;

  double value(Point p) const { return u(p, 0, 0); }
  /// f = u, -Laplace(u) or Laplace^2(u) depending on the problem.
  double rhs(Point p) const;
};

/// sin(7 pi (1-x)(1-y)).
ManufacturedCase lsq_case();
/// 16 x(1-x) y(1-y) cos(16 pi ((x-1/2)^2 + (y-1/2)^2)).
ManufacturedCase poisson_case();
/// sin(2 pi (2x-y)) sin^4(pi x) sin^4(pi y).
ManufacturedCase biharmonic_case();
ManufacturedCase default_case(ProblemKind kind);
/// Case with a polynomial (degree <= 3) or any smooth exact solution given by derivatives.
ManufacturedCase polynomial_case(ProblemKind kind, const CubicPolynomial& g);

struct DerivativeCheck {
  double max_rel_error = 0.0;
  double max_boundary_violation = 0.0;
};
/// Compares every derivative of order 1..4 with a fourth-order central difference of
/// the next lower derivative at random points, and samples the boundary conditions.
DerivativeCheck check_case(const ManufacturedCase& c, int points = 100, double step = 1e-5,
                           unsigned seed = 7);

struct ErrorNorms {
  double l2 = 0.0;
  double h1 = 0.0;  // full norm
  double h2 = 0.0;  // full norm
  double h1_semi = 0.0;
  double h2_semi = 0.0;
  double laplace = 0.0;  // L2 norm of the Laplacian of the error
};

/// Error of the spline with coefficients c in S_r against u (u == nullptr means u = 0).
ErrorNorms error_norms(const SplineSpaces& spaces, int r, const Eigen::VectorXd& c,
                       const std::function<double(Point, int, int)>& u,
                       int quad_degree = kNormDegree);

/// Problem-specific energy norm of the error: L2, H1 seminorm, or L2 of the Laplacian.
double energy_error(ProblemKind kind, const ErrorNorms& e);

struct QuadratureDegrees {
  int assembly = kAssemblyDegree;
  int norms = kNormDegree;
};

struct SolveResult {
  int space = 0;
  int ndof = 0;
  Eigen::VectorXd coeffs;  // full S_r coefficient vector
  double residual = 0.0;   // relative residual of the solved system
  ErrorNorms errors;
};

/// Solves the problem with right-hand side `f` and measures errors against c.u.
SolveResult solve_problem(const SplineSpaces& spaces, int r, const ManufacturedCase& c,
                          const QuadratureDegrees& quad = {});
SolveResult least_squares_fit(const SplineSpaces& spaces, int r, const ManufacturedCase& c);
SolveResult solve_poisson(const SplineSpaces& spaces, int r, const ManufacturedCase& c);
SolveResult solve_biharmonic(const SplineSpaces& spaces, int r, const ManufacturedCase& c);

/// Sparse symmetric positive definite solve with iterative refinement; throws
/// SolverError if the relative residual stays above tol.
Eigen::VectorXd solve_spd(const SparseMatrix& a, const Eigen::VectorXd& b, double tol,
                          double* residual = nullptr);

/// Boundary flags required by the problem (none, zero trace, clamped).
unsigned required_flags(ProblemKind kind);

struct ConvergenceRow {
  std::string problem;
  int space = 0;
  int level = 0;
  int ndof = 0;
  double l2 = 0.0, h1 = 0.0, h2 = 0.0, energy = 0.0;
  double rate_l2 = 0.0, rate_h1 = 0.0, rate_h2 = 0.0;  // NaN for the first level
  double residual = 0.0;
  int n_sym = 0;
};

struct ConvergenceOptions {
  std::vector<int> spaces{0, 1, 2};
  std::vector<int> levels{1, 2, 4, 8};
  SplitStrategy strategy = SplitStrategy::PreferBarycenter;
  QuadratureDegrees quad;
};

/// Rows ordered by space, then level.
std::vector<ConvergenceRow> convergence_study(const ManufacturedCase& c, const Triangulation& macro,
                                              const ConvergenceOptions& options);

std::string convergence_csv(const std::vector<ConvergenceRow>& rows);
std::string convergence_json(const std::vector<ConvergenceRow>& rows,
                             const ConvergenceOptions& options);

}  // namespace pss
