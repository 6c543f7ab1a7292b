#include "pss/problems.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "json.hpp"
#include "pss/error.hpp"
#include "pss/parallel.hpp"
#include "pss/quadrature.hpp"

namespace pss {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void check_order(int a, int b) {
  if (a < 0 || b < 0 || a + b > 4) throw InvalidArgument("derivative order must be at most 4");
}

// D^n_t of t(1-t) exp(i k (t-1/2)^2).
cplx poisson_factor(double t, int n) {
  constexpr double k = 16.0 * kPi;
  const double s = t - 0.5;
  const cplx ik(0.0, k);
  std::array<cplx, 5> e;
  e[0] = std::exp(ik * s * s);
  e[1] = 2.0 * ik * s * e[0];
  for (int m = 1; m < 4; ++m) e[m + 1] = 2.0 * ik * s * e[m] + static_cast<double>(m) * 2.0 * ik * e[m - 1];
  const std::array<double, 5> p{t * (1.0 - t), 1.0 - 2.0 * t, -2.0, 0.0, 0.0};
  cplx out = 0.0;
  for (int m = 0; m <= n; ++m) out += binomial(n, m) * p[m] * e[n - m];
  return out;
}

// D^n_t of sin^4(pi t) = (3 - 4 cos(2 pi t) + cos(4 pi t)) / 8.
double sin4(double t, int n) {
  const double shift = n * kPi / 2.0;
  double v = -4.0 * std::pow(2.0 * kPi, n) * std::cos(2.0 * kPi * t + shift) +
             std::pow(4.0 * kPi, n) * std::cos(4.0 * kPi * t + shift);
  if (n == 0) v += 3.0;
  return v / 8.0;
}

}  // namespace

std::string problem_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::LeastSquares:
      return "fit";
    case ProblemKind::Poisson:
      return "poisson";
    case ProblemKind::Biharmonic:
      return "biharmonic";
  }
  return "";
}

ProblemKind parse_problem(const std::string& name) {
  if (name == "fit" || name == "lsq") return ProblemKind::LeastSquares;
  if (name == "poisson") return ProblemKind::Poisson;
  if (name == "biharmonic") return ProblemKind::Biharmonic;
  throw InvalidArgument("unknown problem '" + name + "'");
}

double ManufacturedCase::rhs(Point p) const {
  switch (kind) {
    case ProblemKind::LeastSquares:
      return u(p, 0, 0);
    case ProblemKind::Poisson:
      return -(u(p, 2, 0) + u(p, 0, 2));
    case ProblemKind::Biharmonic:
      return u(p, 4, 0) + 2.0 * u(p, 2, 2) + u(p, 0, 4);
  }
  return 0.0;
}

ManufacturedCase lsq_case() {
  ManufacturedCase c;
  c.name = "lsqfun";
  c.kind = ProblemKind::LeastSquares;
  c.u = [](Point p, int a, int b) {
    check_order(a, b);
    // d/dx = -d/dX with X = 1-x, Y = 1-y; derivatives of exp(i k X Y) in closed form.
    const double x = 1.0 - p.x, y = 1.0 - p.y;
    const cplx ik(0.0, 7.0 * kPi);
    cplx s = 0.0;
    for (int j = 0; j <= std::min(a, b); ++j) {
      double fact = 1.0;
      for (int q = 2; q <= j; ++q) fact *= q;
      s += binomial(a, j) * binomial(b, j) * fact * std::pow(ik, a + b - j) * std::pow(x, b - j) *
           std::pow(y, a - j);
    }
    s *= std::exp(ik * x * y);
    return ((a + b) % 2 ? -1.0 : 1.0) * s.imag();
  };
  return c;
}

ManufacturedCase poisson_case() {
  ManufacturedCase c;
  c.name = "poissonfun";
  c.kind = ProblemKind::Poisson;
  c.u = [](Point p, int a, int b) {
    check_order(a, b);
    return 16.0 * (poisson_factor(p.x, a) * poisson_factor(p.y, b)).real();
  };
  return c;
}

ManufacturedCase biharmonic_case() {
  ManufacturedCase c;
  c.name = "biharmonicfun";
  c.kind = ProblemKind::Biharmonic;
  c.u = [](Point p, int a, int b) {
    check_order(a, b);
    const cplx wave = std::exp(cplx(0.0, 2.0 * kPi * (2.0 * p.x - p.y)));
    double s = 0.0;
    for (int i = 0; i <= a; ++i) {
      for (int j = 0; j <= b; ++j) {
        const cplx ds = std::pow(cplx(0.0, 4.0 * kPi), a - i) * std::pow(cplx(0.0, -2.0 * kPi), b - j) * wave;
        s += binomial(a, i) * binomial(b, j) * ds.imag() * sin4(p.x, i) * sin4(p.y, j);
      }
    }
    return s;
  };
  return c;
}

ManufacturedCase default_case(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::LeastSquares:
      return lsq_case();
    case ProblemKind::Poisson:
      return poisson_case();
    case ProblemKind::Biharmonic:
      return biharmonic_case();
  }
  return lsq_case();
}

ManufacturedCase polynomial_case(ProblemKind kind, const CubicPolynomial& g) {
  ManufacturedCase c;
  c.name = "cubic";
  c.kind = kind;
  c.u = [g](Point p, int a, int b) {
    check_order(a, b);
    return a + b > 3 ? 0.0 : g.derivative(p, a, b);
  };
  return c;
}

DerivativeCheck check_case(const ManufacturedCase& c, int points, double step, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> pts(points);
  for (Point& p : pts) p = {unit(rng), unit(rng)};
  DerivativeCheck out;
  for (int order = 1; order <= 4; ++order) {
    double scale = 1.0;
    for (const Point& p : pts) {
      for (int a = 0; a <= order; ++a) scale = std::max(scale, std::abs(c.u(p, a, order - a)));
    }
    for (const Point& p : pts) {
      for (int a = 0; a <= order; ++a) {
        const int b = order - a;
        const bool along_x = a > 0;
        const Point d = along_x ? Point{step, 0.0} : Point{0.0, step};
        const int la = along_x ? a - 1 : a, lb = along_x ? b : b - 1;
        const double fd = (-c.u(p + 2.0 * d, la, lb) + 8.0 * c.u(p + d, la, lb) -
                           8.0 * c.u(p - d, la, lb) + c.u(p - 2.0 * d, la, lb)) /
                          (12.0 * step);
        const double exact = c.u(p, a, b);
        out.max_rel_error =
            std::max(out.max_rel_error, std::abs(fd - exact) / std::max(std::abs(exact), scale));
      }
    }
  }
  if (c.kind != ProblemKind::LeastSquares) {
    for (int s = 0; s <= 100; ++s) {
      const double t = s / 100.0;
      const std::array<std::pair<Point, Point>, 4> sides{{{{t, 0.0}, {0.0, -1.0}},
                                                          {{1.0, t}, {1.0, 0.0}},
                                                          {{t, 1.0}, {0.0, 1.0}},
                                                          {{0.0, t}, {-1.0, 0.0}}}};
      for (const auto& [p, n] : sides) {
        double v = std::abs(c.u(p, 0, 0));
        if (c.kind == ProblemKind::Biharmonic) {
          v = std::max(v, std::abs(n.x * c.u(p, 1, 0) + n.y * c.u(p, 0, 1)));
        }
        out.max_boundary_violation = std::max(out.max_boundary_violation, v);
      }
    }
  }
  return out;
}

ErrorNorms error_norms(const SplineSpaces& spaces, int r, const Eigen::VectorXd& c,
                       const std::function<double(Point, int, int)>& u, int quad_degree) {
  const Eigen::VectorXd c0 = spaces.to_s0(r, c);
  const PSRefinement& ps = spaces.ps();
  const SplineFamily& family = spaces.basis.family;
  const ElementIndex index = element_index(family);
  const QuadratureRule& rule = quadrature_rule(quad_degree);
  const int nt = ps.mesh.n_triangles();
  // Per triangle: squared integrals of value, first, second derivatives, Laplacian.
  std::vector<std::array<double, 4>> parts(nt, std::array<double, 4>{});
  parallel_for(nt, [&](int t) {
    Bernstein3 b;
    for (int j = 0; j < 6; ++j) {
      const int id = 6 * t + j;
      Coeffs10 coef{};
      for (const auto& [i, cc] : index[id]) {
        for (int a = 0; a < 10; ++a) coef[a] += c0(i) * cc[a];
      }
      const Triangle tri = ps.micro_triangle(id);
      const double area = std::abs(signed_area(tri));
      const auto grads = barycentric_gradients(tri);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        bernstein3(rule.nodes[q], grads, b);
        const Point x = from_barycentric(tri, rule.nodes[q]);
        std::array<double, 6> e{};
        for (int k = 0; k < 6; ++k) {
          for (int a = 0; a < 10; ++a) e[k] += coef[a] * b[k][a];
        }
        if (u) {
          e[0] -= u(x, 0, 0);
          e[1] -= u(x, 1, 0);
          e[2] -= u(x, 0, 1);
          e[3] -= u(x, 2, 0);
          e[4] -= u(x, 1, 1);
          e[5] -= u(x, 0, 2);
        }
        const double w = area * rule.weights[q];
        parts[t][0] += w * e[0] * e[0];
        parts[t][1] += w * (e[1] * e[1] + e[2] * e[2]);
        parts[t][2] += w * (e[3] * e[3] + 2.0 * e[4] * e[4] + e[5] * e[5]);
        parts[t][3] += w * (e[3] + e[5]) * (e[3] + e[5]);
      }
    }
  });
  std::array<double, 4> total{};
  for (const auto& p : parts) {
    for (int k = 0; k < 4; ++k) total[k] += p[k];
  }
  ErrorNorms n;
  n.l2 = std::sqrt(total[0]);
  n.h1_semi = std::sqrt(total[1]);
  n.h2_semi = std::sqrt(total[2]);
  n.h1 = std::sqrt(total[0] + total[1]);
  n.h2 = std::sqrt(total[0] + total[1] + total[2]);
  n.laplace = std::sqrt(total[3]);
  return n;
}

double energy_error(ProblemKind kind, const ErrorNorms& e) {
  switch (kind) {
    case ProblemKind::LeastSquares:
      return e.l2;
    case ProblemKind::Poisson:
      return e.h1_semi;
    case ProblemKind::Biharmonic:
      return e.laplace;
  }
  return e.l2;
}

unsigned required_flags(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::LeastSquares:
      return 0u;
    case ProblemKind::Poisson:
      return kZeroTrace;
    case ProblemKind::Biharmonic:
      return kZeroTrace | kZeroNormalDeriv;
  }
  return 0u;
}

Eigen::VectorXd solve_spd(const SparseMatrix& a, const Eigen::VectorXd& b, double tol,
                          double* residual) {
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    if (residual) *residual = 0.0;
    return Eigen::VectorXd::Zero(b.size());
  }
  const Eigen::SparseMatrix<double> ac = a;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(ac);
  if (ldlt.info() != Eigen::Success) throw SolverError("sparse LDLT factorization failed");
  Eigen::VectorXd x = ldlt.solve(b);
  double rel = (b - ac * x).norm() / bnorm;
  for (int it = 0; it < 5 && rel > 1e-15; ++it) {
    const Eigen::VectorXd dx = ldlt.solve(Eigen::VectorXd(b - ac * x));
    const Eigen::VectorXd candidate = x + dx;
    const double r = (b - ac * candidate).norm() / bnorm;
    if (!(r < rel)) break;
    x = candidate;
    rel = r;
  }
  if (residual) *residual = rel;
  if (!std::isfinite(rel) || rel > tol) {
    char msg[128];
    std::snprintf(msg, sizeof msg, "relative residual %.3e exceeds %.1e", rel, tol);
    throw SolverError(msg);
  }
  return x;
}

SolveResult solve_problem(const SplineSpaces& spaces, int r, const ManufacturedCase& c,
                          const QuadratureDegrees& quad) {
  const std::vector<ProductTerm>* terms = &kMassTerms;
  double tol = 1e-12;
  if (c.kind == ProblemKind::Poisson) terms = &kLaplaceTerms;
  if (c.kind == ProblemKind::Biharmonic) {
    terms = &kBilaplaceTerms;
    tol = 1e-10;
  }
  const SparseMatrix m = assemble_m(spaces, r, *terms, quad.assembly);
  const Eigen::VectorXd load = assemble_load(spaces, r, [&](Point p) { return c.rhs(p); }, quad.norms);
  SolveResult out;
  out.space = r;
  const RestrictedSystem sys =
      restrict_system(m, load, spaces.family(r).boundary, required_flags(c.kind));
  out.ndof = static_cast<int>(sys.kept.size());
  out.coeffs = scatter(sys, solve_spd(sys.matrix, sys.load, tol, &out.residual));
  out.errors = error_norms(spaces, r, out.coeffs, c.u, quad.norms);
  return out;
}

SolveResult least_squares_fit(const SplineSpaces& spaces, int r, const ManufacturedCase& c) {
  ManufacturedCase lsq = c;
  lsq.kind = ProblemKind::LeastSquares;
  return solve_problem(spaces, r, lsq);
}

SolveResult solve_poisson(const SplineSpaces& spaces, int r, const ManufacturedCase& c) {
  ManufacturedCase p = c;
  p.kind = ProblemKind::Poisson;
  return solve_problem(spaces, r, p);
}

SolveResult solve_biharmonic(const SplineSpaces& spaces, int r, const ManufacturedCase& c) {
  ManufacturedCase p = c;
  p.kind = ProblemKind::Biharmonic;
  return solve_problem(spaces, r, p);
}

std::vector<ConvergenceRow> convergence_study(const ManufacturedCase& c, const Triangulation& macro,
                                              const ConvergenceOptions& options) {
  for (std::size_t i = 0; i < options.levels.size(); ++i) {
    if (options.levels[i] < 1 || (i > 0 && options.levels[i] <= options.levels[i - 1])) {
      throw InvalidArgument("levels must be positive and increasing");
    }
  }
  for (int r : options.spaces) {
    if (r < 0 || r > 2) throw InvalidArgument("space index must be 0, 1 or 2");
  }
  std::vector<std::vector<ConvergenceRow>> by_space(options.spaces.size());
  for (int level : options.levels) {
    auto ps = std::make_shared<PSRefinement>(build_ps(uniform_refine(macro, level), options.strategy));
    const SplineSpaces spaces = build_spaces(ps);
    for (std::size_t s = 0; s < options.spaces.size(); ++s) {
      const int r = options.spaces[s];
      const SolveResult res = solve_problem(spaces, r, c, options.quad);
      ConvergenceRow row;
      row.problem = problem_name(c.kind);
      row.space = r;
      row.level = level;
      row.ndof = res.ndof;
      row.l2 = res.errors.l2;
      row.h1 = res.errors.h1;
      row.h2 = res.errors.h2;
      row.energy = energy_error(c.kind, res.errors);
      row.residual = res.residual;
      row.n_sym = ps->n_sym();
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.rate_l2 = row.rate_h1 = row.rate_h2 = nan;
      if (!by_space[s].empty()) {
        const ConvergenceRow& prev = by_space[s].back();
        // Mesh size is measured as NDOF^(-1/2).
        const double lr = 0.5 * std::log(static_cast<double>(row.ndof) / prev.ndof);
        row.rate_l2 = std::log(prev.l2 / row.l2) / lr;
        row.rate_h1 = std::log(prev.h1 / row.h1) / lr;
        row.rate_h2 = std::log(prev.h2 / row.h2) / lr;
      }
      by_space[s].push_back(row);
    }
  }
  std::vector<ConvergenceRow> rows;
  for (const auto& v : by_space) rows.insert(rows.end(), v.begin(), v.end());
  return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::string out = "problem,space,level,ndof,l2,h1,h2,rate_l2,rate_h1,rate_h2\n";
  char buf[512];
  auto rate = [](double v) {
    if (std::isnan(v)) return std::string();
    char b[32];
    std::snprintf(b, sizeof b, "%.4f", v);
    return std::string(b);
  };
  for (const ConvergenceRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%d,%d,%d,%.10e,%.10e,%.10e,%s,%s,%s\n", r.problem.c_str(),
                  r.space, r.level, r.ndof, r.l2, r.h1, r.h2, rate(r.rate_l2).c_str(),
                  rate(r.rate_h1).c_str(), rate(r.rate_h2).c_str());
    out += buf;
  }
  return out;
}

std::string convergence_json(const std::vector<ConvergenceRow>& rows,
                             const ConvergenceOptions& options) {
  nlohmann::json doc;
  doc["strategy"] = options.strategy == SplitStrategy::PreferBarycenter ? "prefer-barycenter"
                                                                         : "incenter-on-t2";
  doc["quadrature"] = {{"assembly", options.quad.assembly}, {"norms", options.quad.norms}};
  doc["norms"] = "full Sobolev norms (H1, H2 include lower-order terms)";
  doc["rate_definition"] = "log(e_coarse/e_fine)/log(sqrt(ndof_fine/ndof_coarse))";
  doc["rows"] = nlohmann::json::array();
  auto num = [](double v) { return std::isnan(v) ? nlohmann::json() : nlohmann::json(v); };
  for (const ConvergenceRow& r : rows) {
    doc["rows"].push_back({{"problem", r.problem},
                           {"space", r.space},
                           {"level", r.level},
                           {"ndof", r.ndof},
                           {"n_sym", r.n_sym},
                           {"l2", r.l2},
                           {"h1", r.h1},
                           {"h2", r.h2},
                           {"energy", r.energy},
                           {"rate_l2", num(r.rate_l2)},
                           {"rate_h1", num(r.rate_h1)},
                           {"rate_h2", num(r.rate_h2)},
                           {"solver_residual", r.residual}});
  }
  return doc.dump(2);
}

}  // namespace pss
