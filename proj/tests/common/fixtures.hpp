#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "pss/extraction.hpp"
#include "pss/verify.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) {
  return std::string(PSS_DATA_DIR) + "/" + name;
}

inline pss::Triangulation reference_triangle() {
  return pss::build_triangulation({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
}

inline pss::Triangulation two_triangle_square() {
  return pss::build_triangulation({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 3}, {1, 2, 3}});
}

/// Jittered nx-by-ny grid on the unit square with random cell diagonals.
inline pss::Triangulation random_grid_mesh(int nx, int ny, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  std::bernoulli_distribution flip(0.5);
  std::vector<pss::Point> pts;
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      double x = static_cast<double>(i) / nx, y = static_cast<double>(j) / ny;
      if (i > 0 && i < nx) x += jitter(rng) / nx;
      if (j > 0 && j < ny) y += jitter(rng) / ny;
      pts.push_back({x, y});
    }
  }
  std::vector<std::array<int, 3>> tris;
  auto id = [&](int i, int j) { return j * (nx + 1) + i; };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      if (flip(rng)) {
        tris.push_back({a, b, c});
        tris.push_back({a, c, d});
      } else {
        tris.push_back({a, b, d});
        tris.push_back({b, c, d});
      }
    }
  }
  return pss::build_triangulation(pts, tris);
}

inline std::shared_ptr<const pss::PSRefinement> refine(
    const pss::Triangulation& macro, int level,
    pss::SplitStrategy strategy = pss::SplitStrategy::PreferBarycenter) {
  return std::make_shared<const pss::PSRefinement>(
      pss::build_ps(pss::uniform_refine(macro, level), strategy));
}

inline pss::CubicPolynomial random_cubic(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  pss::CubicPolynomial g;
  for (double& c : g.c) c = u(rng);
  return g;
}

inline pss::CubicPolynomial monomial(int k) {
  pss::CubicPolynomial g;
  g.c[k] = 1.0;
  return g;
}

/// Values of all functions of a family at the given points (rows = points).
inline Eigen::MatrixXd collocation(const pss::SplineFamily& family,
                                   const std::vector<pss::Point>& pts) {
  const pss::ElementIndex index = pss::element_index(family);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(pts.size(), family.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (const auto& [f, v] : pss::eval_all(family, index, pts[i])) a(i, f) = v;
  }
  return a;
}

/// Coefficients of g in a family from a discrete least-squares fit at sample points.
inline Eigen::VectorXd point_coefficients(const pss::SplineFamily& family,
                                          const std::function<double(pss::Point)>& g,
                                          int points_per_function = 6) {
  const auto pts = pss::sample_domain(family.ps->mesh, points_per_function * family.size() + 50, 3);
  const Eigen::MatrixXd a = collocation(family, pts);
  Eigen::VectorXd b(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) b(i) = g(pts[i]);
  return a.colPivHouseholderQr().solve(b);
}

inline double relative_frobenius(const pss::SparseMatrix& a, const pss::SparseMatrix& b) {
  const pss::SparseMatrix d = a - b;
  return d.norm() / std::max(a.norm(), 1e-300);
}

}  // namespace fixtures
