#pragma once

#include <array>
#include <vector>

#include "pss/geometry.hpp"

namespace pss {

/// Number of Bernstein coefficients of the given degree.
constexpr int bb_size(int degree) { return (degree + 1) * (degree + 2) / 2; }

/// Position of multi-index (i,j,k) in the canonical order: i descending, then j descending.
constexpr int bb_index(int i, int j, int k) {
  const int d = i + j + k;
  return (d - i) * (d - i + 1) / 2 + (d - i - j);
}

std::array<int, 3> bb_multi_index(int degree, int index);

/// Polynomial in Bernstein-Bezier form on a triangle.
struct BBPatch {
  Triangle triangle{};
  int degree = 3;
  std::vector<double> coeffs;
};

/// One de Casteljau step with barycentric argument l; the degree drops by one.
std::vector<double> de_casteljau_step(int degree, const std::vector<double>& coeffs,
                                      const Barycentric& l);

double bb_eval(const BBPatch& patch, Point p);
/// As bb_eval; throws InvalidArgument if p lies outside the triangle.
double bb_eval_inside(const BBPatch& patch, Point p, double tol = 1e-12);
BBPatch bb_directional(const BBPatch& patch, Point direction);
/// D_x^a D_y^b of the patch, as a patch of degree (degree - a - b).
BBPatch bb_derivative(const BBPatch& patch, int a, int b);
/// Blossom of a patch of degree n at n points (n = patch.degree).
double bb_blossom(const BBPatch& patch, const std::vector<Point>& points);
double blossom(const BBPatch& cubic, Point p1, Point p2, Point p3);

/// Cubic in monomial form, order 1, x, y, x^2, xy, y^2, x^3, x^2y, xy^2, y^3.
struct CubicPolynomial {
  std::array<double, 10> c{};

  static constexpr std::array<std::array<int, 2>, 10> kExponents{
      {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}, {3, 0}, {2, 1}, {1, 2}, {0, 3}}};

  double operator()(Point p) const { return derivative(p, 0, 0); }
  double derivative(Point p, int a, int b) const;
  /// Closed-form blossom: average of the monomial over argument permutations.
  double blossom(Point p1, Point p2, Point p3) const;
};

BBPatch poly_to_bb(const CubicPolynomial& g, const Triangle& triangle);

/// Largest jump of the order-th Cartesian derivatives between two patches at
/// `samples` equispaced points of the shared segment [a,b], divided by
/// max(1, largest coefficient magnitude).
double smoothness_residual(const BBPatch& fa, const BBPatch& fb, Point a, Point b, int order,
                           int samples = 7);

/// Cubic Bernstein polynomials and their derivatives at one point.
/// Rows: value, d/dx, d/dy, d2/dx2, d2/dxdy, d2/dy2.
using Bernstein3 = std::array<std::array<double, 10>, 6>;
void bernstein3(const Barycentric& l, const std::array<Point, 3>& gradients, Bernstein3& out);

/// R with R[b][a] = coefficient b on `to` of the Bernstein polynomial a of `from`.
std::array<std::array<double, 10>, 10> cubic_reexpress(const Triangle& from, const Triangle& to);

}  // namespace pss
