#pragma once

#include <vector>

#include "pss/geometry.hpp"

namespace pss {

/// Rule on the reference triangle: nodes in barycentric coordinates, weights summing to 1.
/// The integral over a triangle T is |T| * sum_q w_q f(x_q).
struct QuadratureRule {
  std::vector<Barycentric> nodes;
  std::vector<double> weights;
  int degree = 0;
};

inline constexpr int kMaxQuadratureDegree = 20;

/// Symmetric rule exact for polynomials of total degree <= degree (1..20).
const QuadratureRule& quadrature_rule(int degree);

/// Gauss-Legendre nodes and weights on [0,1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace pss
