#include "pss/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "pss/error.hpp"

namespace pss {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  // Golub-Welsch: eigen-decomposition of the Jacobi matrix of the Legendre recurrence.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    nodes[i] = 0.5 * (eig.eigenvalues()(i) + 1.0);
    const double v = eig.eigenvectors()(0, i);
    weights[i] = v * v;  // sums to 1 on [0,1]
  }
}

namespace {

QuadratureRule collapsed_rule(int degree) {
  // Duffy map (u,v) -> (x,y) = (u, v(1-u)); the Jacobian (1-u) adds one degree in u.
  const int n = (degree + 3) / 2;
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  std::vector<Barycentric> raw_nodes;
  std::vector<double> raw_weights;
  static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                      {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double px = x[i], py = x[j] * (1.0 - x[i]);
      const Barycentric l{1.0 - px - py, px, py};
      const double wt = 2.0 * w[i] * w[j] * (1.0 - x[i]) / 6.0;
      for (const auto& p : perms) {
        raw_nodes.push_back({l[p[0]], l[p[1]], l[p[2]]});
        raw_weights.push_back(wt);
      }
    }
  }
  // Merge coincident nodes created by the symmetrization.
  std::vector<int> order(raw_nodes.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return raw_nodes[a] < raw_nodes[b]; });
  QuadratureRule rule;
  rule.degree = degree;
  for (int idx : order) {
    const Barycentric& l = raw_nodes[idx];
    if (!rule.nodes.empty()) {
      const Barycentric& last = rule.nodes.back();
      if (std::abs(last[0] - l[0]) < 1e-15 && std::abs(last[1] - l[1]) < 1e-15 &&
          std::abs(last[2] - l[2]) < 1e-15) {
        rule.weights.back() += raw_weights[idx];
        continue;
      }
    }
    rule.nodes.push_back(l);
    rule.weights.push_back(raw_weights[idx]);
  }
  return rule;
}

}  // namespace

const QuadratureRule& quadrature_rule(int degree) {
  if (degree < 1 || degree > kMaxQuadratureDegree) {
    throw InvalidArgument("unsupported quadrature degree " + std::to_string(degree));
  }
  static const std::vector<QuadratureRule> table = [] {
    std::vector<QuadratureRule> t;
    for (int d = 1; d <= kMaxQuadratureDegree; ++d) t.push_back(collapsed_rule(d));
    return t;
  }();
  return table[degree - 1];
}

}  // namespace pss
