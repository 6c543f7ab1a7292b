#include <cmath>

#include "doctest.h"
#include "pss/error.hpp"
#include "pss/quadrature.hpp"

using namespace pss;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

// Integral of x^a y^b over the reference triangle.
double exact_monomial(int a, int b) { return factorial(a) * factorial(b) / factorial(a + b + 2); }

double apply(const QuadratureRule& rule, int a, int b) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    // Reference triangle (0,0), (1,0), (0,1): x = l1, y = l2.
    s += rule.weights[i] * std::pow(rule.nodes[i][1], a) * std::pow(rule.nodes[i][2], b);
  }
  return 0.5 * s;
}

}  // namespace

TEST_CASE("weights sum to one") {
  for (int d = 1; d <= 20; ++d) {
    const QuadratureRule& r = quadrature_rule(d);
    double s = 0.0;
    for (double w : r.weights) s += w;
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(r.degree >= d);
    for (const auto& l : r.nodes) {
      CHECK(l[0] + l[1] + l[2] == doctest::Approx(1.0).epsilon(1e-14));
      for (double v : l) CHECK(v >= 0.0);
    }
  }
}

TEST_CASE("x^4 y^2 with the degree-6 rule") {
  CHECK(exact_monomial(4, 2) == doctest::Approx(1.0 / 840).epsilon(1e-15));
  CHECK(apply(quadrature_rule(6), 4, 2) == doctest::Approx(1.0 / 840).epsilon(1e-13));
}

TEST_CASE("exactness up to the rule degree") {
  for (int d = 1; d <= 20; ++d) {
    for (int a = 0; a <= d; ++a) {
      for (int b = 0; a + b <= d; ++b) {
        CAPTURE(d);
        CAPTURE(a);
        CAPTURE(b);
        const double exact = exact_monomial(a, b);
        CHECK(std::abs(apply(quadrature_rule(d), a, b) - exact) <= 1e-13 * exact + 1e-16);
      }
    }
  }
}

TEST_CASE("degree bookkeeping") {
  double worst6 = 0.0, worst8 = 0.0;
  for (int a = 0; a <= 7; ++a) {
    const double exact = exact_monomial(a, 7 - a);
    worst6 = std::max(worst6, std::abs(apply(quadrature_rule(6), a, 7 - a) - exact) / exact);
    worst8 = std::max(worst8, std::abs(apply(quadrature_rule(8), a, 7 - a) - exact) / exact);
  }
  CHECK(worst6 > 1e-8);
  CHECK(worst8 < 1e-13);
}

TEST_CASE("symmetry under permutation of the vertices") {
  const QuadratureRule& r = quadrature_rule(7);
  double s01 = 0.0, s10 = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    s01 += r.weights[i] * r.nodes[i][0] * r.nodes[i][1] * r.nodes[i][1];
    s10 += r.weights[i] * r.nodes[i][1] * r.nodes[i][0] * r.nodes[i][0];
  }
  CHECK(s01 == doctest::Approx(s10).epsilon(1e-15));
}

TEST_CASE("Gauss-Legendre") {
  std::vector<double> x, w;
  gauss_legendre(3, x, w);
  REQUIRE(x.size() == 3);
  double s = 0.0, m4 = 0.0;
  for (int i = 0; i < 3; ++i) {
    s += w[i];
    m4 += w[i] * std::pow(x[i], 4);
  }
  // Nodes on [0, 1].
  CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m4 == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("unsupported degrees") {
  CHECK_THROWS_AS(quadrature_rule(0), InvalidArgument);
  CHECK_THROWS_AS(quadrature_rule(21), InvalidArgument);
}
