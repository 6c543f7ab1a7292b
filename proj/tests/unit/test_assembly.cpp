#include <cstdlib>

#include "../common/fixtures.hpp"
#include "doctest.h"
#include "pss/assembly.hpp"
#include "pss/parallel.hpp"
#include "pss/problems.hpp"

using namespace pss;

namespace {

const std::vector<ProductTerm>* const kAllTerms[] = {&kMassTerms, &kLaplaceTerms, &kBilaplaceTerms};

SplineSpaces square_spaces(int level) {
  return build_spaces(fixtures::refine(load_mesh_file(fixtures::data_path("square.json")), level));
}

}  // namespace

TEST_CASE("derivative rows") {
  CHECK(derivative_row(0, 0) == 0);
  CHECK(derivative_row(1, 1) == 1);
  CHECK(derivative_row(0, 1) == 2);
  CHECK(derivative_row(2, 2) == 3);
  CHECK(derivative_row(1, 2) == 4);
  CHECK(derivative_row(0, 2) == 5);
}

TEST_CASE("congruence agrees with direct assembly") {
  for (int level : {1, 2}) {
    const SplineSpaces s = square_spaces(level);
    for (const auto* terms : kAllTerms) {
      const SparseMatrix m1 = assemble_m(s, 1, *terms);
      const SparseMatrix m2 = assemble_m(s, 2, *terms);
      CHECK(fixtures::relative_frobenius(m1, assemble_family(s.s1, *terms)) <= 1e-12);
      CHECK(fixtures::relative_frobenius(m2, assemble_family(s.s2, *terms)) <= 1e-12);
    }
  }
}

TEST_CASE("congruence with a permutation") {
  const SplineSpaces s = square_spaces(1);
  REQUIRE(s.ps().n_sym() == 0);
  const SparseMatrix m1 = assemble_m(s, 1, kLaplaceTerms);
  const SparseMatrix m2 = assemble_m(s, 2, kLaplaceTerms);
  const SparseMatrix p = s.h2_ext;
  CHECK(fixtures::relative_frobenius(m2, SparseMatrix(p * m1 * p.transpose())) <= 1e-15);
  Eigen::VectorXd d1 = Eigen::VectorXd(m1.diagonal()), d2 = Eigen::VectorXd(m2.diagonal());
  std::sort(d1.data(), d1.data() + d1.size());
  std::sort(d2.data(), d2.data() + d2.size());
  CHECK((d1 - d2).norm() <= 1e-14 * d1.norm());
}

TEST_CASE("matrices are symmetric positive semidefinite") {
  const SplineSpaces s = square_spaces(1);
  for (int r = 0; r < 3; ++r) {
    for (const auto* terms : kAllTerms) {
      const Eigen::MatrixXd m = Eigen::MatrixXd(assemble_m(s, r, *terms));
      CHECK((m - m.transpose()).norm() <= 1e-14 * m.norm());
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
      CHECK(eig.eigenvalues().minCoeff() >= -1e-12 * m.norm());
    }
  }
}

TEST_CASE("partition-of-unity identities") {
  const SplineSpaces s = square_spaces(2);
  for (int r = 0; r < 3; ++r) {
    const SparseMatrix mass = assemble_m(s, r, kMassTerms);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(s.dim(r));
    CHECK(ones.dot(mass * ones) == doctest::Approx(1.0).epsilon(1e-13));
    for (const auto* terms : {&kLaplaceTerms, &kBilaplaceTerms}) {
      const SparseMatrix k = assemble_m(s, r, *terms);
      CHECK((k * ones).cwiseAbs().maxCoeff() <= 1e-12 * Eigen::MatrixXd(k).cwiseAbs().maxCoeff());
    }
    const Eigen::VectorXd f1 = assemble_load(s, r, [](Point) { return 1.0; });
    CHECK(f1.sum() == doctest::Approx(1.0).epsilon(1e-13));
    const Eigen::VectorXd f0 = assemble_load(s, r, [](Point) { return 0.0; });
    CHECK(f0.norm() == 0.0);
  }
}

TEST_CASE("load of a cubic equals the Gram matrix times its coefficients") {
  std::mt19937 rng(31);
  const CubicPolynomial g = fixtures::random_cubic(rng);
  const SplineSpaces s = build_spaces(fixtures::refine(fixtures::two_triangle_square(), 2));
  for (int r = 0; r < 3; ++r) {
    const Eigen::VectorXd c = fixtures::point_coefficients(s.family(r), [&](Point p) { return g(p); });
    const Eigen::VectorXd load = assemble_load(s, r, [&](Point p) { return g(p); });
    const SparseMatrix mass = assemble_m(s, r, kMassTerms);
    CHECK((load - mass * c).norm() <= 1e-10 * load.norm());
  }
}

TEST_CASE("boundary restriction") {
  const SplineSpaces s = build_spaces(fixtures::refine(fixtures::two_triangle_square(), 1));
  const Triangulation& tri = s.ps().mesh;
  for (int r = 0; r < 3; ++r) {
    const SplineFamily& fam = s.family(r);
    const SparseMatrix m = assemble_m(s, r, kMassTerms);
    const Eigen::VectorXd load = Eigen::VectorXd::Zero(fam.size());
    const RestrictedSystem dirichlet = restrict_system(m, load, fam.boundary, kZeroTrace);
    const RestrictedSystem clamped =
        restrict_system(m, load, fam.boundary, kZeroTrace | kZeroNormalDeriv);
    CHECK(dirichlet.kept.size() > 0);
    CHECK(clamped.kept.size() < dirichlet.kept.size());
    for (int k : clamped.kept) {
      CHECK(std::find(dirichlet.kept.begin(), dirichlet.kept.end(), k) != dirichlet.kept.end());
    }
    // Kept for Dirichlet exactly when the function vanishes at sampled boundary points.
    for (int i = 0; i < fam.size(); ++i) {
      double trace = 0.0;
      for (int e = 0; e < tri.n_edges(); ++e) {
        if (!tri.edge_boundary[e]) continue;
        const Point a = tri.vertices[tri.edges[e][0]], b = tri.vertices[tri.edges[e][1]];
        for (int k = 0; k <= 8; ++k) {
          trace = std::max(trace, std::abs(eval_function(s.ps(), fam.functions[i], a + (k / 8.0) * (b - a))));
        }
      }
      const bool kept =
          std::find(dirichlet.kept.begin(), dirichlet.kept.end(), i) != dirichlet.kept.end();
      CHECK(kept == (trace <= 1e-12));
    }
    CHECK(dirichlet.matrix.rows() == static_cast<int>(dirichlet.kept.size()));
    const Eigen::VectorXd x = Eigen::VectorXd::Ones(dirichlet.kept.size());
    const Eigen::VectorXd full = scatter(dirichlet, x);
    CHECK(full.size() == fam.size());
    CHECK(full.sum() == doctest::Approx(static_cast<double>(dirichlet.kept.size())));
  }
}

TEST_CASE("boundary-edge functions of S2") {
  const SplineSpaces s = build_spaces(fixtures::refine(fixtures::two_triangle_square(), 2));
  const Triangulation& tri = s.ps().mesh;
  const int m = s.basis.n_vertex_functions();
  int found = 0;
  for (std::size_t k = 0; k < s.xi2.size(); ++k) {
    const PairEntry& p = s.xi2[k];
    if (p.edge == kNone || p.triangle == kNone || !tri.edge_boundary[p.edge]) continue;
    const unsigned f = s.s2.boundary[m + k];
    CHECK((f & kZeroTrace) != 0);
    CHECK((f & kZeroNormalDeriv) == 0);
    ++found;
  }
  CHECK(found > 0);
}

TEST_CASE("assembly is deterministic across thread counts") {
  const SplineSpaces s = square_spaces(2);
  setenv("PS_SPLINES_THREADS", "1", 1);
  const SparseMatrix a = assemble_m(s, 2, kBilaplaceTerms);
  const Eigen::VectorXd la = assemble_load(s, 2, [](Point p) { return std::sin(p.x + 2 * p.y); });
  setenv("PS_SPLINES_THREADS", "3", 1);
  CHECK(thread_count() == 3);
  const SparseMatrix b = assemble_m(s, 2, kBilaplaceTerms);
  const Eigen::VectorXd lb = assemble_load(s, 2, [](Point p) { return std::sin(p.x + 2 * p.y); });
  unsetenv("PS_SPLINES_THREADS");
  CHECK((a - b).norm() == 0.0);
  CHECK((la - lb).norm() == 0.0);
}
