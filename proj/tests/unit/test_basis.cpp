#include "../common/fixtures.hpp"
#include "doctest.h"
#include "json.hpp"
#include "pss/assembly.hpp"

using namespace pss;

namespace {

bool contains(const Triangle& t, Point p, double tol) {
  for (double l : barycentric(t, p)) {
    if (l < -tol) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("number of functions") {
  for (const Triangulation& m : {fixtures::reference_triangle(), fixtures::two_triangle_square(),
                                 load_mesh_file(fixtures::data_path("square.json"))}) {
    for (int level : {1, 2, 3}) {
      const auto ps = fixtures::refine(m, level);
      const SplineBasis b = build_basis(ps);
      CHECK(b.size() == 3 * ps->mesh.n_vertices() + 4 * ps->mesh.n_edges());
      CHECK(b.n_vertex_functions() == 3 * ps->mesh.n_vertices());
    }
  }
}

TEST_CASE("convex partition of unity") {
  const auto ps = fixtures::refine(load_mesh_file(fixtures::data_path("square.json")), 2);
  const SplineBasis b = build_basis(ps);
  const ElementIndex index = element_index(b.family);
  for (const Point& p : sample_domain(ps->mesh, 200, 17)) {
    double sum = 0.0;
    for (const auto& [i, v] : eval_all(b.family, index, p)) {
      sum += v;
      CHECK(v >= -1e-12);
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("linear independence on one triangle") {
  const auto ps = fixtures::refine(fixtures::reference_triangle(), 1);
  const SplineBasis b = build_basis(ps);
  REQUIRE(b.size() == 21);
  const Eigen::MatrixXd gram = Eigen::MatrixXd(assemble_family(b.family, kMassTerms));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  CHECK(eig.eigenvalues().minCoeff() > 1e-10 * eig.eigenvalues().maxCoeff());
}

TEST_CASE("nullspace dimension oracle") {
  auto check = [](const Triangulation& m, int level, int expected) {
    const auto ps = fixtures::refine(m, level);
    const DimensionOracle o = space_dimension_oracle(*ps);
    CHECK_FALSE(o.ambiguous);
    CHECK(o.dimension == expected);
    CHECK(o.dimension == 3 * ps->mesh.n_vertices() + 4 * ps->mesh.n_edges());
  };
  check(fixtures::reference_triangle(), 1, 21);
  check(fixtures::two_triangle_square(), 1, 32);
  const EntityCounts c = predicted_counts(fixtures::two_triangle_square(), 2);
  check(fixtures::two_triangle_square(), 2, static_cast<int>(3 * c.vertices + 4 * c.edges));
  CHECK_THROWS(space_dimension_oracle(*fixtures::refine(fixtures::two_triangle_square(), 8)));
}

TEST_CASE("Greville triangle of a uniform interior star") {
  const auto ps = fixtures::refine(fixtures::reference_triangle(), 4);
  int checked = 0;
  for (int v = 0; v < ps->mesh.n_vertices(); ++v) {
    Point n;
    const Point c = ps->mesh.vertices[v];
    if (c.x < 1e-12 || c.y < 1e-12 || c.x + c.y > 1 - 1e-12) continue;
    const auto pts = greville_points(*ps, v);
    for (const Point& p : pts) {
      const Point mirror = 2.0 * c - p;
      double best = 1e300;
      for (const Point& q : pts) best = std::min(best, distance(q, mirror));
      CHECK(best < 1e-14);
    }
    const GrevilleTriangle g = greville_triangle(*ps, v);
    const auto l = barycentric(g.corners, c);
    for (double x : l) CHECK(x > 1e-3);
    CHECK_FALSE(straight_boundary_normal(ps->mesh, v, n));
    ++checked;
  }
  CHECK(checked == 3);
}

TEST_CASE("Greville triangles contain their points") {
  for (unsigned seed : {1u, 2u, 3u}) {
    const auto ps = fixtures::refine(fixtures::random_grid_mesh(3, 2, seed), 2);
    for (int v = 0; v < ps->mesh.n_vertices(); ++v) {
      const GrevilleTriangle g = greville_triangle(*ps, v);
      CHECK(signed_area(g.corners) > 0);
      for (const Point& p : greville_points(*ps, v)) CHECK(contains(g.corners, p, 1e-12));
    }
  }
}

TEST_CASE("boundary-aligned Greville triangles") {
  const auto ps = fixtures::refine(load_mesh_file(fixtures::data_path("square.json")), 2);
  const SplineBasis b = build_basis(ps);
  int straight = 0;
  for (int v = 0; v < ps->mesh.n_vertices(); ++v) {
    Point n;
    if (!straight_boundary_normal(ps->mesh, v, n)) continue;
    ++straight;
    const GrevilleTriangle& g = b.greville[v];
    CHECK(g.boundary_aligned);
    double best = 1e300;
    for (int k = 0; k < 3; ++k) {
      const Point d = g.corners[(k + 1) % 3] - g.corners[k];
      best = std::min(best, std::abs(dot(d, n)) / norm(d));
    }
    CHECK(best <= 1e-12);
    // Exactly one of the three vertex functions vanishes on the boundary without
    // a vanishing normal derivative.
    int trace_only = 0;
    for (int k = 0; k < 3; ++k) {
      const unsigned f = b.family.boundary[3 * v + k];
      if ((f & kZeroTrace) && !(f & kZeroNormalDeriv)) ++trace_only;
    }
    CHECK(trace_only == 1);
  }
  CHECK(straight > 0);
}

TEST_CASE("boundary flags of interior functions") {
  const auto ps = fixtures::refine(load_mesh_file(fixtures::data_path("square.json")), 2);
  const SplineBasis b = build_basis(ps);
  const Triangulation& tri = ps->mesh;
  std::vector<bool> touches(tri.n_vertices(), false);
  for (int e = 0; e < tri.n_edges(); ++e) {
    if (tri.edge_boundary[e]) touches[tri.edges[e][0]] = touches[tri.edges[e][1]] = true;
  }
  const unsigned both = kZeroTrace | kZeroNormalDeriv;
  for (int v = 0; v < tri.n_vertices(); ++v) {
    if (touches[v]) continue;
    for (int k = 0; k < 3; ++k) CHECK(b.family.boundary[3 * v + k] == both);
  }
  for (int k = 0; k < b.n_edge_functions(); ++k) {
    const XiEntry& x = b.xi0[k];
    const int e = x.edge;
    if (!touches[tri.edges[e][0]] && !touches[tri.edges[e][1]]) {
      CHECK(b.family.boundary[b.n_vertex_functions() + k] == both);
    }
  }
}

TEST_CASE("edge-function index map") {
  const auto ps = fixtures::refine(fixtures::random_grid_mesh(2, 2, 4), 2);
  const SplineBasis b = build_basis(ps);
  REQUIRE(b.n_edge_functions() == 4 * ps->mesh.n_edges());
  for (int k = 0; k < b.n_edge_functions(); ++k) {
    const XiEntry& x = b.xi0[k];
    CHECK(xi0_index(ps->mesh, x.vertex, x.edge, x.triangle) == k);
    CHECK((x.vertex == ps->mesh.edges[x.edge][0] || x.vertex == ps->mesh.edges[x.edge][1]));
    if (x.triangle == kNone) CHECK(ps->mesh.edge_boundary[x.edge]);
  }
}

TEST_CASE("nonnegative coefficients and C1 smoothness") {
  const auto ps = fixtures::refine(fixtures::random_grid_mesh(3, 2, 9), 1);
  const SplineBasis b = build_basis(ps);
  for (const SplineFunction& f : b.family.functions) {
    for (const auto& [mid, c] : f.patches) {
      for (double v : c) CHECK(v >= -1e-10);
    }
  }
  for (const MicroEdge& e : interior_micro_edges(*ps)) {
    for (const SplineFunction& f : b.family.functions) {
      if (!f.find(e.a) && !f.find(e.b)) continue;
      CHECK(smoothness_residual(patch_of(*ps, f, e.a), patch_of(*ps, f, e.b), e.p, e.q, 1) <= 1e-10);
    }
  }
}

TEST_CASE("edge functions of S0 are not C2 across split edges") {
  // The C2 checks of the property suite are selective: the interior-edge functions
  // of S0 break C2 there, which the reduced spaces repair.
  const auto ps = fixtures::refine(fixtures::two_triangle_square(), 1);
  const SplineBasis b = build_basis(ps);
  double worst = 0.0;
  for (const MicroEdge& e : interior_micro_edges(*ps)) {
    if (e.kind != MicroEdge::SplitToEdgePoint) continue;
    for (int k = b.n_vertex_functions(); k < b.size(); ++k) {
      const SplineFunction& f = b.family.functions[k];
      worst = std::max(worst, smoothness_residual(patch_of(*ps, f, e.a), patch_of(*ps, f, e.b), e.p, e.q, 2));
    }
  }
  CHECK(worst > 1e-3);
}

TEST_CASE("local dual basis") {
  const auto ps = fixtures::refine(fixtures::two_triangle_square(), 1);
  for (int t = 0; t < 2; ++t) {
    const std::vector<double> x = local_dual(*ps, t);
    REQUIRE(x.size() == 60 * 21);
    // Column k reproduces functional k: the value/gradient functionals at the corners.
    for (int v = 0; v < 3; ++v) {
      const int corner = ps->mesh.triangles[t][v];
      int micro = kNone;
      for (int j = 0; j < 6; ++j) {
        if (ps->micro[6 * t + j].corner == corner) micro = 6 * t + j;
      }
      REQUIRE(micro != kNone);
      for (int k = 0; k < 21; ++k) {
        const BBPatch p{ps->micro_triangle(micro), 3,
                        std::vector<double>(x.begin() + 60 * k + 10 * (micro - 6 * t),
                                            x.begin() + 60 * k + 10 * (micro - 6 * t) + 10)};
        const Point c = ps->mesh.vertices[corner];
        CHECK(bb_eval(p, c) == doctest::Approx(k == 3 * v ? 1.0 : 0.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("basis dump") {
  const auto ps = fixtures::refine(fixtures::reference_triangle(), 1);
  const SplineBasis b = build_basis(ps);
  const auto doc = nlohmann::json::parse(basis_dump_json(b, {0, 9}));
  REQUIRE(doc.size() == 2);
  CHECK(doc[0]["kind"] == "vertex");
  CHECK(doc[1]["kind"] == "edge");
  CHECK(doc[0]["support"].size() == doc[0]["coefficients"].size());
  CHECK_THROWS(basis_dump_json(b, {21}));
}
