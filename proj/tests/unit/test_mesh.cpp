#include <sstream>

#include "../common/fixtures.hpp"
#include "doctest.h"
#include "pss/error.hpp"

using namespace pss;

namespace {

Triangulation parse(const std::string& text) {
  std::istringstream in(text);
  return load_mesh(in);
}

int euler(const Triangulation& t) { return t.n_vertices() - t.n_edges() + t.n_triangles(); }

}  // namespace

TEST_CASE("square split by one diagonal") {
  const Triangulation t = fixtures::two_triangle_square();
  CHECK(t.counts() == EntityCounts{4, 5, 4, 2});
  CHECK(euler(t) == 1);
  const int diag = t.find_edge(1, 3);
  REQUIRE(diag != kNone);
  CHECK_FALSE(t.edge_boundary[diag]);
  CHECK(t.edge_triangles[diag][0] != kNone);
  CHECK(t.edge_triangles[diag][1] != kNone);
}

TEST_CASE("single triangle has only boundary edges") {
  const Triangulation t = fixtures::reference_triangle();
  CHECK(t.counts() == EntityCounts{3, 3, 3, 1});
  for (int e = 0; e < 3; ++e) {
    CHECK(t.edge_boundary[e]);
    CHECK(t.edge_triangles[e][1] == kNone);
  }
}

TEST_CASE("clockwise triangles are rewound") {
  const Triangulation ccw = fixtures::two_triangle_square();
  const Triangulation cw =
      build_triangulation({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 3, 1}, {1, 3, 2}});
  CHECK(cw.edges == ccw.edges);
  CHECK(cw.edge_boundary == ccw.edge_boundary);
  for (int t = 0; t < cw.n_triangles(); ++t) CHECK(signed_area(cw.triangle(t)) > 0);
}

TEST_CASE("mesh JSON round trip") {
  const Triangulation a = load_mesh_file(fixtures::data_path("square.json"));
  const Triangulation b = parse(mesh_to_json(a));
  CHECK(a.counts() == b.counts());
  CHECK(a.edges == b.edges);
  CHECK(a.triangles == b.triangles);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(parse("{\"vertices\": [[0,0],[1,0]"), ParseError);
  CHECK_THROWS_AS(parse("{\"vertices\": [[0,0],[1,0],[0,1]]}"), ParseError);
  CHECK_THROWS_AS(parse("{\"vertices\": [[0,0,1]], \"triangles\": []}"), ParseError);
  CHECK_THROWS_AS(parse("[1,2,3]"), ParseError);
  CHECK_THROWS_AS(load_mesh_file("/nonexistent/mesh.json"), ParseError);
}

TEST_CASE("invalid meshes are rejected") {
  SUBCASE("index out of range") {
    CHECK_THROWS_AS(build_triangulation({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 3}}), MeshError);
  }
  SUBCASE("zero area") {
    CHECK_THROWS_AS(build_triangulation({{0, 0}, {1, 0}, {2, 0}}, {{0, 1, 2}}), MeshError);
  }
  SUBCASE("repeated vertex") {
    CHECK_THROWS_AS(build_triangulation({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 1}}), MeshError);
  }
  SUBCASE("duplicate vertex coordinates") {
    CHECK_THROWS_AS(build_triangulation({{0, 0}, {1, 0}, {0, 1}, {1, 0}}, {{0, 1, 2}, {3, 2, 0}}),
                    MeshError);
  }
  SUBCASE("overlapping triangles") {
    CHECK_THROWS_AS(
        build_triangulation({{0, 0}, {1, 0}, {0, 1}, {0.2, 0.2}}, {{0, 1, 2}, {0, 1, 3}}),
        MeshError);
  }
  SUBCASE("hanging vertex") {
    CHECK_THROWS_AS(build_triangulation({{0, 0}, {2, 0}, {1, 1}, {1, 0}, {1, -1}},
                                        {{0, 1, 2}, {0, 4, 3}, {3, 4, 1}}),
                    MeshError);
  }
  SUBCASE("edge shared by three triangles") {
    CHECK_THROWS_AS(build_triangulation({{0, 0}, {1, 0}, {0, 1}, {0, -1}, {1, 1}},
                                        {{0, 1, 2}, {0, 3, 1}, {0, 1, 4}}),
                    MeshError);
  }
  SUBCASE("unused vertex") {
    CHECK_THROWS_AS(build_triangulation({{0, 0}, {1, 0}, {0, 1}, {5, 5}}, {{0, 1, 2}}), MeshError);
  }
  SUBCASE("domain with a hole") {
    std::vector<Point> pts;
    std::vector<std::array<int, 3>> tris;
    for (int k = 0; k < 6; ++k) {
      const double a = k * M_PI / 3;
      pts.push_back({std::cos(a), std::sin(a)});
      pts.push_back({2 * std::cos(a), 2 * std::sin(a)});
    }
    for (int k = 0; k < 6; ++k) {
      const int i0 = 2 * k, o0 = 2 * k + 1, i1 = (2 * k + 2) % 12, o1 = (2 * k + 3) % 12;
      tris.push_back({i0, o0, o1});
      tris.push_back({i0, o1, i1});
    }
    CHECK_THROWS_AS(build_triangulation(pts, tris), MeshError);
  }
}

TEST_CASE("uniform refinement") {
  const Triangulation tri = fixtures::reference_triangle();
  SUBCASE("level 1 is the identity") {
    const Triangulation r = uniform_refine(tri, 1);
    CHECK(r.counts() == tri.counts());
    CHECK(r.edges == tri.edges);
  }
  SUBCASE("level 2 of a triangle") {
    const Triangulation r = uniform_refine(tri, 2);
    CHECK(r.n_vertices() == 6);
    CHECK(r.n_edges() == 9);
    CHECK(r.n_triangles() == 4);
  }
  SUBCASE("level 3 of the square") {
    const Triangulation r = uniform_refine(fixtures::two_triangle_square(), 3);
    CHECK(r.counts() == EntityCounts{16, 33, 12, 18});
    CHECK(euler(r) == 1);
  }
  SUBCASE("macro vertices keep their indices") {
    const Triangulation r = uniform_refine(fixtures::two_triangle_square(), 4);
    const Triangulation m = fixtures::two_triangle_square();
    for (int v = 0; v < m.n_vertices(); ++v) CHECK(distance(r.vertices[v], m.vertices[v]) == 0.0);
  }
  SUBCASE("areas are preserved") {
    const Triangulation m = load_mesh_file(fixtures::data_path("square.json"));
    const Triangulation r = uniform_refine(m, 3);
    double area = 0.0;
    for (int t = 0; t < r.n_triangles(); ++t) area += signed_area(r.triangle(t));
    CHECK(area == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK_THROWS_AS(uniform_refine(tri, 0), InvalidArgument);
}

TEST_CASE("closed-form entity counts") {
  CHECK(predicted_counts(fixtures::reference_triangle(), 2) == EntityCounts{6, 9, 6, 4});
  CHECK(predicted_counts(fixtures::two_triangle_square(), 3) == EntityCounts{16, 33, 12, 18});
  const Triangulation m = load_mesh_file(fixtures::data_path("square.json"));
  CHECK(predicted_counts(m, 1) == m.counts());
  for (unsigned seed = 1; seed <= 3; ++seed) {
    const Triangulation g = fixtures::random_grid_mesh(3, 2, seed);
    for (int level = 1; level <= 5; ++level) {
      CHECK(predicted_counts(g, level) == uniform_refine(g, level).counts());
    }
  }
}

TEST_CASE("lattice classes") {
  const Triangulation tri = fixtures::reference_triangle();
  auto count = [](const std::vector<int>& r, int value) {
    return static_cast<int>(std::count(r.begin(), r.end(), value));
  };
  CHECK(classify_triangles(uniform_refine(tri, 1), tri) == std::vector<int>{2});
  const auto r2 = classify_triangles(uniform_refine(tri, 2), tri);
  CHECK(count(r2, 2) == 3);
  CHECK(count(r2, 1) == 1);
  const Triangulation t4 = uniform_refine(tri, 4);
  const auto r4 = classify_triangles(t4, tri);
  CHECK(count(r4, 0) == 1);
  // Interior lattice vertices (2,1,1)/4, (1,2,1)/4, (1,1,2)/4.
  int interior = 0;
  for (const Point& p : t4.vertices) {
    if (p.x > 1e-12 && p.y > 1e-12 && p.x + p.y < 1 - 1e-12) ++interior;
  }
  CHECK(interior == 3);
  CHECK(t4.class_r == r4);
}
