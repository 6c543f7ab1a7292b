#pragma once

#include <string>
#include <vector>

#include "pss/mesh.hpp"

namespace pss {

enum class SplitKind { Barycenter, Incenter };
enum class SplitStrategy { PreferBarycenter, IncenterOnT2 };

struct SplitChoice {
  std::vector<Point> points;
  std::vector<SplitKind> kinds;
};

/// Micro-triangle j of triangle t has id 6t+j. Its vertices are the corner
/// vertex, the split point of the edge and the split point of t, in that order.
/// For odd j this order is clockwise.
struct MicroTriangle {
  std::array<int, 3> vertices;  // micro-vertex ids
  int corner = kNone;
  int other = kNone;  // the other endpoint of the edge
  int edge = kNone;
  int triangle = kNone;
};

/// Powell-Sabin 6-split of a triangulation.
///
/// Micro-vertex ids: vertex i -> i, edge point j -> n_v + j, split point k -> n_v + n_e + k.
struct PSRefinement {
  Triangulation mesh;
  std::vector<Point> split_point;
  std::vector<SplitKind> split_kind;
  std::vector<Point> edge_point;
  /// For interior edges, edge_point = (1-theta) split_point[t0] + theta split_point[t1]
  /// with (t0, t1) = mesh.edge_triangles. Boundary edges store 0.5.
  std::vector<double> edge_theta;
  std::vector<Point> micro_vertices;
  std::vector<MicroTriangle> micro;
  std::vector<bool> sym;

  int n_micro() const { return static_cast<int>(micro.size()); }
  int n_sym() const;
  Triangle micro_triangle(int id) const {
    const auto& v = micro[id].vertices;
    return {micro_vertices[v[0]], micro_vertices[v[1]], micro_vertices[v[2]]};
  }
  int edge_vertex(int e) const { return mesh.n_vertices() + e; }
  int split_vertex(int t) const { return mesh.n_vertices() + mesh.n_edges() + t; }
};

/// True when the open segment between the two split points crosses the open edge e.
bool split_segment_crosses_edge(const Triangulation& tri, const std::vector<Point>& split, int e,
                                double* theta = nullptr);

SplitChoice choose_split_points(const Triangulation& tri, SplitStrategy strategy);
PSRefinement ps6_split(Triangulation tri, const SplitChoice& splits);
std::vector<bool> detect_symmetric(const PSRefinement& ps, double tol = 1e-10);

/// choose_split_points + ps6_split + detect_symmetric.
PSRefinement build_ps(const Triangulation& tri,
                      SplitStrategy strategy = SplitStrategy::PreferBarycenter,
                      double sym_tol = 1e-10);

/// The micro-triangulation as mesh-JSON (counterclockwise), plus "kinds".
std::string ps_to_json(const PSRefinement& ps);

}  // namespace pss
