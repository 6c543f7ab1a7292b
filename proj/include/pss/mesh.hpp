#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "pss/geometry.hpp"

namespace pss {

inline constexpr int kNone = -1;

struct EntityCounts {
  long long vertices = 0;
  long long edges = 0;
  long long boundary_edges = 0;
  long long triangles = 0;

  friend bool operator==(const EntityCounts&, const EntityCounts&) = default;
};

/// Conforming triangulation of a simply connected planar domain.
///
/// Local edge q of triangle t joins triangles[t][q] and triangles[t][(q+1)%3].
/// Edges are stored as sorted vertex pairs, ordered lexicographically.
struct Triangulation {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;  // counterclockwise
  std::vector<std::array<int, 2>> edges;
  std::vector<bool> edge_boundary;
  std::vector<std::array<int, 2>> edge_triangles;      // second entry kNone on the boundary
  std::vector<std::array<int, 3>> triangle_edges;      // by local edge
  std::vector<std::array<int, 3>> triangle_neighbors;  // by local edge, kNone on the boundary
  std::vector<int> macro_origin;
  std::vector<int> class_r;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
  int n_boundary_edges() const;
  EntityCounts counts() const;

  Triangle triangle(int t) const {
    const auto& v = triangles[t];
    return {vertices[v[0]], vertices[v[1]], vertices[v[2]]};
  }
  /// Index of the edge joining a and b, or kNone.
  int find_edge(int a, int b) const;
  /// Vertex of triangle t opposite to its local edge q.
  int opposite_vertex(int t, int q) const { return triangles[t][(q + 2) % 3]; }
  /// Local edge index of edge e inside triangle t, or kNone.
  int local_edge(int t, int e) const;
  /// Longest edge length; used to scale geometric tolerances.
  double max_edge_length() const;
};

/// Builds a triangulation from raw lists: rewinds clockwise triangles, derives
/// edges and adjacency, and validates conformity and simple connectivity.
/// Throws MeshError on invalid input.
Triangulation build_triangulation(std::vector<Point> vertices,
                                  std::vector<std::array<int, 3>> triangles);

/// Reads the mesh-JSON format `{"vertices": [[x,y],...], "triangles": [[i,j,k],...]}`.
Triangulation load_mesh(std::istream& in);
Triangulation load_mesh_file(const std::filesystem::path& path);
std::string mesh_to_json(const Triangulation& tri);

/// Splits every triangle into level^2 congruent triangles on the barycentric
/// lattice {(i,j,k)/level}; records macro_origin and class_r.
Triangulation uniform_refine(const Triangulation& macro, int level);

/// r = largest number of vertices of a refined triangle lying on one macro edge.
std::vector<int> classify_triangles(const Triangulation& refined, const Triangulation& macro);

/// Closed-form entity counts of the level-fold refinement.
EntityCounts predicted_counts(const Triangulation& macro, int level);

}  // namespace pss
