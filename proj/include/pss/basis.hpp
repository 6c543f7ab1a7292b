#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "pss/spline.hpp"

namespace pss {

struct GrevilleTriangle {
  int vertex = kNone;
  Triangle corners{};  // counterclockwise
  /// Set when one side lies on the (straight) boundary through the vertex.
  bool boundary_aligned = false;
};

/// {v_i} and the points 2/3 v_i + 1/3 p for every edge point and split point around v_i.
std::vector<Point> greville_points(const PSRefinement& ps, int vertex);

/// Outward unit normal of the boundary at a vertex whose two boundary edges are
/// collinear; nullptr result (false) otherwise.
bool straight_boundary_normal(const Triangulation& tri, int vertex, Point& normal);

/// Minimal-area triangle enclosing the points, inflated by 1+1e-9. With a
/// boundary normal, one side is constrained to the supporting line with that normal.
GrevilleTriangle greville_triangle(const std::vector<Point>& points, const Point* boundary_normal);
GrevilleTriangle greville_triangle(const PSRefinement& ps, int vertex);

/// Entry of the edge index set: (vertex, edge, triangle), triangle kNone for the
/// empty triangle of a boundary edge.
struct XiEntry {
  int vertex = kNone;
  int edge = kNone;
  int triangle = kNone;
};

/// Slot of a triangle on an edge: 0 for the first incident triangle, 1 for the
/// second one or for the empty triangle of a boundary edge.
int edge_slot(const Triangulation& tri, int edge, int triangle);

/// Index of (v, e, t) in the edge-function ordering (sorted by edge, triangle, vertex).
int xi0_index(const Triangulation& tri, int vertex, int edge, int triangle);

/// Powell-Sabin B-spline basis of the C1 cubic space: 3 functions per vertex
/// (indices 3i+m) followed by 4 per edge (index 3 n_v + xi0).
struct SplineBasis {
  SplineFamily family;
  std::vector<GrevilleTriangle> greville;
  std::vector<XiEntry> xi0;
  double sigma = 0.5;

  const PSRefinement& ps() const { return *family.ps; }
  int n_vertex_functions() const { return 3 * static_cast<int>(greville.size()); }
  int n_edge_functions() const { return static_cast<int>(xi0.size()); }
  int size() const { return family.size(); }
};

/// Local dual basis on one triangle: 60 x 21 column-major coefficient matrix of the
/// six micro-patches (10 coefficients each, micro order) for the 21 local functionals:
/// value/d_x/d_y at each corner (0..8), side blossoms (9..14), edge blossoms (15..20).
std::vector<double> local_dual(const PSRefinement& ps, int triangle);

SplineBasis build_basis(std::shared_ptr<const PSRefinement> ps);

struct DimensionOracle {
  int dimension = 0;
  bool ambiguous = false;
  double smallest_kept = 0.0;
  double largest_dropped = 0.0;
};
/// Nullspace dimension of the sampled C0/C1 conditions across all interior micro-edges.
DimensionOracle space_dimension_oracle(const PSRefinement& ps, int max_micro = 400);

/// JSON array of {id, kind, owner, support, coefficients}.
std::string basis_dump_json(const SplineBasis& basis, const std::vector<int>& ids);

}  // namespace pss
