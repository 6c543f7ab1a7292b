#pragma once

#include <string>
#include <vector>

#include "pss/extraction.hpp"

namespace pss {

/// Interior edge of the micro-triangulation.
struct MicroEdge {
  enum Kind { SplitToEdgePoint, SplitToVertex, MacroEdge };
  int a = kNone;
  int b = kNone;  // micro-triangle ids on either side
  Point p, q;
  Kind kind = MacroEdge;
};

std::vector<MicroEdge> interior_micro_edges(const PSRefinement& ps);

/// Points distributed uniformly over the triangulated domain.
std::vector<Point> sample_domain(const Triangulation& tri, int n, unsigned seed);

/// Largest jump of the order-th derivatives at one point between two patches,
/// scaled like smoothness_residual.
double point_jump(const BBPatch& fa, const BBPatch& fb, Point p, int order);

struct PropertyReport {
  int space = 0;
  int functions = 0;
  double pu_error = 0.0;      // max |sum - 1| at the sample points
  double min_value = 0.0;     // min function value at sample and lattice points
  double min_coeff = 0.0;     // min BB coefficient
  double c1 = 0.0;            // C1 residual over all interior micro-edges
  double c2_split_point = 0.0;
  double c2_split_edges = 0.0;  // across edges joining edge and split points
  double c2_sym = 0.0;          // inside symmetric triangles

  bool pass(std::string* failed = nullptr) const;
};

/// Property suite of one space. The C2 checks cover the vertex functions for r = 0
/// and all functions for r = 1, 2; the symmetric-triangle check covers the vertex
/// functions for r < 2 and all functions for r = 2.
PropertyReport check_properties(const SplineSpaces& spaces, int r, int samples = 1000,
                                unsigned seed = 1);

}  // namespace pss
