#pragma once

#include <array>
#include <memory>
#include <utility>
#include <vector>

#include "pss/bb.hpp"
#include "pss/ps_refine.hpp"

namespace pss {

using Coeffs10 = std::array<double, 10>;

/// Piecewise cubic on the micro-triangulation, stored only where it is nonzero.
struct SplineFunction {
  std::vector<std::pair<int, Coeffs10>> patches;  // sorted by micro-triangle id

  void add(int micro, const Coeffs10& c, double weight = 1.0);
  const Coeffs10* find(int micro) const;
  double max_abs_coeff() const;
};

enum BoundaryFlag : unsigned { kZeroTrace = 1u, kZeroNormalDeriv = 2u };

/// Ordered collection of spline functions on one PS refinement.
struct SplineFamily {
  std::shared_ptr<const PSRefinement> ps;
  std::vector<SplineFunction> functions;
  std::vector<unsigned> boundary;

  int size() const { return static_cast<int>(functions.size()); }
};

/// Boundary behavior read off the coefficients on boundary micro-edges.
unsigned boundary_flags(const PSRefinement& ps, const SplineFunction& f, double tol = 1e-12);
void classify_boundary(SplineFamily& family, double tol = 1e-12);

BBPatch patch_of(const PSRefinement& ps, const SplineFunction& f, int micro);

struct MicroLocation {
  int micro = kNone;
  Barycentric l{};
};
/// Micro-triangle containing p; throws InvalidArgument if p is outside the domain.
MicroLocation locate(const PSRefinement& ps, Point p, double tol = 1e-12);

/// For every micro-triangle, the functions of a family that live on it.
using ElementIndex = std::vector<std::vector<std::pair<int, Coeffs10>>>;
ElementIndex element_index(const SplineFamily& family);

double eval_function(const PSRefinement& ps, const SplineFunction& f, Point p);
/// Nonzero values (function index, value) of all family members at p.
std::vector<std::pair<int, double>> eval_all(const SplineFamily& family, const ElementIndex& index,
                                             Point p);

/// Family whose function i is sum_j rows[i][j].second * base[rows[i][j].first].
SplineFamily combine_family(const SplineFamily& base,
                            const std::vector<std::vector<std::pair<int, double>>>& rows);

}  // namespace pss
