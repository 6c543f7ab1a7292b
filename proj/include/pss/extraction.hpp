#pragma once

#include <Eigen/Sparse>
#include <boost/rational.hpp>
#include <memory>
#include <string>
#include <vector>

#include "pss/basis.hpp"

namespace pss {

using Rational = boost::rational<long long>;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Sparse matrix with exact rational entries, stored by rows (columns ascending).
struct ExtractionMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<std::pair<int, Rational>>> entries;

  SparseMatrix to_sparse() const;
  std::vector<Rational> column_sums() const;
  /// One `row col value` line per nonzero, values as exact fractions.
  std::string to_triplets() const;
};

/// (edge, triangle) pair; triangle kNone marks the empty triangle of a boundary edge,
/// edge kNone marks the (empty edge, symmetric triangle) entries of the second reduction.
struct PairEntry {
  int edge = kNone;
  int triangle = kNone;
  friend bool operator==(const PairEntry&, const PairEntry&) = default;
};

/// First-reduction index set; entry (e, t) sits at position 2e + edge_slot(e, t).
std::vector<PairEntry> build_xi1(const Triangulation& tri);
ExtractionMatrix build_h1(const SplineBasis& basis, const std::vector<PairEntry>& xi1);

/// Second-reduction index set: the entries of xi1 whose triangle is not symmetric,
/// in xi1 order, followed by one entry per symmetric triangle.
std::vector<PairEntry> build_xi2(const Triangulation& tri, const std::vector<bool>& sym,
                                 const std::vector<PairEntry>& xi1);
ExtractionMatrix build_h2(const Triangulation& tri, const std::vector<bool>& sym,
                          const std::vector<PairEntry>& xi2, const std::vector<PairEntry>& xi1);

/// blockdiag(I_m, H).
ExtractionMatrix extend(const ExtractionMatrix& h, int m);

/// H M H^T and H v.
SparseMatrix congruence(const SparseMatrix& h, const SparseMatrix& m);
Eigen::VectorXd apply(const SparseMatrix& h, const Eigen::VectorXd& v);

/// The three nested spaces on one PS refinement. Space r has basis ordering
/// (3 n_v vertex functions, then the reduced edge functions).
struct SplineSpaces {
  SplineBasis basis;
  std::vector<PairEntry> xi1, xi2;
  ExtractionMatrix h1, h2;
  SparseMatrix h1_ext, h2_ext;
  /// Reduced bases in BB form, with their own boundary classification.
  SplineFamily s1, s2;

  const PSRefinement& ps() const { return basis.ps(); }
  int dim(int r) const;
  const SplineFamily& family(int r) const;
  /// Coefficients in S_0 of the spline with coefficients c in S_r.
  Eigen::VectorXd to_s0(int r, const Eigen::VectorXd& c) const;
};

SplineSpaces build_spaces(std::shared_ptr<const PSRefinement> ps);

/// Closed-form dimensions on the level-l refinement of a macro mesh, in terms of the
/// macro entity counts; n_sym is the symmetric-triangle count of the refined mesh.
struct DimensionFormulas {
  long long s0 = 0, s1 = 0, s2 = 0;
  long long clough_tocher = 0;  // C1 cubic Clough-Tocher space, for comparison
};
DimensionFormulas dimension_formulas(const Triangulation& macro, int level, int n_sym);

}  // namespace pss
