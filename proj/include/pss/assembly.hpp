#pragma once

#include <functional>
#include <vector>

#include "pss/extraction.hpp"

namespace pss {

/// One product term D_x^alpha D_y^(gamma-alpha) s_i * D_x^beta D_y^(gamma-beta) s_j.
struct ProductTerm {
  int alpha = 0;
  int beta = 0;
  int gamma = 0;
};

inline const std::vector<ProductTerm> kMassTerms{{0, 0, 0}};
inline const std::vector<ProductTerm> kLaplaceTerms{{1, 1, 1}, {0, 0, 1}};
inline const std::vector<ProductTerm> kBilaplaceTerms{{2, 2, 2}, {2, 0, 2}, {0, 2, 2}, {0, 0, 2}};

inline constexpr int kAssemblyDegree = 6;
inline constexpr int kNormDegree = 12;

using ScalarField = std::function<double(Point)>;

/// Sum of the integrated product terms over the functions of a family.
SparseMatrix assemble_family(const SplineFamily& family, const std::vector<ProductTerm>& terms,
                             int quad_degree = kAssemblyDegree);
Eigen::VectorXd assemble_family_load(const SplineFamily& family, const ScalarField& f,
                                     int quad_degree = kNormDegree);

/// Matrix of space r: assembled once on S_0, then pushed through the extraction chain.
SparseMatrix assemble_m(const SplineSpaces& spaces, int r, const std::vector<ProductTerm>& terms,
                        int quad_degree = kAssemblyDegree);
Eigen::VectorXd assemble_load(const SplineSpaces& spaces, int r, const ScalarField& f,
                              int quad_degree = kNormDegree);

struct RestrictedSystem {
  SparseMatrix matrix;
  Eigen::VectorXd load;
  std::vector<int> kept;  // full index of each retained function
  int full_size = 0;
};

/// Keeps the functions whose boundary flags contain all `required` bits.
RestrictedSystem restrict_system(const SparseMatrix& m, const Eigen::VectorXd& load,
                                 const std::vector<unsigned>& flags, unsigned required);
Eigen::VectorXd scatter(const RestrictedSystem& sys, const Eigen::VectorXd& x);

/// Index 0..5 of D_x^alpha D_y^(gamma-alpha) in the Bernstein3 row order.
int derivative_row(int alpha, int gamma);

}  // namespace pss
