#include "pss/assembly.hpp"

#include <cmath>

#include "pss/error.hpp"
#include "pss/parallel.hpp"
#include "pss/quadrature.hpp"

namespace pss {

int derivative_row(int alpha, int gamma) {
  if (gamma < 0 || gamma > 2 || alpha < 0 || alpha > gamma) {
    throw InvalidArgument("invalid derivative orders");
  }
  static constexpr int rows[3][3] = {{0, -1, -1}, {2, 1, -1}, {5, 4, 3}};
  return rows[gamma][alpha];
}

namespace {

struct MicroQuadrature {
  std::vector<Bernstein3> b;
  std::vector<Point> x;
  std::vector<double> w;  // includes the area
};

MicroQuadrature micro_quadrature(const Triangle& t, const QuadratureRule& rule) {
  MicroQuadrature q;
  const double area = std::abs(signed_area(t));
  const auto grads = barycentric_gradients(t);
  q.b.resize(rule.nodes.size());
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    bernstein3(rule.nodes[i], grads, q.b[i]);
    q.x.push_back(from_barycentric(t, rule.nodes[i]));
    q.w.push_back(area * rule.weights[i]);
  }
  return q;
}

}  // namespace

SparseMatrix assemble_family(const SplineFamily& family, const std::vector<ProductTerm>& terms,
                             int quad_degree) {
  for (const ProductTerm& t : terms) {
    derivative_row(t.alpha, t.gamma);
    derivative_row(t.beta, t.gamma);
  }
  const PSRefinement& ps = *family.ps;
  const QuadratureRule& rule = quadrature_rule(quad_degree);
  const ElementIndex index = element_index(family);
  const int nt = ps.mesh.n_triangles();
  // Triplets are staged per triangle and concatenated in triangle order, so the
  // result does not depend on the thread count.
  std::vector<std::vector<Eigen::Triplet<double>>> staged(nt);
  parallel_for(nt, [&](int t) {
    for (int j = 0; j < 6; ++j) {
      const int id = 6 * t + j;
      const auto& local = index[id];
      if (local.empty()) continue;
      const MicroQuadrature q = micro_quadrature(ps.micro_triangle(id), rule);
      Eigen::Matrix<double, 10, 10> k = Eigen::Matrix<double, 10, 10>::Zero();
      for (std::size_t p = 0; p < q.w.size(); ++p) {
        for (const ProductTerm& term : terms) {
          const auto& da = q.b[p][derivative_row(term.alpha, term.gamma)];
          const auto& db = q.b[p][derivative_row(term.beta, term.gamma)];
          for (int a = 0; a < 10; ++a) {
            for (int b = 0; b < 10; ++b) k(a, b) += q.w[p] * da[a] * db[b];
          }
        }
      }
      const int n = static_cast<int>(local.size());
      Eigen::MatrixXd e(n, 10);
      for (int i = 0; i < n; ++i) {
        for (int a = 0; a < 10; ++a) e(i, a) = local[i].second[a];
      }
      const Eigen::MatrixXd block = e * k * e.transpose();
      for (int i = 0; i < n; ++i) {
        for (int l = 0; l < n; ++l) staged[t].emplace_back(local[i].first, local[l].first, block(i, l));
      }
    }
  });
  std::vector<Eigen::Triplet<double>> all;
  for (auto& s : staged) all.insert(all.end(), s.begin(), s.end());
  SparseMatrix m(family.size(), family.size());
  m.setFromTriplets(all.begin(), all.end());
  return m;
}

Eigen::VectorXd assemble_family_load(const SplineFamily& family, const ScalarField& f,
                                     int quad_degree) {
  const PSRefinement& ps = *family.ps;
  const QuadratureRule& rule = quadrature_rule(quad_degree);
  const ElementIndex index = element_index(family);
  const int nt = ps.mesh.n_triangles();
  std::vector<std::vector<std::pair<int, double>>> staged(nt);
  parallel_for(nt, [&](int t) {
    for (int j = 0; j < 6; ++j) {
      const int id = 6 * t + j;
      const auto& local = index[id];
      if (local.empty()) continue;
      const MicroQuadrature q = micro_quadrature(ps.micro_triangle(id), rule);
      std::array<double, 10> moments{};
      for (std::size_t p = 0; p < q.w.size(); ++p) {
        const double fw = q.w[p] * f(q.x[p]);
        for (int a = 0; a < 10; ++a) moments[a] += fw * q.b[p][0][a];
      }
      for (const auto& [i, c] : local) {
        double s = 0.0;
        for (int a = 0; a < 10; ++a) s += c[a] * moments[a];
        staged[t].emplace_back(i, s);
      }
    }
  });
  Eigen::VectorXd load = Eigen::VectorXd::Zero(family.size());
  for (const auto& s : staged) {
    for (const auto& [i, v] : s) load(i) += v;
  }
  return load;
}

SparseMatrix assemble_m(const SplineSpaces& spaces, int r, const std::vector<ProductTerm>& terms,
                        int quad_degree) {
  if (r < 0 || r > 2) throw InvalidArgument("space index must be 0, 1 or 2");
  SparseMatrix m = assemble_family(spaces.basis.family, terms, quad_degree);
  if (r >= 1) m = congruence(spaces.h1_ext, m);
  if (r >= 2) m = congruence(spaces.h2_ext, m);
  return m;
}

Eigen::VectorXd assemble_load(const SplineSpaces& spaces, int r, const ScalarField& f,
                              int quad_degree) {
  if (r < 0 || r > 2) throw InvalidArgument("space index must be 0, 1 or 2");
  Eigen::VectorXd load = assemble_family_load(spaces.basis.family, f, quad_degree);
  if (r >= 1) load = apply(spaces.h1_ext, load);
  if (r >= 2) load = apply(spaces.h2_ext, load);
  return load;
}

RestrictedSystem restrict_system(const SparseMatrix& m, const Eigen::VectorXd& load,
                                 const std::vector<unsigned>& flags, unsigned required) {
  const int n = static_cast<int>(m.rows());
  if (m.cols() != n || load.size() != n || static_cast<int>(flags.size()) != n) {
    throw InvalidArgument("restriction dimension mismatch");
  }
  RestrictedSystem sys;
  sys.full_size = n;
  std::vector<int> position(n, -1);
  for (int i = 0; i < n; ++i) {
    if ((flags[i] & required) == required) {
      position[i] = static_cast<int>(sys.kept.size());
      sys.kept.push_back(i);
    }
  }
  if (sys.kept.empty()) throw InvalidArgument("no basis function satisfies the boundary conditions");
  const int k = static_cast<int>(sys.kept.size());
  std::vector<Eigen::Triplet<double>> trip;
  for (int r = 0; r < n; ++r) {
    if (position[r] < 0) continue;
    for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
      if (position[it.col()] >= 0) trip.emplace_back(position[r], position[it.col()], it.value());
    }
  }
  sys.matrix.resize(k, k);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.load.resize(k);
  for (int i = 0; i < k; ++i) sys.load(i) = load(sys.kept[i]);
  return sys;
}

Eigen::VectorXd scatter(const RestrictedSystem& sys, const Eigen::VectorXd& x) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(sys.full_size);
  for (std::size_t i = 0; i < sys.kept.size(); ++i) full(sys.kept[i]) = x(static_cast<Eigen::Index>(i));
  return full;
}

}  // namespace pss
