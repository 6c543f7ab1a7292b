#include "pss/extraction.hpp"

#include <algorithm>
#include <sstream>

#include "pss/error.hpp"

namespace pss {

SparseMatrix ExtractionMatrix::to_sparse() const {
  std::vector<Eigen::Triplet<double>> trip;
  for (int r = 0; r < rows; ++r) {
    for (const auto& [c, v] : entries[r]) {
      trip.emplace_back(r, c, boost::rational_cast<double>(v));
    }
  }
  SparseMatrix m(rows, cols);
  m.setFromTriplets(trip.begin(), trip.end());
  return m;
}

std::vector<Rational> ExtractionMatrix::column_sums() const {
  std::vector<Rational> s(cols, Rational(0));
  for (const auto& row : entries) {
    for (const auto& [c, v] : row) s[c] += v;
  }
  return s;
}

std::string ExtractionMatrix::to_triplets() const {
  std::ostringstream out;
  for (int r = 0; r < rows; ++r) {
    for (const auto& [c, v] : entries[r]) {
      out << r << ' ' << c << ' ' << v.numerator();
      if (v.denominator() != 1) out << '/' << v.denominator();
      out << '\n';
    }
  }
  return out.str();
}

std::vector<PairEntry> build_xi1(const Triangulation& tri) {
  std::vector<PairEntry> xi1;
  xi1.reserve(2 * static_cast<std::size_t>(tri.n_edges()));
  for (int e = 0; e < tri.n_edges(); ++e) {
    xi1.push_back({e, tri.edge_triangles[e][0]});
    xi1.push_back({e, tri.edge_triangles[e][1]});
  }
  return xi1;
}

ExtractionMatrix build_h1(const SplineBasis& basis, const std::vector<PairEntry>& xi1) {
  const Triangulation& tri = basis.ps().mesh;
  ExtractionMatrix h;
  h.rows = static_cast<int>(xi1.size());
  h.cols = basis.n_edge_functions();
  h.entries.resize(h.rows);
  std::vector<int> used(h.cols, 0);
  for (int row = 0; row < h.rows; ++row) {
    const auto [e, t] = xi1[row];
    for (int v : tri.edges.at(e)) {
      const int col = xi0_index(tri, v, e, t);
      const XiEntry& x = basis.xi0.at(col);
      if (x.vertex != v || x.edge != e || x.triangle != t) {
        throw ConstructionError("edge index map inconsistent at column " + std::to_string(col));
      }
      ++used[col];
      h.entries[row].emplace_back(col, Rational(1));
    }
  }
  for (int col = 0; col < h.cols; ++col) {
    if (used[col] != 1) {
      throw ConstructionError("edge function " + std::to_string(col) + " referenced " +
                              std::to_string(used[col]) + " times by the first reduction");
    }
  }
  return h;
}

std::vector<PairEntry> build_xi2(const Triangulation& tri, const std::vector<bool>& sym,
                                 const std::vector<PairEntry>& xi1) {
  std::vector<PairEntry> xi2;
  for (const PairEntry& p : xi1) {
    if (p.triangle == kNone || !sym[p.triangle]) xi2.push_back(p);
  }
  for (int t = 0; t < tri.n_triangles(); ++t) {
    if (sym[t]) xi2.push_back({kNone, t});
  }
  return xi2;
}

ExtractionMatrix build_h2(const Triangulation& tri, const std::vector<bool>& sym,
                          const std::vector<PairEntry>& xi2, const std::vector<PairEntry>& xi1) {
  const Rational one(1), two_thirds(2, 3), third(1, 3);
  auto col = [&](int e, int t) { return 2 * e + edge_slot(tri, e, t); };
  auto other = [&](int e, int t) {
    const auto& et = tri.edge_triangles[e];
    return et[0] == t ? et[1] : et[0];
  };
  ExtractionMatrix h;
  h.rows = static_cast<int>(xi2.size());
  h.cols = static_cast<int>(xi1.size());
  h.entries.resize(h.rows);
  for (int row = 0; row < h.rows; ++row) {
    const auto [e, t] = xi2[row];
    auto& r = h.entries[row];
    if (e == kNone) {
      for (int q = 0; q < 3; ++q) {
        const int edge = tri.triangle_edges[t][q];
        const int n = other(edge, t);
        if (n == kNone) {
          throw ConstructionError("symmetric triangle " + std::to_string(t) +
                                  " lacks a neighbor across edge " + std::to_string(edge));
        }
        r.emplace_back(col(edge, t), two_thirds);
        r.emplace_back(col(edge, n), third);
      }
    } else {
      const int n = t == kNone ? kNone : other(e, t);
      if (n != kNone && sym[n]) {
        r.emplace_back(col(e, t), two_thirds);
        r.emplace_back(col(e, n), third);
      } else {
        r.emplace_back(col(e, t), one);
      }
    }
    std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  }
  return h;
}

ExtractionMatrix extend(const ExtractionMatrix& h, int m) {
  ExtractionMatrix x;
  x.rows = m + h.rows;
  x.cols = m + h.cols;
  x.entries.resize(x.rows);
  for (int i = 0; i < m; ++i) x.entries[i].emplace_back(i, Rational(1));
  for (int r = 0; r < h.rows; ++r) {
    for (const auto& [c, v] : h.entries[r]) x.entries[m + r].emplace_back(m + c, v);
  }
  return x;
}

SparseMatrix congruence(const SparseMatrix& h, const SparseMatrix& m) {
  if (h.cols() != m.rows() || m.rows() != m.cols()) {
    throw InvalidArgument("congruence dimension mismatch");
  }
  SparseMatrix hm = h * m;
  SparseMatrix out = hm * SparseMatrix(h.transpose());
  return out;
}

Eigen::VectorXd apply(const SparseMatrix& h, const Eigen::VectorXd& v) {
  if (h.cols() != v.size()) throw InvalidArgument("extraction dimension mismatch");
  return h * v;
}

int SplineSpaces::dim(int r) const { return family(r).size(); }

const SplineFamily& SplineSpaces::family(int r) const {
  switch (r) {
    case 0:
      return basis.family;
    case 1:
      return s1;
    case 2:
      return s2;
    default:
      throw InvalidArgument("space index must be 0, 1 or 2");
  }
}

Eigen::VectorXd SplineSpaces::to_s0(int r, const Eigen::VectorXd& c) const {
  if (c.size() != dim(r)) throw InvalidArgument("coefficient vector does not match the space");
  Eigen::VectorXd x = c;
  if (r >= 2) x = h2_ext.transpose() * x;
  if (r >= 1) x = h1_ext.transpose() * x;
  return x;
}

namespace {

std::vector<std::vector<std::pair<int, double>>> rows_of(const SparseMatrix& h) {
  std::vector<std::vector<std::pair<int, double>>> rows(h.rows());
  for (int r = 0; r < h.outerSize(); ++r) {
    for (SparseMatrix::InnerIterator it(h, r); it; ++it) rows[r].emplace_back(it.col(), it.value());
  }
  return rows;
}

}  // namespace

SplineSpaces build_spaces(std::shared_ptr<const PSRefinement> ps) {
  SplineSpaces s;
  s.basis = build_basis(ps);
  const Triangulation& tri = ps->mesh;
  const int m = s.basis.n_vertex_functions();
  s.xi1 = build_xi1(tri);
  s.h1 = build_h1(s.basis, s.xi1);
  s.xi2 = build_xi2(tri, ps->sym, s.xi1);
  s.h2 = build_h2(tri, ps->sym, s.xi2, s.xi1);
  s.h1_ext = extend(s.h1, m).to_sparse();
  s.h2_ext = extend(s.h2, m).to_sparse();
  s.s1 = combine_family(s.basis.family, rows_of(s.h1_ext));
  s.s2 = combine_family(s.s1, rows_of(s.h2_ext));
  return s;
}

}  // namespace pss

namespace pss {

DimensionFormulas dimension_formulas(const Triangulation& macro, int level, int n_sym) {
  const long long l = level, nv = macro.n_vertices(), ne = macro.n_edges(),
                  nt = macro.n_triangles();
  const EntityCounts c = predicted_counts(macro, level);
  DimensionFormulas d;
  d.s0 = 3LL * c.vertices + 4LL * c.edges;
  d.s1 = 3LL * c.vertices + 2LL * c.edges;
  d.s2 = 3 * nv + (5 * l - 3) * ne + 3 * (3 * l * l - 5 * l + 2) / 2 * nt - 2LL * n_sym;
  d.clough_tocher = 3LL * c.vertices + c.edges;
  return d;
}

}  // namespace pss
