#include "pss/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "pss/error.hpp"

namespace pss {

std::vector<MicroEdge> interior_micro_edges(const PSRefinement& ps) {
  std::map<std::pair<int, int>, std::vector<int>> sides;
  for (int id = 0; id < ps.n_micro(); ++id) {
    const auto& v = ps.micro[id].vertices;
    for (int k = 0; k < 3; ++k) {
      const int a = v[k], b = v[(k + 1) % 3];
      sides[{std::min(a, b), std::max(a, b)}].push_back(id);
    }
  }
  const int nv = ps.mesh.n_vertices(), ne = ps.mesh.n_edges();
  std::vector<MicroEdge> out;
  for (const auto& [key, ids] : sides) {
    if (ids.size() != 2) continue;
    MicroEdge e;
    e.a = ids[0];
    e.b = ids[1];
    e.p = ps.micro_vertices[key.first];
    e.q = ps.micro_vertices[key.second];
    if (key.second >= nv + ne) {
      e.kind = key.first >= nv ? MicroEdge::SplitToEdgePoint : MicroEdge::SplitToVertex;
    } else {
      e.kind = MicroEdge::MacroEdge;
    }
    out.push_back(e);
  }
  return out;
}

std::vector<Point> sample_domain(const Triangulation& tri, int n, unsigned seed) {
  std::vector<double> areas;
  for (int t = 0; t < tri.n_triangles(); ++t) areas.push_back(std::abs(signed_area(tri.triangle(t))));
  std::mt19937 rng(seed);
  std::discrete_distribution<int> pick(areas.begin(), areas.end());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Point> pts;
  for (int i = 0; i < n; ++i) {
    const Triangle t = tri.triangle(pick(rng));
    double s = unit(rng), u = unit(rng);
    if (s + u > 1.0) {
      s = 1.0 - s;
      u = 1.0 - u;
    }
    pts.push_back(t[0] + s * (t[1] - t[0]) + u * (t[2] - t[0]));
  }
  return pts;
}

double point_jump(const BBPatch& fa, const BBPatch& fb, Point p, int order) {
  double scale = 1.0;
  for (double c : fa.coeffs) scale = std::max(scale, std::abs(c));
  for (double c : fb.coeffs) scale = std::max(scale, std::abs(c));
  double jump = 0.0;
  for (int dx = order; dx >= 0; --dx) {
    jump = std::max(jump, std::abs(bb_eval(bb_derivative(fa, dx, order - dx), p) -
                                   bb_eval(bb_derivative(fb, dx, order - dx), p)));
  }
  return jump / scale;
}

bool PropertyReport::pass(std::string* failed) const {
  auto fail = [&](const char* name) {
    if (failed) *failed = name;
    return false;
  };
  if (!(pu_error <= 1e-12)) return fail("partition of unity");
  if (!(min_value >= -1e-10)) return fail("nonnegativity");
  if (!(c1 <= 1e-10)) return fail("C1 smoothness");
  if (!(c2_split_point <= 1e-9)) return fail("C2 at split points");
  if (!(c2_split_edges <= 1e-9)) return fail("C2 across split edges");
  if (!(c2_sym <= 1e-9)) return fail("C2 in symmetric triangles");
  return true;
}

PropertyReport check_properties(const SplineSpaces& spaces, int r, int samples, unsigned seed) {
  const SplineFamily& family = spaces.family(r);
  const PSRefinement& ps = spaces.ps();
  const int m = spaces.basis.n_vertex_functions();
  const ElementIndex index = element_index(family);
  PropertyReport rep;
  rep.space = r;
  rep.functions = family.size();
  rep.min_value = 1e300;
  rep.min_coeff = 1e300;

  for (const Point& p : sample_domain(ps.mesh, samples, seed)) {
    double sum = 0.0;
    for (const auto& [i, v] : eval_all(family, index, p)) {
      sum += v;
      rep.min_value = std::min(rep.min_value, v);
    }
    rep.pu_error = std::max(rep.pu_error, std::abs(sum - 1.0));
  }
  // Lattice points of every micro-triangle.
  for (int id = 0; id < ps.n_micro(); ++id) {
    const Triangle t = ps.micro_triangle(id);
    for (const auto& [i, c] : index[id]) {
      for (double v : c) rep.min_coeff = std::min(rep.min_coeff, v);
      BBPatch patch{t, 3, std::vector<double>(c.begin(), c.end())};
      for (int a = 0; a <= 4; ++a) {
        for (int b = 0; a + b <= 4; ++b) {
          rep.min_value = std::min(rep.min_value, bb_eval(patch, from_barycentric(t, {a / 4.0, b / 4.0, (4 - a - b) / 4.0})));
        }
      }
    }
  }

  auto c2_member = [&](int i) { return r > 0 || i < m; };
  auto sym_member = [&](int i) { return r == 2 || i < m; };
  for (const MicroEdge& e : interior_micro_edges(ps)) {
    std::set<int> ids;
    for (const auto& [i, c] : index[e.a]) ids.insert(i);
    for (const auto& [i, c] : index[e.b]) ids.insert(i);
    const int t = ps.micro[e.a].triangle;
    const bool inside = e.kind != MicroEdge::MacroEdge;
    for (int i : ids) {
      const SplineFunction& f = family.functions[i];
      const BBPatch pa = patch_of(ps, f, e.a), pb = patch_of(ps, f, e.b);
      rep.c1 = std::max(rep.c1, smoothness_residual(pa, pb, e.p, e.q, 1));
      if (!inside) continue;
      if (c2_member(i)) {
        rep.c2_split_point = std::max(rep.c2_split_point, point_jump(pa, pb, e.q, 2));
        if (e.kind == MicroEdge::SplitToEdgePoint) {
          rep.c2_split_edges = std::max(rep.c2_split_edges, smoothness_residual(pa, pb, e.p, e.q, 2));
        }
      }
      if (ps.sym[t] && sym_member(i)) {
        rep.c2_sym = std::max(rep.c2_sym, smoothness_residual(pa, pb, e.p, e.q, 2));
      }
    }
  }
  return rep;
}

}  // namespace pss
