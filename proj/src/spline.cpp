#include "pss/spline.hpp"

#include <algorithm>
#include <cmath>

#include "pss/error.hpp"

namespace pss {

namespace {

constexpr std::array<int, 4> kTraceIdx{0, 1, 3, 6};   // k = 0
constexpr std::array<int, 3> kFirstRowIdx{2, 4, 7};   // k = 1

}  // namespace

void SplineFunction::add(int micro, const Coeffs10& c, double weight) {
  auto it = std::lower_bound(patches.begin(), patches.end(), micro,
                             [](const auto& p, int m) { return p.first < m; });
  if (it == patches.end() || it->first != micro) {
    Coeffs10 z{};
    it = patches.insert(it, {micro, z});
  }
  for (int n = 0; n < 10; ++n) it->second[n] += weight * c[n];
}

const Coeffs10* SplineFunction::find(int micro) const {
  auto it = std::lower_bound(patches.begin(), patches.end(), micro,
                             [](const auto& p, int m) { return p.first < m; });
  return it != patches.end() && it->first == micro ? &it->second : nullptr;
}

double SplineFunction::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [id, c] : patches) {
    for (double v : c) m = std::max(m, std::abs(v));
  }
  return m;
}

unsigned boundary_flags(const PSRefinement& ps, const SplineFunction& f, double tol) {
  const double scaled = tol * std::max(1.0, f.max_abs_coeff());
  bool trace = true, normal = true;
  for (const auto& [id, c] : f.patches) {
    if (!ps.mesh.edge_boundary[ps.micro[id].edge]) continue;
    for (int n : kTraceIdx) trace = trace && std::abs(c[n]) <= scaled;
    for (int n : kFirstRowIdx) normal = normal && std::abs(c[n]) <= scaled;
  }
  unsigned flags = 0;
  if (trace) flags |= kZeroTrace;
  if (trace && normal) flags |= kZeroNormalDeriv;
  return flags;
}

void classify_boundary(SplineFamily& family, double tol) {
  family.boundary.resize(family.functions.size());
  for (std::size_t i = 0; i < family.functions.size(); ++i) {
    family.boundary[i] = boundary_flags(*family.ps, family.functions[i], tol);
  }
}

BBPatch patch_of(const PSRefinement& ps, const SplineFunction& f, int micro) {
  BBPatch p{ps.micro_triangle(micro), 3, std::vector<double>(10, 0.0)};
  if (const Coeffs10* c = f.find(micro)) p.coeffs.assign(c->begin(), c->end());
  return p;
}

MicroLocation locate(const PSRefinement& ps, Point p, double tol) {
  const Triangulation& tri = ps.mesh;
  for (int t = 0; t < tri.n_triangles(); ++t) {
    const Barycentric lt = barycentric(tri.triangle(t), p);
    if (std::min({lt[0], lt[1], lt[2]}) < -tol) continue;
    MicroLocation best;
    double best_min = -1e300;
    for (int j = 0; j < 6; ++j) {
      const Barycentric l = barycentric(ps.micro_triangle(6 * t + j), p);
      const double m = std::min({l[0], l[1], l[2]});
      if (m > best_min) {
        best_min = m;
        best = {6 * t + j, l};
      }
    }
    return best;
  }
  throw InvalidArgument("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                        ") lies outside the domain");
}

ElementIndex element_index(const SplineFamily& family) {
  ElementIndex index(family.ps->n_micro());
  for (int i = 0; i < family.size(); ++i) {
    for (const auto& [id, c] : family.functions[i].patches) index[id].emplace_back(i, c);
  }
  return index;
}

namespace {

double eval_coeffs(const Coeffs10& c, const Barycentric& l) {
  double v = 0.0;
  for (int n = 0; n < 10; ++n) {
    const auto a = bb_multi_index(3, n);
    double b = 1.0;
    for (int m = 0; m < 3; ++m) b *= std::pow(l[m], a[m]);
    static constexpr double kMult[10] = {1, 3, 3, 3, 6, 3, 1, 3, 3, 1};
    v += kMult[n] * b * c[n];
  }
  return v;
}

}  // namespace

double eval_function(const PSRefinement& ps, const SplineFunction& f, Point p) {
  const MicroLocation loc = locate(ps, p);
  const Coeffs10* c = f.find(loc.micro);
  return c ? eval_coeffs(*c, loc.l) : 0.0;
}

std::vector<std::pair<int, double>> eval_all(const SplineFamily& family, const ElementIndex& index,
                                             Point p) {
  const MicroLocation loc = locate(*family.ps, p);
  std::vector<std::pair<int, double>> out;
  for (const auto& [i, c] : index[loc.micro]) out.emplace_back(i, eval_coeffs(c, loc.l));
  return out;
}

SplineFamily combine_family(const SplineFamily& base,
                            const std::vector<std::vector<std::pair<int, double>>>& rows) {
  SplineFamily out;
  out.ps = base.ps;
  out.functions.resize(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& [j, w] : rows[i]) {
      if (j < 0 || j >= base.size()) throw InvalidArgument("combination index out of range");
      for (const auto& [id, c] : base.functions[j].patches) out.functions[i].add(id, c, w);
    }
  }
  classify_boundary(out);
  return out;
}

}  // namespace pss
