#include "pss/ps_refine.hpp"

#include <algorithm>

#include "json.hpp"
#include "pss/error.hpp"

namespace pss {

namespace {

constexpr double kEndpointTol = 1e-10;

// Solves p + s (q - p) = a + u (b - a).
bool intersect(Point p, Point q, Point a, Point b, double& s, double& u) {
  const Point d1 = q - p, d2 = b - a;
  const double den = cross(d1, d2);
  if (std::abs(den) <= 1e-14 * norm(d1) * norm(d2)) return false;
  s = cross(a - p, d2) / den;
  u = cross(a - p, d1) / den;
  return true;
}

}  // namespace

int PSRefinement::n_sym() const { return static_cast<int>(std::count(sym.begin(), sym.end(), true)); }

bool split_segment_crosses_edge(const Triangulation& tri, const std::vector<Point>& split, int e,
                                double* theta) {
  const auto& et = tri.edge_triangles[e];
  if (et[1] == kNone) return true;
  double s = 0.0, u = 0.0;
  if (!intersect(split[et[0]], split[et[1]], tri.vertices[tri.edges[e][0]],
                 tri.vertices[tri.edges[e][1]], s, u)) {
    return false;
  }
  if (theta) *theta = s;
  return s > 0.0 && s < 1.0 && u > kEndpointTol && u < 1.0 - kEndpointTol;
}

SplitChoice choose_split_points(const Triangulation& tri, SplitStrategy strategy) {
  const int nt = tri.n_triangles();
  if (static_cast<int>(tri.class_r.size()) != nt) {
    throw InvalidArgument("triangle classification missing");
  }
  SplitChoice c;
  c.points.resize(nt);
  c.kinds.resize(nt);
  for (int t = 0; t < nt; ++t) {
    const bool use_incenter = strategy == SplitStrategy::IncenterOnT2 && tri.class_r[t] == 2;
    c.points[t] = use_incenter ? incenter(tri.triangle(t)) : centroid(tri.triangle(t));
    c.kinds[t] = use_incenter ? SplitKind::Incenter : SplitKind::Barycenter;
  }
  auto demote = [&](int t) {
    if (t == kNone || tri.class_r[t] != 2 || c.kinds[t] == SplitKind::Incenter) return false;
    c.kinds[t] = SplitKind::Incenter;
    c.points[t] = incenter(tri.triangle(t));
    return true;
  };
  // Demotion only ever moves a triangle from barycenter to incenter, so the loop terminates.
  for (bool changed = true; changed;) {
    changed = false;
    for (int e = 0; e < tri.n_edges(); ++e) {
      if (split_segment_crosses_edge(tri, c.points, e)) continue;
      const bool a = demote(tri.edge_triangles[e][0]);
      const bool b = demote(tri.edge_triangles[e][1]);
      changed = changed || a || b;
    }
  }
  for (int e = 0; e < tri.n_edges(); ++e) {
    if (!split_segment_crosses_edge(tri, c.points, e)) {
      throw GeometryError("split points of the triangles at edge " + std::to_string(e) +
                          " do not define a valid edge split point");
    }
  }
  return c;
}

PSRefinement ps6_split(Triangulation tri, const SplitChoice& splits) {
  PSRefinement ps;
  const int nv = tri.n_vertices(), ne = tri.n_edges(), nt = tri.n_triangles();
  if (static_cast<int>(splits.points.size()) != nt || static_cast<int>(splits.kinds.size()) != nt) {
    throw InvalidArgument("split point list does not match the triangulation");
  }
  ps.split_point = splits.points;
  ps.split_kind = splits.kinds;
  ps.edge_point.resize(ne);
  ps.edge_theta.assign(ne, 0.5);
  for (int e = 0; e < ne; ++e) {
    const Point a = tri.vertices[tri.edges[e][0]], b = tri.vertices[tri.edges[e][1]];
    if (tri.edge_boundary[e]) {
      ps.edge_point[e] = 0.5 * (a + b);
      continue;
    }
    const auto& et = tri.edge_triangles[e];
    double s = 0.0, u = 0.0;
    if (!intersect(ps.split_point[et[0]], ps.split_point[et[1]], a, b, s, u) || s <= 0.0 ||
        s >= 1.0 || u <= kEndpointTol || u >= 1.0 - kEndpointTol) {
      throw GeometryError("degenerate edge split point on edge " + std::to_string(e) + " (" +
                          std::to_string(tri.edges[e][0]) + "," + std::to_string(tri.edges[e][1]) +
                          ")");
    }
    ps.edge_theta[e] = s;
    ps.edge_point[e] = a + u * (b - a);
  }
  ps.micro_vertices = tri.vertices;
  ps.micro_vertices.insert(ps.micro_vertices.end(), ps.edge_point.begin(), ps.edge_point.end());
  ps.micro_vertices.insert(ps.micro_vertices.end(), ps.split_point.begin(), ps.split_point.end());
  ps.micro.reserve(6 * static_cast<std::size_t>(nt));
  for (int t = 0; t < nt; ++t) {
    for (int q = 0; q < 3; ++q) {
      const int a = tri.triangles[t][q], b = tri.triangles[t][(q + 1) % 3];
      const int e = tri.triangle_edges[t][q];
      ps.micro.push_back({{a, nv + e, nv + ne + t}, a, b, e, t});
      ps.micro.push_back({{b, nv + e, nv + ne + t}, b, a, e, t});
    }
  }
  ps.mesh = std::move(tri);
  ps.sym.assign(nt, false);
  return ps;
}

std::vector<bool> detect_symmetric(const PSRefinement& ps, double tol) {
  const Triangulation& tri = ps.mesh;
  std::vector<bool> flags(tri.n_triangles(), false);
  auto barycentric_split = [&](int t, double abs_tol) {
    return ps.split_kind[t] == SplitKind::Barycenter &&
           distance(ps.split_point[t], centroid(tri.triangle(t))) <= abs_tol;
  };
  for (int t = 0; t < tri.n_triangles(); ++t) {
    const auto& v = tri.triangles[t];
    const Triangle tt = tri.triangle(t);
    const double h = std::max({distance(tt[0], tt[1]), distance(tt[1], tt[2]), distance(tt[2], tt[0])});
    const double abs_tol = tol * h;
    bool ok = barycentric_split(t, abs_tol);
    for (int q = 0; q < 3 && ok; ++q) {
      const int n = tri.triangle_neighbors[t][q];
      if (n == kNone) {
        ok = false;
        break;
      }
      const int a = v[q], b = v[(q + 1) % 3], c = v[(q + 2) % 3];
      const Point reflected = tri.vertices[a] + tri.vertices[b] - tri.vertices[c];
      int third = kNone;
      for (int w : tri.triangles[n]) {
        if (w != a && w != b) third = w;
      }
      ok = distance(tri.vertices[third], reflected) <= abs_tol && barycentric_split(n, abs_tol);
    }
    flags[t] = ok;
  }
  return flags;
}

PSRefinement build_ps(const Triangulation& tri, SplitStrategy strategy, double sym_tol) {
  PSRefinement ps = ps6_split(tri, choose_split_points(tri, strategy));
  ps.sym = detect_symmetric(ps, sym_tol);
  return ps;
}

std::string ps_to_json(const PSRefinement& ps) {
  nlohmann::json doc;
  doc["vertices"] = nlohmann::json::array();
  for (const Point& p : ps.micro_vertices) doc["vertices"].push_back({p.x, p.y});
  doc["triangles"] = nlohmann::json::array();
  for (const MicroTriangle& m : ps.micro) {
    auto v = m.vertices;
    if (signed_area(ps.micro_vertices[v[0]], ps.micro_vertices[v[1]], ps.micro_vertices[v[2]]) < 0) {
      std::swap(v[1], v[2]);
    }
    doc["triangles"].push_back(v);
  }
  doc["kinds"] = nlohmann::json::array();
  for (SplitKind k : ps.split_kind) {
    doc["kinds"].push_back(k == SplitKind::Barycenter ? "barycenter" : "incenter");
  }
  return doc.dump();
}

}  // namespace pss
