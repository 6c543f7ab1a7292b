#include "pss/mesh.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "pss/error.hpp"

namespace pss {

namespace {

using json = nlohmann::json;

std::string edge_name(int a, int b) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

void check_duplicates(const std::vector<Point>& v) {
  if (v.empty()) return;
  double xmin = v[0].x, xmax = v[0].x, ymin = v[0].y, ymax = v[0].y;
  for (const Point& p : v) {
    xmin = std::min(xmin, p.x);
    xmax = std::max(xmax, p.x);
    ymin = std::min(ymin, p.y);
    ymax = std::max(ymax, p.y);
  }
  const double tol = 1e-12 * std::hypot(xmax - xmin, ymax - ymin);
  std::vector<int> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return v[a].x < v[b].x; });
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (v[order[j]].x - v[order[i]].x > tol) break;
      if (distance(v[order[i]], v[order[j]]) <= tol) {
        throw MeshError("duplicate vertices " + std::to_string(order[i]) + " and " +
                        std::to_string(order[j]));
      }
    }
  }
}

}  // namespace

int Triangulation::n_boundary_edges() const {
  return static_cast<int>(std::count(edge_boundary.begin(), edge_boundary.end(), true));
}

EntityCounts Triangulation::counts() const {
  return {n_vertices(), n_edges(), n_boundary_edges(), n_triangles()};
}

int Triangulation::find_edge(int a, int b) const {
  const std::array<int, 2> key{std::min(a, b), std::max(a, b)};
  auto it = std::lower_bound(edges.begin(), edges.end(), key);
  if (it == edges.end() || *it != key) return kNone;
  return static_cast<int>(it - edges.begin());
}

int Triangulation::local_edge(int t, int e) const {
  for (int q = 0; q < 3; ++q) {
    if (triangle_edges[t][q] == e) return q;
  }
  return kNone;
}

double Triangulation::max_edge_length() const {
  double h = 0.0;
  for (const auto& e : edges) h = std::max(h, distance(vertices[e[0]], vertices[e[1]]));
  return h;
}

Triangulation build_triangulation(std::vector<Point> vertices,
                                  std::vector<std::array<int, 3>> triangles) {
  Triangulation tri;
  const int nv = static_cast<int>(vertices.size());
  if (triangles.empty()) throw MeshError("mesh has no triangles");
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    auto& tv = triangles[t];
    for (int i : tv) {
      if (i < 0 || i >= nv) {
        throw MeshError("triangle " + std::to_string(t) + " references vertex " +
                        std::to_string(i) + " out of range");
      }
    }
    if (tv[0] == tv[1] || tv[1] == tv[2] || tv[0] == tv[2]) {
      throw MeshError("triangle " + std::to_string(t) + " repeats a vertex");
    }
    const Point a = vertices[tv[0]], b = vertices[tv[1]], c = vertices[tv[2]];
    const double area = signed_area(a, b, c);
    const double scale = std::max({distance(a, b), distance(b, c), distance(c, a)});
    if (std::abs(area) <= 1e-14 * scale * scale) {
      throw MeshError("triangle " + std::to_string(t) + " has zero area");
    }
    if (area < 0.0) std::swap(tv[1], tv[2]);
  }
  check_duplicates(vertices);

  std::map<std::array<int, 2>, std::vector<int>> edge_map;
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    for (int q = 0; q < 3; ++q) {
      const int a = triangles[t][q], b = triangles[t][(q + 1) % 3];
      edge_map[{std::min(a, b), std::max(a, b)}].push_back(static_cast<int>(t));
    }
  }
  tri.vertices = std::move(vertices);
  tri.triangles = std::move(triangles);
  for (const auto& [key, ts] : edge_map) {
    if (ts.size() > 2) {
      throw MeshError("edge " + edge_name(key[0], key[1]) + " shared by more than two triangles");
    }
    if (ts.size() == 2) {
      // Consistent orientation: the two triangles traverse the edge in opposite directions.
      auto dir = [&](int t) {
        for (int q = 0; q < 3; ++q) {
          if (tri.triangles[t][q] == key[0] && tri.triangles[t][(q + 1) % 3] == key[1]) return 1;
        }
        return -1;
      };
      if (dir(ts[0]) == dir(ts[1])) {
        throw MeshError("triangles overlap across edge " + edge_name(key[0], key[1]));
      }
    }
    tri.edges.push_back(key);
    tri.edge_boundary.push_back(ts.size() == 1);
    tri.edge_triangles.push_back({ts[0], ts.size() == 2 ? ts[1] : kNone});
  }

  const int nt = tri.n_triangles();
  tri.triangle_edges.resize(nt);
  tri.triangle_neighbors.resize(nt);
  for (int t = 0; t < nt; ++t) {
    for (int q = 0; q < 3; ++q) {
      const int e = tri.find_edge(tri.triangles[t][q], tri.triangles[t][(q + 1) % 3]);
      tri.triangle_edges[t][q] = e;
      const auto& et = tri.edge_triangles[e];
      tri.triangle_neighbors[t][q] = et[0] == t ? et[1] : et[0];
    }
  }

  // Hanging vertices: a vertex in the relative interior of an edge it does not bound.
  for (std::size_t e = 0; e < tri.edges.size(); ++e) {
    const Point a = tri.vertices[tri.edges[e][0]], b = tri.vertices[tri.edges[e][1]];
    const double len = distance(a, b);
    const double tol = 1e-12 * len;
    for (int v = 0; v < tri.n_vertices(); ++v) {
      if (v == tri.edges[e][0] || v == tri.edges[e][1]) continue;
      const Point p = tri.vertices[v];
      if (std::min(distance(p, a), distance(p, b)) <= tol) continue;
      if (distance_to_segment(p, a, b) <= tol) {
        throw MeshError("non-conforming mesh: vertex " + std::to_string(v) +
                        " lies on the interior of edge " +
                        edge_name(tri.edges[e][0], tri.edges[e][1]));
      }
    }
  }

  std::vector<bool> used(tri.vertices.size(), false);
  for (const auto& t : tri.triangles) {
    for (int v : t) used[v] = true;
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw MeshError("mesh contains vertices not used by any triangle");
  }
  const long long euler = static_cast<long long>(tri.n_vertices()) - tri.n_edges() + nt;
  if (euler != 1) {
    throw MeshError("domain is not simply connected (n_v - n_e + n_t = " + std::to_string(euler) +
                    ")");
  }

  tri.macro_origin.resize(nt);
  std::iota(tri.macro_origin.begin(), tri.macro_origin.end(), 0);
  tri.class_r.assign(nt, 2);
  return tri;
}

Triangulation load_mesh(std::istream& in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("mesh JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("vertices") || !doc.contains("triangles")) {
    throw ParseError("mesh JSON must be an object with \"vertices\" and \"triangles\"");
  }
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;
  try {
    for (const auto& v : doc.at("vertices")) {
      if (!v.is_array() || v.size() != 2) throw ParseError("vertex must be [x, y]");
      vertices.push_back({v[0].get<double>(), v[1].get<double>()});
    }
    for (const auto& t : doc.at("triangles")) {
      if (!t.is_array() || t.size() != 3) throw ParseError("triangle must be [i, j, k]");
      triangles.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("mesh JSON: ") + e.what());
  }
  return build_triangulation(std::move(vertices), std::move(triangles));
}

Triangulation load_mesh_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file " + path.string());
  return load_mesh(in);
}

std::string mesh_to_json(const Triangulation& tri) {
  json doc;
  doc["vertices"] = json::array();
  for (const Point& p : tri.vertices) doc["vertices"].push_back({p.x, p.y});
  doc["triangles"] = tri.triangles;
  return doc.dump();
}

Triangulation uniform_refine(const Triangulation& macro, int level) {
  if (level < 1) throw InvalidArgument("refinement level must be positive");
  // Lattice points are keyed by their sorted (macro vertex, weight) expansion so
  // that points on shared macro edges coincide exactly.
  using Key = std::vector<std::pair<int, int>>;
  std::map<Key, int> index;
  std::vector<Point> vertices;
  auto vertex_id = [&](const std::array<int, 3>& mv, std::array<int, 3> w) {
    Key key;
    for (int m = 0; m < 3; ++m) {
      if (w[m] > 0) key.emplace_back(mv[m], w[m]);
    }
    std::sort(key.begin(), key.end());
    auto [it, inserted] = index.try_emplace(key, static_cast<int>(vertices.size()));
    if (inserted) {
      Point p;
      for (const auto& [v, wt] : key) p = p + static_cast<double>(wt) * macro.vertices[v];
      vertices.push_back(p / static_cast<double>(level));
    }
    return it->second;
  };
  for (int v = 0; v < macro.n_vertices(); ++v) {
    index[{{v, level}}] = v;
    vertices.push_back(macro.vertices[v]);
  }

  std::vector<std::array<int, 3>> triangles;
  std::vector<int> origin;
  for (int t = 0; t < macro.n_triangles(); ++t) {
    const auto& mv = macro.triangles[t];
    for (int i = 0; i < level; ++i) {
      for (int j = 0; i + j < level; ++j) {
        const int k = level - 1 - i - j;
        triangles.push_back({vertex_id(mv, {i + 1, j, k}), vertex_id(mv, {i, j + 1, k}),
                             vertex_id(mv, {i, j, k + 1})});
        origin.push_back(t);
      }
    }
    for (int i = 0; i + 1 < level; ++i) {
      for (int j = 0; i + j + 1 < level; ++j) {
        const int k = level - 2 - i - j;
        triangles.push_back({vertex_id(mv, {i, j + 1, k + 1}), vertex_id(mv, {i + 1, j, k + 1}),
                             vertex_id(mv, {i + 1, j + 1, k})});
        origin.push_back(t);
      }
    }
  }
  Triangulation refined = build_triangulation(std::move(vertices), std::move(triangles));
  refined.macro_origin = std::move(origin);
  refined.class_r = classify_triangles(refined, macro);
  return refined;
}

std::vector<int> classify_triangles(const Triangulation& refined, const Triangulation& macro) {
  if (static_cast<int>(refined.macro_origin.size()) != refined.n_triangles()) {
    throw InvalidArgument("refined triangulation lacks macro_origin");
  }
  std::vector<int> cls(refined.n_triangles(), 0);
  for (int t = 0; t < refined.n_triangles(); ++t) {
    const int origin = refined.macro_origin[t];
    if (origin < 0 || origin >= macro.n_triangles()) {
      throw InvalidArgument("triangle " + std::to_string(t) + " has no valid macro origin");
    }
    const Triangle mt = macro.triangle(origin);
    const double scale = std::sqrt(std::abs(signed_area(mt)));
    for (int v : refined.triangles[t]) {
      const Barycentric l = barycentric(mt, refined.vertices[v]);
      if (std::min({l[0], l[1], l[2]}) < -1e-9 * scale) {
        throw InvalidArgument("refined triangle " + std::to_string(t) +
                              " lies outside its macro triangle");
      }
    }
    int r = 0;
    for (const auto& e : macro.edges) {
      const Point a = macro.vertices[e[0]], b = macro.vertices[e[1]];
      const double tol = 1e-12 * distance(a, b);
      int count = 0;
      for (int v : refined.triangles[t]) {
        if (distance_to_segment(refined.vertices[v], a, b) <= tol) ++count;
      }
      r = std::max(r, count);
    }
    cls[t] = std::min(r, 2);
  }
  return cls;
}

EntityCounts predicted_counts(const Triangulation& macro, int level) {
  if (level < 1) throw InvalidArgument("refinement level must be positive");
  const long long l = level;
  const long long nv = macro.n_vertices(), ne = macro.n_edges(), nt = macro.n_triangles();
  EntityCounts c;
  c.vertices = nv + (l - 1) * ne + (l - 2) * (l - 1) / 2 * nt;
  c.edges = l * ne + 3 * (l - 1) * l / 2 * nt;
  c.boundary_edges = 2 * l * ne - 3 * l * nt;
  c.triangles = l * l * nt;
  return c;
}

}  // namespace pss
