#include "pss/basis.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <boost/geometry.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "json.hpp"
#include "pss/error.hpp"
#include "pss/parallel.hpp"

namespace pss {

namespace {

namespace bg = boost::geometry;
using BgPoint = bg::model::d2::point_xy<double>;

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInflate = 1e-9;

Point unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

// Triangle bounded by the three supporting lines n_j . x = max_p n_j . p; vertex j
// is opposite line j. Returns +inf area when the normals do not span the plane positively.
double support_triangle(const std::vector<Point>& pts, const std::array<double, 3>& angles,
                        Triangle& out) {
  std::array<double, 3> a = angles;
  for (double& x : a) x = std::fmod(std::fmod(x, kTwoPi) + kTwoPi, kTwoPi);
  std::array<double, 3> s = a;
  std::sort(s.begin(), s.end());
  const double max_gap = std::max({s[1] - s[0], s[2] - s[1], kTwoPi - s[2] + s[0]});
  if (max_gap >= std::numbers::pi - 1e-12) return std::numeric_limits<double>::infinity();
  std::array<Point, 3> n;
  std::array<double, 3> h;
  for (int j = 0; j < 3; ++j) {
    n[j] = unit(a[j]);
    h[j] = -std::numeric_limits<double>::infinity();
    for (const Point& p : pts) h[j] = std::max(h[j], dot(n[j], p));
  }
  for (int j = 0; j < 3; ++j) {
    const int u = (j + 1) % 3, v = (j + 2) % 3;
    const double det = cross(n[u], n[v]);
    out[j] = Point{h[u] * n[v].y - h[v] * n[u].y, n[u].x * h[v] - n[v].x * h[u]} / det;
  }
  return std::abs(signed_area(out));
}

// Minimizes the area over the two free normal angles with the first one fixed.
double best_with_first_side(const std::vector<Point>& pts, double a1, Triangle& best) {
  constexpr int kGrid = 36;
  const double step0 = kTwoPi / kGrid;
  double best_area = std::numeric_limits<double>::infinity();
  double b2 = 0.0, b3 = 0.0;
  Triangle t;
  for (int i = 1; i < kGrid; ++i) {
    for (int j = i + 1; j < kGrid; ++j) {
      const double area = support_triangle(pts, {a1, a1 + i * step0, a1 + j * step0}, t);
      if (area < best_area) {
        best_area = area;
        b2 = i * step0;
        b3 = j * step0;
        best = t;
      }
    }
  }
  if (!std::isfinite(best_area)) return best_area;
  for (double step = step0 / 2; step > 1e-11;) {
    bool improved = false;
    for (const auto& [d2, d3] : {std::pair{step, 0.0}, {-step, 0.0}, {0.0, step}, {0.0, -step}}) {
      const double area = support_triangle(pts, {a1, a1 + b2 + d2, a1 + b3 + d3}, t);
      if (area < best_area) {
        best_area = area;
        b2 += d2;
        b3 += d3;
        best = t;
        improved = true;
      }
    }
    if (!improved) step /= 2;
  }
  return best_area;
}

struct Stars {
  std::vector<std::vector<int>> edges, triangles;
};

Stars vertex_stars(const Triangulation& tri) {
  Stars s;
  s.edges.resize(tri.n_vertices());
  s.triangles.resize(tri.n_vertices());
  for (int e = 0; e < tri.n_edges(); ++e) {
    s.edges[tri.edges[e][0]].push_back(e);
    s.edges[tri.edges[e][1]].push_back(e);
  }
  for (int t = 0; t < tri.n_triangles(); ++t) {
    for (int v : tri.triangles[t]) s.triangles[v].push_back(t);
  }
  return s;
}

std::vector<Point> greville_points(const PSRefinement& ps, int v, const std::vector<int>& edges,
                                   const std::vector<int>& triangles) {
  const Point pv = ps.mesh.vertices[v];
  std::vector<Point> pts{pv};
  for (int e : edges) pts.push_back((2.0 / 3.0) * pv + (1.0 / 3.0) * ps.edge_point[e]);
  for (int t : triangles) pts.push_back((2.0 / 3.0) * pv + (1.0 / 3.0) * ps.split_point[t]);
  return pts;
}

bool straight_boundary_normal(const Triangulation& tri, int v, const std::vector<int>& edges,
                              Point& normal) {
  std::vector<int> be;
  for (int e : edges) {
    if (tri.edge_boundary[e]) be.push_back(e);
  }
  if (be.size() != 2) return false;
  const Point pv = tri.vertices[v];
  auto dir = [&](int e) {
    const int w = tri.edges[e][0] == v ? tri.edges[e][1] : tri.edges[e][0];
    return tri.vertices[w] - pv;
  };
  const Point d0 = dir(be[0]), d1 = dir(be[1]);
  if (std::abs(cross(d0, d1)) > 1e-12 * norm(d0) * norm(d1) || dot(d0, d1) > 0) return false;
  Point n{d0.y, -d0.x};
  n = n / norm(n);
  const Point inside = centroid(tri.triangle(tri.edge_triangles[be[0]][0]));
  if (dot(n, inside - pv) > 0) n = -1.0 * n;
  normal = n;
  return true;
}

std::array<std::array<double, 10>, 10> reexpress(const Triangle& a, const Triangle& b) {
  return cubic_reexpress(a, b);
}

// Row of the blossom functional at three points on the Bernstein coefficients.
std::array<double, 10> blossom_row(const Triangle& t, Point p1, Point p2, Point p3) {
  std::array<double, 10> row{};
  BBPatch unit_patch{t, 3, std::vector<double>(10, 0.0)};
  for (int a = 0; a < 10; ++a) {
    std::fill(unit_patch.coeffs.begin(), unit_patch.coeffs.end(), 0.0);
    unit_patch.coeffs[a] = 1.0;
    row[a] = blossom(unit_patch, p1, p2, p3);
  }
  return row;
}

}  // namespace

std::vector<Point> greville_points(const PSRefinement& ps, int vertex) {
  const Stars s = vertex_stars(ps.mesh);
  return greville_points(ps, vertex, s.edges.at(vertex), s.triangles.at(vertex));
}

bool straight_boundary_normal(const Triangulation& tri, int vertex, Point& normal) {
  const Stars s = vertex_stars(tri);
  return straight_boundary_normal(tri, vertex, s.edges.at(vertex), normal);
}

GrevilleTriangle greville_triangle(const std::vector<Point>& points, const Point* boundary_normal) {
  bg::model::multi_point<BgPoint> mp;
  for (const Point& p : points) mp.emplace_back(p.x, p.y);
  bg::model::polygon<BgPoint> hull;
  bg::convex_hull(mp, hull);
  const auto& ring = hull.outer();
  std::vector<Point> hp;
  for (std::size_t i = 0; i + 1 < ring.size(); ++i) hp.push_back({ring[i].x(), ring[i].y()});
  double diam = 0.0;
  for (const Point& a : hp) {
    for (const Point& b : hp) diam = std::max(diam, distance(a, b));
  }
  if (hp.size() < 3 || std::abs(bg::area(hull)) <= 1e-14 * diam * diam) {
    throw GeometryError("Greville points are collinear");
  }

  std::vector<double> first_angles;
  if (boundary_normal) {
    first_angles.push_back(std::atan2(boundary_normal->y, boundary_normal->x));
  } else {
    Point c;
    for (const Point& p : hp) c = c + p;
    c = c / static_cast<double>(hp.size());
    for (std::size_t i = 0; i < hp.size(); ++i) {
      const Point d = hp[(i + 1) % hp.size()] - hp[i];
      Point n{d.y, -d.x};
      if (dot(n, hp[i] - c) < 0) n = -1.0 * n;
      first_angles.push_back(std::atan2(n.y, n.x));
    }
  }
  double best_area = std::numeric_limits<double>::infinity();
  Triangle best{};
  for (double a1 : first_angles) {
    Triangle t;
    const double area = best_with_first_side(hp, a1, t);
    if (area < best_area) {
      best_area = area;
      best = t;
    }
  }
  if (!std::isfinite(best_area)) throw GeometryError("no enclosing triangle found");

  // Inflate; a boundary-aligned triangle is scaled about a point of its boundary side
  // (side 0) so that this side stays on the boundary line.
  const Point center = boundary_normal ? 0.5 * (best[1] + best[2]) : centroid(best);
  GrevilleTriangle g;
  for (int j = 0; j < 3; ++j) g.corners[j] = center + (1.0 + kInflate) * (best[j] - center);
  if (signed_area(g.corners) < 0) std::swap(g.corners[1], g.corners[2]);
  g.boundary_aligned = boundary_normal != nullptr;
  return g;
}

GrevilleTriangle greville_triangle(const PSRefinement& ps, int vertex) {
  const Stars s = vertex_stars(ps.mesh);
  Point n;
  const bool aligned = straight_boundary_normal(ps.mesh, vertex, s.edges.at(vertex), n);
  GrevilleTriangle g = greville_triangle(
      greville_points(ps, vertex, s.edges[vertex], s.triangles[vertex]), aligned ? &n : nullptr);
  g.vertex = vertex;
  return g;
}

int edge_slot(const Triangulation& tri, int edge, int triangle) {
  const auto& et = tri.edge_triangles.at(edge);
  if (triangle == et[0] && triangle != kNone) return 0;
  if (triangle == et[1]) return 1;
  throw InvalidArgument("triangle " + std::to_string(triangle) + " is not incident to edge " +
                        std::to_string(edge));
}

int xi0_index(const Triangulation& tri, int vertex, int edge, int triangle) {
  const auto& ev = tri.edges.at(edge);
  if (vertex != ev[0] && vertex != ev[1]) {
    throw InvalidArgument("vertex " + std::to_string(vertex) + " is not an endpoint of edge " +
                          std::to_string(edge));
  }
  return 4 * edge + 2 * edge_slot(tri, edge, triangle) + (vertex == ev[0] ? 0 : 1);
}

std::vector<double> local_dual(const PSRefinement& ps, int t) {
  std::array<Triangle, 6> micro;
  for (int j = 0; j < 6; ++j) micro[j] = ps.micro_triangle(6 * t + j);

  // C0 and C1 conditions across the six interior micro-edges.
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(42, 60);
  int row = 0;
  auto constrain = [&](int a, int b, int opposite) {
    const auto r = reexpress(micro[a], micro[b]);
    for (int n = 0; n < 10; ++n) {
      if (bb_multi_index(3, n)[opposite] > 1) continue;
      for (int k = 0; k < 10; ++k) c(row, 10 * a + k) = r[n][k];
      c(row, 10 * b + n) -= 1.0;
      ++row;
    }
  };
  for (int q = 0; q < 3; ++q) {
    constrain(2 * q, 2 * q + 1, 0);
    constrain(2 * q + 1, (2 * q + 2) % 6, 1);
  }

  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(21, 60);
  for (int q = 0; q < 3; ++q) {
    const Triangle& m = micro[2 * q];
    f(3 * q, 20 * q) = 1.0;
    const Barycentric ux = barycentric_direction(m, {1.0, 0.0});
    const Barycentric uy = barycentric_direction(m, {0.0, 1.0});
    static constexpr int kFirst[3] = {bb_index(3, 0, 0), bb_index(2, 1, 0), bb_index(2, 0, 1)};
    for (int k = 0; k < 3; ++k) {
      f(3 * q + 1, 20 * q + kFirst[k]) = 3.0 * ux[k];
      f(3 * q + 2, 20 * q + kFirst[k]) = 3.0 * uy[k];
    }
  }
  const Point vt = ps.split_point[t];
  for (int j = 0; j < 6; ++j) {
    const MicroTriangle& mt = ps.micro[6 * t + j];
    const Point corner = ps.mesh.vertices[mt.corner];
    const Point other = ps.mesh.vertices[mt.other];
    const auto side = blossom_row(micro[j], corner, other, vt);
    const auto trace = blossom_row(micro[j], corner, other, ps.edge_point[mt.edge]);
    for (int k = 0; k < 10; ++k) {
      f(9 + j, 10 * j + k) = side[k];
      f(15 + j, 10 * j + k) = trace[k];
    }
  }

  // The trailing columns of Q in C^T P = Q R span the kernel of C.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(c.transpose());
  qr.setThreshold(1e-10);
  if (qr.rank() != 39) {
    throw ConstructionError("local smoothness system of triangle " + std::to_string(t) +
                            " has rank " + std::to_string(qr.rank()) + ", expected 39");
  }
  const Eigen::MatrixXd q = qr.householderQ();
  const Eigen::MatrixXd z = q.rightCols(21);
  const Eigen::MatrixXd g = f * z;
  Eigen::FullPivLU<Eigen::MatrixXd> lu(g);
  if (!lu.isInvertible() || lu.rcond() < 1e-13) {
    throw ConstructionError("local functionals of triangle " + std::to_string(t) +
                            " are not unisolvent");
  }
  const Eigen::MatrixXd x = z * lu.solve(Eigen::MatrixXd::Identity(21, 21));
  return std::vector<double>(x.data(), x.data() + x.size());
}

SplineBasis build_basis(std::shared_ptr<const PSRefinement> ps_ptr) {
  if (!ps_ptr) throw InvalidArgument("null PS refinement");
  const PSRefinement& ps = *ps_ptr;
  const Triangulation& tri = ps.mesh;
  const int nv = tri.n_vertices(), ne = tri.n_edges(), nt = tri.n_triangles();
  const Stars stars = vertex_stars(tri);

  SplineBasis basis;
  basis.family.ps = ps_ptr;
  basis.greville.resize(nv);
  parallel_for(nv, [&](int v) {
    Point n;
    const bool aligned = straight_boundary_normal(tri, v, stars.edges[v], n);
    basis.greville[v] = greville_triangle(
        greville_points(ps, v, stars.edges[v], stars.triangles[v]), aligned ? &n : nullptr);
    basis.greville[v].vertex = v;
  });

  basis.xi0.resize(4 * static_cast<std::size_t>(ne));
  for (int e = 0; e < ne; ++e) {
    const auto& ev = tri.edges[e];
    const auto& et = tri.edge_triangles[e];
    for (int slot = 0; slot < 2; ++slot) {
      for (int k = 0; k < 2; ++k) basis.xi0[4 * e + 2 * slot + k] = {ev[k], e, et[slot]};
    }
  }

  std::vector<std::vector<double>> dual(nt);
  parallel_for(nt, [&](int t) { dual[t] = local_dual(ps, t); });

  const int m = 3 * nv;
  std::vector<SplineFunction>& fns = basis.family.functions;
  fns.resize(m + 4 * static_cast<std::size_t>(ne));
  auto add_columns = [&](SplineFunction& fn, int t, const std::vector<std::pair<int, double>>& cols) {
    const std::vector<double>& x = dual[t];
    for (int j = 0; j < 6; ++j) {
      Coeffs10 c{};
      for (const auto& [col, w] : cols) {
        for (int k = 0; k < 10; ++k) c[k] += w * x[60 * col + 10 * j + k];
      }
      fn.add(6 * t + j, c);
    }
  };
  for (int t = 0; t < nt; ++t) {
    for (int q = 0; q < 3; ++q) {
      const int v = tri.triangles[t][q];
      const Triangle& qv = basis.greville[v].corners;
      const Barycentric l = barycentric(qv, tri.vertices[v]);
      const auto grads = barycentric_gradients(qv);
      for (int k = 0; k < 3; ++k) {
        add_columns(fns[3 * v + k], t,
                    {{3 * q, l[k]}, {3 * q + 1, grads[k].x}, {3 * q + 2, grads[k].y}});
      }
    }
    for (int j = 0; j < 6; ++j) {
      const MicroTriangle& mt = ps.micro[6 * t + j];
      const int e = mt.edge;
      const auto& et = tri.edge_triangles[e];
      const int own = m + xi0_index(tri, mt.corner, e, t);
      if (tri.edge_boundary[e]) {
        add_columns(fns[own], t, {{9 + j, 1.0}});
        add_columns(fns[m + xi0_index(tri, mt.corner, e, kNone)], t, {{15 + j, 1.0}});
      } else {
        const double theta = ps.edge_theta[e];
        const double w_own = t == et[0] ? 1.0 - theta : theta;
        const int other_t = t == et[0] ? et[1] : et[0];
        add_columns(fns[own], t, {{9 + j, 1.0}, {15 + j, w_own}});
        add_columns(fns[m + xi0_index(tri, mt.corner, e, other_t)], t, {{15 + j, 1.0 - w_own}});
      }
    }
  }
  for (std::size_t i = 0; i < fns.size(); ++i) {
    for (const auto& [id, c] : fns[i].patches) {
      if (*std::min_element(c.begin(), c.end()) < -1e-10) {
        throw ConstructionError("basis function " + std::to_string(i) +
                                " has a negative coefficient on micro-triangle " +
                                std::to_string(id));
      }
    }
  }
  classify_boundary(basis.family);
  return basis;
}

DimensionOracle space_dimension_oracle(const PSRefinement& ps, int max_micro) {
  const int nm = ps.n_micro();
  if (nm > max_micro) {
    throw InvalidArgument("dimension oracle limited to " + std::to_string(max_micro) +
                          " micro-triangles, mesh has " + std::to_string(nm));
  }
  std::map<std::pair<int, int>, std::vector<int>> sides;
  for (int id = 0; id < nm; ++id) {
    const auto& v = ps.micro[id].vertices;
    for (int k = 0; k < 3; ++k) {
      const int a = v[k], b = v[(k + 1) % 3];
      sides[{std::min(a, b), std::max(a, b)}].push_back(id);
    }
  }
  std::vector<Eigen::VectorXd> rows;
  const int n = 10 * nm;
  BBPatch unit_patch{{}, 3, std::vector<double>(10, 0.0)};
  auto unit_values = [&](int id, Point p, const Point* dir) {
    std::array<double, 10> out{};
    unit_patch.triangle = ps.micro_triangle(id);
    for (int k = 0; k < 10; ++k) {
      std::fill(unit_patch.coeffs.begin(), unit_patch.coeffs.end(), 0.0);
      unit_patch.coeffs[k] = 1.0;
      out[k] = dir ? bb_eval(bb_directional(unit_patch, *dir), p) : bb_eval(unit_patch, p);
    }
    return out;
  };
  for (const auto& [key, ids] : sides) {
    if (ids.size() != 2) continue;
    const Point p = ps.micro_vertices[key.first], q = ps.micro_vertices[key.second];
    const Point d = q - p;
    const Point normal = Point{-d.y, d.x} / norm(d);
    for (int order = 0; order <= 1; ++order) {
      const int count = order == 0 ? 4 : 3;
      for (int s = 0; s < count; ++s) {
        const double frac = order == 0 ? s / 3.0 : (s + 0.5) / 3.0;
        const Point x = p + frac * d;
        const auto a = unit_values(ids[0], x, order ? &normal : nullptr);
        const auto b = unit_values(ids[1], x, order ? &normal : nullptr);
        Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
        for (int k = 0; k < 10; ++k) {
          r(10 * ids[0] + k) += a[k];
          r(10 * ids[1] + k) -= b[k];
        }
        rows.push_back(std::move(r));
      }
    }
  }
  Eigen::MatrixXd mat(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i) mat.row(static_cast<Eigen::Index>(i)) = rows[i];
  Eigen::BDCSVD<Eigen::MatrixXd> svd(mat);
  const auto& s = svd.singularValues();
  const double threshold = 1e-9 * s(0);
  DimensionOracle out;
  int rank = 0;
  out.smallest_kept = s(0);
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > threshold) {
      ++rank;
      out.smallest_kept = s(i);
    } else {
      out.largest_dropped = std::max(out.largest_dropped, s(i));
    }
    if (s(i) > threshold / 10 && s(i) < threshold * 10) out.ambiguous = true;
  }
  out.dimension = n - rank;
  return out;
}

std::string basis_dump_json(const SplineBasis& basis, const std::vector<int>& ids) {
  const PSRefinement& ps = basis.ps();
  nlohmann::json out = nlohmann::json::array();
  for (int id : ids) {
    if (id < 0 || id >= basis.size()) {
      throw InvalidArgument("basis function " + std::to_string(id) + " does not exist");
    }
    nlohmann::json f;
    f["id"] = id;
    if (id < basis.n_vertex_functions()) {
      f["kind"] = "vertex";
      f["owner"] = {{"vertex", id / 3}, {"index", id % 3}};
    } else {
      const XiEntry& x = basis.xi0[id - basis.n_vertex_functions()];
      f["kind"] = "edge";
      f["owner"] = {{"vertex", x.vertex},
                    {"edge", x.edge},
                    {"triangle", x.triangle == kNone ? nlohmann::json() : nlohmann::json(x.triangle)}};
    }
    const unsigned flags = basis.family.boundary[id];
    f["zero_trace"] = (flags & kZeroTrace) != 0;
    f["zero_normal_derivative"] = (flags & kZeroNormalDeriv) != 0;
    nlohmann::json support = nlohmann::json::array(), coeffs = nlohmann::json::array(),
                   tris = nlohmann::json::array();
    for (const auto& [mid, c] : basis.family.functions[id].patches) {
      support.push_back(mid);
      coeffs.push_back(c);
      const Triangle t = ps.micro_triangle(mid);
      tris.push_back({{t[0].x, t[0].y}, {t[1].x, t[1].y}, {t[2].x, t[2].y}});
    }
    f["support"] = support;
    f["coefficients"] = coeffs;
    f["triangles"] = tris;
    out.push_back(f);
  }
  return out.dump();
}

}  // namespace pss
