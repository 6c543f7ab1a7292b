#include "pss/bb.hpp"

#include <algorithm>
#include <cmath>

#include "pss/error.hpp"

namespace pss {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void check_patch(const BBPatch& p) {
  if (p.degree < 0 || static_cast<int>(p.coeffs.size()) != bb_size(p.degree)) {
    throw InvalidArgument("BB patch coefficient count does not match its degree");
  }
}

bool on_shared_side(const Triangle& t, Point a, Point b) {
  const Barycentric la = barycentric(t, a), lb = barycentric(t, b);
  constexpr double tol = 1e-9;
  for (int m = 0; m < 3; ++m) {
    if (std::abs(la[m]) <= tol && std::abs(lb[m]) <= tol) {
      return std::min({la[0], la[1], la[2], lb[0], lb[1], lb[2]}) >= -tol;
    }
  }
  return false;
}

}  // namespace

std::array<int, 3> bb_multi_index(int degree, int index) {
  int pos = 0;
  for (int i = degree; i >= 0; --i) {
    for (int j = degree - i; j >= 0; --j, ++pos) {
      if (pos == index) return {i, j, degree - i - j};
    }
  }
  throw InvalidArgument("BB index out of range");
}

std::vector<double> de_casteljau_step(int degree, const std::vector<double>& coeffs,
                                      const Barycentric& l) {
  std::vector<double> out(bb_size(degree - 1));
  for (int i = degree - 1; i >= 0; --i) {
    for (int j = degree - 1 - i; j >= 0; --j) {
      const int k = degree - 1 - i - j;
      out[bb_index(i, j, k)] = l[0] * coeffs[bb_index(i + 1, j, k)] +
                               l[1] * coeffs[bb_index(i, j + 1, k)] +
                               l[2] * coeffs[bb_index(i, j, k + 1)];
    }
  }
  return out;
}

double bb_eval(const BBPatch& patch, Point p) {
  check_patch(patch);
  const Barycentric l = barycentric(patch.triangle, p);
  std::vector<double> c = patch.coeffs;
  for (int d = patch.degree; d > 0; --d) c = de_casteljau_step(d, c, l);
  return c[0];
}

double bb_eval_inside(const BBPatch& patch, Point p, double tol) {
  const Barycentric l = barycentric(patch.triangle, p);
  if (std::min({l[0], l[1], l[2]}) < -tol) {
    throw InvalidArgument("evaluation point outside the patch triangle");
  }
  return bb_eval(patch, p);
}

BBPatch bb_directional(const BBPatch& patch, Point direction) {
  check_patch(patch);
  if (patch.degree == 0) return {patch.triangle, 0, {0.0}};
  const Barycentric u = barycentric_direction(patch.triangle, direction);
  BBPatch out{patch.triangle, patch.degree - 1, de_casteljau_step(patch.degree, patch.coeffs, u)};
  for (double& c : out.coeffs) c *= patch.degree;
  return out;
}

BBPatch bb_derivative(const BBPatch& patch, int a, int b) {
  if (a < 0 || b < 0 || a + b > patch.degree) {
    throw InvalidArgument("derivative order exceeds the patch degree");
  }
  BBPatch out = patch;
  for (int i = 0; i < a; ++i) out = bb_directional(out, {1.0, 0.0});
  for (int i = 0; i < b; ++i) out = bb_directional(out, {0.0, 1.0});
  return out;
}

double bb_blossom(const BBPatch& patch, const std::vector<Point>& points) {
  check_patch(patch);
  if (static_cast<int>(points.size()) != patch.degree) {
    throw InvalidArgument("blossom needs as many arguments as the degree");
  }
  std::vector<double> c = patch.coeffs;
  for (int d = patch.degree; d > 0; --d) {
    c = de_casteljau_step(d, c, barycentric(patch.triangle, points[patch.degree - d]));
  }
  return c[0];
}

double blossom(const BBPatch& cubic, Point p1, Point p2, Point p3) {
  if (cubic.degree != 3) throw InvalidArgument("blossom expects a cubic patch");
  return bb_blossom(cubic, {p1, p2, p3});
}

double CubicPolynomial::derivative(Point p, int a, int b) const {
  double s = 0.0;
  for (int n = 0; n < 10; ++n) {
    const int ex = kExponents[n][0], ey = kExponents[n][1];
    if (ex < a || ey < b || c[n] == 0.0) continue;
    const double coef = factorial(ex) / factorial(ex - a) * factorial(ey) / factorial(ey - b);
    s += c[n] * coef * std::pow(p.x, ex - a) * std::pow(p.y, ey - b);
  }
  return s;
}

double CubicPolynomial::blossom(Point p1, Point p2, Point p3) const {
  const std::array<Point, 3> pts{p1, p2, p3};
  static constexpr std::array<std::array<int, 3>, 6> perms{
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  double s = 0.0;
  for (int n = 0; n < 10; ++n) {
    const int ex = kExponents[n][0], ey = kExponents[n][1];
    double avg = 0.0;
    for (const auto& perm : perms) {
      double t = 1.0;
      for (int q = 0; q < ex; ++q) t *= pts[perm[q]].x;
      for (int q = ex; q < ex + ey; ++q) t *= pts[perm[q]].y;
      avg += t;
    }
    s += c[n] * avg / 6.0;
  }
  return s;
}

BBPatch poly_to_bb(const CubicPolynomial& g, const Triangle& triangle) {
  BBPatch out{triangle, 3, std::vector<double>(10)};
  for (int n = 0; n < 10; ++n) {
    const auto [i, j, k] = bb_multi_index(3, n);
    std::array<Point, 3> args;
    int pos = 0;
    for (int q = 0; q < i; ++q) args[pos++] = triangle[0];
    for (int q = 0; q < j; ++q) args[pos++] = triangle[1];
    for (int q = 0; q < k; ++q) args[pos++] = triangle[2];
    out.coeffs[n] = g.blossom(args[0], args[1], args[2]);
  }
  return out;
}

double smoothness_residual(const BBPatch& fa, const BBPatch& fb, Point a, Point b, int order,
                           int samples) {
  if (order < 0 || order > 2) throw InvalidArgument("smoothness order must be 0, 1 or 2");
  if (samples < 2) throw InvalidArgument("at least two samples are needed");
  if (!on_shared_side(fa.triangle, a, b) || !on_shared_side(fb.triangle, a, b)) {
    throw InvalidArgument("segment is not a shared edge of both patches");
  }
  double scale = 1.0;
  for (double c : fa.coeffs) scale = std::max(scale, std::abs(c));
  for (double c : fb.coeffs) scale = std::max(scale, std::abs(c));
  double jump = 0.0;
  for (int dx = order; dx >= 0; --dx) {
    const BBPatch da = bb_derivative(fa, dx, order - dx);
    const BBPatch db = bb_derivative(fb, dx, order - dx);
    for (int s = 0; s < samples; ++s) {
      const Point p = a + (static_cast<double>(s) / (samples - 1)) * (b - a);
      jump = std::max(jump, std::abs(bb_eval(da, p) - bb_eval(db, p)));
    }
  }
  return jump / scale;
}

void bernstein3(const Barycentric& l, const std::array<Point, 3>& g, Bernstein3& out) {
  std::array<std::array<double, 4>, 3> pw;
  for (int m = 0; m < 3; ++m) {
    pw[m][0] = 1.0;
    for (int p = 1; p < 4; ++p) pw[m][p] = pw[m][p - 1] * l[m];
  }
  auto power = [&](int m, int p) { return p < 0 ? 0.0 : pw[m][p]; };
  for (int n = 0; n < 10; ++n) {
    const auto a = bb_multi_index(3, n);
    const double coef = 6.0 / (factorial(a[0]) * factorial(a[1]) * factorial(a[2]));
    // d/dlambda_m and d2/dlambda_m dlambda_q of lambda^a.
    std::array<double, 3> d1{};
    std::array<std::array<double, 3>, 3> d2{};
    for (int m = 0; m < 3; ++m) {
      double t = a[m] * power(m, a[m] - 1);
      for (int o = 0; o < 3; ++o) {
        if (o != m) t *= power(o, a[o]);
      }
      d1[m] = coef * t;
      for (int q = 0; q < 3; ++q) {
        double s;
        if (q == m) {
          s = a[m] * (a[m] - 1) * power(m, a[m] - 2);
          for (int o = 0; o < 3; ++o) {
            if (o != m) s *= power(o, a[o]);
          }
        } else {
          s = a[m] * power(m, a[m] - 1) * a[q] * power(q, a[q] - 1);
          const int o = 3 - m - q;
          s *= power(o, a[o]);
        }
        d2[m][q] = coef * s;
      }
    }
    out[0][n] = coef * pw[0][a[0]] * pw[1][a[1]] * pw[2][a[2]];
    double dx = 0.0, dy = 0.0, dxx = 0.0, dxy = 0.0, dyy = 0.0;
    for (int m = 0; m < 3; ++m) {
      dx += d1[m] * g[m].x;
      dy += d1[m] * g[m].y;
      for (int q = 0; q < 3; ++q) {
        dxx += d2[m][q] * g[m].x * g[q].x;
        dxy += d2[m][q] * g[m].x * g[q].y;
        dyy += d2[m][q] * g[m].y * g[q].y;
      }
    }
    out[1][n] = dx;
    out[2][n] = dy;
    out[3][n] = dxx;
    out[4][n] = dxy;
    out[5][n] = dyy;
  }
}

std::array<std::array<double, 10>, 10> cubic_reexpress(const Triangle& from, const Triangle& to) {
  std::array<std::array<double, 10>, 10> r{};
  BBPatch unit{from, 3, std::vector<double>(10, 0.0)};
  for (int a = 0; a < 10; ++a) {
    std::fill(unit.coeffs.begin(), unit.coeffs.end(), 0.0);
    unit.coeffs[a] = 1.0;
    for (int b = 0; b < 10; ++b) {
      const auto [i, j, k] = bb_multi_index(3, b);
      std::vector<Point> args;
      for (int q = 0; q < i; ++q) args.push_back(to[0]);
      for (int q = 0; q < j; ++q) args.push_back(to[1]);
      for (int q = 0; q < k; ++q) args.push_back(to[2]);
      r[b][a] = bb_blossom(unit, args);
    }
  }
  return r;
}

}  // namespace pss
