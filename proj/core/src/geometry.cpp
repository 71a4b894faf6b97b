#include "svstokes/geometry.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "svstokes/errors.hpp"

namespace svstokes {
namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double triangle_area(const TrianglePoints& K) { return 0.5 * cross(K[1] - K[0], K[2] - K[0]); }

// Parameters s of the intersections of the line p + s d with the boundary of K.
std::pair<double, double> chord(const TrianglePoints& K, const Point& p, const Point& d) {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 3; ++i) {
    const Point& a = K[i];
    const Point& b = K[(i + 1) % 3];
    const Point e = b - a;
    // inside: cross(e, x - a) >= 0
    const double c0 = cross(e, p - a);
    const double c1 = cross(e, d);
    if (std::abs(c1) < 1e-300) continue;
    const double s = -c0 / c1;
    if (c1 > 0) lo = std::max(lo, s);
    else hi = std::min(hi, s);
  }
  return {lo, hi};
}

}  // namespace

TrianglePoints triangle_points(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangle(t);
  return {mesh.vertex(tri[0]), mesh.vertex(tri[1]), mesh.vertex(tri[2])};
}

double polygon_area(const Polygon& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) a += cross(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * a;
}

Polygon clip_convex(const Polygon& subject, const Polygon& clip) {
  Polygon out = subject;
  for (std::size_t i = 0; i < clip.size() && !out.empty(); ++i) {
    const Point& a = clip[i];
    const Point e = clip[(i + 1) % clip.size()] - a;
    Polygon in = std::move(out);
    out.clear();
    for (std::size_t j = 0; j < in.size(); ++j) {
      const Point& p = in[j];
      const Point& q = in[(j + 1) % in.size()];
      const double sp = cross(e, p - a), sq = cross(e, q - a);
      if (sp >= 0) out.push_back(p);
      if ((sp >= 0) != (sq >= 0)) out.push_back(p + (q - p) * (sp / (sp - sq)));
    }
  }
  return out;
}

Polygon convex_hull(std::vector<Point> points) {
  std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  if (points.size() < 3) return points;
  Polygon hull(2 * points.size());
  std::size_t k = 0;
  for (const Point& p : points) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    const Point& p = points[i];
    while (k >= lower && cross(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
    hull[k++] = p;
  }
  hull.resize(k - 1);
  return hull;
}

TrianglePoints minimal_enclosing_triangle(const std::vector<Point>& points, int directions) {
  const Polygon hull = convex_hull(points);
  if (hull.size() < 3) throw InvalidParameter("enclosing triangle of degenerate point set");
  auto support = [&](const Point& n) {
    double h = -std::numeric_limits<double>::infinity();
    for (const Point& p : hull) h = std::max(h, n.dot(p));
    return h;
  };
  auto intersect = [](const Point& n1, double h1, const Point& n2, double h2) {
    Eigen::Matrix2d m;
    m << n1.x(), n1.y(), n2.x(), n2.y();
    return Point(m.inverse() * Eigen::Vector2d(h1, h2));
  };

  double best = std::numeric_limits<double>::infinity();
  TrianglePoints result{};
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t e = 0; e < hull.size(); ++e) {
    const Point d = hull[(e + 1) % hull.size()] - hull[e];
    const Point n0 = Point(d.y(), -d.x()).normalized();  // outward for counterclockwise hulls
    const double h0 = support(n0);
    const double a0 = std::atan2(n0.y(), n0.x());
    for (int i = 1; i < directions; ++i) {
      const double a1 = a0 + two_pi * i / directions;
      const Point n1(std::cos(a1), std::sin(a1));
      const double h1 = support(n1);
      for (int j = i + 1; j < directions; ++j) {
        const double a2 = a0 + two_pi * j / directions;
        // bounded iff consecutive normal gaps are all below pi
        if (a1 - a0 >= std::numbers::pi || a2 - a1 >= std::numbers::pi || a0 + two_pi - a2 >= std::numbers::pi)
          continue;
        const Point n2(std::cos(a2), std::sin(a2));
        const double h2 = support(n2);
        TrianglePoints T{intersect(n2, h2, n0, h0), intersect(n0, h0, n1, h1), intersect(n1, h1, n2, h2)};
        const double area = triangle_area(T);
        if (area > 0 && area < best) {
          best = area;
          result = T;
        }
      }
    }
  }
  return result;
}

Point k_lambda_point(const TrianglePoints& K, double alpha, double lambda) {
  if (triangle_area(K) <= 1e-14 * std::max({(K[0] - K[1]).squaredNorm(), (K[1] - K[2]).squaredNorm(),
                                            (K[0] - K[2]).squaredNorm()}))
    throw DegenerateTriangle(-1);
  const Point M = (K[0] + K[1] + K[2]) / 3.0;
  const Point d(std::cos(alpha), std::sin(alpha));
  const auto [lo, hi] = chord(K, M, d);
  const Point y = M + hi * d;
  const Point mid = M + 0.5 * (lo + hi) * d;
  return mid + (1.0 + lambda) * (y - mid);
}

double k_lambda_diam(const TrianglePoints& K, double lambda, int samples) {
  std::vector<Point> pts;
  pts.reserve(samples + 3);
  for (int i = 0; i < samples; ++i)
    pts.push_back(k_lambda_point(K, 2.0 * std::numbers::pi * i / samples, lambda));
  // Directions through the corners, where the diameter of K itself is attained.
  const Point M = (K[0] + K[1] + K[2]) / 3.0;
  for (const Point& v : K) pts.push_back(k_lambda_point(K, std::atan2(v.y() - M.y(), v.x() - M.x()), lambda));
  double d = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, (pts[i] - pts[j]).norm());
  return d;
}

}  // namespace svstokes
