#pragma once

#include <array>
#include <vector>

#include "svstokes/mesh.hpp"

namespace svstokes {

using Polygon = std::vector<Point>;
using TrianglePoints = std::array<Point, 3>;

TrianglePoints triangle_points(const Mesh& mesh, int t);

/// Signed area (positive for counterclockwise polygons).
double polygon_area(const Polygon& poly);

/// Intersection of two convex counterclockwise polygons (Sutherland-Hodgman).
Polygon clip_convex(const Polygon& subject, const Polygon& clip);

/// Convex hull, counterclockwise, without collinear points.
Polygon convex_hull(std::vector<Point> points);

/// Smallest triangle containing the given points. One side is flush with a
/// hull edge; the other two directions are searched over `directions` evenly
/// spaced support lines, so the result is approximate but always encloses
/// the points.
TrianglePoints minimal_enclosing_triangle(const std::vector<Point>& points, int directions = 720);

/// Point M_alpha + (1 + lambda)(y_alpha - M_alpha) for the line through the
/// barycenter of K at angle alpha, where y_alpha is its exit point on the
/// boundary in direction alpha and M_alpha the midpoint of the chord.
Point k_lambda_point(const TrianglePoints& K, double alpha, double lambda);

/// Diameter of K_lambda estimated from `samples` boundary points plus the
/// three corner directions.
double k_lambda_diam(const TrianglePoints& K, double lambda, int samples = 720);

}  // namespace svstokes
