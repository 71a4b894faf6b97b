#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace svstokes {

using Point = Eigen::Vector2d;

/// Counterclockwise fan of triangles around one vertex.
///
/// Interior fans start at the triangle whose first spoke (the edge leaving z
/// that precedes the triangle in counterclockwise order) has the smallest
/// polar angle in [0, 2pi). Boundary fans start at the triangle whose first
/// spoke is a boundary edge, so the sweep runs across the domain from one
/// boundary edge to the other.
struct VertexPatch {
  int center = -1;
  std::vector<int> triangles;  // K_1..K_N, counterclockwise
  std::vector<double> angles;  // interior angle of K_j at the center, radians
  double width = 0.0;          // max diameter of the patch triangles
  bool boundary = false;

  int size() const noexcept { return static_cast<int>(triangles.size()); }
};

struct Edge {
  std::array<int, 2> vertices{};          // sorted ascending
  std::array<int, 2> triangles{-1, -1};   // second entry -1 on the boundary
  bool boundary() const noexcept { return triangles[1] < 0; }
};

/// Conforming triangulation. Immutable after construction; all adjacency is
/// built eagerly and validated.
class Mesh {
public:
  /// Builds and validates a mesh. Triangles listed clockwise are reordered.
  /// Throws NonConformingMesh or DegenerateTriangle.
  Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles);

  int num_vertices() const noexcept { return static_cast<int>(vertices_.size()); }
  int num_triangles() const noexcept { return static_cast<int>(triangles_.size()); }
  int num_edges() const noexcept { return static_cast<int>(edges_.size()); }

  const std::vector<Point>& vertices() const noexcept { return vertices_; }
  const Point& vertex(int v) const { return vertices_.at(static_cast<std::size_t>(v)); }
  const std::vector<std::array<int, 3>>& triangles() const noexcept { return triangles_; }
  const std::array<int, 3>& triangle(int t) const { return triangles_.at(static_cast<std::size_t>(t)); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  /// Edge index opposite local vertex i of triangle t.
  int triangle_edge(int t, int i) const { return triangle_edges_[t][i]; }
  /// Neighbor across the edge opposite local vertex i, or -1 on the boundary.
  int neighbor(int t, int i) const { return neighbors_[t][i]; }

  bool boundary_vertex(int v) const { return vertex_boundary_.at(static_cast<std::size_t>(v)); }
  const std::vector<int>& vertex_triangles(int v) const { return vertex_triangles_.at(static_cast<std::size_t>(v)); }

  double area(int t) const { return area_[t]; }
  double diameter(int t) const { return diameter_[t]; }
  /// Radius of the inscribed circle, 2|K|/perimeter.
  double inradius(int t) const { return inradius_[t]; }
  /// Global mesh width h_T.
  double mesh_width() const noexcept { return mesh_width_; }
  double domain_area() const noexcept { return domain_area_; }

  /// Local index (0..2) of vertex v in triangle t, or -1.
  int local_index(int t, int v) const;

  /// Counterclockwise patch of vertex z; throws UnknownVertex.
  const VertexPatch& patch(int z) const;

private:
  void build_edges();
  void build_patches();
  void check_hanging_vertices() const;

  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<std::array<int, 3>> neighbors_;
  std::vector<bool> vertex_boundary_;
  std::vector<std::vector<int>> vertex_triangles_;
  std::vector<VertexPatch> patches_;
  std::vector<double> area_, diameter_, inradius_;
  double mesh_width_ = 0.0;
  double domain_area_ = 0.0;
};

/// Reads the "plain v1" format: `nv nt`, nv lines `x y`, nt lines `i j k`
/// (0-based). `#` starts a comment. Throws ParseError or the Mesh errors.
Mesh parse_mesh(std::string_view text);
Mesh read_mesh_file(const std::string& path);

/// Writes the "plain v1" format with 17 significant digits.
std::string serialize_mesh(const Mesh& mesh);

VertexPatch vertex_patch(const Mesh& mesh, int z);

/// max_K h_K / rho_K with rho_K the diameter of the inscribed circle.
double shape_regularity(const Mesh& mesh);

/// All triangles sharing at least a vertex with K, K included, ascending.
std::vector<int> triangle_neighborhood(const Mesh& mesh, int K);

enum class MeshFamily { StructuredSquare, Crisscross, PerturbedCrisscross, LShape };

MeshFamily parse_family(std::string_view name);
std::string family_name(MeshFamily family);

/// Built-in experiment meshes.
///  - StructuredSquare: 2n^2 triangles on the unit square, every cell cut by
///    the diagonal from its lower-left to its upper-right corner.
///  - Crisscross: 4n^2 triangles, each cell split by both diagonals.
///  - PerturbedCrisscross: crisscross with every cell center shifted by
///    t * (cell size) / 4 in +x.
///  - LShape: (-1,1)^2 minus [0,1)x(-1,0], 6n^2 triangles, cells cut by the
///    diagonal avoiding the corner closest to the origin, which makes the
///    re-entrant corner a boundary vertex with three right angles.
Mesh generate_family(MeshFamily family, int n, double t = 0.0);

/// Perturbation t of PerturbedCrisscross at which the cell-center singularity
/// measure equals theta (bisection on the closed-form angle relation).
double perturbation_for_theta(double theta);

}  // namespace svstokes
