#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "svstokes/mesh.hpp"

namespace svstokes {

/// Continuous P_k Lagrange nodes on the equispaced lattice of every triangle.
/// Velocity dofs are blocked: all x components, then all y components, with
/// boundary nodes eliminated (homogeneous Dirichlet).
class VelocitySpace {
public:
  VelocitySpace(const Mesh& mesh, int k);

  const Mesh& mesh() const noexcept { return *mesh_; }
  int degree() const noexcept { return k_; }
  int num_nodes() const noexcept { return static_cast<int>(node_points_.size()); }
  int num_free_nodes() const noexcept { return num_free_; }
  /// Number of velocity unknowns, 2 * free nodes.
  int num_dofs() const noexcept { return 2 * num_free_; }
  int local_size() const noexcept { return static_cast<int>(lattice_.size()); }

  /// Barycentric lattice exponents of the local nodes.
  const std::vector<std::array<int, 3>>& lattice() const noexcept { return lattice_; }
  /// Global node of local node i in triangle t.
  int node(int t, int i) const { return element_nodes_[t][i]; }
  const Point& node_point(int n) const { return node_points_[n]; }
  bool boundary_node(int n) const { return free_index_[n] < 0; }
  /// Free-node index or -1 on the boundary; the x dof equals it, the y dof
  /// adds num_free_nodes().
  int free_index(int n) const { return free_index_[n]; }

  /// Values of the local basis at barycentric point b.
  Eigen::VectorXd shape_values(const Eigen::Vector3d& b) const;
  /// Barycentric derivatives d/d lambda_m of the local basis (rows: nodes).
  Eigen::MatrixX3d shape_bary_derivatives(const Eigen::Vector3d& b) const;

private:
  const Mesh* mesh_;
  int k_;
  std::vector<std::array<int, 3>> lattice_;
  std::vector<std::vector<int>> element_nodes_;
  std::vector<Point> node_points_;
  std::vector<int> free_index_;
  int num_free_ = 0;
};

/// Gradients of the barycentric coordinates of triangle t (rows lambda_0..2).
Eigen::Matrix<double, 3, 2> barycentric_gradients(const Mesh& mesh, int t);

}  // namespace svstokes
