#include "svstokes/velocity_space.hpp"

#include <map>
#include <tuple>

#include "svstokes/errors.hpp"

namespace svstokes {
namespace {

// R_n(lambda) = prod_{s<n} (k lambda - s) / (s + 1) and its derivative.
std::pair<double, double> silvester(int k, int n, double lambda) {
  double value = 1.0, deriv = 0.0;
  for (int s = 0; s < n; ++s) {
    const double f = (k * lambda - s) / (s + 1.0);
    const double df = k / (s + 1.0);
    deriv = deriv * f + value * df;
    value *= f;
  }
  return {value, deriv};
}

}  // namespace

VelocitySpace::VelocitySpace(const Mesh& mesh, int k) : mesh_(&mesh), k_(k) {
  if (k < 1) throw InvalidParameter("velocity degree must be >= 1");
  for (int a2 = 0; a2 <= k; ++a2)
    for (int a1 = 0; a1 <= k - a2; ++a1) lattice_.push_back({k - a1 - a2, a1, a2});

  // Node keys: vertex, (edge lo, edge hi, lattice count at lo), (triangle, local index).
  std::map<std::tuple<int, int, int, int>, int> ids;
  auto intern = [&](std::tuple<int, int, int, int> key, const Point& p) {
    auto [it, fresh] = ids.emplace(key, static_cast<int>(node_points_.size()));
    if (fresh) node_points_.push_back(p);
    return it->second;
  };
  element_nodes_.resize(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    for (int i = 0; i < local_size(); ++i) {
      const auto& a = lattice_[i];
      Point p = Point::Zero();
      for (int m = 0; m < 3; ++m) p += a[m] * mesh.vertex(tri[m]);
      p /= k;
      std::tuple<int, int, int, int> key;
      int nonzero = 0;
      for (int m = 0; m < 3; ++m) nonzero += a[m] > 0;
      if (nonzero == 1) {
        for (int m = 0; m < 3; ++m)
          if (a[m] == k) key = {0, tri[m], 0, 0};
      } else if (nonzero == 2) {
        int u = -1, v = -1;
        for (int m = 0; m < 3; ++m) {
          if (a[m] == 0) continue;
          (u < 0 ? u : v) = m;
        }
        if (tri[u] > tri[v]) std::swap(u, v);
        key = {1, tri[u], tri[v], a[u]};
      } else {
        key = {2, t, i, 0};
      }
      element_nodes_[t].push_back(intern(key, p));
    }
  }

  std::vector<bool> on_boundary(node_points_.size(), false);
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangle(t);
    for (int i = 0; i < local_size(); ++i) {
      const auto& a = lattice_[i];
      // a node lies on the edge opposite local vertex m iff a[m] == 0
      for (int m = 0; m < 3; ++m) {
        if (a[m] != 0) continue;
        const int e = mesh.triangle_edge(t, m);
        if (mesh.edges()[e].boundary()) on_boundary[element_nodes_[t][i]] = true;
      }
      for (int m = 0; m < 3; ++m)
        if (a[m] == k && mesh.boundary_vertex(tri[m])) on_boundary[element_nodes_[t][i]] = true;
    }
  }
  free_index_.assign(node_points_.size(), -1);
  for (std::size_t n = 0; n < node_points_.size(); ++n)
    if (!on_boundary[n]) free_index_[n] = num_free_++;
}

Eigen::VectorXd VelocitySpace::shape_values(const Eigen::Vector3d& b) const {
  Eigen::VectorXd v(local_size());
  for (int i = 0; i < local_size(); ++i) {
    double p = 1.0;
    for (int m = 0; m < 3; ++m) p *= silvester(k_, lattice_[i][m], b(m)).first;
    v(i) = p;
  }
  return v;
}

Eigen::MatrixX3d VelocitySpace::shape_bary_derivatives(const Eigen::Vector3d& b) const {
  Eigen::MatrixX3d d(local_size(), 3);
  for (int i = 0; i < local_size(); ++i) {
    std::array<std::pair<double, double>, 3> r;
    for (int m = 0; m < 3; ++m) r[m] = silvester(k_, lattice_[i][m], b(m));
    d(i, 0) = r[0].second * r[1].first * r[2].first;
    d(i, 1) = r[0].first * r[1].second * r[2].first;
    d(i, 2) = r[0].first * r[1].first * r[2].second;
  }
  return d;
}

Eigen::Matrix<double, 3, 2> barycentric_gradients(const Mesh& mesh, int t) {
  const auto& tri = mesh.triangle(t);
  const Point& a = mesh.vertex(tri[0]);
  const Point& b = mesh.vertex(tri[1]);
  const Point& c = mesh.vertex(tri[2]);
  const double twice = 2.0 * mesh.area(t);
  Eigen::Matrix<double, 3, 2> g;
  // grad lambda_i = rot90(opposite edge) / (2|K|)
  g.row(0) << (b.y() - c.y()) / twice, (c.x() - b.x()) / twice;
  g.row(1) << (c.y() - a.y()) / twice, (a.x() - c.x()) / twice;
  g.row(2) << (a.y() - b.y()) / twice, (b.x() - a.x()) / twice;
  return g;
}

}  // namespace svstokes
