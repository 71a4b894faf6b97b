#include "svstokes/broken_polynomial.hpp"

#include <cmath>

#include "svstokes/errors.hpp"
#include "svstokes/quadrature.hpp"

namespace svstokes {

BrokenPolynomial::BrokenPolynomial(const Mesh& mesh, int degree)
    : mesh_(&mesh), degree_(degree), coeffs_(Eigen::VectorXd::Zero(mesh.num_triangles() * modal_dim(degree))) {
  if (degree < 0) throw InvalidParameter("negative polynomial degree");
}

BrokenPolynomial::BrokenPolynomial(const Mesh& mesh, int degree, Eigen::VectorXd coefficients)
    : mesh_(&mesh), degree_(degree), coeffs_(std::move(coefficients)) {
  if (degree < 0) throw InvalidParameter("negative polynomial degree");
  if (coeffs_.size() != mesh.num_triangles() * modal_dim(degree))
    throw InvalidParameter("coefficient vector does not match mesh and degree");
}

Eigen::VectorXd modal_values(const Mesh& mesh, int K, int degree, const Point& p) {
  const Eigen::Vector2d r = reference_coordinates(triangle_points(mesh, K), p);
  return modal_eval(degree, r.x(), r.y()) / std::sqrt(mesh.area(K));
}

double BrokenPolynomial::value(int K, const Point& p) const {
  if (K < 0 || K >= mesh_->num_triangles()) throw UnknownTriangle(K);
  return modal_values(*mesh_, K, degree_, p).dot(block(K));
}

double BrokenPolynomial::integral(int K) const {
  // psi_{K,0} = |K|^{-1/2}, all other modes integrate to zero
  return std::sqrt(mesh_->area(K)) * coeffs_(K * block_size());
}

double BrokenPolynomial::integral() const {
  double s = 0.0;
  for (int K = 0; K < mesh_->num_triangles(); ++K) s += integral(K);
  return s;
}

BrokenPolynomial project(const Mesh& mesh, int degree, const std::function<double(const Point&)>& f,
                         int quad_degree) {
  const QuadratureRule rule = quadrature(quad_degree < 0 ? 2 * degree + 4 : quad_degree);
  BrokenPolynomial q(mesh, degree);
  const int dim = modal_dim(degree);
  std::vector<Eigen::VectorXd> phi;
  for (const auto& b : rule.points) phi.push_back(modal_eval(degree, b(1), b(2)));
  for (int K = 0; K < mesh.num_triangles(); ++K) {
    const TrianglePoints T = triangle_points(mesh, K);
    const double a = mesh.area(K);
    Eigen::VectorXd c = Eigen::VectorXd::Zero(dim);
    for (int i = 0; i < rule.size(); ++i) {
      const Eigen::Vector3d& b = rule.points[i];
      const Point x = b(0) * T[0] + b(1) * T[1] + b(2) * T[2];
      c += rule.weights[i] * f(x) * phi[i];
    }
    // (f, psi_m)_K = |K| * avg(f phi_m) / sqrt|K|
    q.block(K) = std::sqrt(a) * c;
  }
  return q;
}

BrokenPolynomial critical_function(const Mesh& mesh, int z, int k) {
  if (k < 1) throw InvalidParameter("critical functions need k >= 1");
  const VertexPatch& patch = mesh.patch(z);
  const int d = k - 1;
  const QuadratureRule rule = quadrature(2 * d);
  BrokenPolynomial b(mesh, d);
  for (int l = 1; l <= patch.size(); ++l) {
    const int K = patch.triangles[l - 1];
    const int iz = mesh.local_index(K, z);
    const double a = mesh.area(K);
    const double sign = ((k - 1 + l) % 2 == 0) ? 1.0 : -1.0;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(modal_dim(d));
    for (int i = 0; i < rule.size(); ++i) {
      const Eigen::Vector3d& bary = rule.points[i];
      c += rule.weights[i] * jacobi_eval(d, 1.0 - 2.0 * bary(iz)) * modal_eval(d, bary(1), bary(2));
    }
    b.block(K) = sign / a * std::sqrt(a) * c;
  }
  return b;
}

Eigen::VectorXd constant_coefficients(const Mesh& mesh, int degree) {
  const int dim = modal_dim(degree);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(mesh.num_triangles() * dim);
  for (int K = 0; K < mesh.num_triangles(); ++K) c(K * dim) = std::sqrt(mesh.area(K));
  return c;
}

BrokenPolynomial mean_value_zero(const BrokenPolynomial& q) {
  const double mean = q.integral() / q.mesh().domain_area();
  BrokenPolynomial out = q;
  out.coefficients() -= mean * constant_coefficients(q.mesh(), q.degree());
  return out;
}

}  // namespace svstokes
