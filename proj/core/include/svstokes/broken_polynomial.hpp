#pragma once

#include <functional>

#include <Eigen/Core>

#include "svstokes/mesh.hpp"
#include "svstokes/polynomials.hpp"

namespace svstokes {

/// Piecewise polynomial of degree d on a mesh, stored per triangle in the
/// L2(K)-orthonormal modal basis psi_{K,m} = phi_m(F_K^{-1} x) / sqrt|K|.
/// Keeps a pointer to the mesh, which must outlive it.
class BrokenPolynomial {
public:
  BrokenPolynomial(const Mesh& mesh, int degree);
  BrokenPolynomial(const Mesh& mesh, int degree, Eigen::VectorXd coefficients);

  const Mesh& mesh() const noexcept { return *mesh_; }
  int degree() const noexcept { return degree_; }
  int block_size() const noexcept { return modal_dim(degree_); }
  int size() const noexcept { return static_cast<int>(coeffs_.size()); }

  const Eigen::VectorXd& coefficients() const noexcept { return coeffs_; }
  Eigen::VectorXd& coefficients() noexcept { return coeffs_; }
  auto block(int K) { return coeffs_.segment(K * block_size(), block_size()); }
  auto block(int K) const { return coeffs_.segment(K * block_size(), block_size()); }

  /// Value at p of the polynomial living on K (its analytic extension if p is outside K).
  double value(int K, const Point& p) const;

  double integral() const;
  double integral(int K) const;
  double l2_norm() const { return coeffs_.norm(); }
  double l2_norm(int K) const { return block(K).norm(); }
  double dot(const BrokenPolynomial& other) const { return coeffs_.dot(other.coeffs_); }

private:
  const Mesh* mesh_;
  int degree_;
  Eigen::VectorXd coeffs_;
};

/// Values of the modal basis of triangle K at p, scaled by 1/sqrt|K|.
Eigen::VectorXd modal_values(const Mesh& mesh, int K, int degree, const Point& p);

/// L2 projection of f onto piecewise polynomials of degree d, with a
/// quadrature of the given exactness (default 2d + 4).
BrokenPolynomial project(const Mesh& mesh, int degree, const std::function<double(const Point&)>& f,
                         int quad_degree = -1);

/// Critical function b_{k-1,z}, degree k - 1, supported on the patch of z.
BrokenPolynomial critical_function(const Mesh& mesh, int z, int k);

/// q minus its mean over the domain.
BrokenPolynomial mean_value_zero(const BrokenPolynomial& q);

/// Coefficient vector of the constant function 1.
Eigen::VectorXd constant_coefficients(const Mesh& mesh, int degree);

/// Analytic extension of q restricted to K evaluated at y.
inline double extension_eval(const BrokenPolynomial& q, int K, const Point& y) { return q.value(K, y); }

}  // namespace svstokes
