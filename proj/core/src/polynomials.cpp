#include "svstokes/polynomials.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "svstokes/errors.hpp"

namespace svstokes {

double jacobi_eval(int n, double alpha, double beta, double x) {
  if (n < 0) throw InvalidParameter("negative Jacobi degree");
  if (n == 0) return 1.0;
  double p0 = 1.0;
  double p1 = 0.5 * (alpha - beta + (alpha + beta + 2.0) * x);
  for (int m = 1; m < n; ++m) {
    const double a = m + alpha, b = m + beta, c = 2.0 * m + alpha + beta;
    const double d1 = 2.0 * (m + 1) * (c - m + 1) * c;
    const double d2 = (c + 1) * (alpha * alpha - beta * beta);
    const double d3 = c * (c + 1) * (c + 2);
    const double d4 = 2.0 * a * b * (c + 2);
    const double p2 = ((d2 + d3 * x) * p1 - d4 * p0) / d1;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

double chebyshev_eval(int k, double y) {
  if (k < 0) throw InvalidParameter("negative Chebyshev degree");
  if (k == 0) return 1.0;
  double t0 = 1.0, t1 = y;
  for (int m = 1; m < k; ++m) {
    const double t2 = 2.0 * y * t1 - t0;
    t0 = t1;
    t1 = t2;
  }
  return t1;
}

double gamma_k_power_branch(int k, double lambda) {
  return 0.5 * (std::pow(2.0, k) + 1.0) * std::pow(1.0 + lambda, k);
}

double gamma_k_exponential_branch(int k, double lambda) {
  return std::exp(0.5 * lambda * k * k);
}

double gamma_k(int k, double lambda) {
  return std::min(gamma_k_power_branch(k, lambda), gamma_k_exponential_branch(k, lambda));
}

Eigen::Vector2d reference_coordinates(const TrianglePoints& K, const Point& p) {
  Eigen::Matrix2d J;
  J.col(0) = K[1] - K[0];
  J.col(1) = K[2] - K[0];
  const double det = J.determinant();
  const double scale = std::max((K[1] - K[0]).squaredNorm(), (K[2] - K[0]).squaredNorm());
  if (std::abs(det) <= 1e-14 * scale) throw DegenerateTriangle(-1);
  return J.inverse() * (p - K[0]);
}

Eigen::Vector3d barycentric(const TrianglePoints& K, const Point& p) {
  const Eigen::Vector2d r = reference_coordinates(K, p);
  return {1.0 - r.x() - r.y(), r.x(), r.y()};
}

Eigen::Vector3d barycentric(const Mesh& mesh, int K, const Point& p) {
  return barycentric(triangle_points(mesh, K), p);
}

void modal_eval(int d, double xi, double eta, Eigen::Ref<Eigen::VectorXd> out) {
  // Collapsed coordinates in homogeneous form: P_p(x/t) t^p with x = 2 xi + eta - 1
  // and t = 1 - eta stays polynomial, so no division by t is needed.
  const double x = 2.0 * xi + eta - 1.0;
  const double t = 1.0 - eta;
  const double s = 2.0 * eta - 1.0;
  Eigen::VectorXd Q(d + 1);
  Q(0) = 1.0;
  if (d >= 1) Q(1) = x;
  for (int n = 1; n < d; ++n) Q(n + 1) = ((2.0 * n + 1.0) * x * Q(n) - n * t * t * Q(n - 1)) / (n + 1.0);
  int idx = 0;
  for (int n = 0; n <= d; ++n) {
    for (int q = 0; q <= n; ++q) {
      const int p = n - q;
      const double norm = std::sqrt((2.0 * p + 1.0) * (p + q + 1.0));
      out(idx++) = norm * Q(p) * jacobi_eval(q, 2.0 * p + 1.0, 0.0, s);
    }
  }
}

Eigen::VectorXd modal_eval(int d, double xi, double eta) {
  Eigen::VectorXd v(modal_dim(d));
  modal_eval(d, xi, eta, v);
  return v;
}

}  // namespace svstokes
