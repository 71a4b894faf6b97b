#pragma once

#include <vector>

#include <Eigen/Core>

namespace svstokes {

/// Rule on the reference triangle. Points are barycentric, weights sum to 1,
/// so the integral over K is |K| * sum_i w_i f(x_i).
struct QuadratureRule {
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;
  int degree = 0;

  int size() const noexcept { return static_cast<int>(weights.size()); }
};

/// Gauss-Legendre nodes and weights on [0, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Collapsed (Duffy) tensor Gauss rule exact for polynomials of total degree
/// `degree`, with ceil((degree + 2) / 2) points per direction.
QuadratureRule quadrature(int degree);

}  // namespace svstokes
