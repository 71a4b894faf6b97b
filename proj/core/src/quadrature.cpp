#include "svstokes/quadrature.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "svstokes/errors.hpp"

namespace svstokes {

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw InvalidParameter("Gauss rule needs at least one point");
  // Golub-Welsch on the Legendre Jacobi matrix.
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    J(i, i - 1) = J(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  nodes.resize(n);
  weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    nodes[i] = 0.5 * (es.eigenvalues()(i) + 1.0);
    weights[i] = v0 * v0;  // sums to 1 on [0, 1]
  }
}

QuadratureRule quadrature(int degree) {
  if (degree < 0) throw InvalidParameter("negative quadrature degree");
  const int n = (degree + 3) / 2;  // ceil((degree + 2) / 2)
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  QuadratureRule rule;
  rule.degree = degree;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double eta = x[j];
      const double xi = x[i] * (1.0 - eta);
      rule.points.emplace_back(1.0 - xi - eta, xi, eta);
      rule.weights.push_back(2.0 * w[i] * w[j] * (1.0 - eta));
    }
  }
  return rule;
}

}  // namespace svstokes
