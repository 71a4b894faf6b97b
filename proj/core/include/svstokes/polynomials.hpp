#pragma once

#include <Eigen/Core>

#include "svstokes/geometry.hpp"
#include "svstokes/mesh.hpp"

namespace svstokes {

/// Jacobi polynomial P_n^{(alpha,beta)}(x) by the three-term recurrence.
double jacobi_eval(int n, double alpha, double beta, double x);

/// P_n^{(0,2)}, the family used by the critical functions.
inline double jacobi_eval(int n, double x) { return jacobi_eval(n, 0.0, 2.0, x); }

/// Chebyshev polynomial of the first kind.
double chebyshev_eval(int k, double y);

/// min{(2^k+1)/2 (1+lambda)^k, exp(lambda k^2 / 2)}.
double gamma_k(int k, double lambda);
double gamma_k_power_branch(int k, double lambda);
double gamma_k_exponential_branch(int k, double lambda);

/// Barycentric coordinates of p with respect to K; extended affinely outside K.
Eigen::Vector3d barycentric(const TrianglePoints& K, const Point& p);
Eigen::Vector3d barycentric(const Mesh& mesh, int K, const Point& p);

/// Number of modal functions of degree <= d.
inline int modal_dim(int d) { return (d + 1) * (d + 2) / 2; }

/// Modal (Dubiner) basis on the reference triangle with vertices (0,0),
/// (1,0), (0,1), orthonormal for the area-normalized measure (integral of 1
/// equals 1). Ordered by total degree, then by the degree in the second
/// coordinate. Polynomial everywhere, so evaluation outside the reference
/// triangle gives the analytic extension.
void modal_eval(int d, double xi, double eta, Eigen::Ref<Eigen::VectorXd> out);
Eigen::VectorXd modal_eval(int d, double xi, double eta);

/// Reference coordinates (xi, eta) of p in K (affine inverse, valid outside K).
Eigen::Vector2d reference_coordinates(const TrianglePoints& K, const Point& p);

}  // namespace svstokes
