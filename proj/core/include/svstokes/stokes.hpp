#pragma once

#include <functional>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "svstokes/broken_polynomial.hpp"
#include "svstokes/pressure_spaces.hpp"
#include "svstokes/velocity_space.hpp"

namespace svstokes {

using ScalarField = std::function<double(const Point&)>;
using VectorField = std::function<Eigen::Vector2d(const Point&)>;
using TensorField = std::function<Eigen::Matrix2d(const Point&)>;  // (i, j) = d u_i / d x_j

struct StokesMatrices {
  Eigen::SparseMatrix<double> A;   // (grad u, grad v) on S_{k,0}^2
  Eigen::SparseMatrix<double> D;   // velocity -> modal coefficients of div u (degree k - 1)
  Eigen::SparseMatrix<double> H1;  // full H1 inner product on S_{k,0}^2
};

/// Element integrals use a rule of exactness 2k.
StokesMatrices assemble(const VelocitySpace& V);

/// (f, v) for every velocity dof, exactness 2k + 2.
Eigen::VectorXd load_vector(const VelocitySpace& V, const VectorField& f);

struct SolverStats {
  int velocity_dofs = 0;
  int pressure_dofs = 0;
  int constraint_rows = 0;
  int system_size = 0;
  double residual = 0.0;          // relative residual of the block system
  double smallest_singular = 0.0;  // inverse-iteration estimate, relative to the matrix norm
};

struct StokesSolution {
  Eigen::VectorXd velocity;
  BrokenPolynomial pressure;  // E q, full broken coefficients
  Eigen::VectorXd reduced;    // q in the underlying reduced space
  SolverStats stats;
};

/// Solves a(u, v) - (p, div v) = F(v), (div u, r) = 0 for all r in the space.
/// The space constraints enter through Lagrange multipliers, so the block
/// matrix is nonsingular exactly when the discrete inf-sup constant is
/// positive. Throws SingularSystem otherwise.
StokesSolution solve_stokes(const VelocitySpace& V, const StokesMatrices& M, const PressureSpaceBasis& space,
                            const Eigen::VectorXd& F);

/// p*_M = p_M + sum_z f_z(p_M) (b_{k-1,z})_mvz.
BrokenPolynomial postprocess_pressure(const StokesSolution& sol, const CorrectionFunctional& func);

BrokenPolynomial divergence(const VelocitySpace& V, const StokesMatrices& M, const Eigen::VectorXd& u);
/// ||div u||_{L2}, exact because the modal basis is orthonormal.
double divergence_norm(const StokesMatrices& M, const Eigen::VectorXd& u);
double divergence_norm(const StokesMatrices& M, const StokesSolution& sol);
/// ||grad u||_{L2}.
double gradient_norm(const StokesMatrices& M, const Eigen::VectorXd& u);

/// A_{T,z}(div v).
double atz_div(const VelocitySpace& V, const StokesMatrices& M, const Eigen::VectorXd& v, int z);

/// ||grad v||_{L2(omega_z)}.
double patch_gradient_norm(const VelocitySpace& V, const Eigen::VectorXd& v, int z);

struct InfSupResult {
  double beta = 0.0;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  bool singular = false;  // lambda_min <= 1e-10 lambda_max
};

/// Smallest eigenvalue of (P^T D) H1^{-1} (P^T D)^T c = lambda P^T P c for the
/// explicit basis P of the space. Dense; meant for small meshes.
InfSupResult infsup_estimate(const VelocitySpace& V, const StokesMatrices& M, const PressureSpaceBasis& space);

/// Velocity value at p inside triangle t.
Eigen::Vector2d velocity_value(const VelocitySpace& V, const Eigen::VectorXd& u, int t, const Point& p);

/// ||grad(u - u_h)||_{L2}.
double velocity_h1_error(const VelocitySpace& V, const Eigen::VectorXd& u, const TensorField& grad_exact);
/// ||(p - mean p) - p_h||_{L2}.
double pressure_l2_error(const BrokenPolynomial& p_h, const ScalarField& p);

}  // namespace svstokes
