#include "svstokes/stokes.hpp"

#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

#include "svstokes/errors.hpp"
#include "svstokes/quadrature.hpp"

namespace svstokes {
namespace {

// Shape data of one rule, identical for every triangle.
struct ShapeTable {
  QuadratureRule rule;
  std::vector<Eigen::VectorXd> values;
  std::vector<Eigen::MatrixX3d> bary_derivs;
  std::vector<Eigen::VectorXd> modal;  // reference modal values, degree k - 1
};

ShapeTable shape_table(const VelocitySpace& V, int degree) {
  ShapeTable s;
  s.rule = quadrature(degree);
  for (const auto& b : s.rule.points) {
    s.values.push_back(V.shape_values(b));
    s.bary_derivs.push_back(V.shape_bary_derivatives(b));
    s.modal.push_back(modal_eval(V.degree() - 1, b(1), b(2)));
  }
  return s;
}

int dof(const VelocitySpace& V, int node, int component) {
  const int f = V.free_index(node);
  if (f < 0) return -1;
  return f + component * V.num_free_nodes();
}

Point map_point(const TrianglePoints& T, const Eigen::Vector3d& b) { return b(0) * T[0] + b(1) * T[1] + b(2) * T[2]; }

}  // namespace

StokesMatrices assemble(const VelocitySpace& V) {
  const Mesh& mesh = V.mesh();
  const int k = V.degree();
  const int L = V.local_size();
  const int P = modal_dim(k - 1);
  const ShapeTable tab = shape_table(V, 2 * k);
  std::vector<Eigen::Triplet<double>> a_trip, d_trip, h_trip;

  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double area = mesh.area(t);
    const Eigen::Matrix<double, 3, 2> G = barycentric_gradients(mesh, t);
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(L, L);
    Eigen::MatrixXd Ms = Eigen::MatrixXd::Zero(L, L);
    Eigen::MatrixXd Dx = Eigen::MatrixXd::Zero(P, L);
    Eigen::MatrixXd Dy = Eigen::MatrixXd::Zero(P, L);
    for (int q = 0; q < tab.rule.size(); ++q) {
      const double w = area * tab.rule.weights[q];
      const Eigen::MatrixX2d grads = tab.bary_derivs[q] * G;
      const Eigen::VectorXd psi = tab.modal[q] / std::sqrt(area);
      S.noalias() += w * grads * grads.transpose();
      Ms.noalias() += w * tab.values[q] * tab.values[q].transpose();
      Dx.noalias() += w * psi * grads.col(0).transpose();
      Dy.noalias() += w * psi * grads.col(1).transpose();
    }
    for (int c = 0; c < 2; ++c) {
      for (int i = 0; i < L; ++i) {
        const int gi = dof(V, V.node(t, i), c);
        if (gi < 0) continue;
        for (int j = 0; j < L; ++j) {
          const int gj = dof(V, V.node(t, j), c);
          if (gj < 0) continue;
          a_trip.emplace_back(gi, gj, S(i, j));
          h_trip.emplace_back(gi, gj, S(i, j) + Ms(i, j));
        }
        const Eigen::MatrixXd& Dc = c == 0 ? Dx : Dy;
        for (int m = 0; m < P; ++m) d_trip.emplace_back(t * P + m, gi, Dc(m, i));
      }
    }
  }
  StokesMatrices M;
  const int n = V.num_dofs();
  M.A.resize(n, n);
  M.A.setFromTriplets(a_trip.begin(), a_trip.end());
  M.H1.resize(n, n);
  M.H1.setFromTriplets(h_trip.begin(), h_trip.end());
  M.D.resize(mesh.num_triangles() * P, n);
  M.D.setFromTriplets(d_trip.begin(), d_trip.end());
  return M;
}

Eigen::VectorXd load_vector(const VelocitySpace& V, const VectorField& f) {
  const Mesh& mesh = V.mesh();
  const ShapeTable tab = shape_table(V, 2 * V.degree() + 2);
  Eigen::VectorXd F = Eigen::VectorXd::Zero(V.num_dofs());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TrianglePoints T = triangle_points(mesh, t);
    const double area = mesh.area(t);
    Eigen::MatrixX2d local = Eigen::MatrixX2d::Zero(V.local_size(), 2);
    for (int q = 0; q < tab.rule.size(); ++q) {
      const Eigen::Vector2d fx = f(map_point(T, tab.rule.points[q]));
      local += area * tab.rule.weights[q] * tab.values[q] * fx.transpose();
    }
    for (int i = 0; i < V.local_size(); ++i) {
      for (int c = 0; c < 2; ++c) {
        const int g = dof(V, V.node(t, i), c);
        if (g >= 0) F(g) += local(i, c);
      }
    }
  }
  return F;
}

StokesSolution solve_stokes(const VelocitySpace& V, const StokesMatrices& M, const PressureSpaceBasis& space,
                            const Eigen::VectorXd& F) {
  if (space.kind == SpaceKind::Complement) throw PreconditionError("cannot solve over a complement basis");
  if (space.k != V.degree() || space.mesh != &V.mesh())
    throw PreconditionError("pressure space does not match the velocity space");
  const int nv = V.num_dofs();
  const int np = space.full_dim();
  const int nc = static_cast<int>(space.constraints.rows());
  const int n = nv + np + nc;

  // B = E^T D stays sparse: the correction rows F are local.
  Eigen::SparseMatrix<double> B = M.D;
  if (space.G.cols() > 0) {
    const Eigen::MatrixXd GtD = space.G.transpose() * M.D;
    const Eigen::SparseMatrix<double> Ft = space.F.transpose();
    const Eigen::SparseMatrix<double> GtDs = GtD.sparseView(1.0, 0.0);
    B += Ft * GtDs;
  }

  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < M.A.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(M.A, c); it; ++it)
      trip.emplace_back(it.row(), it.col(), it.value());
  for (int c = 0; c < B.outerSize(); ++c) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(B, c); it; ++it) {
      trip.emplace_back(nv + it.row(), it.col(), -it.value());
      trip.emplace_back(it.col(), nv + it.row(), -it.value());
    }
  }
  for (int r = 0; r < space.constraints.outerSize(); ++r) {
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(space.constraints, r); it; ++it) {
      trip.emplace_back(nv + np + r, nv + it.col(), it.value());
      trip.emplace_back(nv + it.col(), nv + np + r, it.value());
    }
  }
  Eigen::SparseMatrix<double> K(n, n);
  K.setFromTriplets(trip.begin(), trip.end());
  K.makeCompressed();

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs.head(nv) = F;

  double norm = 0.0;
  {
    Eigen::VectorXd rows = Eigen::VectorXd::Zero(n);
    for (int c = 0; c < K.outerSize(); ++c)
      for (Eigen::SparseMatrix<double>::InnerIterator it(K, c); it; ++it) rows(it.row()) += std::abs(it.value());
    norm = rows.maxCoeff();
  }

  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(K);
  if (lu.info() != Eigen::Success) throw SingularSystem("factorization failed; unconstrained singular vertices?", 0.0);

  // Inverse iteration for the smallest singular value of K.
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd x(n);
  for (int i = 0; i < n; ++i) x(i) = gauss(rng);
  x.normalize();
  double smallest = 0.0;
  for (int it = 0; it < 12; ++it) {
    Eigen::VectorXd y = lu.solve(x);
    const double g = y.norm();
    if (!std::isfinite(g) || g == 0.0) {
      smallest = 0.0;
      break;
    }
    smallest = 1.0 / g;
    x = y / g;
  }
  if (smallest < 1e-10 * norm)
    throw SingularSystem("discrete inf-sup constant vanishes; singular vertices not constrained?", smallest / norm);

  const Eigen::VectorXd sol = lu.solve(rhs);
  const double rn = rhs.norm();
  const double residual = rn > 0 ? (K * sol - rhs).norm() / rn : (K * sol).norm();

  StokesSolution out{sol.head(nv), BrokenPolynomial(V.mesh(), V.degree() - 1), sol.segment(nv, np), {}};
  out.pressure.coefficients() = space.apply_E(out.reduced);
  out.stats.velocity_dofs = nv;
  out.stats.pressure_dofs = space.dim();
  out.stats.constraint_rows = nc;
  out.stats.system_size = n;
  out.stats.residual = residual;
  out.stats.smallest_singular = smallest / norm;
  return out;
}

BrokenPolynomial postprocess_pressure(const StokesSolution& sol, const CorrectionFunctional& func) {
  BrokenPolynomial p = sol.pressure;
  for (int i = 0; i < func.size(); ++i) {
    const double fz = func.f(i, sol.pressure);
    p.coefficients() += fz * mean_value_zero(func.entries()[static_cast<std::size_t>(i)].critical).coefficients();
  }
  return p;
}

BrokenPolynomial divergence(const VelocitySpace& V, const StokesMatrices& M, const Eigen::VectorXd& u) {
  return BrokenPolynomial(V.mesh(), V.degree() - 1, M.D * u);
}

double divergence_norm(const StokesMatrices& M, const Eigen::VectorXd& u) { return (M.D * u).norm(); }
double divergence_norm(const StokesMatrices& M, const StokesSolution& sol) { return divergence_norm(M, sol.velocity); }

double gradient_norm(const StokesMatrices& M, const Eigen::VectorXd& u) {
  return std::sqrt(std::max(0.0, u.dot(M.A * u)));
}

double atz_div(const VelocitySpace& V, const StokesMatrices& M, const Eigen::VectorXd& v, int z) {
  return functional_Atz(divergence(V, M, v), V.mesh().patch(z));
}

double patch_gradient_norm(const VelocitySpace& V, const Eigen::VectorXd& v, int z) {
  const Mesh& mesh = V.mesh();
  const ShapeTable tab = shape_table(V, 2 * V.degree());
  double s = 0.0;
  for (int t : mesh.patch(z).triangles) {
    const Eigen::Matrix<double, 3, 2> G = barycentric_gradients(mesh, t);
    Eigen::MatrixX2d local(V.local_size(), 2);
    for (int i = 0; i < V.local_size(); ++i)
      for (int c = 0; c < 2; ++c) {
        const int g = dof(V, V.node(t, i), c);
        local(i, c) = g >= 0 ? v(g) : 0.0;
      }
    for (int q = 0; q < tab.rule.size(); ++q) {
      const Eigen::Matrix2d grad = local.transpose() * (tab.bary_derivs[q] * G);
      s += mesh.area(t) * tab.rule.weights[q] * grad.squaredNorm();
    }
  }
  return std::sqrt(s);
}

InfSupResult infsup_estimate(const VelocitySpace& V, const StokesMatrices& M, const PressureSpaceBasis& space) {
  if (!space.has_basis()) throw PreconditionError("inf-sup estimate needs an explicit pressure basis");
  if (space.k != V.degree() || M.D.cols() != V.num_dofs())
    throw PreconditionError("pressure space does not match the velocity space");
  const Eigen::MatrixXd& P = space.basis;
  const Eigen::MatrixXd BtP = Eigen::MatrixXd(M.D.transpose() * P);  // nv x dim
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> chol(M.H1);
  if (chol.info() != Eigen::Success) throw SingularSystem("H1 Gram matrix not positive definite", 0.0);
  const Eigen::MatrixXd X = chol.solve(BtP);
  Eigen::MatrixXd S = BtP.transpose() * X;
  S = 0.5 * (S + S.transpose()).eval();
  const Eigen::MatrixXd Mp = P.transpose() * P;
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Mp);
  if (es.info() != Eigen::Success) throw SingularSystem("generalized eigenproblem failed", 0.0);
  InfSupResult r;
  r.lambda_min = es.eigenvalues().minCoeff();
  r.lambda_max = es.eigenvalues().maxCoeff();
  r.singular = r.lambda_min <= 1e-10 * r.lambda_max;
  r.beta = std::sqrt(std::max(0.0, r.lambda_min));
  return r;
}

Eigen::Vector2d velocity_value(const VelocitySpace& V, const Eigen::VectorXd& u, int t, const Point& p) {
  const Eigen::Vector3d b = barycentric(V.mesh(), t, p);
  const Eigen::VectorXd N = V.shape_values(b);
  Eigen::Vector2d out = Eigen::Vector2d::Zero();
  for (int i = 0; i < V.local_size(); ++i)
    for (int c = 0; c < 2; ++c) {
      const int g = dof(V, V.node(t, i), c);
      if (g >= 0) out(c) += N(i) * u(g);
    }
  return out;
}

double velocity_h1_error(const VelocitySpace& V, const Eigen::VectorXd& u, const TensorField& grad_exact) {
  const Mesh& mesh = V.mesh();
  const ShapeTable tab = shape_table(V, 2 * V.degree() + 4);
  double s = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TrianglePoints T = triangle_points(mesh, t);
    const Eigen::Matrix<double, 3, 2> G = barycentric_gradients(mesh, t);
    Eigen::MatrixX2d local(V.local_size(), 2);
    for (int i = 0; i < V.local_size(); ++i)
      for (int c = 0; c < 2; ++c) {
        const int g = dof(V, V.node(t, i), c);
        local(i, c) = g >= 0 ? u(g) : 0.0;
      }
    for (int q = 0; q < tab.rule.size(); ++q) {
      const Eigen::Matrix2d grad_h = local.transpose() * (tab.bary_derivs[q] * G);
      const Eigen::Matrix2d diff = grad_exact(map_point(T, tab.rule.points[q])) - grad_h;
      s += mesh.area(t) * tab.rule.weights[q] * diff.squaredNorm();
    }
  }
  return std::sqrt(s);
}

double pressure_l2_error(const BrokenPolynomial& p_h, const ScalarField& p) {
  const Mesh& mesh = p_h.mesh();
  const QuadratureRule rule = quadrature(2 * p_h.degree() + 8);
  std::vector<Eigen::VectorXd> phi;
  for (const auto& b : rule.points) phi.push_back(modal_eval(p_h.degree(), b(1), b(2)));
  double mean = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TrianglePoints T = triangle_points(mesh, t);
    for (int q = 0; q < rule.size(); ++q) mean += mesh.area(t) * rule.weights[q] * p(map_point(T, rule.points[q]));
  }
  mean /= mesh.domain_area();
  double s = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const TrianglePoints T = triangle_points(mesh, t);
    const double area = mesh.area(t);
    for (int q = 0; q < rule.size(); ++q) {
      const double ph = phi[q].dot(p_h.block(t)) / std::sqrt(area);
      const double d = p(map_point(T, rule.points[q])) - mean - ph;
      s += area * rule.weights[q] * d * d;
    }
  }
  return std::sqrt(s);
}

}  // namespace svstokes
