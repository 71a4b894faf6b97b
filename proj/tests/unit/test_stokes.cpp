#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "svstokes/errors.hpp"
#include "svstokes/experiments.hpp"
#include "svstokes/manufactured.hpp"
#include "svstokes/report.hpp"
#include "svstokes/stokes.hpp"

using namespace svstokes;

namespace {

Eigen::VectorXd random_velocity(const VelocitySpace& V, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXd v(V.num_dofs());
  for (int i = 0; i < v.size(); ++i) v(i) = g(rng);
  return v;
}

// div v on triangle t at its local vertex i, by differentiating the Lagrange basis.
double div_at_vertex(const VelocitySpace& V, const Eigen::VectorXd& v, int t, int i) {
  const Eigen::Matrix<double, 3, 2> grads = barycentric_gradients(V.mesh(), t);
  const Eigen::MatrixX3d dphi = V.shape_bary_derivatives(Eigen::Vector3d::Unit(i));
  double div = 0.0;
  for (int a = 0; a < V.local_size(); ++a) {
    const int f = V.free_index(V.node(t, a));
    if (f < 0) continue;
    const Eigen::RowVector2d g = dphi.row(a) * grads;
    div += v(f) * g(0) + v(f + V.num_free_nodes()) * g(1);
  }
  return div;
}

struct Problem {
  Mesh mesh;
  VelocitySpace V;
  StokesMatrices M;
  Problem(Mesh m, int k) : mesh(std::move(m)), V(mesh, k), M(assemble(V)) {}
};

}  // namespace

TEST(Assemble, StiffnessIsSymmetricPositiveDefinite) {
  const Problem s(generate_family(MeshFamily::StructuredSquare, 2), 4);
  const Eigen::MatrixXd A(s.M.A);
  EXPECT_LE((A - A.transpose()).cwiseAbs().maxCoeff(), 1e-12 * A.cwiseAbs().maxCoeff());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(A);
  EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
}

TEST(Assemble, DivergenceHasZeroMean) {
  const Problem s(generate_family(MeshFamily::PerturbedCrisscross, 2, 0.3), 4);
  for (unsigned seed : {1u, 2u, 3u}) {
    const Eigen::VectorXd v = random_velocity(s.V, seed);
    const BrokenPolynomial d = divergence(s.V, s.M, v);
    EXPECT_LE(std::abs(d.integral()), 1e-12 * d.l2_norm());
    EXPECT_NEAR(d.l2_norm(), divergence_norm(s.M, v), 1e-12 * d.l2_norm());
  }
}

TEST(Assemble, SharedNodesAreContinuous) {
  const Problem s(generate_family(MeshFamily::LShape, 2), 4);
  const Eigen::VectorXd v = random_velocity(s.V, 9);
  const auto& lat = s.V.lattice();
  std::vector<Eigen::Vector2d> seen(s.V.num_nodes(), Eigen::Vector2d::Constant(NAN));
  for (int t = 0; t < s.mesh.num_triangles(); ++t)
    for (int a = 0; a < s.V.local_size(); ++a) {
      const Eigen::Vector3d b = Eigen::Vector3d(lat[a][0], lat[a][1], lat[a][2]) / s.V.degree();
      const Point p = b(0) * s.mesh.vertex(s.mesh.triangle(t)[0]) + b(1) * s.mesh.vertex(s.mesh.triangle(t)[1]) +
                      b(2) * s.mesh.vertex(s.mesh.triangle(t)[2]);
      const Eigen::Vector2d val = velocity_value(s.V, v, t, p);
      const int n = s.V.node(t, a);
      if (s.V.boundary_node(n)) EXPECT_LE(val.norm(), 1e-12);
      if (!std::isnan(seen[n](0))) EXPECT_LE((seen[n] - val).norm(), 1e-12);
      seen[n] = val;
    }
}

TEST(Solve, ZeroLoadGivesZeroSolution) {
  const Problem s(generate_family(MeshFamily::StructuredSquare, 2), 4);
  const PressureSpaceBasis space = build_reduced_space(s.mesh, 4, 0.0, false);
  const StokesSolution sol = solve_stokes(s.V, s.M, space, Eigen::VectorXd::Zero(s.V.num_dofs()));
  EXPECT_EQ(sol.velocity.norm(), 0.0);
  EXPECT_EQ(sol.pressure.l2_norm(), 0.0);
}

TEST(Solve, FullSpaceOnCrisscrossIsSingular) {
  const Problem s(generate_family(MeshFamily::Crisscross, 1), 4);
  const PressureSpaceBasis full = build_full_space(s.mesh, 4);
  const ManufacturedCase mc = manufactured("M1", 4);
  EXPECT_THROW(solve_stokes(s.V, s.M, full, load_vector(s.V, mc.f)), SingularSystem);
  const InfSupResult r = infsup_estimate(s.V, s.M, full);
  EXPECT_TRUE(r.singular);
  EXPECT_LE(r.lambda_min, 1e-10 * r.lambda_max);
}

TEST(Solve, ScottVogeliusIsDivergenceFreeAndStable) {
  const Problem s(generate_family(MeshFamily::StructuredSquare, 2), 4);
  const PressureSpaceBasis space = build_reduced_space(s.mesh, 4, 0.0);
  const ManufacturedCase mc = manufactured("M1", 4);
  const StokesSolution sol = solve_stokes(s.V, s.M, space, load_vector(s.V, mc.f));
  EXPECT_LE(sol.stats.residual, 1e-9);
  EXPECT_LE(divergence_norm(s.M, sol), 1e-9 * gradient_norm(s.M, sol.velocity));
  EXPECT_LE(std::abs(sol.pressure.integral()), 1e-10 * sol.pressure.l2_norm());
  const InfSupResult r = infsup_estimate(s.V, s.M, space);
  EXPECT_FALSE(r.singular);
  EXPECT_GT(r.beta, 0.0);
}

TEST(Solve, PostprocessingEquivalence) {
  for (FunctionalVariant v : {FunctionalVariant::Point, FunctionalVariant::Weighted}) {
    const Problem s(generate_family(MeshFamily::LShape, 2), 4);
    const PressureSpaceBasis reduced = build_reduced_space(s.mesh, 4, 0.0, false);
    const CorrectionFunctional func(s.mesh, 4, 0.0, v);
    const PressureSpaceBasis mod = inject_modified(reduced, func);
    const Eigen::VectorXd F = load_vector(s.V, manufactured("M1", 4).f);
    const StokesSolution plain = solve_stokes(s.V, s.M, reduced, F);
    const StokesSolution modified = solve_stokes(s.V, s.M, mod, F);
    const BrokenPolynomial post = postprocess_pressure(plain, func);
    EXPECT_LE((plain.velocity - modified.velocity).norm(), 1e-9 * plain.velocity.norm());
    EXPECT_LE((post.coefficients() - modified.pressure.coefficients()).norm(), 1e-9 * post.l2_norm());
    EXPECT_LE(std::abs(post.integral()), 1e-10 * post.l2_norm());
    EXPECT_LE(divergence_norm(s.M, modified), 1e-9 * gradient_norm(s.M, modified.velocity));
  }
  // No super-critical vertices: post-processing is the identity.
  const Problem c(generate_family(MeshFamily::Crisscross, 2), 4);
  const PressureSpaceBasis reduced = build_reduced_space(c.mesh, 4, 0.0, false);
  const StokesSolution sol = solve_stokes(c.V, c.M, reduced, load_vector(c.V, manufactured("M1", 4).f));
  const BrokenPolynomial post = postprocess_pressure(sol, CorrectionFunctional(c.mesh, 4, 0.0, FunctionalVariant::Point));
  EXPECT_EQ((post.coefficients() - sol.pressure.coefficients()).norm(), 0.0);
}

TEST(Solve, DivergenceOrthogonalToModifiedSpace) {
  const Mesh m = generate_family(MeshFamily::PerturbedCrisscross, 2, 0.3);
  const double eta = center_theta(m);
  const Problem s(m, 4);
  const PressureSpaceBasis reduced = build_reduced_space(s.mesh, 4, eta);
  const PressureSpaceBasis mod = inject_modified(reduced, CorrectionFunctional(s.mesh, 4, eta, FunctionalVariant::Point));
  const StokesSolution sol = solve_stokes(s.V, s.M, mod, load_vector(s.V, manufactured("M1", 4).f));
  const Eigen::VectorXd div = s.M.D * sol.velocity;
  EXPECT_GT(div.norm(), 1e-9 * gradient_norm(s.M, sol.velocity));
  const double scale = div.norm() + gradient_norm(s.M, sol.velocity);
  for (int c = 0; c < mod.basis.cols(); ++c)
    EXPECT_LE(std::abs(div.dot(mod.basis.col(c))), 1e-9 * scale * mod.basis.col(c).norm());
}

TEST(AtzDiv, BruteForce) {
  const Problem s(generate_family(MeshFamily::PerturbedCrisscross, 2, 0.3), 4);
  EXPECT_EQ(atz_div(s.V, s.M, Eigen::VectorXd::Zero(s.V.num_dofs()), 4), 0.0);
  const Eigen::VectorXd v = random_velocity(s.V, 5);
  for (int z = 0; z < s.mesh.num_vertices(); ++z) {
    const VertexPatch& p = s.mesh.patch(z);
    double brute = 0.0;
    for (int j = 0; j < p.size(); ++j) {
      const int t = p.triangles[j];
      brute += ((j + 1) % 2 ? -1.0 : 1.0) * div_at_vertex(s.V, v, t, s.mesh.local_index(t, z));
    }
    EXPECT_NEAR(atz_div(s.V, s.M, v, z), brute, 1e-9 * (1 + std::abs(brute)));
  }
  // A quartic bubble is interpolated exactly, so its divergence is continuous
  // and the alternating sums at even vertices cancel.
  const Problem c(generate_family(MeshFamily::Crisscross, 2), 4);
  Eigen::VectorXd w(c.V.num_dofs());
  for (int n = 0; n < c.V.num_nodes(); ++n) {
    const int f = c.V.free_index(n);
    if (f < 0) continue;
    const Point& x = c.V.node_point(n);
    const double bubble = x.x() * (1 - x.x()) * x.y() * (1 - x.y());
    w(f) = bubble;
    w(f + c.V.num_free_nodes()) = -2.0 * bubble;
  }
  for (int z = 0; z < c.mesh.num_vertices(); ++z)
    if (!c.mesh.patch(z).boundary && c.mesh.patch(z).size() % 2 == 0) EXPECT_NEAR(atz_div(c.V, c.M, w, z), 0.0, 1e-10);
}

TEST(InfSup, ModifiedBoundedByReducedOverCf) {
  const Problem s(generate_family(MeshFamily::StructuredSquare, 2), 4);
  const PressureSpaceBasis reduced = build_reduced_space(s.mesh, 4, 0.0);
  for (FunctionalVariant v : {FunctionalVariant::Point, FunctionalVariant::Weighted}) {
    const CorrectionFunctional func(s.mesh, 4, 0.0, v);
    const PressureSpaceBasis mod = inject_modified(reduced, func);
    const double Cf = modification_constants(reduced, func).C_f;
    const double br = infsup_estimate(s.V, s.M, reduced).beta;
    const double bm = infsup_estimate(s.V, s.M, mod).beta;
    EXPECT_GE(bm, br / Cf * (1 - 1e-10));
  }
}

TEST(Report, SolutionCsv) {
  const Problem s(generate_family(MeshFamily::StructuredSquare, 2), 4);
  const PressureSpaceBasis space = build_reduced_space(s.mesh, 4, 0.0, false);
  const StokesSolution sol = solve_stokes(s.V, s.M, space, load_vector(s.V, manufactured("M1", 4).f));
  const std::string csv = solution_csv(s.V, sol);
  std::istringstream in(csv);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, s.mesh.num_vertices() + 1);
  EXPECT_EQ(csv, solution_csv(s.V, sol));
}
