#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "svstokes/criticality.hpp"
#include "svstokes/errors.hpp"
#include "svstokes/experiments.hpp"
#include "svstokes/pressure_spaces.hpp"

using namespace svstokes;

namespace {

double binom2(int k) { return 0.5 * k * (k + 1); }

// Dense constraint matrix built from the functionals applied to unit coefficient vectors.
int brute_force_dim(const Mesh& m, int k, double eta) {
  const int d = k - 1;
  const int n = m.num_triangles() * modal_dim(d);
  const std::vector<int> crit = critical_sets(m, eta).critical;
  Eigen::MatrixXd C(crit.size() + 1, n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Unit(n, i);
    const BrokenPolynomial q(m, d, e);
    for (std::size_t r = 0; r < crit.size(); ++r) C(r, i) = functional_Atz(q, m.patch(crit[r]));
    C(crit.size(), i) = q.integral();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C);
  const Eigen::VectorXd s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) rank += s(i) > 1e-10 * s(0);
  return n - rank;
}

double smallest_singular_ratio(const Eigen::MatrixXd& B) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B);
  const Eigen::VectorXd s = svd.singularValues();
  return s(s.size() - 1) / s(0);
}

}  // namespace

TEST(Atz, Examples) {
  const Mesh L = generate_family(MeshFamily::LShape, 2);
  int origin = -1;
  for (int v = 0; v < L.num_vertices(); ++v)
    if (L.vertex(v).norm() < 1e-12) origin = v;
  ASSERT_EQ(L.patch(origin).size(), 3);
  const BrokenPolynomial one(L, 3, constant_coefficients(L, 3));
  EXPECT_NEAR(functional_Atz(one, L.patch(origin)), -1.0, 1e-13);

  // A globally continuous polynomial has zero alternating sum at even vertices.
  const Mesh cc = generate_family(MeshFamily::Crisscross, 2);
  const BrokenPolynomial smooth = project(cc, 3, [](const Point& x) { return x.x() * x.x() * x.y() - 0.3 * x.y() + 1; });
  for (int z = 0; z < cc.num_vertices(); ++z)
    if (cc.patch(z).size() % 2 == 0) EXPECT_NEAR(functional_Atz(smooth, cc.patch(z)), 0.0, 1e-12);

  for (int k = 4; k <= 6; ++k)
    for (int z = 0; z < cc.num_vertices(); ++z) {
      const BrokenPolynomial b = critical_function(cc, z, k);
      const double expect = binom2(k) * b.l2_norm() * b.l2_norm();
      EXPECT_NEAR(functional_Atz(b, cc.patch(z)), expect, 1e-10 * expect);
      const BrokenPolynomial same(cc, k - 1, Eigen::VectorXd(atz_row(cc, z, k - 1)));
      EXPECT_NEAR(same.dot(b), expect, 1e-10 * expect);
    }
}

TEST(ReducedSpace, DimensionsAgainstDenseRank) {
  const Mesh cc1 = generate_family(MeshFamily::Crisscross, 1);
  EXPECT_EQ(build_reduced_space(cc1, 4, 0.0).dim(), 38);
  EXPECT_EQ(brute_force_dim(cc1, 4, 0.0), 38);

  const Mesh ss1 = generate_family(MeshFamily::StructuredSquare, 1);
  EXPECT_EQ(build_reduced_space(ss1, 4, 0.0).dim(), brute_force_dim(ss1, 4, 0.0));

  for (MeshFamily f : {MeshFamily::StructuredSquare, MeshFamily::Crisscross, MeshFamily::LShape}) {
    const Mesh m = generate_family(f, 1);
    const PressureSpaceBasis s = build_reduced_space(m, 4, 1.0);
    EXPECT_EQ(s.dim(), brute_force_dim(m, 4, 1.0));
    EXPECT_EQ(s.basis.cols(), s.dim());
  }
}

TEST(ReducedSpace, ColumnsSatisfyConstraints) {
  const Mesh m = generate_family(MeshFamily::PerturbedCrisscross, 2, 0.3);
  const double eta = center_theta(m);
  for (int k : {4, 5}) {
    const PressureSpaceBasis s = build_reduced_space(m, k, eta);
    ASSERT_FALSE(s.constrained.empty());
    EXPECT_GT(smallest_singular_ratio(s.basis), 1e-10);
    for (int c = 0; c < s.basis.cols(); ++c) {
      const BrokenPolynomial q(m, k - 1, s.basis.col(c));
      for (int z : s.constrained) EXPECT_LE(std::abs(functional_Atz(q, m.patch(z))), 1e-11 * q.l2_norm());
      EXPECT_LE(std::abs(q.integral()), 1e-11 * q.l2_norm());
    }
    const Eigen::VectorXd r = Eigen::VectorXd::Random(s.full_dim());
    EXPECT_LE((s.project_reduced(r) - s.basis * (s.basis.transpose() * r)).norm(), 1e-11 * r.norm());
  }
}

TEST(ReducedSpace, RankDeficiencyIsReported) {
  // Every vertex of structured-square(1) constrained: rows interact.
  const Mesh m = generate_family(MeshFamily::StructuredSquare, 1);
  const PressureSpaceBasis s = build_reduced_space(m, 2, 1.0);
  EXPECT_EQ(s.dim(), brute_force_dim(m, 2, 1.0));
  if (s.constraints.rows() < static_cast<int>(s.constrained.size()) + 1) EXPECT_FALSE(s.diagnostics.empty());
}

TEST(CorrectionFunctional, Normalization) {
  for (FunctionalVariant v : {FunctionalVariant::Point, FunctionalVariant::Weighted}) {
    for (MeshFamily f : {MeshFamily::StructuredSquare, MeshFamily::LShape}) {
      const Mesh m = generate_family(f, 2);
      const CorrectionFunctional func(m, 4, 0.0, v);
      ASSERT_GT(func.size(), 0);
      for (int i = 0; i < func.size(); ++i) {
        const auto& e = func.entries()[i];
        EXPECT_NEAR(func.J(i, e.critical, e.triangles.Kz), 1.0, 1e-11);
      }
    }
  }
}

TEST(CorrectionFunctional, Examples) {
  const Mesh m = generate_family(MeshFamily::StructuredSquare, 3);
  const CorrectionFunctional point(m, 4, 0.0, FunctionalVariant::Point);
  const CorrectionFunctional weighted(m, 4, 0.0, FunctionalVariant::Weighted);
  const BrokenPolynomial global = project(m, 3, [](const Point& x) { return x.x() * x.y() * x.y() - x.x() + 0.5; });
  for (int i = 0; i < point.size(); ++i) {
    EXPECT_NEAR(point.f(i, global), 0.0, 1e-11);
    EXPECT_NEAR(weighted.f(i, global), 0.0, 1e-11);
    const auto& e = point.entries()[i];
    // K'_z lies outside the patch, so b vanishes there and f_z(b) = -1.
    EXPECT_NEAR(point.f(i, e.critical), -1.0, 1e-11);
    EXPECT_NEAR(f_z(e.critical, point, e.z), -1.0, 1e-11);
    EXPECT_NEAR(Eigen::VectorXd(point.f_row(i)).dot(e.critical.coefficients()), -1.0, 1e-11);
  }
  EXPECT_THROW(point.index_of(0), PreconditionError);

  const Mesh single({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  EXPECT_THROW(CorrectionFunctional(single, 4, 0.0, FunctionalVariant::Point), MissingCompanion);
  EXPECT_THROW(parse_variant("spline"), InvalidParameter);
}

TEST(ModifiedSpace, Properties) {
  for (FunctionalVariant v : {FunctionalVariant::Point, FunctionalVariant::Weighted}) {
    const Mesh m = generate_family(MeshFamily::StructuredSquare, 4);
    const PressureSpaceBasis reduced = build_reduced_space(m, 4, 0.0);
    const CorrectionFunctional func(m, 4, 0.0, v);
    const PressureSpaceBasis mod = inject_modified(reduced, func);
    const ModificationConstants cons = modification_constants(reduced, func);
    EXPECT_EQ(mod.dim(), reduced.dim());
    EXPECT_EQ(mod.basis.cols(), reduced.basis.cols());
    EXPECT_GT(smallest_singular_ratio(mod.basis), 1e-10);
    for (int c = 0; c < reduced.basis.cols(); ++c) {
      const Eigen::VectorXd q = reduced.basis.col(c);
      const Eigen::VectorXd Emq = mod.basis.col(c);
      EXPECT_NEAR(Emq.dot(q), q.squaredNorm(), 1e-10);
      EXPECT_LE(Emq.norm(), cons.C_f * q.norm() * (1 + 1e-12));
      EXPECT_LE((mod.apply_E(q) - Emq).norm(), 1e-12);
    }
  }
  // No super-critical vertices: E is the identity.
  const Mesh cc = generate_family(MeshFamily::Crisscross, 2);
  const PressureSpaceBasis reduced = build_reduced_space(cc, 4, 0.0);
  const PressureSpaceBasis mod = inject_modified(reduced, CorrectionFunctional(cc, 4, 0.0, FunctionalVariant::Point));
  EXPECT_EQ((mod.basis - reduced.basis).norm(), 0.0);
  EXPECT_THROW(inject_modified(mod, CorrectionFunctional(cc, 4, 0.0, FunctionalVariant::Point)), PreconditionError);
}

TEST(Riesz, DefiningPropertyAndOperatorNorm) {
  const Mesh m = generate_family(MeshFamily::LShape, 2);
  for (FunctionalVariant v : {FunctionalVariant::Point, FunctionalVariant::Weighted}) {
    const PressureSpaceBasis reduced = build_reduced_space(m, 4, 0.0);
    const CorrectionFunctional func(m, 4, 0.0, v);
    const Eigen::MatrixXd& B = reduced.basis;
    for (int i = 0; i < func.size(); ++i) {
      const int z = func.entries()[i].z;
      const BrokenPolynomial phi = riesz_representative(reduced, z, func);
      for (int c = 0; c < B.cols(); ++c) {
        const BrokenPolynomial q(m, 3, B.col(c));
        EXPECT_NEAR(phi.dot(q), func.f(i, q), 1e-10 * q.l2_norm());
      }
      // Rayleigh-quotient oracle: max (f.q)^2 / |q|^2 over the span of B.
      const Eigen::VectorXd g = B.transpose() * Eigen::VectorXd(func.f_row(i));
      const Eigen::MatrixXd G = B.transpose() * B;
      const double opnorm = std::sqrt(g.dot(G.ldlt().solve(g)));
      EXPECT_NEAR(phi.l2_norm(), opnorm, 1e-9 * opnorm);
    }
    EXPECT_THROW(riesz_representative(reduced, 1, func), PreconditionError);
  }
}

TEST(Complement, CardinalityOrthogonalityDecomposition) {
  struct Case {
    Mesh mesh;
    double eta;
  };
  std::vector<Case> cases;
  cases.push_back({generate_family(MeshFamily::StructuredSquare, 4), 0.0});
  cases.push_back({generate_family(MeshFamily::LShape, 2), 0.0});
  {
    Mesh pc = generate_family(MeshFamily::PerturbedCrisscross, 2, 0.3);
    const double eta = center_theta(pc);
    cases.push_back({std::move(pc), eta});
  }
  for (const Case& c : cases) {
    const Mesh& m = c.mesh;
    for (FunctionalVariant v : {FunctionalVariant::Point, FunctionalVariant::Weighted}) {
      const CorrectionFunctional func(m, 4, c.eta, v);
      const PressureSpaceBasis reduced = build_reduced_space(m, 4, c.eta);
      const PressureSpaceBasis mod = inject_modified(reduced, func);
      const PressureSpaceBasis comp = complement_basis(m, 4, c.eta, func);
      EXPECT_EQ(comp.dim(), static_cast<int>(critical_sets(m, c.eta).critical.size()));
      EXPECT_EQ(comp.dim() + mod.dim(), build_full_space(m, 4).dim());
      const double scale = comp.basis.colwise().norm().maxCoeff() * mod.basis.colwise().norm().maxCoeff();
      EXPECT_LE((comp.basis.transpose() * mod.basis).cwiseAbs().maxCoeff(), 1e-10 * scale);

      // A modified-space member decomposes with zero complement coefficients.
      const Eigen::VectorXd q = mod.basis * Eigen::VectorXd::Random(mod.dim());
      const Decomposition d = decompose_against(comp, q);
      EXPECT_LE(d.coefficients.cwiseAbs().maxCoeff(), 1e-10 * q.norm());
      EXPECT_LE(d.reconstruction_error, 1e-10 * q.norm());

      // Even critical vertices keep b itself (mean already zero).
      const auto crit = critical_sets(m, c.eta);
      int col = 0;
      for (int z : crit.critical) {
        if (std::find(crit.supercritical.begin(), crit.supercritical.end(), z) == crit.supercritical.end()) {
          const BrokenPolynomial b = critical_function(m, z, 4);
          EXPECT_NEAR(b.integral(), 0.0, 1e-13);
          EXPECT_LE((comp.basis.col(col) - mean_value_zero(b).coefficients()).norm(), 1e-12 * b.l2_norm());
        }
        ++col;
      }
    }
  }
  const Mesh ss1 = generate_family(MeshFamily::StructuredSquare, 1);
  EXPECT_THROW(complement_basis(ss1, 4, 0.0, CorrectionFunctional(ss1, 4, 0.0, FunctionalVariant::Point)),
               NotRobinson);
}

TEST(Splitting, ReducedSpaceOrthogonalToCriticalFunctions) {
  const Mesh m = generate_family(MeshFamily::StructuredSquare, 4);
  const PressureSpaceBasis reduced = build_reduced_space(m, 4, 0.0);
  const PressureSpaceBasis comp = reduced_complement_basis(m, 4, 0.0);
  EXPECT_EQ(reduced.dim() + comp.dim(), build_full_space(m, 4).dim());
  EXPECT_LE((comp.basis.transpose() * reduced.basis).cwiseAbs().maxCoeff(), 1e-10);

  // Continuous pressures differ from the reduced space only in super-critical directions.
  const BrokenPolynomial cont = mean_value_zero(project(m, 3, [](const Point& x) { return std::cos(x.x()) * x.y(); }, 12));
  const PressureSpaceBasis comp0 = reduced_complement_basis(m, 4, 0.0);
  const Decomposition d = decompose_against(comp0, cont.coefficients());
  const auto sc = critical_sets(m, 0.0).supercritical;
  for (std::size_t i = 0; i < comp0.constrained.size(); ++i)
    if (std::find(sc.begin(), sc.end(), comp0.constrained[i]) == sc.end()) EXPECT_NEAR(d.coefficients(i), 0.0, 1e-10);
}

TEST(ModificationConstants, BoundedUnderRefinement) {
  double lo = 1e300, hi = 0.0;
  for (int n : {2, 4, 8}) {
    const Mesh m = generate_family(MeshFamily::StructuredSquare, n);
    const PressureSpaceBasis reduced = build_reduced_space(m, 4, 0.0, false);
    const ModificationConstants c = modification_constants(reduced, CorrectionFunctional(m, 4, 0.0, FunctionalVariant::Point));
    for (const auto& [z, v] : c.C_fz) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  EXPECT_LE(hi / lo, 3.0);
}
