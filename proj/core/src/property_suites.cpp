#include "svstokes/property_suites.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "svstokes/broken_polynomial.hpp"
#include "svstokes/criticality.hpp"
#include "svstokes/errors.hpp"
#include "svstokes/quadrature.hpp"
#include "svstokes/stokes.hpp"

namespace svstokes {

bool PropertyReport::all_passed() const { return failures() == 0; }

int PropertyReport::failures() const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [](const auto& c) { return !c.passed; }));
}

std::vector<MeshSource> builtin_mesh_sources() {
  return {
      {"structured-square(2)", [] { return generate_family(MeshFamily::StructuredSquare, 2); }},
      {"crisscross(2)", [] { return generate_family(MeshFamily::Crisscross, 2); }},
      {"perturbed-crisscross(2,0.3)", [] { return generate_family(MeshFamily::PerturbedCrisscross, 2, 0.3); }},
      {"l-shape(2)", [] { return generate_family(MeshFamily::LShape, 2); }},
  };
}

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

class Recorder {
public:
  Recorder(PropertyReport& report, std::string mesh) : report_(report), mesh_(std::move(mesh)) {}

  void add(const std::string& suite, int k, const std::string& name, bool passed, const std::string& detail) {
    report_.checks.push_back({suite, mesh_, k, name, passed, detail});
  }

  // Runs fn, turning library errors into a failed check.
  template <class Fn>
  void guard(const std::string& suite, int k, const std::string& name, Fn&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      add(suite, k, name, false, std::string("exception: ") + e.what());
    }
  }

private:
  PropertyReport& report_;
  std::string mesh_;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double binom2(int k) { return 0.5 * k * (k + 1); }  // binom(k + 1, 2)

void mesh_suite(const Mesh& mesh, Recorder& rec) {
  rec.guard("mesh", 0, "round-trip", [&] {
    const Mesh again = parse_mesh(serialize_mesh(mesh));
    bool ok = again.triangles() == mesh.triangles() && again.num_vertices() == mesh.num_vertices();
    double dx = 0.0;
    for (int v = 0; ok && v < mesh.num_vertices(); ++v) dx = std::max(dx, (again.vertex(v) - mesh.vertex(v)).norm());
    rec.add("mesh", 0, "round-trip", ok && dx <= 1e-15, "max coordinate change " + fmt(dx));
  });
  rec.guard("mesh", 0, "angle-sum", [&] {
    double worst = 0.0;
    bool ok = true;
    for (int z = 0; z < mesh.num_vertices(); ++z) {
      const VertexPatch& p = mesh.patch(z);
      const double s = std::accumulate(p.angles.begin(), p.angles.end(), 0.0);
      if (p.boundary) {
        ok = ok && s <= 2 * std::numbers::pi + 1e-12;
      } else {
        worst = std::max(worst, std::abs(s - 2 * std::numbers::pi));
      }
    }
    rec.add("mesh", 0, "angle-sum", ok && worst <= 1e-12, "max interior deviation " + fmt(worst));
  });
  rec.guard("mesh", 0, "adjacency-involutive", [&] {
    bool ok = true;
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      for (int i = 0; i < 3; ++i) {
        const int nb = mesh.neighbor(t, i);
        if (nb < 0) continue;
        bool back = false;
        for (int j = 0; j < 3; ++j) back = back || mesh.neighbor(nb, j) == t;
        ok = ok && back;
      }
    }
    rec.add("mesh", 0, "adjacency-involutive", ok, "");
  });
}

void criticality_suite(const Mesh& mesh, std::mt19937_64& rng, Recorder& rec) {
  rec.guard("criticality", 0, "theta-range", [&] {
    const auto th = theta_all(mesh);
    const bool ok = std::all_of(th.begin(), th.end(), [](double t) { return t >= 0.0 && t <= 1.0; });
    rec.add("criticality", 0, "theta-range", ok, "");
  });
  rec.guard("criticality", 0, "eta-monotone", [&] {
    bool ok = true;
    std::vector<int> prev;
    for (double eta : {0.0, 0.05, 0.2, 0.5, 1.0}) {
      const auto cur = critical_sets(mesh, eta).critical;
      ok = ok && std::includes(cur.begin(), cur.end(), prev.begin(), prev.end());
      prev = cur;
    }
    rec.add("criticality", 0, "eta-monotone", ok, "");
  });
  rec.guard("criticality", 0, "rigid-motion-invariance", [&] {
    std::uniform_real_distribution<double> ang(0.0, 2 * std::numbers::pi), sc(0.1, 10.0), sh(-5.0, 5.0);
    const double a = ang(rng), s = sc(rng);
    const Point shift(sh(rng), sh(rng));
    Eigen::Matrix2d R;
    R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    std::vector<Point> v;
    for (const Point& p : mesh.vertices()) v.push_back(s * R * p + shift);
    const Mesh moved(v, mesh.triangles());
    const auto t0 = theta_all(mesh), t1 = theta_all(moved);
    double worst = 0.0;
    for (std::size_t i = 0; i < t0.size(); ++i) worst = std::max(worst, std::abs(t0[i] - t1[i]));
    rec.add("criticality", 0, "rigid-motion-invariance", worst <= 1e-12, "max |dTheta| " + fmt(worst));
  });
  rec.guard("criticality", 0, "robinson-permutation-invariance", [&] {
    std::vector<int> perm(mesh.num_vertices());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Point> v(mesh.num_vertices());
    for (int i = 0; i < mesh.num_vertices(); ++i) v[perm[i]] = mesh.vertex(i);
    auto tris = mesh.triangles();
    for (auto& t : tris)
      for (int& i : t) i = perm[i];
    const Mesh shuffled(v, tris);
    const auto f0 = robinson_classify(mesh, 0.0);
    const auto f1 = robinson_classify(shuffled, 0.0);
    bool ok = f0.size() == f1.size();
    for (const auto& [z, flag] : f0) ok = ok && f1.count(perm[z]) && f1.at(perm[z]) == flag;
    rec.add("criticality", 0, "robinson-permutation-invariance", ok, std::to_string(f0.size()) + " vertices");
  });
}

void polynomial_suite(const Mesh& mesh, int k, std::mt19937_64& rng, Recorder& rec) {
  const int d = k - 1;
  rec.guard("poly", k, "critical-function-identities", [&] {
    double worst = 0.0;
    for (int z = 0; z < mesh.num_vertices(); ++z) {
      const BrokenPolynomial b = critical_function(mesh, z, k);
      const VertexPatch& p = mesh.patch(z);
      for (int l = 1; l <= p.size(); ++l) {
        const int K = p.triangles[l - 1];
        const double a = mesh.area(K);
        const double sl = l % 2 == 0 ? 1.0 : -1.0;
        const double sk = (k - 1) % 2 == 0 ? 1.0 : -1.0;
        worst = std::max(worst, rel(b.integral(K), sl / binom2(k)));
        worst = std::max(worst, rel(b.l2_norm(K) * b.l2_norm(K), 1.0 / a));
        for (int v : mesh.triangle(K)) {
          const double expect = v == z ? sl * binom2(k) / a : sl * sk / a;
          worst = std::max(worst, std::abs(b.value(K, mesh.vertex(v)) - expect) / std::abs(expect));
        }
      }
    }
    rec.add("poly", k, "critical-function-identities", worst <= 1e-10, "max relative error " + fmt(worst));
  });
  rec.guard("poly", k, "Atz-of-critical-function", [&] {
    double worst = 0.0;
    for (int z = 0; z < mesh.num_vertices(); ++z) {
      const BrokenPolynomial b = critical_function(mesh, z, k);
      const double lhs = functional_Atz(b, mesh.patch(z));
      const double rhs = binom2(k) * b.l2_norm() * b.l2_norm();
      worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
    }
    rec.add("poly", k, "Atz-of-critical-function", worst <= 1e-10, "max relative error " + fmt(worst));
  });
  rec.guard("poly", k, "stability-estimate", [&] {
    std::normal_distribution<double> g;
    double upper = 0.0, lower = 1e300;
    for (int K = 0; K < mesh.num_triangles(); ++K) {
      std::array<Eigen::VectorXd, 3> blocks;
      for (int i = 0; i < 3; ++i) blocks[i] = critical_function(mesh, mesh.triangle(K)[i], k).block(K);
      for (int draw = 0; draw < 200; ++draw) {
        Eigen::Vector3d c(g(rng), g(rng), g(rng));
        const Eigen::VectorXd f = c(0) * blocks[0] + c(1) * blocks[1] + c(2) * blocks[2];
        const double norm2 = f.squaredNorm();
        const double centered = norm2 - f(0) * f(0);
        const double mid = c.squaredNorm() / mesh.area(K);
        upper = std::max(upper, norm2 / mid);      // needs <= 4/3
        lower = std::min(lower, centered / mid);   // needs >= 7/12
      }
    }
    rec.add("poly", k, "stability-estimate", upper <= 4.0 / 3.0 && lower >= 7.0 / 12.0,
            "max ||f||^2/(|K|^-1|c|^2) " + fmt(upper) + ", min centered ratio " + fmt(lower));
  });
  rec.guard("poly", k, "quadrature-exactness", [&] {
    const int deg = 2 * k;
    const QuadratureRule rule = quadrature(deg);
    double worst = 0.0;
    for (int a = 0; a <= deg; ++a)
      for (int b = 0; a + b <= deg; ++b)
        for (int c = 0; a + b + c <= deg; ++c) {
          double s = 0.0;
          for (int i = 0; i < rule.size(); ++i)
            s += rule.weights[i] * std::pow(rule.points[i](0), a) * std::pow(rule.points[i](1), b) *
                 std::pow(rule.points[i](2), c);
          const double exact =
              2.0 * std::tgamma(a + 1) * std::tgamma(b + 1) * std::tgamma(c + 1) / std::tgamma(a + b + c + 3);
          worst = std::max(worst, std::abs(s - exact) / exact);
        }
    rec.add("poly", k, "quadrature-exactness", worst <= 1e-13, "max relative error " + fmt(worst));
  });
  rec.guard("poly", k, "modal-orthonormality", [&] {
    const QuadratureRule rule = quadrature(2 * d);
    const int K = 0;
    const double a = mesh.area(K);
    const TrianglePoints T = triangle_points(mesh, K);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(modal_dim(d), modal_dim(d));
    for (int i = 0; i < rule.size(); ++i) {
      const Eigen::Vector3d& b = rule.points[i];
      const Eigen::VectorXd v = modal_values(mesh, K, d, b(0) * T[0] + b(1) * T[1] + b(2) * T[2]);
      G += a * rule.weights[i] * v * v.transpose();
    }
    const double err = (G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
    rec.add("poly", k, "modal-orthonormality", err <= 1e-12, "max Gram deviation " + fmt(err));
  });
  rec.guard("poly", k, "extension-bound", [&] {
    std::normal_distribution<double> g;
    const int K = 0;
    const TrianglePoints T = triangle_points(mesh, K);
    const int grid = 8 * k + 16;
    double worst = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
      BrokenPolynomial q(mesh, k);
      for (int m = 0; m < q.block_size(); ++m) q.block(K)(m) = g(rng);
      double sup = 0.0;
      for (int i = 0; i <= grid; ++i)
        for (int j = 0; i + j <= grid; ++j) {
          const Point x = T[0] + (T[1] - T[0]) * (double(i) / grid) + (T[2] - T[0]) * (double(j) / grid);
          sup = std::max(sup, std::abs(q.value(K, x)));
        }
      for (double lambda : {0.25, 1.0})
        for (int s = 0; s < 64; ++s) {
          const Point y = k_lambda_point(T, 2 * std::numbers::pi * s / 64, lambda);
          worst = std::max(worst, std::abs(q.value(K, y)) / (chebyshev_eval(k, 1 + lambda) * sup));
        }
    }
    rec.add("poly", k, "extension-bound", worst <= 1.02, "max |q(y)|/(T_k(1+lambda)|q|_inf) " + fmt(worst));
  });
  rec.guard("poly", k, "critical-functions-independent", [&] {
    Eigen::MatrixXd B(mesh.num_triangles() * modal_dim(d), mesh.num_vertices() + 1);
    for (int z = 0; z < mesh.num_vertices(); ++z) B.col(z) = critical_function(mesh, z, k).coefficients();
    B.col(mesh.num_vertices()) = constant_coefficients(mesh, d);
    const Eigen::MatrixXd G = B.transpose() * B;
    const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G).eigenvalues().minCoeff();
    rec.add("poly", k, "critical-functions-independent", lmin > 1e-12, "min Gram eigenvalue " + fmt(lmin));
  });
}

double suite_eta(const Mesh& mesh) {
  const double c = center_theta(mesh);
  return c > kSingularTolerance ? c : 0.0;
}

void pressure_suite(const Mesh& mesh, int k, Recorder& rec) {
  const double eta = suite_eta(mesh);
  PressureSpaceBasis reduced;
  rec.guard("pressure", k, "reduced-space", [&] {
    reduced = build_reduced_space(mesh, k, eta, true);
    const CriticalSets sets = critical_sets(mesh, eta);
    const Eigen::VectorXd one = constant_coefficients(mesh, k - 1);
    double worst = 0.0;
    for (int z : sets.critical) {
      const Eigen::VectorXd row = Eigen::VectorXd(atz_row(mesh, z, k - 1));
      worst = std::max(worst, (reduced.basis.transpose() * row).cwiseAbs().maxCoeff());
    }
    worst = std::max(worst, (reduced.basis.transpose() * one).cwiseAbs().maxCoeff());
    const int expect = reduced.full_dim() - static_cast<int>(sets.critical.size()) - 1;
    const bool dim_ok = reduced.dropped.empty() ? reduced.dim() == expect : reduced.dim() > expect;
    rec.add("pressure", k, "reduced-space", worst <= 1e-11 && dim_ok,
            "dim " + std::to_string(reduced.dim()) + ", max constraint violation " + fmt(worst));
  });
  if (!reduced.has_basis()) return;

  rec.guard("pressure", k, "splitting-orthogonal", [&] {
    const PressureSpaceBasis comp = reduced_complement_basis(mesh, k, eta);
    const double worst = comp.basis.cols() ? (reduced.basis.transpose() * comp.basis).cwiseAbs().maxCoeff() : 0.0;
    const bool dims = reduced.dim() + comp.dim() + 1 == reduced.full_dim();
    rec.add("pressure", k, "splitting-orthogonal", worst <= 1e-10 && dims, "max inner product " + fmt(worst));
  });

  for (FunctionalVariant variant : {FunctionalVariant::Point, FunctionalVariant::Weighted}) {
    const std::string tag = "[" + variant_name(variant) + "]";
    rec.guard("pressure", k, "modified-space" + tag, [&] {
      const CorrectionFunctional func(mesh, k, eta, variant);
      const PressureSpaceBasis mod = inject_modified(reduced, func);
      double norm_err = 0.0;
      for (int j = 0; j < reduced.basis.cols(); ++j)
        norm_err = std::max(norm_err, std::abs(mod.basis.col(j).dot(reduced.basis.col(j)) - 1.0));
      double jnorm = 0.0;
      for (int i = 0; i < func.size(); ++i)
        jnorm = std::max(jnorm, std::abs(func.J(i, func.entries()[i].critical, func.entries()[i].triangles.Kz) - 1.0));
      rec.add("pressure", k, "modified-space" + tag,
              mod.dim() == reduced.dim() && norm_err <= 1e-10 && jnorm <= 1e-11,
              "max |(Eq,q)-|q|^2| " + fmt(norm_err) + ", max |J_z(b)-1| " + fmt(jnorm));

      double riesz_err = 0.0, opnorm_err = 0.0;
      for (int i = 0; i < func.size(); ++i) {
        const int z = func.entries()[i].z;
        const BrokenPolynomial phi = riesz_representative(reduced, z, func);
        const Eigen::VectorXd f = Eigen::VectorXd(func.f_row(i));
        const Eigen::VectorXd fz = reduced.basis.transpose() * f;
        riesz_err = std::max(riesz_err, (reduced.basis.transpose() * phi.coefficients() - fz).cwiseAbs().maxCoeff());
        opnorm_err = std::max(opnorm_err, std::abs(phi.l2_norm() - fz.norm()) / std::max(1e-300, fz.norm()));
      }
      rec.add("pressure", k, "riesz-representative" + tag, riesz_err <= 1e-10 && opnorm_err <= 1e-9,
              "max defect " + fmt(riesz_err) + ", operator norm mismatch " + fmt(opnorm_err));

      const auto flags = robinson_classify(mesh, eta);
      const bool robinson = std::all_of(flags.begin(), flags.end(), [](const auto& f) { return f.second; });
      if (!robinson) return;
      const PressureSpaceBasis comp = complement_basis(mesh, k, eta, func);
      const double orth = comp.basis.cols() ? (mod.basis.transpose() * comp.basis).cwiseAbs().maxCoeff() : 0.0;
      const double scale = std::max(1.0, comp.basis.colwise().norm().maxCoeff() * mod.basis.colwise().norm().maxCoeff());
      rec.add("pressure", k, "complement-basis" + tag,
              comp.dim() == static_cast<int>(critical_sets(mesh, eta).critical.size()) && orth <= 1e-10 * scale,
              "card " + std::to_string(comp.dim()) + ", max |(phi,Eq)| " + fmt(orth));

      double cons = 0.0;
      const auto sc = critical_sets(mesh, eta).supercritical;
      for (int z : sc) {
        const BrokenPolynomial bz = critical_function(mesh, z, k);
        for (int y : sc) {
          if (y == z) continue;
          cons = std::max(cons, std::abs(bz.dot(critical_function(mesh, y, k))));
          cons = std::max(cons, bz.l2_norm(companions(mesh, y).Kz_prime));
        }
      }
      rec.add("pressure", k, "robinson-consequences" + tag, cons <= 1e-12, "max " + fmt(cons));
    });
  }
}

void stokes_suite(const Mesh& mesh, int k, Recorder& rec) {
  const double eta = suite_eta(mesh);
  const VelocitySpace V(mesh, k);
  const StokesMatrices M = assemble(V);
  rec.guard("stokes", k, "stiffness-spd", [&] {
    const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Eigen::MatrixXd(M.A)).eigenvalues().minCoeff();
    rec.add("stokes", k, "stiffness-spd", lmin > 0, "min eigenvalue " + fmt(lmin));
  });
  rec.guard("stokes", k, "divergence-mean-free", [&] {
    const Eigen::VectorXd one = constant_coefficients(mesh, k - 1);
    const double worst = (M.D.transpose() * one).cwiseAbs().maxCoeff();
    rec.add("stokes", k, "divergence-mean-free", worst <= 1e-12, "max |(div v,1)| " + fmt(worst));
  });
  const ManufacturedCase mc = manufactured("M1-smooth-corner");
  const Eigen::VectorXd F = load_vector(V, mc.f);
  rec.guard("stokes", k, "sv-divergence-free", [&] {
    const PressureSpaceBasis sv = build_reduced_space(mesh, k, 0.0, false);
    const StokesSolution sol = solve_stokes(V, M, sv, F);
    const double ratio = divergence_norm(M, sol) / gradient_norm(M, sol.velocity);
    rec.add("stokes", k, "sv-divergence-free", ratio <= 1e-9 && sol.stats.residual <= 1e-9,
            "||div u||/||grad u|| " + fmt(ratio));
  });
  for (FunctionalVariant variant : {FunctionalVariant::Point, FunctionalVariant::Weighted}) {
    const std::string tag = "[" + variant_name(variant) + "]";
    rec.guard("stokes", k, "postprocess-equivalence" + tag, [&] {
      const PressureSpaceBasis sv = build_reduced_space(mesh, k, 0.0, false);
      const CorrectionFunctional func(mesh, k, 0.0, variant);
      const PressureSpaceBasis mod = inject_modified(sv, func);
      const StokesSolution a = solve_stokes(V, M, sv, F);
      const StokesSolution b = solve_stokes(V, M, mod, F);
      const BrokenPolynomial post = postprocess_pressure(a, func);
      const double du = (a.velocity - b.velocity).norm() / a.velocity.norm();
      const double dp = (post.coefficients() - b.pressure.coefficients()).norm() / post.coefficients().norm();
      rec.add("stokes", k, "postprocess-equivalence" + tag, du <= 1e-9 && dp <= 1e-9,
              "velocity " + fmt(du) + ", pressure " + fmt(dp));
    });
    rec.guard("stokes", k, "discrete-orthogonality" + tag, [&] {
      const PressureSpaceBasis red = build_reduced_space(mesh, k, eta, true);
      const CorrectionFunctional func(mesh, k, eta, variant);
      const PressureSpaceBasis mod = inject_modified(red, func);
      const StokesSolution sol = solve_stokes(V, M, mod, F);
      const Eigen::VectorXd div = M.D * sol.velocity;
      const double worst = (mod.basis.transpose() * div).cwiseAbs().maxCoeff();
      const double scale = std::max(1.0, gradient_norm(M, sol.velocity));
      rec.add("stokes", k, "discrete-orthogonality" + tag, worst <= 1e-9 * scale, "max |(div u,Eq)| " + fmt(worst));
    });
  }
  rec.guard("stokes", k, "sv-infsup-positive", [&] {
    const PressureSpaceBasis sv = build_reduced_space(mesh, k, 0.0, true);
    const InfSupResult r = infsup_estimate(V, M, sv);
    rec.add("stokes", k, "sv-infsup-positive", !r.singular && r.beta > 0, "beta " + fmt(r.beta));
  });
}

}  // namespace

PropertyReport property_suites(std::uint64_t seed, const std::vector<int>& ks, const std::vector<MeshSource>& meshes) {
  PropertyReport report;
  report.seed = seed;
  std::mt19937_64 rng(seed);
  for (const MeshSource& src : meshes) {
    Recorder rec(report, src.name);
    std::optional<Mesh> mesh;
    try {
      mesh.emplace(src.build());
    } catch (const std::exception& e) {
      rec.add("mesh", 0, "construction", false, std::string("exception: ") + e.what());
      continue;
    }
    mesh_suite(*mesh, rec);
    criticality_suite(*mesh, rng, rec);
    for (int k : ks) {
      polynomial_suite(*mesh, k, rng, rec);
      pressure_suite(*mesh, k, rec);
      stokes_suite(*mesh, k, rec);
    }
  }
  return report;
}

}  // namespace svstokes
