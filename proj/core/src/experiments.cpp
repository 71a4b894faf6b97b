#include "svstokes/experiments.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "svstokes/criticality.hpp"
#include "svstokes/errors.hpp"
#include "svstokes/stokes.hpp"

namespace svstokes {

Element parse_element(std::string_view name) {
  if (name == "sv") return Element::SV;
  if (name == "sv-mod") return Element::SVMod;
  if (name == "pw") return Element::PW;
  if (name == "pw-mod") return Element::PWMod;
  throw InvalidParameter("unknown element '" + std::string(name) + "'");
}

std::string element_name(Element element) {
  switch (element) {
    case Element::SV: return "sv";
    case Element::SVMod: return "sv-mod";
    case Element::PW: return "pw";
    case Element::PWMod: return "pw-mod";
  }
  return "unknown";
}

double effective_eta(Element element, double eta) {
  return (element == Element::SV || element == Element::SVMod) ? 0.0 : eta;
}

namespace {

bool modified(Element e) { return e == Element::SVMod || e == Element::PWMod; }

double relative_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale > 0 ? (a - b).norm() / scale : 0.0;
}

}  // namespace

SolveRecord solve_case(const Mesh& mesh, int k, double eta, Element element, const ManufacturedCase& mc,
                       const SolveOptions& options) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  SolveRecord r;
  r.family = "file";
  r.h = mesh.mesh_width();
  r.k = k;
  r.eta = effective_eta(element, eta);
  r.element = element;
  r.variant = options.variant;
  r.beta = nan;
  r.equivalence_velocity = nan;
  r.equivalence_pressure = nan;
  r.best_pressure_error = nan;

  const CriticalSets sets = critical_sets(mesh, r.eta);
  r.critical = static_cast<int>(sets.critical.size());
  r.supercritical = static_cast<int>(sets.supercritical.size());

  const VelocitySpace V(mesh, k);
  const StokesMatrices M = assemble(V);
  const Eigen::VectorXd F = load_vector(V, mc.f);

  const PressureSpaceBasis reduced = build_reduced_space(mesh, k, r.eta, options.compute_beta);
  std::optional<CorrectionFunctional> func;
  PressureSpaceBasis space = reduced;
  if (modified(element)) {
    func.emplace(mesh, k, r.eta, options.variant);
    space = inject_modified(reduced, *func);
    r.C_f = modification_constants(reduced, *func).C_f;
  }

  const StokesSolution sol = solve_stokes(V, M, space, F);
  r.err_u_H1 = velocity_h1_error(V, sol.velocity, mc.grad_u);
  r.err_p_L2 = pressure_l2_error(sol.pressure, mc.p);
  r.div_u_L2 = divergence_norm(M, sol);
  r.grad_u_L2 = gradient_norm(M, sol.velocity);
  r.residual = sol.stats.residual;
  r.velocity_dofs = sol.stats.velocity_dofs;
  r.pressure_dim = sol.stats.pressure_dofs;

  if (options.compute_beta) r.beta = infsup_estimate(V, M, space).beta;

  if (options.check_equivalence && func) {
    const StokesSolution base = solve_stokes(V, M, reduced, F);
    const BrokenPolynomial post = postprocess_pressure(base, *func);
    r.equivalence_velocity = relative_distance(sol.velocity, base.velocity);
    r.equivalence_pressure = relative_distance(sol.pressure.coefficients(), post.coefficients());
  }

  try {
    const PressureSpaceBasis comp =
        func ? complement_basis(mesh, k, r.eta, *func) : reduced_complement_basis(mesh, k, r.eta);
    const BrokenPolynomial exact = mean_value_zero(project(mesh, k - 1, mc.p));
    const Decomposition d = decompose_against(comp, exact.coefficients());
    r.best_pressure_error = pressure_l2_error(BrokenPolynomial(mesh, k - 1, d.projection), mc.p);
  } catch (const Error&) {
    // best approximation needs Robinson vertices; leave NaN
  }
  return r;
}

double fitted_rate(const std::vector<double>& x, const std::vector<double>& y, int last) {
  const int n = static_cast<int>(x.size());
  const int start = std::max(0, n - last);
  const int m = n - start;
  if (m < 2) return std::numeric_limits<double>::quiet_NaN();
  Eigen::MatrixXd A(m, 2);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    A(i, 0) = std::log(x[start + i]);
    A(i, 1) = 1.0;
    b(i) = std::log(y[start + i]);
  }
  return A.colPivHouseholderQr().solve(b)(0);
}

StudyResult convergence_study(const ManufacturedCase& mc, Element element, int k, MeshFamily family,
                              const std::vector<int>& ns, double eta, const SolveOptions& options, double t) {
  StudyResult s;
  s.kind = "convergence";
  s.case_id = mc.id;
  std::vector<double> h, eu, ep, ed;
  for (int n : ns) {
    const Mesh mesh = generate_family(family, n, t);
    SolveRecord r = solve_case(mesh, k, eta, element, mc, options);
    r.family = family_name(family);
    r.n = n;
    r.t = t;
    h.push_back(r.h);
    eu.push_back(r.err_u_H1);
    ep.push_back(r.err_p_L2);
    ed.push_back(r.div_u_L2);
    s.rows.push_back(r);
  }
  s.rate_u = fitted_rate(h, eu);
  s.rate_p = fitted_rate(h, ep);
  s.rate_div = fitted_rate(h, ed);
  return s;
}

double center_theta(const Mesh& mesh) {
  double m = 0.0;
  for (int z = 0; z < mesh.num_vertices(); ++z) {
    const VertexPatch& p = mesh.patch(z);
    if (!p.boundary && p.size() == 4) m = std::max(m, theta(p));
  }
  return m;
}

StudyResult divergence_vs_eta(const ManufacturedCase& mc, int k, const std::vector<double>& ts, int n,
                              const SolveOptions& options) {
  StudyResult s;
  s.kind = "divergence";
  s.case_id = mc.id;
  std::vector<double> eta, eu, ep, ed;
  for (double t : ts) {
    const Mesh mesh = generate_family(MeshFamily::PerturbedCrisscross, n, t);
    const double e = center_theta(mesh);
    SolveRecord r = solve_case(mesh, k, e, Element::PWMod, mc, options);
    r.family = family_name(MeshFamily::PerturbedCrisscross);
    r.n = n;
    r.t = t;
    eta.push_back(e);
    eu.push_back(r.err_u_H1);
    ep.push_back(r.err_p_L2);
    ed.push_back(r.div_u_L2);
    s.rows.push_back(r);
  }
  const int all = static_cast<int>(ts.size());
  s.rate_u = fitted_rate(eta, eu, all);
  s.rate_p = fitted_rate(eta, ep, all);
  s.rate_div = fitted_rate(eta, ed, all);
  return s;
}

}  // namespace svstokes
