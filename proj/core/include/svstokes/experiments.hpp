#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svstokes/manufactured.hpp"
#include "svstokes/mesh.hpp"
#include "svstokes/pressure_spaces.hpp"

namespace svstokes {

/// Random draws in studies and property suites use this seed unless told otherwise.
inline constexpr std::uint64_t kDefaultSeed = 20240917;

enum class Element { SV, SVMod, PW, PWMod };

Element parse_element(std::string_view name);
std::string element_name(Element element);
/// Scott-Vogelius elements always use eta = 0.
double effective_eta(Element element, double eta);

struct SolveOptions {
  FunctionalVariant variant = FunctionalVariant::Point;
  bool compute_beta = false;
  /// For modified elements, also solve the unmodified problem and compare
  /// with its post-processed pressure.
  bool check_equivalence = false;
};

struct SolveRecord {
  std::string family;  // "file" for meshes read from disk
  int n = 0;
  double t = 0.0;
  double h = 0.0;
  int k = 0;
  double eta = 0.0;
  Element element = Element::SV;
  FunctionalVariant variant = FunctionalVariant::Point;
  double err_u_H1 = 0.0;
  double err_p_L2 = 0.0;
  double div_u_L2 = 0.0;
  double grad_u_L2 = 0.0;
  double beta = 0.0;  // NaN unless requested
  double residual = 0.0;
  int velocity_dofs = 0;
  int pressure_dim = 0;
  int critical = 0;
  int supercritical = 0;
  double C_f = 1.0;
  double equivalence_velocity = 0.0;  // NaN unless checked
  double equivalence_pressure = 0.0;
  double best_pressure_error = 0.0;   // inf_q ||p - q|| over the space; NaN if not computed
};

SolveRecord solve_case(const Mesh& mesh, int k, double eta, Element element, const ManufacturedCase& mc,
                       const SolveOptions& options = {});

struct StudyResult {
  std::string kind;  // "convergence" or "divergence"
  std::string case_id;
  std::vector<SolveRecord> rows;
  double rate_u = 0.0;    // slope of log err_u vs log h (or vs log eta)
  double rate_p = 0.0;
  double rate_div = 0.0;
  std::uint64_t seed = kDefaultSeed;
};

/// Least-squares slope of log y against log x over the last `last` points.
double fitted_rate(const std::vector<double>& x, const std::vector<double>& y, int last = 3);

StudyResult convergence_study(const ManufacturedCase& mc, Element element, int k, MeshFamily family,
                              const std::vector<int>& ns, double eta, const SolveOptions& options = {},
                              double t = 0.0);

/// pw-mod on perturbed-crisscross(n, t) with eta(t) the largest cell-center
/// Theta, so every perturbed center is exactly captured. Rates are slopes
/// against eta over all points.
StudyResult divergence_vs_eta(const ManufacturedCase& mc, int k, const std::vector<double>& ts, int n = 2,
                              const SolveOptions& options = {});

/// Largest Theta over interior vertices with four triangles.
double center_theta(const Mesh& mesh);

}  // namespace svstokes
