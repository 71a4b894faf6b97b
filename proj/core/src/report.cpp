#include "svstokes/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#ifndef SVSTOKES_VERSION
#define SVSTOKES_VERSION "unknown"
#endif

namespace svstokes {
namespace {

using nlohmann::ordered_json;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

ordered_json jnum(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json record_json(const SolveRecord& r) {
  ordered_json j;
  j["family"] = r.family;
  j["n"] = r.n;
  j["t"] = r.t;
  j["h"] = r.h;
  j["k"] = r.k;
  j["eta"] = r.eta;
  j["element"] = element_name(r.element);
  j["functional"] = variant_name(r.variant);
  j["err_u_H1"] = jnum(r.err_u_H1);
  j["err_p_L2"] = jnum(r.err_p_L2);
  j["div_u_L2"] = jnum(r.div_u_L2);
  j["grad_u_L2"] = jnum(r.grad_u_L2);
  j["beta"] = jnum(r.beta);
  j["residual"] = jnum(r.residual);
  j["velocity_dofs"] = r.velocity_dofs;
  j["pressure_dim"] = r.pressure_dim;
  j["critical"] = r.critical;
  j["supercritical"] = r.supercritical;
  j["C_f"] = jnum(r.C_f);
  j["equivalence_velocity"] = jnum(r.equivalence_velocity);
  j["equivalence_pressure"] = jnum(r.equivalence_pressure);
  j["best_pressure_error"] = jnum(r.best_pressure_error);
  return j;
}

std::string csv_row(const SolveRecord& r, const std::string& tag) {
  std::ostringstream s;
  s << r.family << ',' << r.n << ',' << num(r.h) << ',' << r.k << ',' << num(r.eta) << ','
    << element_name(r.element) << ',' << num(r.err_u_H1) << ',' << num(r.err_p_L2) << ',' << num(r.div_u_L2)
    << ',' << num(r.beta) << ',' << tag << '\n';
  return s.str();
}

}  // namespace

std::string criticality_json(const CriticalityReport& r) {
  ordered_json j;
  ordered_json theta = ordered_json::object();
  for (std::size_t z = 0; z < r.theta.size(); ++z) theta[std::to_string(z)] = r.theta[z];
  j["eta"] = r.eta;
  j["theta"] = theta;
  j["theta_min"] = jnum(r.theta_min);
  j["critical"] = r.sets.critical;
  j["supercritical"] = r.sets.supercritical;
  ordered_json rob = ordered_json::object();
  for (const auto& [z, f] : r.robinson) rob[std::to_string(z)] = f;
  j["robinson"] = rob;
  ordered_json comp = ordered_json::object();
  for (const auto& [z, c] : r.companions) comp[std::to_string(z)] = {c.Kz, c.Kz_prime};
  j["companions"] = comp;
  j["C_ov"] = r.C_ov;
  j["missing_companion"] = r.missing_companion;
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

std::string study_csv(const StudyResult& study) {
  std::string out = std::string(kStudyCsvHeader) + "\n";
  for (const auto& r : study.rows) out += csv_row(r, "data");
  if (!study.rows.empty()) {
    SolveRecord rate = study.rows.back();
    rate.h = std::nan("");
    rate.err_u_H1 = study.rate_u;
    rate.err_p_L2 = study.rate_p;
    rate.div_u_L2 = study.rate_div;
    rate.beta = std::nan("");
    out += csv_row(rate, study.kind == "divergence" ? "rate-vs-eta" : "rate-last3");
  }
  return out;
}

std::string study_json(const StudyResult& study) {
  ordered_json j;
  j["kind"] = study.kind;
  j["case"] = study.case_id;
  j["seed"] = study.seed;
  j["version"] = SVSTOKES_VERSION;
  j["functional"] = study.rows.empty() ? "point" : variant_name(study.rows.front().variant);
  ordered_json rows = ordered_json::array();
  for (const auto& r : study.rows) rows.push_back(record_json(r));
  j["rows"] = rows;
  j["rates"] = {{"err_u_H1", jnum(study.rate_u)}, {"err_p_L2", jnum(study.rate_p)}, {"div_u_L2", jnum(study.rate_div)}};
  return j.dump(2) + "\n";
}

std::string solve_csv(const SolveRecord& record) { return std::string(kStudyCsvHeader) + "\n" + csv_row(record, "data"); }

std::string solve_json(const SolveRecord& record, std::uint64_t seed) {
  ordered_json j = record_json(record);
  j["seed"] = seed;
  j["version"] = SVSTOKES_VERSION;
  return j.dump(2) + "\n";
}

std::string property_json(const PropertyReport& report) {
  ordered_json j;
  j["seed"] = report.seed;
  j["version"] = SVSTOKES_VERSION;
  j["passed"] = report.all_passed();
  j["failures"] = report.failures();
  ordered_json checks = ordered_json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"suite", c.suite}, {"mesh", c.mesh}, {"k", c.k}, {"name", c.name}, {"passed", c.passed},
                      {"detail", c.detail}});
  j["checks"] = checks;
  return j.dump(2) + "\n";
}

std::string space_diagnostics_json(const PressureSpaceBasis& space, const ModificationConstants& constants) {
  ordered_json j;
  j["kind"] = kind_name(space.kind);
  j["k"] = space.k;
  j["eta"] = space.eta;
  j["full_dim"] = space.full_dim();
  j["dim"] = space.dim();
  j["constrained"] = space.constrained;
  j["dropped"] = space.dropped;
  j["corrected"] = space.corrected;
  j["rank_deficient"] = !space.dropped.empty() || !space.diagnostics.empty();
  ordered_json cf = ordered_json::object();
  for (const auto& [z, v] : constants.C_fz) cf[std::to_string(z)] = v;
  j["C_fz"] = cf;
  j["C_f"] = constants.C_f;
  j["diagnostics"] = space.diagnostics;
  return j.dump(2) + "\n";
}

std::string solution_csv(const VelocitySpace& V, const StokesSolution& sol) {
  const Mesh& mesh = V.mesh();
  std::string out = "vertex,x,y,u_x,u_y,p\n";
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    const auto& tris = mesh.vertex_triangles(v);
    const Point& x = mesh.vertex(v);
    const Eigen::Vector2d u = velocity_value(V, sol.velocity, tris.front(), x);
    double p = 0.0;
    for (int t : tris) p += sol.pressure.value(t, x);
    p /= static_cast<double>(tris.size());
    out += std::to_string(v) + ',' + num(x.x()) + ',' + num(x.y()) + ',' + num(u.x()) + ',' + num(u.y()) + ',' +
           num(p) + '\n';
  }
  return out;
}

}  // namespace svstokes
