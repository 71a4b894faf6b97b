#include "svstokes/cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "svstokes/criticality.hpp"
#include "svstokes/errors.hpp"
#include "svstokes/experiments.hpp"
#include "svstokes/manufactured.hpp"
#include "svstokes/property_suites.hpp"
#include "svstokes/report.hpp"

namespace svstokes::cli {
namespace {

struct Config {
  std::string mesh_path;
  std::string family = "structured-square";
  int n = 4;
  double t = 0.0;
  int k = 4;
  double eta = 0.0;
  std::string element = "sv";
  std::string functional = "point";
  std::string case_id = "M1";
  std::string kind = "convergence";
  std::vector<int> ns{2, 4, 8, 16};
  std::vector<double> ts{0.4, 0.2, 0.1, 0.05};
  std::vector<int> ks{4, 5};
  std::string out_dir;
  std::string format;
  std::uint64_t seed = kDefaultSeed;
  bool beta = false;
  bool equivalence = false;
  bool space = false;
};

const std::vector<std::string> kFamilies{"structured-square", "crisscross", "perturbed-crisscross", "l-shape"};
const std::vector<std::string> kElements{"sv", "sv-mod", "pw", "pw-mod"};

void add_mesh_options(CLI::App* cmd, Config& c) {
  auto* mesh = cmd->add_option("--mesh", c.mesh_path, "Mesh file in plain v1 format")->check(CLI::ExistingFile);
  cmd->add_option("--family", c.family, "Built-in mesh family")
      ->check(CLI::IsMember(kFamilies))
      ->excludes(mesh);
  cmd->add_option("--n", c.n, "Subdivisions of the built-in family")->check(CLI::PositiveNumber);
  cmd->add_option("--t", c.t, "Perturbation of perturbed-crisscross")->check(CLI::Range(0.0, 1.0));
}

void add_output_options(CLI::App* cmd, Config& c, bool with_format) {
  cmd->add_option("--out", c.out_dir, "Write reports into this directory instead of stdout");
  cmd->add_option("--seed", c.seed, "Seed recorded in reports and used for random draws");
  if (with_format) cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

Mesh load_mesh(const Config& c) {
  if (!c.mesh_path.empty()) return read_mesh_file(c.mesh_path);
  return generate_family(parse_family(c.family), c.n, c.t);
}

void emit(const Config& c, const std::string& file, const std::string& text, std::ostream& out) {
  if (c.out_dir.empty()) {
    out << text;
    return;
  }
  std::filesystem::create_directories(c.out_dir);
  const auto path = std::filesystem::path(c.out_dir) / file;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

void warn_degree(const Config& c, std::ostream& err) {
  if (c.k < 4) err << "warning: k = " << c.k << " is below 4; the stability theory assumes k >= 4\n";
}

int cmd_analyze(const Config& c, std::ostream& out) {
  const Mesh mesh = load_mesh(c);
  emit(c, "criticality.json", criticality_json(analyze_criticality(mesh, c.eta)), out);
  if (c.space) {
    const PressureSpaceBasis reduced = build_reduced_space(mesh, c.k, c.eta, true);
    const CorrectionFunctional func(mesh, c.k, c.eta, parse_variant(c.functional));
    const PressureSpaceBasis space = func.size() > 0 ? inject_modified(reduced, func) : reduced;
    emit(c, "space.json", space_diagnostics_json(space, modification_constants(reduced, func)), out);
  }
  return kExitOk;
}

SolveOptions solve_options(const Config& c) {
  SolveOptions o;
  o.variant = parse_variant(c.functional);
  o.compute_beta = c.beta;
  o.check_equivalence = c.equivalence;
  return o;
}

int cmd_solve(const Config& c, std::ostream& out) {
  const Mesh mesh = load_mesh(c);
  const ManufacturedCase mc = manufactured(c.case_id, c.k);
  SolveRecord r = solve_case(mesh, c.k, c.eta, parse_element(c.element), mc, solve_options(c));
  if (c.mesh_path.empty()) {
    r.family = c.family;
    r.n = c.n;
    r.t = c.t;
  }
  if (c.format == "csv") emit(c, "solve.csv", solve_csv(r), out);
  else emit(c, "solve.json", solve_json(r, c.seed), out);
  return kExitOk;
}

int cmd_study(const Config& c, std::ostream& out) {
  const ManufacturedCase mc = manufactured(c.case_id, c.k);
  StudyResult s = c.kind == "divergence"
                      ? divergence_vs_eta(mc, c.k, c.ts, c.n, solve_options(c))
                      : convergence_study(mc, parse_element(c.element), c.k, parse_family(c.family), c.ns, c.eta,
                                          solve_options(c), c.t);
  s.seed = c.seed;
  if (c.format == "json") emit(c, "study.json", study_json(s), out);
  else emit(c, "study.csv", study_csv(s), out);
  return kExitOk;
}

int cmd_props(const Config& c, std::ostream& out) {
  const PropertyReport report = property_suites(c.seed, c.ks);
  emit(c, "props.json", property_json(report), out);
  return report.all_passed() ? kExitOk : kExitDomainError;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Scott-Vogelius and pressure-wired Stokes toolkit", "svstokes"};
  app.require_subcommand(1);

  auto* analyze = app.add_subcommand("analyze", "Vertex criticality report of a mesh");
  add_mesh_options(analyze, c);
  analyze->add_option("--eta", c.eta, "Criticality threshold")->check(CLI::Range(0.0, 1.0));
  analyze->add_option("--k", c.k, "Polynomial degree used by --space")->check(CLI::PositiveNumber);
  analyze->add_option("--functional", c.functional, "Correction functional")
      ->check(CLI::IsMember({"point", "weighted"}));
  analyze->add_flag("--space", c.space, "Also report pressure-space diagnostics");
  add_output_options(analyze, c, false);

  auto* solve = app.add_subcommand("solve", "Solve a manufactured Stokes problem");
  add_mesh_options(solve, c);
  solve->add_option("--k", c.k, "Velocity degree")->check(CLI::PositiveNumber);
  solve->add_option("--eta", c.eta, "Criticality threshold (pw elements)")->check(CLI::Range(0.0, 1.0));
  solve->add_option("--element", c.element, "Element")->check(CLI::IsMember(kElements));
  solve->add_option("--functional", c.functional, "Correction functional")
      ->check(CLI::IsMember({"point", "weighted"}));
  solve->add_option("--case", c.case_id, "Manufactured case");
  solve->add_flag("--beta", c.beta, "Estimate the inf-sup constant (dense, small meshes)");
  solve->add_flag("--equivalence", c.equivalence, "Compare against post-processed unmodified solve");
  add_output_options(solve, c, true);

  auto* study = app.add_subcommand("study", "Convergence or divergence-vs-eta study");
  study->add_option("--kind", c.kind, "Study kind")->check(CLI::IsMember({"convergence", "divergence"}));
  study->add_option("--family", c.family, "Mesh family (convergence)")->check(CLI::IsMember(kFamilies));
  study->add_option("--ns", c.ns, "Comma-separated subdivisions (convergence)")->delimiter(',');
  study->add_option("--n", c.n, "Subdivisions (divergence)")->check(CLI::PositiveNumber);
  study->add_option("--t", c.ts, "Comma-separated perturbations")->delimiter(',');
  study->add_option("--k", c.k, "Velocity degree")->check(CLI::PositiveNumber);
  study->add_option("--eta", c.eta, "Criticality threshold (convergence, pw elements)")->check(CLI::Range(0.0, 1.0));
  study->add_option("--element", c.element, "Element (convergence)")->check(CLI::IsMember(kElements));
  study->add_option("--functional", c.functional, "Correction functional")
      ->check(CLI::IsMember({"point", "weighted"}));
  study->add_option("--case", c.case_id, "Manufactured case");
  study->add_flag("--beta", c.beta, "Estimate the inf-sup constant on every mesh");
  study->add_flag("--equivalence", c.equivalence, "Compare against post-processed unmodified solves");
  add_output_options(study, c, true);

  auto* props = app.add_subcommand("props", "Run the property suites; exit 0 iff all pass");
  props->add_option("--k", c.ks, "Comma-separated degrees")->delimiter(',');
  add_output_options(props, c, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  if (study->parsed() && study->count("--n") == 0) c.n = 2;
  // Single-valued --t of the mesh options shares storage with the study list.
  if (study->parsed() && c.kind == "convergence" && !c.ts.empty() && study->count("--t") > 0) c.t = c.ts.front();

  try {
    if (analyze->parsed()) return cmd_analyze(c, out);
    warn_degree(c, err);
    if (solve->parsed()) return cmd_solve(c, out);
    if (study->parsed()) return cmd_study(c, out);
    return cmd_props(c, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace svstokes::cli
