#pragma once

#include <map>
#include <string>
#include <vector>

#include "svstokes/geometry.hpp"
#include "svstokes/mesh.hpp"

namespace svstokes {

/// Threshold below which Theta(z) counts as exactly zero.
inline constexpr double kSingularTolerance = 1e-12;

/// Singularity measure of a vertex patch, in [0, 1].
double theta(const VertexPatch& patch);
std::vector<double> theta_all(const Mesh& mesh);

/// Membership test for C_T(eta); eta = 0 uses kSingularTolerance.
inline bool is_critical(double theta_z, double eta) {
  return theta_z <= (eta > kSingularTolerance ? eta : kSingularTolerance);
}

struct CriticalSets {
  std::vector<int> critical;       // ascending vertex ids
  std::vector<int> supercritical;  // subset with N_z in {1, 3}
};

/// Throws InvalidParameter unless 0 <= eta <= 1.
CriticalSets critical_sets(const Mesh& mesh, double eta);

/// Minimum of Theta over the non-critical vertices. Throws AllVerticesCritical.
double theta_min(const Mesh& mesh, double eta);

struct Companions {
  int Kz = -1;
  int Kz_prime = -1;
};

/// K_z and K'_z of a super-critical vertex. Throws MissingCompanion.
Companions companions(const Mesh& mesh, int z);

/// Triangles of T*_z = T_z plus K'_z, ascending.
std::vector<int> extended_patch(const Mesh& mesh, int z);

/// Robinson flag of every vertex in SC_T(eta).
std::map<int, bool> robinson_classify(const Mesh& mesh, double eta);

struct ExtendedRegion {
  int vertex = -1;
  std::vector<int> triangles;                  // omega(K_z) united with omega(K'_z)
  std::vector<TrianglePoints> extension_triangles;  // K_z^ext and K'_z^ext
};

struct OverlapResult {
  std::vector<ExtendedRegion> regions;
  int C_ov = 0;
};

OverlapResult extended_regions_and_overlap(const Mesh& mesh, double eta);

struct CriticalityReport {
  double eta = 0.0;
  std::vector<double> theta;
  double theta_min = 0.0;  // NaN when every vertex is critical
  CriticalSets sets;
  std::map<int, Companions> companions;
  std::map<int, bool> robinson;
  std::vector<int> missing_companion;
  int C_ov = 0;
  std::vector<std::string> warnings;
};

/// Full criticality analysis. Missing companions are recorded rather than thrown.
CriticalityReport analyze_criticality(const Mesh& mesh, double eta);

/// Patch-type warnings for eta-critical vertices outside the four admissible
/// configurations (boundary with N_z in {1,2,3}, interior with N_z = 4).
std::vector<std::string> configuration_warnings(const Mesh& mesh, double eta);

}  // namespace svstokes
