#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "svstokes/experiments.hpp"
#include "svstokes/mesh.hpp"

namespace svstokes {

struct PropertyCheck {
  std::string suite;
  std::string mesh;
  int k = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct PropertyReport {
  std::uint64_t seed = kDefaultSeed;
  std::vector<PropertyCheck> checks;

  bool all_passed() const;
  int failures() const;
};

struct MeshSource {
  std::string name;
  std::function<Mesh()> build;
};

/// structured-square(2), crisscross(2), perturbed-crisscross(2, 0.3), l-shape(2).
std::vector<MeshSource> builtin_mesh_sources();

/// Runs the mesh, criticality, polynomial, pressure-space and solver
/// invariants on every mesh and degree. Exceptions become failed checks.
PropertyReport property_suites(std::uint64_t seed = kDefaultSeed, const std::vector<int>& ks = {4, 5},
                               const std::vector<MeshSource>& meshes = builtin_mesh_sources());

}  // namespace svstokes
