#include "svstokes/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "svstokes/errors.hpp"

namespace svstokes {

double theta(const VertexPatch& patch) {
  const int n = patch.size();
  double value = 0.0;
  if (patch.boundary) {
    for (int i = 0; i + 1 < n; ++i)
      value = std::max(value, std::abs(std::sin(patch.angles[i] + patch.angles[i + 1])));
  } else {
    for (int i = 0; i < n; ++i)
      value = std::max(value, std::abs(std::sin(patch.angles[i] + patch.angles[(i + 1) % n])));
  }
  return std::min(value, 1.0);
}

std::vector<double> theta_all(const Mesh& mesh) {
  std::vector<double> out(mesh.num_vertices());
  for (int z = 0; z < mesh.num_vertices(); ++z) out[z] = theta(mesh.patch(z));
  return out;
}

CriticalSets critical_sets(const Mesh& mesh, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidParameter("eta must lie in [0,1]");
  CriticalSets sets;
  for (int z = 0; z < mesh.num_vertices(); ++z) {
    const VertexPatch& p = mesh.patch(z);
    if (!is_critical(theta(p), eta)) continue;
    sets.critical.push_back(z);
    if (p.size() == 1 || p.size() == 3) sets.supercritical.push_back(z);
  }
  return sets;
}

double theta_min(const Mesh& mesh, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw InvalidParameter("eta must lie in [0,1]");
  double m = std::numeric_limits<double>::infinity();
  for (int z = 0; z < mesh.num_vertices(); ++z) {
    const double t = theta(mesh.patch(z));
    if (!is_critical(t, eta)) m = std::min(m, t);
  }
  if (!std::isfinite(m)) throw AllVerticesCritical();
  return m;
}

Companions companions(const Mesh& mesh, int z) {
  const VertexPatch& p = mesh.patch(z);
  Companions c;
  c.Kz = p.size() == 1 ? p.triangles[0] : p.triangles[1];
  const int i = mesh.local_index(c.Kz, z);
  const int across = mesh.neighbor(c.Kz, i);
  auto in_patch = [&](int t) { return std::find(p.triangles.begin(), p.triangles.end(), t) != p.triangles.end(); };
  if (across >= 0 && !in_patch(across)) {
    c.Kz_prime = across;
    return c;
  }
  int best = -1;
  for (int j = 0; j < 3; ++j) {
    const int nb = mesh.neighbor(c.Kz, j);
    if (nb >= 0 && !in_patch(nb) && (best < 0 || nb < best)) best = nb;
  }
  if (best < 0) throw MissingCompanion(z);
  c.Kz_prime = best;
  return c;
}

std::vector<int> extended_patch(const Mesh& mesh, int z) {
  std::vector<int> tris = mesh.patch(z).triangles;
  tris.push_back(companions(mesh, z).Kz_prime);
  std::sort(tris.begin(), tris.end());
  tris.erase(std::unique(tris.begin(), tris.end()), tris.end());
  return tris;
}

std::map<int, bool> robinson_classify(const Mesh& mesh, double eta) {
  const CriticalSets sets = critical_sets(mesh, eta);
  std::map<int, std::vector<int>> star;
  for (int z : sets.supercritical) star[z] = extended_patch(mesh, z);
  std::vector<bool> critical(mesh.num_vertices(), false);
  for (int z : sets.critical) critical[z] = true;

  std::map<int, bool> flags;
  for (int z : sets.supercritical) {
    bool ok = true;
    for (int y : sets.supercritical) {
      if (y == z) continue;
      std::vector<int> common;
      std::set_intersection(star[z].begin(), star[z].end(), star[y].begin(), star[y].end(),
                            std::back_inserter(common));
      if (!common.empty()) {
        ok = false;
        break;
      }
    }
    for (int t : star[z]) {
      for (int v : mesh.triangle(t))
        if (v != z && critical[v]) ok = false;
    }
    flags[z] = ok;
  }
  return flags;
}

OverlapResult extended_regions_and_overlap(const Mesh& mesh, double eta) {
  const CriticalSets sets = critical_sets(mesh, eta);
  OverlapResult result;
  std::vector<std::vector<TrianglePoints>> shapes;
  for (int z : sets.supercritical) {
    const Companions c = companions(mesh, z);
    ExtendedRegion region;
    region.vertex = z;
    for (int K : {c.Kz, c.Kz_prime})
      for (int t : triangle_neighborhood(mesh, K)) region.triangles.push_back(t);
    std::sort(region.triangles.begin(), region.triangles.end());
    region.triangles.erase(std::unique(region.triangles.begin(), region.triangles.end()), region.triangles.end());
    const TrianglePoints a = triangle_points(mesh, c.Kz);
    const TrianglePoints b = triangle_points(mesh, c.Kz_prime);
    region.extension_triangles.push_back(a);
    region.extension_triangles.push_back(minimal_enclosing_triangle({a[0], a[1], a[2], b[0], b[1], b[2]}));

    std::vector<TrianglePoints> shape = region.extension_triangles;
    for (int t : region.triangles) shape.push_back(triangle_points(mesh, t));
    shapes.push_back(std::move(shape));
    result.regions.push_back(std::move(region));
  }

  const double h = mesh.mesh_width();
  const double threshold = 1e-12 * h * h;
  auto overlap = [&](const std::vector<TrianglePoints>& A, const std::vector<TrianglePoints>& B) {
    for (const auto& s : A) {
      for (const auto& t : B) {
        const Polygon cut = clip_convex({s[0], s[1], s[2]}, {t[0], t[1], t[2]});
        if (cut.size() >= 3 && polygon_area(cut) > threshold) return true;
      }
    }
    return false;
  };
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    int count = 0;
    for (std::size_t j = 0; j < shapes.size(); ++j)
      if (i == j || overlap(shapes[i], shapes[j])) ++count;
    result.C_ov = std::max(result.C_ov, count);
  }
  return result;
}

std::vector<std::string> configuration_warnings(const Mesh& mesh, double eta) {
  std::vector<std::string> out;
  for (int z : critical_sets(mesh, eta).critical) {
    const VertexPatch& p = mesh.patch(z);
    const bool admissible = p.boundary ? (p.size() >= 1 && p.size() <= 3) : p.size() == 4;
    if (!admissible)
      out.push_back("vertex " + std::to_string(z) + ": critical " + (p.boundary ? "boundary" : "interior") +
                    " patch with N_z = " + std::to_string(p.size()));
  }
  return out;
}

CriticalityReport analyze_criticality(const Mesh& mesh, double eta) {
  CriticalityReport r;
  r.eta = eta;
  r.sets = critical_sets(mesh, eta);
  r.theta = theta_all(mesh);
  try {
    r.theta_min = theta_min(mesh, eta);
  } catch (const AllVerticesCritical&) {
    r.theta_min = std::numeric_limits<double>::quiet_NaN();
  }
  for (int z : r.sets.supercritical) {
    try {
      r.companions[z] = companions(mesh, z);
    } catch (const MissingCompanion&) {
      r.missing_companion.push_back(z);
    }
  }
  if (r.missing_companion.empty()) {
    r.robinson = robinson_classify(mesh, eta);
    r.C_ov = extended_regions_and_overlap(mesh, eta).C_ov;
  } else {
    r.warnings.push_back("companion triangles missing; Robinson flags and C_ov not computed");
  }
  for (auto& w : configuration_warnings(mesh, eta)) r.warnings.push_back(std::move(w));
  return r;
}

}  // namespace svstokes
