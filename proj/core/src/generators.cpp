#include <cmath>
#include <map>

#include "svstokes/errors.hpp"
#include "svstokes/mesh.hpp"

namespace svstokes {
namespace {

using Triangles = std::vector<std::array<int, 3>>;

Mesh structured_square(int n) {
  const double h = 1.0 / n;
  std::vector<Point> v;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) v.emplace_back(i * h, j * h);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  Triangles t;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      t.push_back({a, b, c});
      t.push_back({a, c, d});
    }
  }
  return Mesh(std::move(v), std::move(t));
}

Mesh crisscross(int n, double shift) {
  const double h = 1.0 / n;
  std::vector<Point> v;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) v.emplace_back(i * h, j * h);
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  Triangles t;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int c = static_cast<int>(v.size());
      v.emplace_back((i + 0.5 + shift / 4.0) * h, (j + 0.5) * h);
      const int a = id(i, j), b = id(i + 1, j), e = id(i + 1, j + 1), d = id(i, j + 1);
      t.push_back({a, b, c});
      t.push_back({b, e, c});
      t.push_back({e, d, c});
      t.push_back({d, a, c});
    }
  }
  return Mesh(std::move(v), std::move(t));
}

Mesh l_shape(int n) {
  const double h = 1.0 / n;
  const int m = 2 * n;
  std::map<std::pair<int, int>, int> index;
  std::vector<Point> v;
  // The open fourth quadrant is removed; its closure's boundary stays.
  auto inside = [n](int i, int j) { return !(i > n && j < n); };
  for (int j = 0; j <= m; ++j) {
    for (int i = 0; i <= m; ++i) {
      if (!inside(i, j)) continue;
      index[{i, j}] = static_cast<int>(v.size());
      v.emplace_back(-1.0 + i * h, -1.0 + j * h);
    }
  }
  auto id = [&](int i, int j) { return index.at({i, j}); };
  Triangles t;
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const bool right = i >= n, top = j >= n;
      if (right && !top) continue;
      const int a = id(i, j), b = id(i + 1, j), c = id(i + 1, j + 1), d = id(i, j + 1);
      // Corner nearest the origin is a (first quadrant) or c (third): cut along b-d.
      if (right == top) {
        t.push_back({a, b, d});
        t.push_back({b, c, d});
      } else {
        t.push_back({a, b, c});
        t.push_back({a, c, d});
      }
    }
  }
  return Mesh(std::move(v), std::move(t));
}

// Cell-center singularity measure of the perturbed crisscross cell. With the
// center moved by d = t/4 cell sizes, every consecutive angle pair sums to
// pi + (theta_r - theta_l)/2.
double perturbed_center_theta(double t) {
  const double d = t / 4.0;
  return std::sin(std::atan(1.0 / (1.0 - 2.0 * d)) - std::atan(1.0 / (1.0 + 2.0 * d)));
}

}  // namespace

MeshFamily parse_family(std::string_view name) {
  if (name == "structured-square") return MeshFamily::StructuredSquare;
  if (name == "crisscross") return MeshFamily::Crisscross;
  if (name == "perturbed-crisscross") return MeshFamily::PerturbedCrisscross;
  if (name == "l-shape") return MeshFamily::LShape;
  throw InvalidParameter("unknown mesh family '" + std::string(name) + "'");
}

std::string family_name(MeshFamily family) {
  switch (family) {
    case MeshFamily::StructuredSquare: return "structured-square";
    case MeshFamily::Crisscross: return "crisscross";
    case MeshFamily::PerturbedCrisscross: return "perturbed-crisscross";
    case MeshFamily::LShape: return "l-shape";
  }
  return "unknown";
}

Mesh generate_family(MeshFamily family, int n, double t) {
  if (n < 1) throw InvalidParameter("mesh subdivisions n must be >= 1");
  switch (family) {
    case MeshFamily::StructuredSquare: return structured_square(n);
    case MeshFamily::Crisscross: return crisscross(n, 0.0);
    case MeshFamily::PerturbedCrisscross:
      if (!(t >= 0.0 && t <= 1.0)) throw InvalidParameter("perturbation t must lie in [0,1]");
      return crisscross(n, t);
    case MeshFamily::LShape: return l_shape(n);
  }
  throw InvalidParameter("unknown mesh family");
}

double perturbation_for_theta(double theta) {
  if (!(theta >= 0.0 && theta <= perturbed_center_theta(1.0)))
    throw InvalidParameter("theta out of reach of perturbations t in [0,1]");
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (perturbed_center_theta(mid) < theta ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace svstokes
