#include "svstokes/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <sstream>

#include "svstokes/errors.hpp"

namespace svstokes {
namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * cross(b - a, c - a);
}

double polar_angle(const Point& d) {
  double a = std::atan2(d.y(), d.x());
  if (a < 0.0) a += 2.0 * std::numbers::pi;
  return a;
}

}  // namespace

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles)
    : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
  const int nv = num_vertices();
  const int nt = num_triangles();
  if (nt == 0) throw NonConformingMesh("mesh has no triangles", {});

  area_.resize(nt);
  diameter_.resize(nt);
  inradius_.resize(nt);
  for (int t = 0; t < nt; ++t) {
    auto& tri = triangles_[t];
    for (int v : tri) {
      if (v < 0 || v >= nv) throw NonConformingMesh("triangle references unknown vertex", {t, v});
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw NonConformingMesh("triangle repeats a vertex", {t});
    const Point& a = vertices_[tri[0]];
    const Point& b = vertices_[tri[1]];
    const Point& c = vertices_[tri[2]];
    double s = signed_area(a, b, c);
    if (s < 0.0) {
      std::swap(tri[1], tri[2]);
      s = -s;
    }
    const double e0 = (b - c).norm(), e1 = (a - c).norm(), e2 = (a - b).norm();
    const double h = std::max({e0, e1, e2});
    if (s <= 1e-14 * h * h) throw DegenerateTriangle(t);
    area_[t] = s;
    diameter_[t] = h;
    inradius_[t] = 2.0 * s / (e0 + e1 + e2);
    mesh_width_ = std::max(mesh_width_, h);
    domain_area_ += s;
  }

  {
    std::map<std::array<int, 3>, int> seen;
    for (int t = 0; t < nt; ++t) {
      auto key = triangles_[t];
      std::sort(key.begin(), key.end());
      auto [it, fresh] = seen.emplace(key, t);
      if (!fresh) throw NonConformingMesh("duplicated triangle", {it->second, t});
    }
  }

  vertex_triangles_.assign(nv, {});
  for (int t = 0; t < nt; ++t)
    for (int v : triangles_[t]) vertex_triangles_[v].push_back(t);
  for (int v = 0; v < nv; ++v) {
    if (vertex_triangles_[v].empty()) throw NonConformingMesh("vertex belongs to no triangle", {v});
  }

  build_edges();
  check_hanging_vertices();
  build_patches();
}

void Mesh::build_edges() {
  const int nt = num_triangles();
  std::map<std::array<int, 2>, int> index;
  triangle_edges_.assign(nt, {-1, -1, -1});
  neighbors_.assign(nt, {-1, -1, -1});
  for (int t = 0; t < nt; ++t) {
    for (int i = 0; i < 3; ++i) {
      int a = triangles_[t][(i + 1) % 3];
      int b = triangles_[t][(i + 2) % 3];
      std::array<int, 2> key{std::min(a, b), std::max(a, b)};
      auto it = index.find(key);
      if (it == index.end()) {
        index.emplace(key, static_cast<int>(edges_.size()));
        triangle_edges_[t][i] = static_cast<int>(edges_.size());
        Edge e;
        e.vertices = key;
        e.triangles = {t, -1};
        edges_.push_back(e);
      } else {
        Edge& e = edges_[it->second];
        if (e.triangles[1] >= 0)
          throw NonConformingMesh("edge shared by more than two triangles",
                                  {e.triangles[0], e.triangles[1], t});
        const int other = e.triangles[0];
        // Counterclockwise neighbors traverse a shared edge in opposite directions.
        const int j = local_index(other, a);
        if (triangles_[other][(j + 1) % 3] == b)
          throw NonConformingMesh("overlapping triangles across an edge", {other, t});
        e.triangles[1] = t;
        triangle_edges_[t][i] = it->second;
      }
    }
  }
  for (int t = 0; t < nt; ++t) {
    for (int i = 0; i < 3; ++i) {
      const Edge& e = edges_[triangle_edges_[t][i]];
      neighbors_[t][i] = e.triangles[0] == t ? e.triangles[1] : e.triangles[0];
    }
  }
  vertex_boundary_.assign(num_vertices(), false);
  for (const Edge& e : edges_) {
    if (e.boundary()) {
      vertex_boundary_[e.vertices[0]] = true;
      vertex_boundary_[e.vertices[1]] = true;
    }
  }
}

void Mesh::check_hanging_vertices() const {
  // A hanging vertex lies in the open interior of an edge that has a single
  // triangle on that side, so only boundary-flagged edges need checking.
  for (int ei = 0; ei < num_edges(); ++ei) {
    const Edge& e = edges_[ei];
    if (!e.boundary()) continue;
    const Point& a = vertices_[e.vertices[0]];
    const Point& b = vertices_[e.vertices[1]];
    const Point d = b - a;
    const double len2 = d.squaredNorm();
    const double tol = 1e-12 * std::sqrt(len2);
    const double xmin = std::min(a.x(), b.x()) - tol, xmax = std::max(a.x(), b.x()) + tol;
    const double ymin = std::min(a.y(), b.y()) - tol, ymax = std::max(a.y(), b.y()) + tol;
    for (int v = 0; v < num_vertices(); ++v) {
      if (v == e.vertices[0] || v == e.vertices[1]) continue;
      const Point& p = vertices_[v];
      if (p.x() < xmin || p.x() > xmax || p.y() < ymin || p.y() > ymax) continue;
      const double s = (p - a).dot(d) / len2;
      if (s <= 1e-12 || s >= 1.0 - 1e-12) continue;
      if (std::abs(cross(d, p - a)) / std::sqrt(len2) <= tol)
        throw NonConformingMesh("hanging vertex on edge", {v, e.vertices[0], e.vertices[1]});
    }
  }
}

void Mesh::build_patches() {
  const int nv = num_vertices();
  patches_.resize(nv);
  for (int z = 0; z < nv; ++z) {
    VertexPatch& patch = patches_[z];
    patch.center = z;
    patch.boundary = vertex_boundary_[z];
    const auto& fan = vertex_triangles_[z];
    // first spoke endpoint -> triangle; triangle (z, a, b) counterclockwise
    std::map<int, int> by_first;
    std::map<int, int> second_of;
    for (int t : fan) {
      const int i = local_index(t, z);
      const int a = triangles_[t][(i + 1) % 3];
      const int b = triangles_[t][(i + 2) % 3];
      if (!by_first.emplace(a, t).second)
        throw NonConformingMesh("vertex fan is not a manifold", {z, t});
      second_of[t] = b;
    }
    int start = -1;
    if (patch.boundary) {
      for (int t : fan) {
        const int i = local_index(t, z);
        const int a = triangles_[t][(i + 1) % 3];
        const int e = triangle_edges_[t][(i + 2) % 3];  // edge (z, a) is opposite b
        if (edges_[e].boundary() && (edges_[e].vertices[0] == a || edges_[e].vertices[1] == a)) {
          if (start >= 0) throw NonConformingMesh("boundary vertex with several fans", {z});
          start = t;
        }
      }
    } else {
      double best = 10.0;
      for (int t : fan) {
        const int i = local_index(t, z);
        const int a = triangles_[t][(i + 1) % 3];
        const double ang = polar_angle(vertices_[a] - vertices_[z]);
        if (ang < best) {
          best = ang;
          start = t;
        }
      }
    }
    if (start < 0) throw NonConformingMesh("cannot order vertex fan", {z});
    int t = start;
    for (std::size_t step = 0; step < fan.size(); ++step) {
      patch.triangles.push_back(t);
      auto it = by_first.find(second_of[t]);
      if (it == by_first.end()) break;
      t = it->second;
      if (t == start) break;
    }
    if (patch.triangles.size() != fan.size())
      throw NonConformingMesh("vertex fan is not connected", {z});
    for (int tri : patch.triangles) {
      const int i = local_index(tri, z);
      const Point u = vertices_[triangles_[tri][(i + 1) % 3]] - vertices_[z];
      const Point w = vertices_[triangles_[tri][(i + 2) % 3]] - vertices_[z];
      patch.angles.push_back(std::atan2(cross(u, w), u.dot(w)));
      patch.width = std::max(patch.width, diameter_[tri]);
    }
  }
}

int Mesh::local_index(int t, int v) const {
  const auto& tri = triangles_[t];
  for (int i = 0; i < 3; ++i)
    if (tri[i] == v) return i;
  return -1;
}

const VertexPatch& Mesh::patch(int z) const {
  if (z < 0 || z >= num_vertices()) throw UnknownVertex(z);
  return patches_[z];
}

Mesh parse_mesh(std::string_view text) {
  std::vector<std::pair<int, std::string>> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
      ++number;
      if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      lines.emplace_back(number, line);
    }
  }
  std::size_t cursor = 0;
  auto next = [&](const char* what) -> std::pair<int, std::istringstream> {
    if (cursor >= lines.size())
      throw ParseError(std::string("unexpected end of input, expected ") + what,
                       lines.empty() ? 0 : lines.back().first);
    auto& [number, line] = lines[cursor++];
    return {number, std::istringstream(line)};
  };
  auto expect_end = [](std::istringstream& in, int number) {
    std::string rest;
    if (in >> rest) throw ParseError("trailing token '" + rest + "'", number);
  };

  long long nv = 0, nt = 0;
  {
    auto [number, in] = next("header 'nv nt'");
    if (!(in >> nv >> nt) || nv <= 0 || nt <= 0) throw ParseError("bad header", number);
    expect_end(in, number);
  }
  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(nv));
  for (long long i = 0; i < nv; ++i) {
    auto [number, in] = next("vertex line");
    double x = 0, y = 0;
    if (!(in >> x >> y) || !std::isfinite(x) || !std::isfinite(y))
      throw ParseError("bad vertex coordinates", number);
    expect_end(in, number);
    vertices.emplace_back(x, y);
  }
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(static_cast<std::size_t>(nt));
  for (long long i = 0; i < nt; ++i) {
    auto [number, in] = next("triangle line");
    long long a = 0, b = 0, c = 0;
    if (!(in >> a >> b >> c)) throw ParseError("bad triangle indices", number);
    expect_end(in, number);
    for (long long v : {a, b, c}) {
      if (v < 0 || v >= nv) throw ParseError("vertex index out of range", number);
    }
    triangles.push_back({static_cast<int>(a), static_cast<int>(b), static_cast<int>(c)});
  }
  if (cursor != lines.size()) throw ParseError("unexpected extra content", lines[cursor].first);
  return Mesh(std::move(vertices), std::move(triangles));
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'", 0);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_mesh(buffer.str());
}

std::string serialize_mesh(const Mesh& mesh) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << mesh.num_vertices() << ' ' << mesh.num_triangles() << '\n';
  for (const Point& p : mesh.vertices()) out << p.x() << ' ' << p.y() << '\n';
  for (const auto& t : mesh.triangles()) out << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  return out.str();
}

VertexPatch vertex_patch(const Mesh& mesh, int z) { return mesh.patch(z); }

double shape_regularity(const Mesh& mesh) {
  double gamma = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t)
    gamma = std::max(gamma, mesh.diameter(t) / (2.0 * mesh.inradius(t)));
  return gamma;
}

std::vector<int> triangle_neighborhood(const Mesh& mesh, int K) {
  if (K < 0 || K >= mesh.num_triangles()) throw UnknownTriangle(K);
  std::vector<int> out;
  for (int v : mesh.triangle(K))
    for (int t : mesh.vertex_triangles(v)) out.push_back(t);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace svstokes
