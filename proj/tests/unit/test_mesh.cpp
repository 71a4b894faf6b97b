#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <gtest/gtest.h>

#include "svstokes/criticality.hpp"
#include "svstokes/errors.hpp"
#include "svstokes/experiments.hpp"
#include "svstokes/mesh.hpp"

#include "test_util.hpp"

using namespace svstokes;

namespace {

constexpr double kPi = std::numbers::pi;

Mesh square_with(std::array<int, 3> second) {
  return Mesh({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, second});
}

int count_boundary_edges(const Mesh& m) {
  int c = 0;
  for (const auto& e : m.edges()) c += e.boundary();
  return c;
}

}  // namespace

TEST(Parse, ReferenceTriangle) {
  const Mesh m = read_mesh_file(test::data_path("reference_triangle.txt"));
  EXPECT_EQ(m.num_triangles(), 1);
  EXPECT_DOUBLE_EQ(m.area(0), 0.5);
  EXPECT_EQ(count_boundary_edges(m), 3);
}

TEST(Parse, SquareSplitByDiagonal) {
  const Mesh m = read_mesh_file(test::data_path("square_diagonal.txt"));
  EXPECT_EQ(m.num_triangles(), 2);
  EXPECT_EQ(m.num_edges(), 5);
  EXPECT_EQ(count_boundary_edges(m), 4);
}

TEST(Parse, ClockwiseTriangleIsReordered) {
  const Mesh cw = read_mesh_file(test::data_path("square_clockwise.txt"));
  const Mesh ccw = read_mesh_file(test::data_path("square_diagonal.txt"));
  for (int t = 0; t < cw.num_triangles(); ++t) {
    EXPECT_GT(cw.area(t), 0.0);
    EXPECT_EQ(std::set<int>(cw.triangle(t).begin(), cw.triangle(t).end()),
              std::set<int>(ccw.triangle(t).begin(), ccw.triangle(t).end()));
  }
}

TEST(Parse, Errors) {
  EXPECT_THROW(read_mesh_file(test::data_path("malformed.txt")), ParseError);
  EXPECT_THROW(read_mesh_file(test::data_path("duplicate_triangle.txt")), NonConformingMesh);
  EXPECT_THROW(read_mesh_file(test::data_path("hanging_vertex.txt")), NonConformingMesh);
  EXPECT_THROW(parse_mesh("3 1\n0 0\n1 0\n2 0\n0 1 2\n"), DegenerateTriangle);
  EXPECT_THROW(parse_mesh("3 1\n0 0\n1 0\n0 1\n0 1 7\n"), ParseError);
  EXPECT_THROW(Mesh({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 7}}), NonConformingMesh);
  EXPECT_THROW(parse_mesh("3 2\n0 0\n1 0\n0 1\n0 1 2\n"), ParseError);
}

TEST(Parse, MalformedReportsLine) {
  try {
    read_mesh_file(test::data_path("malformed.txt"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
  }
}

TEST(Parse, DuplicateTriangleReportsIds) {
  try {
    read_mesh_file(test::data_path("duplicate_triangle.txt"));
    FAIL();
  } catch (const NonConformingMesh& e) {
    EXPECT_FALSE(e.offending_ids().empty());
  }
}

TEST(Patch, CrisscrossCenter) {
  const Mesh m = read_mesh_file(test::data_path("crisscross1.txt"));
  const VertexPatch p = vertex_patch(m, 4);
  EXPECT_EQ(p.size(), 4);
  EXPECT_FALSE(p.boundary);
  for (double a : p.angles) EXPECT_NEAR(a, kPi / 2, 1e-14);
}

TEST(Patch, SquareCorners) {
  const Mesh m = square_with({0, 2, 3});
  const VertexPatch one = vertex_patch(m, 1);  // cut off by the diagonal 0-2
  EXPECT_EQ(one.size(), 1);
  EXPECT_NEAR(one.angles[0], kPi / 2, 1e-14);
  const VertexPatch two = vertex_patch(m, 0);  // on the diagonal
  EXPECT_EQ(two.size(), 2);
  EXPECT_NEAR(two.angles[0], kPi / 4, 1e-14);
  EXPECT_NEAR(two.angles[1], kPi / 4, 1e-14);
  EXPECT_THROW(vertex_patch(m, 9), UnknownVertex);
}

TEST(Patch, CounterclockwiseConsecutive) {
  const Mesh m = generate_family(MeshFamily::PerturbedCrisscross, 3, 0.4);
  for (int z = 0; z < m.num_vertices(); ++z) {
    const VertexPatch& p = m.patch(z);
    EXPECT_EQ(p.size(), static_cast<int>(m.vertex_triangles(z).size()));
    const int closing = p.boundary ? p.size() - 1 : p.size();
    for (int j = 0; j < closing; ++j) {
      const auto& a = m.triangle(p.triangles[j]);
      const auto& b = m.triangle(p.triangles[(j + 1) % p.size()]);
      int shared = 0;
      for (int u : a)
        for (int v : b) shared += u == v;
      EXPECT_EQ(shared, 2) << "vertex " << z << " position " << j;
    }
  }
}

TEST(ShapeRegularity, Oracles) {
  const Mesh eq({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2}}, {{0, 1, 2}});
  EXPECT_NEAR(shape_regularity(eq), std::sqrt(3.0), 1e-12);
  const Mesh right({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  EXPECT_NEAR(shape_regularity(right), std::sqrt(2.0) / (2 - std::sqrt(2.0)), 1e-12);
  EXPECT_NEAR(shape_regularity(generate_family(MeshFamily::StructuredSquare, 5)), shape_regularity(right), 1e-12);
}

TEST(Neighborhood, SingleAndBruteForce) {
  const Mesh single({{0, 0}, {1, 0}, {0, 1}}, {{0, 1, 2}});
  EXPECT_EQ(triangle_neighborhood(single, 0), std::vector<int>{0});
  EXPECT_THROW(triangle_neighborhood(single, 3), UnknownTriangle);

  // Pinched meshes are rejected, so take a vertex-only pair from a fan.
  const Mesh fan({{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1}});
  const auto contains = [](const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); };
  EXPECT_TRUE(contains(triangle_neighborhood(fan, 0), 2));
  EXPECT_TRUE(contains(triangle_neighborhood(fan, 2), 0));
  EXPECT_THROW(Mesh({{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, -1}}, {{0, 1, 2}, {0, 3, 4}}), NonConformingMesh);

  const Mesh m = generate_family(MeshFamily::StructuredSquare, 4);
  for (int K = 0; K < m.num_triangles(); ++K) {
    std::vector<int> brute;
    for (int L = 0; L < m.num_triangles(); ++L) {
      bool touch = false;
      for (int u : m.triangle(K))
        for (int v : m.triangle(L)) touch |= u == v;
      if (touch) brute.push_back(L);
    }
    EXPECT_EQ(triangle_neighborhood(m, K), brute);
  }
}

TEST(Generators, Sizes) {
  const Mesh ss = generate_family(MeshFamily::StructuredSquare, 1);
  EXPECT_EQ(ss.num_triangles(), 2);
  EXPECT_EQ(ss.num_vertices(), 4);
  const Mesh cc = generate_family(MeshFamily::Crisscross, 1);
  EXPECT_EQ(cc.num_triangles(), 4);
  EXPECT_EQ(cc.num_vertices(), 5);
  EXPECT_EQ(generate_family(MeshFamily::LShape, 2).num_triangles(), 24);
  EXPECT_THROW(generate_family(MeshFamily::Crisscross, 0), InvalidParameter);
  EXPECT_THROW(generate_family(MeshFamily::PerturbedCrisscross, 2, 1.5), InvalidParameter);
  EXPECT_THROW(parse_family("hexagonal"), InvalidParameter);
}

TEST(Generators, PerturbedCenterNearLinear) {
  const double th1 = center_theta(generate_family(MeshFamily::PerturbedCrisscross, 1, 0.1));
  const double th05 = center_theta(generate_family(MeshFamily::PerturbedCrisscross, 1, 0.05));
  EXPECT_GT(th1, 0.0);
  const double ratio = (th1 / 0.1) / (th05 / 0.05);
  EXPECT_GE(ratio, 0.5);
  EXPECT_LE(ratio, 5.0);
  EXPECT_LT(th05, th1);
}

TEST(Generators, PerturbationForTheta) {
  for (double tau : {0.2, 0.1, 0.05, 0.025}) {
    const Mesh m = generate_family(MeshFamily::PerturbedCrisscross, 2, perturbation_for_theta(tau));
    EXPECT_NEAR(center_theta(m), tau, 1e-9);
  }
}

TEST(Invariants, RoundTripAngleSumConformity) {
  for (MeshFamily f : {MeshFamily::StructuredSquare, MeshFamily::Crisscross, MeshFamily::PerturbedCrisscross,
                       MeshFamily::LShape}) {
    for (int n = 1; n <= 8; ++n) {
      const Mesh m = generate_family(f, n, 0.3);
      const Mesh r = parse_mesh(serialize_mesh(m));
      ASSERT_EQ(r.num_vertices(), m.num_vertices());
      ASSERT_EQ(r.triangles(), m.triangles());
      for (int v = 0; v < m.num_vertices(); ++v) EXPECT_LE((r.vertex(v) - m.vertex(v)).norm(), 1e-15);

      for (int z = 0; z < m.num_vertices(); ++z) {
        const VertexPatch& p = m.patch(z);
        double sum = 0.0;
        for (double a : p.angles) sum += a;
        if (p.boundary) EXPECT_LE(sum, 2 * kPi + 1e-12);
        else EXPECT_NEAR(sum, 2 * kPi, 1e-12);
      }
      for (const auto& e : m.edges()) {
        if (e.boundary()) continue;
        const int a = e.triangles[0], b = e.triangles[1];
        bool back = false;
        for (int i = 0; i < 3; ++i)
          if (m.neighbor(b, i) == a) back = true;
        EXPECT_TRUE(back);
      }
    }
  }
}
