#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "perfhom/errors.hpp"
#include "perfhom/mesh.hpp"

using namespace perfhom;

namespace {

CellGeometry disk_cell(double r = 0.25) { return build_cell_geometry({HoleSpec(Disk{{0.0, 0.0}, r})}, 0.2); }

}  // namespace

TEST(CellMesh, AreaConvergesToPunctured) {
  const double exact = 1.0 - std::numbers::pi / 16.0;
  double prev = 0.0;
  for (int n : {8, 16, 32, 64}) {
    const Mesh m = triangulate_cell(disk_cell(), n);
    EXPECT_NO_THROW(validate_mesh(m));
    const double err = std::abs(m.total_area() - exact);
    if (prev > 0.0) EXPECT_GT(prev / err, 3.0) << "n=" << n;
    prev = err;
  }
  EXPECT_LT(prev, 2e-4);
}

TEST(CellMesh, TrianglesArePositivelyOriented) {
  const Mesh m = triangulate_cell(disk_cell(), 16);
  for (std::size_t t = 0; t < m.triangles.size(); ++t) EXPECT_GT(m.area(t), 0.0);
}

TEST(CellMesh, PeriodicPartnersAreTranslates) {
  const Mesh m = triangulate_cell(disk_cell(), 16);
  ASSERT_FALSE(m.periodic_x.empty());
  for (const auto& [l, r] : m.periodic_x) {
    EXPECT_DOUBLE_EQ(m.vertices[l].x, -0.5);
    EXPECT_DOUBLE_EQ(m.vertices[r].x, 0.5);
    EXPECT_DOUBLE_EQ(m.vertices[l].y, m.vertices[r].y);
  }
  for (const auto& [b, t] : m.periodic_y) EXPECT_DOUBLE_EQ(m.vertices[b].x, m.vertices[t].x);
}

TEST(CellMesh, HoleVerticesLieOnTheCircle) {
  const Mesh m = triangulate_cell(disk_cell(), 32);
  const auto hole = m.hole_vertices();
  ASSERT_GT(hole.size(), 16u);
  for (int v : hole) EXPECT_NEAR(norm(m.vertices[v]), 0.25, 1e-12);
}

TEST(CellMesh, FullMeshCoversTheCell) {
  const auto pair = triangulate_cell_pair(disk_cell(), 16);
  EXPECT_NEAR(pair.full.total_area(), 1.0, 1e-13);
  double inside = 0.0;
  for (std::size_t t = 0; t < pair.full.triangles.size(); ++t)
    if (pair.full.region[t] != 0) inside += pair.full.area(t);
  EXPECT_NEAR(inside + pair.perforated.total_area(), 1.0, 1e-13);
  for (std::size_t v = 0; v < pair.perforated.vertices.size(); ++v)
    EXPECT_EQ(pair.perforated.vertices[v], pair.full.vertices[pair.perforated_to_full[v]]);
}

TEST(CellMesh, EmptyCellIsTheUnionJackGrid) {
  const Mesh m = triangulate_cell(build_cell_geometry({}, 0.2), 8);
  EXPECT_EQ(m.vertices.size(), 81u);
  EXPECT_EQ(m.triangles.size(), 128u);
  EXPECT_TRUE(m.hole_vertices().empty());
}

TEST(CellMesh, RejectsOddResolution) { EXPECT_THROW(triangulate_cell(disk_cell(), 7), Error); }

TEST(DomainMesh, VertexCountMatchesTilingFormula) {
  const int n = 16;
  const Mesh cell = triangulate_cell(disk_cell(), n);
  const int vc = static_cast<int>(cell.vertices.size());
  for (int N : {1, 2, 4}) {
    const auto spec = build_perforated_domain(disk_cell(), {2, 1}, N);
    const Mesh dom = tile_domain_mesh(cell, spec);
    EXPECT_NO_THROW(validate_mesh(dom));
    const int nx = spec.cells_x(), ny = spec.cells_y(), cells = nx * ny;
    const int expected = (nx * n + 1) * (ny * n + 1) - cells * (n - 1) * (n - 1) + cells * (vc - 4 * n);
    EXPECT_EQ(static_cast<int>(dom.vertices.size()), expected) << "N=" << N;
    EXPECT_NEAR(dom.total_area(), 2.0 * cell.total_area(), 1e-12);
  }
}

TEST(DomainMesh, LineageMapsBackToCellVertices) {
  const Mesh cell = triangulate_cell(disk_cell(), 8);
  const auto spec = build_perforated_domain(disk_cell(), {1, 1}, 3);
  const Mesh dom = tile_domain_mesh(cell, spec);
  for (std::size_t v = 0; v < dom.vertices.size(); ++v) {
    const auto& l = dom.lineage[v];
    const Point y = cell.vertices[l.cell_vertex];
    const Point x{(l.cell_a + y.x + 0.5) * spec.epsilon(), (l.cell_b + y.y + 0.5) * spec.epsilon()};
    EXPECT_NEAR(x.x, dom.vertices[v].x, 1e-14);
    EXPECT_NEAR(x.y, dom.vertices[v].y, 1e-14);
  }
}

TEST(DomainMesh, OuterBoundaryIsTheRectangle) {
  const Mesh cell = triangulate_cell(disk_cell(), 8);
  const auto spec = build_perforated_domain(disk_cell(), {1, 1}, 2);
  const Mesh dom = tile_domain_mesh(cell, spec);
  const auto outer = dom.outer_vertices();
  EXPECT_EQ(outer.size(), 4u * 16u);
  for (int v : outer) {
    const Point p = dom.vertices[v];
    const double d = std::min({p.x, 1.0 - p.x, p.y, 1.0 - p.y});
    EXPECT_NEAR(d, 0.0, 1e-15);
  }
  // Every hole of every eps-cell contributes boundary vertices.
  EXPECT_EQ(dom.hole_vertices().size(), 4u * cell.hole_vertices().size());
}

TEST(SolidMesh, CountsAndArea) {
  const Mesh m = triangulate_solid(2.0, 1.0, 8);
  EXPECT_EQ(m.vertices.size(), 17u * 9u);
  EXPECT_EQ(m.triangles.size(), 2u * 16u * 8u);
  EXPECT_NEAR(m.total_area(), 2.0, 1e-14);
  EXPECT_EQ(m.outer_vertices().size(), 2u * (16u + 8u));
}

TEST(PointLocator, InterpolatesLinearFieldsExactly) {
  const Mesh m = triangulate_cell(disk_cell(), 16);
  std::vector<double> f(m.vertices.size());
  for (std::size_t v = 0; v < f.size(); ++v) f[v] = 2.0 * m.vertices[v].x - m.vertices[v].y + 0.5;
  const PointLocator loc(m);
  for (const Point p : {Point{0.4, 0.4}, Point{-0.45, 0.1}, Point{0.3, -0.2}, Point{0.5, 0.5}}) {
    ASSERT_TRUE(loc.locate(p).has_value());
    EXPECT_NEAR(loc.interpolate(f, p), 2.0 * p.x - p.y + 0.5, 1e-13);
  }
  EXPECT_FALSE(loc.locate({0.0, 0.0}).has_value());
  EXPECT_EQ(loc.interpolate(f, {0.0, 0.0}, -7.0), -7.0);
}

TEST(MeshIo, WritesHeaderAndFields) {
  const Mesh m = triangulate_cell(build_cell_geometry({}, 0.2), 2);
  std::vector<double> f(m.vertices.size(), 1.5);
  std::ostringstream out;
  write_mesh(out, m, {NamedField{"u", &f}});
  const std::string s = out.str();
  EXPECT_EQ(s.rfind("# perfhom mesh v1", 0), 0u);
  EXPECT_NE(s.find("vertices 9"), std::string::npos);
  EXPECT_NE(s.find("triangles 8"), std::string::npos);
  EXPECT_NE(s.find("field u 9"), std::string::npos);
}
