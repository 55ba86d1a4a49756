#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "perfhom/errors.hpp"
#include "perfhom/geometry.hpp"

using namespace perfhom;

namespace {

HoleSpec unit_disk(double r) { return HoleSpec(Disk{{0.0, 0.0}, r}); }

Polygon square(double half) { return Polygon{{{-half, -half}, {half, -half}, {half, half}, {-half, half}}}; }

}  // namespace

TEST(HoleSpec, DiskSignedDistanceAndProjection) {
  const auto h = unit_disk(0.25);
  EXPECT_DOUBLE_EQ(h.signed_distance({0.0, 0.0}), -0.25);
  EXPECT_DOUBLE_EQ(h.signed_distance({0.5, 0.0}), 0.25);
  const Point p = h.project({0.3, 0.4});
  EXPECT_NEAR(norm(p), 0.25, 1e-15);
  EXPECT_NEAR(p.x / p.y, 0.75, 1e-14);
  EXPECT_NEAR(h.area(), std::numbers::pi / 16.0, 1e-15);
  EXPECT_NEAR(h.perimeter(), std::numbers::pi / 2.0, 1e-15);
  EXPECT_NEAR(h.distance_to_cell_boundary(), 0.25, 1e-15);
}

TEST(HoleSpec, PolygonIsStoredCounterclockwise) {
  Polygon cw{{{-0.1, -0.1}, {-0.1, 0.1}, {0.1, 0.1}, {0.1, -0.1}}};
  const HoleSpec h(cw);
  const auto& v = std::get<Polygon>(h.shape()).vertices;
  double twice_area = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) twice_area += cross(v[i], v[(i + 1) % v.size()]);
  EXPECT_GT(twice_area, 0.0);
  EXPECT_NEAR(h.area(), 0.04, 1e-15);
  EXPECT_NEAR(h.signed_distance({0.0, 0.0}), -0.1, 1e-15);
  EXPECT_NEAR(h.signed_distance({0.3, 0.0}), 0.2, 1e-15);
  // Outside a corner the distance is Euclidean to the vertex.
  EXPECT_NEAR(h.signed_distance({0.2, 0.2}), std::sqrt(0.02), 1e-15);
}

TEST(HoleSpec, InflationFollowsSteinerFormula) {
  const double delta = 0.025;
  const auto disk = unit_disk(0.25).inflated(delta);
  EXPECT_NEAR(disk.area(), std::numbers::pi * 0.275 * 0.275, 1e-14);
  const HoleSpec sq(square(0.1));
  const auto grown = sq.inflated(delta);
  EXPECT_NEAR(grown.area(), 0.04 + 0.8 * delta + std::numbers::pi * delta * delta, 1e-14);
  EXPECT_NEAR(grown.signed_distance({0.3, 0.0}), 0.2 - delta, 1e-15);
  EXPECT_NEAR(grown.signed_distance(grown.project({0.31, 0.27})), 0.0, 1e-14);
}

TEST(CellGeometry, RejectsHolesLeavingTheCell) {
  try {
    build_cell_geometry({HoleSpec(Disk{{0.4, 0.0}, 0.2})}, 0.05);
    FAIL() << "expected HoleOutsideCell";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::HoleOutsideCell);
  }
}

TEST(CellGeometry, RejectsInsufficientSeparation) {
  const std::vector<HoleSpec> holes{HoleSpec(Disk{{-0.15, 0.0}, 0.1}), HoleSpec(Disk{{0.15, 0.0}, 0.1})};
  EXPECT_NO_THROW(build_cell_geometry(holes, 0.09));
  try {
    build_cell_geometry(holes, 0.2);
    FAIL() << "expected SeparationViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SeparationViolation);
  }
}

TEST(CellGeometry, SignedDistanceIsMinimumOverHoles) {
  const auto cell =
      build_cell_geometry({HoleSpec(Disk{{-0.2, 0.0}, 0.1}), HoleSpec(Disk{{0.2, 0.0}, 0.05})}, 0.1);
  EXPECT_NEAR(cell.signed_distance({0.0, 0.0}), 0.1, 1e-15);
  EXPECT_EQ(cell.nearest_hole({0.1, 0.0}), 1);
  EXPECT_EQ(cell.nearest_hole({-0.05, 0.0}), 0);
  EXPECT_TRUE(std::isinf(build_cell_geometry({}, 0.1).signed_distance({0.0, 0.0})));
}

TEST(PerforatedDomain, ScaledDistanceToBoundary) {
  const auto cell = build_cell_geometry({unit_disk(0.25)}, 0.2);
  const auto spec = build_perforated_domain(cell, {2, 1}, 4);
  EXPECT_EQ(spec.cells_x(), 8);
  EXPECT_EQ(spec.cells_y(), 4);
  EXPECT_EQ(spec.hole_count(), 32);
  EXPECT_NEAR(spec.boundary_hole_distance(), 0.25 / 4.0, 1e-15);
}

TEST(CellGeometry, HoleTooCloseToCellBoundary) {
  try {
    build_cell_geometry({unit_disk(0.45)}, 0.2);
    FAIL() << "expected SeparationViolation";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SeparationViolation);
  }
}

TEST(PerforatedDomain, RejectsEmptyLattice) {
  const auto cell = build_cell_geometry({unit_disk(0.25)}, 0.2);
  EXPECT_THROW(build_perforated_domain(cell, {0, 1}, 2), Error);
  EXPECT_THROW(build_perforated_domain(cell, {1, 1}, 0), Error);
}

TEST(CellCoordinate, MapsEachCellOntoY) {
  const double eps = 0.25;
  const Point y = cell_coordinate({0.3, 0.55}, eps);
  EXPECT_NEAR(y.x, 0.3 / eps - 1.0 - 0.5, 1e-15);
  EXPECT_NEAR(y.y, 0.55 / eps - 2.0 - 0.5, 1e-15);
  for (double x : {0.0, 0.1, 0.37, 0.99}) {
    const Point c = cell_coordinate({x, x}, eps);
    EXPECT_GE(c.x, -0.5);
    EXPECT_LT(c.x, 0.5);
  }
}
