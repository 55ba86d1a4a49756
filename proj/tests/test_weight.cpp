#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "perfhom/fem/assembly.hpp"
#include "perfhom/weight.hpp"

using namespace perfhom;

namespace {

CellGeometry disk_cell(double r = 0.25) { return build_cell_geometry({HoleSpec(Disk{{0.0, 0.0}, r})}, 0.2); }

double l2_squared(const Mesh& m, const std::vector<double>& f) {
  const CsrMatrix mass = assemble_weighted_mass(m, {});
  const auto mf = mass.multiply(f);
  return std::inner_product(f.begin(), f.end(), mf.begin(), 0.0);
}

}  // namespace

TEST(CappedDistance, ProfileIsContinuouslyDifferentiable) {
  const double c0 = 0.2;
  auto slope = [&](double d) { return (capped_distance(d + 1e-7, c0) - capped_distance(d - 1e-7, c0)) / 2e-7; };
  EXPECT_DOUBLE_EQ(capped_distance(0.03, c0), 0.03);
  EXPECT_DOUBLE_EQ(capped_distance(0.4, c0), 0.1);
  EXPECT_NEAR(capped_distance(c0 / 2.0, c0), c0 / 2.0, 1e-15);
  EXPECT_NEAR(slope(c0 / 4.0), 1.0, 1e-5);
  EXPECT_NEAR(slope(c0 / 2.0), 0.0, 1e-5);
  for (double d = 0.0; d < 0.3; d += 0.001) {
    EXPECT_GE(slope(d), -1e-9);
    EXPECT_LE(capped_distance(d, c0), c0 / 2.0 + 1e-15);
  }
}

TEST(DistanceWeight, VanishesOnHolesAndIsPeriodic) {
  const Mesh m = triangulate_cell(disk_cell(), 32);
  const WeightField w = distance_weight(disk_cell(), m);
  for (int v : m.hole_vertices()) EXPECT_NEAR(w.nodal_values[v], 0.0, 1e-14);
  for (const auto& [a, b] : m.periodic_x) EXPECT_DOUBLE_EQ(w.nodal_values[a], w.nodal_values[b]);
  for (const auto& [a, b] : m.periodic_y) EXPECT_DOUBLE_EQ(w.nodal_values[a], w.nodal_values[b]);
  EXPECT_TRUE(std::all_of(w.nodal_values.begin(), w.nodal_values.end(), [](double v) { return v >= 0.0; }));
  EXPECT_FALSE(w.lambda_bar.has_value());
}

TEST(DistanceWeight, EmptyCellIsTheCap) {
  const auto cell = build_cell_geometry({}, 0.2);
  const Mesh m = triangulate_cell(cell, 4);
  for (double v : distance_weight(cell, m).nodal_values) EXPECT_DOUBLE_EQ(v, 0.1);
}

TEST(DistanceWeight, ComparabilityMatchesProfileBounds) {
  const auto cell = disk_cell();
  const Mesh m = triangulate_cell(cell, 32);
  const auto c = comparability_constants(cell, m, distance_weight(cell, m));
  double profile_max = 0.0;
  for (double d = 1e-4; d < 0.2; d += 1e-4) profile_max = std::max(profile_max, capped_distance(d, 0.2) / d);
  const double farthest = std::sqrt(0.5) - 0.25;
  EXPECT_LE(c.upper, profile_max + 1e-12);
  EXPECT_GE(c.upper, 1.0 - 1e-12);
  EXPECT_NEAR(c.lower, 0.1 / farthest, 1e-12);
}

TEST(GroundState, PositiveNormalizedAndVanishingOnHoles) {
  const auto cell = disk_cell();
  const Mesh m = triangulate_cell(cell, 24);
  const auto w = ground_state_weight(cell, m, CoefficientField::constant(Mat2::identity()));
  ASSERT_TRUE(w.lambda_bar.has_value());
  EXPECT_GT(*w.lambda_bar, 0.0);
  EXPECT_TRUE(w.normalized);
  EXPECT_NEAR(l2_squared(m, w.nodal_values), 1.0, 1e-10);
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    if (m.on_hole[v])
      EXPECT_EQ(w.nodal_values[v], 0.0);
    else
      EXPECT_GT(w.nodal_values[v], 0.0);
  }
  for (const auto& [a, b] : m.periodic_x) EXPECT_NEAR(w.nodal_values[a], w.nodal_values[b], 1e-14);
}

TEST(GroundState, EigenvalueConvergesFromAboveAndGrowsWithHoleSize) {
  const auto a = CoefficientField::constant(Mat2::identity());
  double prev = 1e9;
  for (int n : {8, 16, 32}) {
    const auto cell = disk_cell();
    const double lambda = *ground_state_weight(cell, triangulate_cell(cell, n), a).lambda_bar;
    EXPECT_LT(lambda, prev);
    prev = lambda;
  }
  const auto small = disk_cell(0.15);
  EXPECT_LT(*ground_state_weight(small, triangulate_cell(small, 32), a).lambda_bar, prev);
}

TEST(GroundState, EmptyCellIsConstant) {
  const auto cell = build_cell_geometry({}, 0.2);
  const Mesh m = triangulate_cell(cell, 8);
  const auto w = ground_state_weight(cell, m, CoefficientField::constant(Mat2::identity()));
  EXPECT_EQ(*w.lambda_bar, 0.0);
  for (double v : w.nodal_values) EXPECT_NEAR(v, 1.0, 1e-14);
}

TEST(GroundState, ScalesWithCoefficient) {
  const auto cell = disk_cell();
  const Mesh m = triangulate_cell(cell, 16);
  const auto w1 = ground_state_weight(cell, m, CoefficientField::constant(Mat2::identity()), {.tolerance = 1e-11});
  const auto w3 = ground_state_weight(cell, m, CoefficientField::constant(3.0 * Mat2::identity()), {.tolerance = 1e-11});
  EXPECT_NEAR(*w3.lambda_bar, 3.0 * *w1.lambda_bar, 1e-8 * *w3.lambda_bar);
  for (std::size_t v = 0; v < m.vertices.size(); ++v) EXPECT_NEAR(w1.nodal_values[v], w3.nodal_values[v], 1e-6);
}

TEST(WeightOnDomain, PullBackReproducesCellValues) {
  const auto cell = disk_cell();
  const Mesh m = triangulate_cell(cell, 8);
  const auto w = distance_weight(cell, m);
  const auto spec = build_perforated_domain(cell, {1, 1}, 3);
  const Mesh dom = tile_domain_mesh(m, spec);
  const auto phi = evaluate_weight_on_domain(w, spec, dom);
  for (std::size_t v = 0; v < dom.vertices.size(); ++v)
    EXPECT_EQ(phi[v], w.nodal_values[dom.lineage[v].cell_vertex]);
  const auto scaled = w.scaled(2.0);
  EXPECT_EQ(scaled.nodal_values[5], 2.0 * w.nodal_values[5]);
}
