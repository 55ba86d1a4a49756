#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "perfhom/cell_problem.hpp"
#include "perfhom/errors.hpp"

using namespace perfhom;

namespace {

CellGeometry disk_cell() { return build_cell_geometry({HoleSpec(Disk{{0.0, 0.0}, 0.25})}, 0.2); }
CellGeometry empty_cell() { return build_cell_geometry({}, 0.2); }

LinearSolveSpec tight() {
  LinearSolveSpec s;
  s.tolerance = 1e-12;
  return s;
}

struct Stage {
  CellMeshPair meshes;
  CoefficientField a;
  WeightField w;
  CorrectorSet chi;
  HomogenizedTensor tensor;
};

Stage solve_stage(const CellGeometry& cell, int n, CoefficientField a, bool ground_state) {
  Stage s{triangulate_cell_pair(cell, n), a, {}, {}, {}};
  s.w = ground_state ? ground_state_weight(cell, s.meshes.perforated, a, {.tolerance = 1e-11})
                     : distance_weight(cell, s.meshes.perforated);
  s.chi = solve_correctors(s.meshes.perforated, a, s.w, tight());
  s.tensor = homogenized_matrix(s.meshes.perforated, a, s.w, s.chi);
  return s;
}

}  // namespace

TEST(Correctors, LaminateGivesHarmonicAndArithmeticMeans) {
  const auto a = CoefficientField::periodic(
      [](Point y) { return (2.0 + std::sin(2.0 * std::numbers::pi * y.x)) * Mat2::identity(); });
  double prev = 1.0;
  for (int n : {16, 32, 64}) {
    const Stage s = solve_stage(empty_cell(), n, a, true);
    const double err = std::abs(s.tensor.a_hat[0][0] - std::sqrt(3.0));
    EXPECT_LT(err, prev / 3.0) << "n=" << n;
    prev = err;
    EXPECT_NEAR(s.tensor.a_hat[1][1], 2.0, 1e-10);
    EXPECT_NEAR(s.tensor.a_hat[0][1], 0.0, 1e-10);
    EXPECT_NEAR(s.tensor.a0, 1.0, 1e-12);
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(Correctors, ZeroMeanAndPeriodic) {
  const Stage s = solve_stage(disk_cell(), 16, CoefficientField::constant(Mat2::identity()), false);
  const Mesh& m = s.meshes.perforated;
  for (int j = 0; j < 2; ++j) {
    EXPECT_NEAR(integrate(m, s.chi.chi[j]), 0.0, 1e-12);
    for (const auto& [l, r] : m.periodic_x) EXPECT_EQ(s.chi.chi[j][l], s.chi.chi[j][r]);
    EXPECT_LE(s.chi.solver_residuals[j], 1e-12);
  }
}

TEST(Correctors, DiskTensorIsIsotropicAndBelowIdentity) {
  const Stage s = solve_stage(disk_cell(), 32, CoefficientField::constant(Mat2::identity()), true);
  const auto& t = s.tensor;
  EXPECT_NEAR(t.a_hat[0][1], 0.0, 1e-10);
  EXPECT_NEAR(t.a_hat[0][0], t.a_hat[1][1], 1e-8);
  EXPECT_GT(t.min_eigenvalue(), 0.0);
  EXPECT_LT(t.a_hat[0][0], t.a0);
  EXPECT_LT(t.form_discrepancy, 1e-8);
}

TEST(Correctors, ConstantCoefficientOnEmptyCellIsExact) {
  // Constant A on an empty cell: correctors vanish and the tensor is A itself.
  const Stage s = solve_stage(empty_cell(), 8, CoefficientField::constant(Mat2{2.0, 0.3, 1.0}), true);
  EXPECT_NEAR(s.tensor.a_hat[0][0], 2.0, 1e-12);
  EXPECT_NEAR(s.tensor.a_hat[0][1], 0.3, 1e-12);
  EXPECT_NEAR(s.tensor.a_hat[1][1], 1.0, 1e-12);
  for (double v : s.chi.chi[0]) EXPECT_NEAR(v, 0.0, 1e-12);
}

TEST(Correctors, WeightScalingIsQuadratic) {
  const Stage s = solve_stage(disk_cell(), 16, CoefficientField::constant(Mat2::identity()), false);
  const auto w3 = s.w.scaled(3.0);
  const auto chi3 = solve_correctors(s.meshes.perforated, s.a, w3, tight());
  const auto t3 = homogenized_matrix(s.meshes.perforated, s.a, w3, chi3);
  for (std::size_t v = 0; v < chi3.chi[0].size(); ++v) EXPECT_NEAR(chi3.chi[0][v], s.chi.chi[0][v], 1e-9);
  EXPECT_NEAR(t3.a_hat[0][0], 9.0 * s.tensor.a_hat[0][0], 1e-10);
  EXPECT_NEAR(t3.a0, 9.0 * s.tensor.a0, 1e-12);
}

TEST(BlochTensor, ConvergesToWeightedTensor) {
  const auto a = CoefficientField::constant(Mat2::identity());
  double prev = 1.0;
  for (int n : {16, 32, 64}) {
    const Stage s = solve_stage(disk_cell(), n, a, true);
    const auto b = bloch_tensor(s.meshes.perforated, a, s.w, tight());
    EXPECT_NEAR(b.a0, 1.0, 1e-10);
    EXPECT_NEAR(b.a_hat[0][1], 0.0, 1e-9);
    const double gap = std::abs(b.a_hat[0][0] - s.tensor.a_hat[0][0]);
    EXPECT_LT(gap, prev / 2.5) << "n=" << n;
    prev = gap;
  }
  EXPECT_LT(prev, 1e-3);
}

TEST(BlochTensor, RejectsDistanceWeight) {
  const auto cell = disk_cell();
  const Mesh m = triangulate_cell(cell, 8);
  try {
    bloch_tensor(m, CoefficientField::constant(Mat2::identity()), distance_weight(cell, m));
    FAIL() << "expected InvalidArgument";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidArgument);
  }
}

TEST(FluxCorrectors, AntisymmetricWithZeroMeanData) {
  const Stage s = solve_stage(disk_cell(), 16, CoefficientField::constant(Mat2::identity()), false);
  const auto flux = flux_correctors(s.meshes, s.a, s.w, s.chi, s.tensor, tight());
  EXPECT_EQ(flux_antisymmetry_defect(flux), 0.0);
  for (const auto& row : flux.b_integrals)
    for (double b : row) EXPECT_LE(std::abs(b), 1e-8);
  EXPECT_LT(flux_weak_residual(flux), 0.05);
}

TEST(FluxCorrectors, WeakResidualDecreasesUnderRefinement) {
  double prev = 0.0;
  for (int n : {16, 32}) {
    const Stage s = solve_stage(disk_cell(), n, CoefficientField::constant(Mat2::identity()), false);
    const double r = flux_weak_residual(flux_correctors(s.meshes, s.a, s.w, s.chi, s.tensor, tight()));
    if (prev > 0.0) EXPECT_GT(prev / r, 1.8);
    prev = r;
  }
}

TEST(FluxCorrectors, InconsistentTensorRaisesMeanNotZero) {
  Stage s = solve_stage(disk_cell(), 8, CoefficientField::constant(Mat2::identity()), false);
  s.tensor.a_hat[0][0] += 0.01;
  try {
    flux_correctors(s.meshes, s.a, s.w, s.chi, s.tensor, tight());
    FAIL() << "expected MeanNotZero";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MeanNotZero);
  }
}
