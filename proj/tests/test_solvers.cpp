#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "perfhom/solvers.hpp"
#include "perfhom/weight.hpp"

using namespace perfhom;

namespace {

constexpr double kPi = std::numbers::pi;

CellGeometry disk_cell() { return build_cell_geometry({HoleSpec(Disk{{0.0, 0.0}, 0.25})}, 0.2); }

struct Domain {
  PerforatedDomainSpec spec;
  Mesh cell_mesh;
  Mesh mesh;
  WeightField w;
  std::vector<double> phi;
};

Domain make_domain(const CellGeometry& cell, int n, int N) {
  Domain d{build_perforated_domain(cell, {1, 1}, N), triangulate_cell(cell, n), {}, {}, {}};
  d.mesh = tile_domain_mesh(d.cell_mesh, d.spec);
  d.w = distance_weight(cell, d.cell_mesh);
  d.phi = evaluate_weight_on_domain(d.w, d.spec, d.mesh);
  return d;
}

LinearSolveSpec tight() {
  LinearSolveSpec s;
  s.tolerance = 1e-12;
  return s;
}

SourceTerm weighted(ScalarFunction f) {
  SourceTerm s;
  s.f = std::move(f);
  return s;
}

HomogenizedTensor tensor_of(Mat2 a, double a0) {
  HomogenizedTensor t;
  t.a_hat = {{{a.a11, a.a12}, {a.a12, a.a22}}};
  t.energy_form = t.a_hat;
  t.a0 = a0;
  return t;
}

}  // namespace

TEST(EpsProblem, ZeroSourceGivesZeroSolution) {
  const Domain d = make_domain(disk_cell(), 8, 2);
  const auto sol = solve_eps_problem(d.mesh, CoefficientField::constant(Mat2::identity()), d.phi,
                                     weighted([](Point) { return 0.0; }), 0.5, tight());
  for (double v : sol.u) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(sol.energy, 0.0);
  EXPECT_TRUE(std::isnan(sol.energy_constant));
}

TEST(EpsProblem, EnergyEqualsLoadWork) {
  const Domain d = make_domain(disk_cell(), 8, 4);
  const auto src = weighted([](Point p) { return 1.0 + p.x * p.y; });
  const auto sol = solve_eps_problem(d.mesh, CoefficientField::constant(Mat2::identity()), d.phi, src, 0.25, tight());
  const auto b = assemble_load(d.mesh, src, d.phi);
  EXPECT_NEAR(sol.energy, std::inner_product(b.begin(), b.end(), sol.u.begin(), 0.0), 1e-10 * sol.energy);
  EXPECT_GT(sol.energy, 0.0);
  for (int v : d.mesh.outer_vertices()) EXPECT_EQ(sol.u[v], 0.0);
}

TEST(EpsProblem, MirrorSymmetricDataGiveMirrorSymmetricSolution) {
  const Domain d = make_domain(disk_cell(), 8, 2);
  const auto sol = solve_eps_problem(d.mesh, CoefficientField::constant(Mat2::identity()), d.phi,
                                     weighted([](Point) { return 1.0; }), 0.5, tight());
  std::map<std::pair<long, long>, int> index;
  auto key = [](Point p) { return std::make_pair(std::lround(p.x * 1e9), std::lround(p.y * 1e9)); };
  for (std::size_t v = 0; v < d.mesh.vertices.size(); ++v) index[key(d.mesh.vertices[v])] = static_cast<int>(v);
  int matched = 0;
  for (std::size_t v = 0; v < d.mesh.vertices.size(); ++v) {
    const Point p = d.mesh.vertices[v];
    const auto it = index.find(key({1.0 - p.x, p.y}));
    if (it == index.end()) continue;
    ++matched;
    EXPECT_NEAR(sol.u[v], sol.u[it->second], 1e-9);
  }
  EXPECT_GT(matched, static_cast<int>(d.mesh.vertices.size()) / 2);
}

TEST(Homogenized, ManufacturedSolutionConvergesQuadratically) {
  auto exact = [](Point p) { return std::sin(kPi * p.x) * std::sin(kPi * p.y); };
  const auto t = tensor_of(Mat2{1.0, 0.0, 1.0}, 1.0);
  double prev = 0.0;
  for (int n : {8, 16, 32}) {
    const Mesh m = triangulate_solid(1.0, 1.0, n);
    const auto sol = solve_homogenized(m, t, [&](Point p) { return 2.0 * kPi * kPi * exact(p); }, tight());
    double err = 0.0;
    for (std::size_t v = 0; v < m.vertices.size(); ++v) err = std::max(err, std::abs(sol.u0[v] - exact(m.vertices[v])));
    if (prev > 0.0) EXPECT_GT(prev / err, 3.0) << "n=" << n;
    prev = err;
  }
  EXPECT_LT(prev, 5e-3);
}

TEST(Homogenized, AnisotropicTensorSolvesItsOwnProblem) {
  // u = x(1-x) y(1-y) with A = diag(2, 0.5): F = 4 y(1-y) + x(1-x).
  const auto t = tensor_of(Mat2{2.0, 0.0, 0.5}, 1.0);
  const Mesh m = triangulate_solid(1.0, 1.0, 32);
  const auto sol = solve_homogenized(
      m, t, [](Point p) { return 4.0 * p.y * (1.0 - p.y) + p.x * (1.0 - p.x); }, tight());
  for (std::size_t v = 0; v < m.vertices.size(); ++v) {
    const Point p = m.vertices[v];
    EXPECT_NEAR(sol.u0[v], p.x * (1.0 - p.x) * p.y * (1.0 - p.y), 2e-4);
  }
}

TEST(Homogenized, SpectrumIsInvariantUnderJointScaling) {
  const Mesh m = triangulate_solid(1.0, 1.0, 16);
  const auto mu1 = homogenized_spectrum(m, tensor_of(Mat2::identity(), 1.0), 2, {.tolerance = 1e-10});
  const auto mu2 = homogenized_spectrum(m, tensor_of(2.5 * Mat2::identity(), 2.5), 2, {.tolerance = 1e-10});
  ASSERT_EQ(mu1.size(), 2u);
  EXPECT_NEAR(mu1[0], 2.0 * kPi * kPi, 0.02 * 2.0 * kPi * kPi);
  EXPECT_NEAR(mu1[1], 5.0 * kPi * kPi, 0.05 * 5.0 * kPi * kPi);
  for (int j = 0; j < 2; ++j) EXPECT_NEAR(mu1[j], mu2[j], 1e-8 * mu1[j]);
}

TEST(EpsSpectrum, WithoutHolesMatchesTheSquare) {
  const Domain d = make_domain(build_cell_geometry({}, 0.2), 8, 2);
  const auto lambda = dirichlet_spectrum_eps(d.mesh, CoefficientField::constant(Mat2::identity()), 0.5, 1);
  EXPECT_NEAR(lambda[0], 2.0 * kPi * kPi, 0.01 * 2.0 * kPi * kPi);
}

TEST(EpsSpectrum, HolesRaiseTheEigenvalue) {
  const auto a = CoefficientField::constant(Mat2::identity());
  const Domain plain = make_domain(build_cell_geometry({}, 0.2), 8, 2);
  const Domain holes = make_domain(disk_cell(), 8, 2);
  const double l0 = dirichlet_spectrum_eps(plain.mesh, a, 0.5, 1)[0];
  const double l1 = dirichlet_spectrum_eps(holes.mesh, a, 0.5, 1)[0];
  EXPECT_GT(l1, 4.0 * l0);
}

TEST(EpsSpectrum, RefinementLowersTheEigenvalue) {
  const auto a = CoefficientField::constant(Mat2::identity());
  double prev = 1e30;
  for (int n : {4, 8, 16}) {
    const Domain d = make_domain(disk_cell(), n, 2);
    const double l = dirichlet_spectrum_eps(d.mesh, a, 0.5, 1)[0];
    EXPECT_LT(l, prev);
    prev = l;
  }
}

TEST(ExtendedSource, VanishesInHolesAndScalesOutside) {
  const auto cell = disk_cell();
  auto mesh = std::make_shared<const Mesh>(triangulate_cell(cell, 16));
  const auto w = distance_weight(cell, *mesh);
  const auto f = extended_weighted_source(mesh, w.nodal_values, [](Point) { return 3.0; }, 0.25);
  EXPECT_EQ(f({0.125, 0.125}), 0.0);
  // Cell corners sit at distance > c0/2 from the hole, where the weight is the cap.
  EXPECT_NEAR(f({0.0, 0.0}), 3.0 * 0.1, 1e-12);
  EXPECT_NEAR(f({0.25, 0.5}), 3.0 * 0.1, 1e-12);
}
