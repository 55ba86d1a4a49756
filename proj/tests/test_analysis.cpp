#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "perfhom/analysis.hpp"
#include "perfhom/errors.hpp"

using namespace perfhom;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.name = "small";
  c.kind = ExperimentKind::Converge;
  c.holes = {HoleConfig{HoleConfig::Shape::Disk, {0.0, 0.0}, 0.25, {}}};
  c.n = 8;
  c.eps_denominators = {2, 4, 8};
  c.cg_tolerance = 1e-11;
  return c;
}

}  // namespace

TEST(FitLogSlope, RecoversPowerLaw) {
  const std::vector<double> x{0.5, 0.25, 0.125, 0.0625};
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 1.5));
  const auto fit = fit_log_slope(x, y);
  EXPECT_NEAR(fit.slope, 1.5, 1e-12);
  EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-12);
  EXPECT_LT(fit.residual, 1e-12);
  EXPECT_TRUE(fit.reliable);
}

TEST(FitLogSlope, FlagsScatterAndNonPositiveData) {
  EXPECT_FALSE(fit_log_slope({0.5, 0.25, 0.125}, {1.0, 0.0, 0.5}).reliable);
  EXPECT_FALSE(fit_log_slope({0.5, 0.25, 0.125}, {1.0, 0.1, 1.0}).reliable);
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(37);
  parallel_for(37, 4, [&](int i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, RethrowsWorkerFailure) {
  EXPECT_THROW(parallel_for(8, 3,
                            [](int i) {
                              if (i == 5) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(FirstOrder, CutoffVanishesAtTheOuterBoundaryAndIsOneInside) {
  const auto config = small_config();
  const auto stage = prepare_cell_stage(config);
  const auto ladder = solve_ladder(config, stage);
  const auto& inst = ladder[1];
  const Mesh solid = triangulate_solid(1.0, 1.0, 4 * config.n);
  const auto u0 = solve_homogenized(solid, stage.tensor, make_scalar_preset(config.f, 1.0, 1.0), linear_spec(config));
  const auto fo = first_order_approximation(inst.domain, inst.solution, solid, u0, stage.correctors, inst.spec);
  EXPECT_NEAR(fo.c1, config.c0 / 4.0, 1e-15);
  EXPECT_NEAR(fo.outer_layer, 2.0 * fo.inner_layer, 1e-15);
  for (std::size_t v = 0; v < inst.domain.vertices.size(); ++v) {
    const Point p = inst.domain.vertices[v];
    const double d = std::min({p.x, 1.0 - p.x, p.y, 1.0 - p.y});
    EXPECT_GE(fo.eta[v], 0.0);
    EXPECT_LE(fo.eta[v], 1.0);
    if (d <= fo.inner_layer) EXPECT_EQ(fo.eta[v], 0.0);
    if (d >= fo.outer_layer * (1.0 + 1e-12)) EXPECT_EQ(fo.eta[v], 1.0);
    if (inst.domain.on_outer[v]) EXPECT_NEAR(fo.w[v], 0.0, 1e-12);
  }
}

TEST(Convergence, ReportsOneEntryPerEpsilonAndCorrectorHelps) {
  const auto config = small_config();
  const auto stage = prepare_cell_stage(config);
  const auto report = convergence_study(config, stage);
  ASSERT_EQ(report.entries.size(), 3u);
  for (const auto& e : report.entries) {
    EXPECT_GT(e.e_grad, 0.0);
    EXPECT_LT(e.e_grad, e.e_grad_uncorrected);
    EXPECT_GT(e.f_norm_l2, 0.0);
  }
  EXPECT_TRUE(report.corrector_improves);
  EXPECT_GT(report.l2.slope, 0.5);
}

TEST(Convergence, EmptyCellIsFlaggedWithoutContrast) {
  auto config = small_config();
  config.holes.clear();
  const auto report = convergence_study(config, prepare_cell_stage(config));
  EXPECT_NE(std::find(report.flags.begin(), report.flags.end(), "NoHomogenizationContrast"), report.flags.end());
}

TEST(Convergence, DivergenceFormIsRejected) {
  auto config = small_config();
  config.form = LoadForm::DivForm;
  try {
    convergence_study(config, prepare_cell_stage(config));
    FAIL() << "expected ConfigValidationError";
  } catch (const ConfigValidationError& e) {
    EXPECT_EQ(e.field(), "source.form");
  }
}

TEST(Lipschitz, ZeroDataHasNoRatios) {
  auto config = small_config();
  config.f = {SourcePreset::Zero, 0.0};
  const auto report = lipschitz_uniformity(config, prepare_cell_stage(config));
  for (const auto& e : report.entries) EXPECT_FALSE(e.r_inf.has_value());
  EXPECT_FALSE(report.r_inf_variation.has_value());
}

TEST(Lipschitz, RatiosArePositiveAndBounded) {
  const auto config = small_config();
  const auto report = lipschitz_uniformity(config, prepare_cell_stage(config));
  ASSERT_TRUE(report.r_inf_variation.has_value());
  EXPECT_GE(*report.r_inf_variation, 1.0);
  EXPECT_LT(*report.r_inf_variation, 2.0);
  ASSERT_EQ(report.r_p_variation.size(), 2u);
}

TEST(Probes, PoincareWithoutHolesIsTheSquareConstant) {
  const auto cell = build_cell_geometry({}, 0.2);
  const auto spec = build_perforated_domain(cell, {1, 1}, 2);
  const Mesh dom = tile_domain_mesh(triangulate_cell(cell, 16), spec);
  const double cp = poincare_probe(dom, std::vector<double>(dom.vertices.size(), 1.0), {.tolerance = 1e-9});
  EXPECT_NEAR(cp, 1.0 / (std::sqrt(2.0) * std::numbers::pi), 2e-3);
}

TEST(Probes, ExtensionOfLinearFieldMatchesAnalyticRatio) {
  const auto cell = build_cell_geometry({HoleSpec(Disk{{0.0, 0.0}, 0.25})}, 0.2);
  const auto probe = extension_probe(cell.inflated(0.025), 16, 5, 11);
  EXPECT_NEAR(probe.analytic_linear_ratio, 1.0 / std::sqrt(1.0 - std::numbers::pi * 0.275 * 0.275), 1e-12);
  EXPECT_NEAR(probe.linear_ratio / probe.analytic_linear_ratio, 1.0, 0.01);
  EXPECT_GE(probe.max_ratio, 1.0);
  EXPECT_EQ(probe.trials, 5);
}

TEST(Probes, SobolevProbeIsSeeded) {
  const auto cell = build_cell_geometry({HoleSpec(Disk{{0.0, 0.0}, 0.25})}, 0.2);
  const Mesh cm = triangulate_cell(cell, 8);
  const auto spec = build_perforated_domain(cell, {1, 1}, 2);
  const Mesh dom = tile_domain_mesh(cm, spec);
  const auto phi = evaluate_weight_on_domain(distance_weight(cell, cm), spec, dom);
  const double a = sobolev_linf_probe(dom, phi, 1.0, 1.0, 10, 5);
  EXPECT_GT(a, 0.0);
  EXPECT_EQ(a, sobolev_linf_probe(dom, phi, 1.0, 1.0, 10, 5));
  EXPECT_GE(sobolev_linf_probe(dom, phi, 1.0, 1.0, 20, 5), a);
}
