#include <gtest/gtest.h>

#include <filesystem>

#include "perfhom/acceptance.hpp"
#include "perfhom/config.hpp"
#include "perfhom/errors.hpp"

using namespace perfhom;

namespace {

const std::string kMinimal = R"(
name: t
kind: converge
geometry:
  holes:
    - disk: {center: [0, 0], radius: 0.25}
discretization:
  n: 8
  epsilons: ["1/2", "1/4", "1/8"]
)";

std::string field_of(const std::string& text) {
  try {
    validate_config(parse_config(text));
  } catch (const ConfigValidationError& e) {
    return e.field();
  }
  return "";
}

}  // namespace

TEST(Config, ParsesEpsilonLadder) {
  EXPECT_EQ(parse_epsilon("1/16"), 16);
  EXPECT_EQ(parse_epsilon("0.125"), 8);
  EXPECT_THROW(parse_epsilon("0.3"), ConfigValidationError);
  EXPECT_THROW(parse_epsilon("2/3"), ConfigValidationError);
  const auto c = parse_config(kMinimal);
  EXPECT_EQ(c.eps_denominators, (std::vector<int>{2, 4, 8}));
  EXPECT_EQ(c.epsilons(), (std::vector<double>{0.5, 0.25, 0.125}));
}

TEST(Config, EchoRoundTrips) {
  auto c = parse_config(kMinimal);
  c.holes = {HoleConfig{HoleConfig::Shape::Polygon, {}, 0.0, {{-0.1, -0.1}, {0.2, -0.1}, {0.05, 0.2}}}};
  c.coefficient = CoefficientPreset::Oscillating;
  c.f = {SourcePreset::Bump, 2.5};
  c.p_values = {2.0, 3.0, 6.0};
  auto back = parse_config(to_json(c).dump());
  back.out_dir = c.out_dir;
  back.workers = c.workers;
  EXPECT_EQ(back, c);
  EXPECT_FALSE(to_json(c).contains("output"));
}

TEST(Config, SyntaxErrorIsAParseError) {
  try {
    parse_config("name: [unterminated");
    FAIL() << "expected ConfigParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ConfigParseError);
  }
}

TEST(Config, UnknownKeysNameTheirSection) {
  try {
    parse_config(kMinimal + "solver: {cg_tol: 1}\n");
    FAIL() << "expected ConfigValidationError";
  } catch (const ConfigValidationError& e) {
    EXPECT_EQ(e.field(), "solver.cg_tol");
  }
}

TEST(Config, ValidationNamesTheField) {
  EXPECT_EQ(field_of(kMinimal), "");
  EXPECT_EQ(field_of(kMinimal + "spectrum: {k: 0}\n"), "spectrum.k");
  EXPECT_EQ(field_of(kMinimal + "solver: {cg_tolerance: -1}\n"), "solver.cg_tolerance");
  EXPECT_EQ(field_of(kMinimal + "output: {workers: 0}\n"), "output.workers");
  EXPECT_EQ(field_of(R"(
kind: converge
discretization: {n: 8, epsilons: ["1/2", "1/4"]}
)"),
            "discretization.epsilons");
  EXPECT_EQ(field_of(R"(
kind: cell
discretization: {n: 7}
)"),
            "discretization.n");
  EXPECT_EQ(field_of(R"(
kind: cell
source: {form: weighted, F: {preset: constant}}
)"),
            "source.F");
}

TEST(Config, GeometryViolationsSurfaceAsValidationErrors) {
  const std::string text = R"(
kind: cell
geometry:
  c0: 0.3
  holes:
    - disk: {center: [0, 0], radius: 0.3}
)";
  EXPECT_EQ(field_of(text).rfind("geometry", 0), 0u);
}

TEST(Config, ShippedConfigsAreValid) {
  const std::filesystem::path dir = std::filesystem::path(PERFHOM_SOURCE_DIR) / "configs";
  int count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".yaml") continue;
    SCOPED_TRACE(entry.path().string());
    EXPECT_NO_THROW(validate_config(load_config(entry.path().string())));
    ++count;
  }
  EXPECT_GE(count, 5);
}

TEST(Config, BenchmarkFileMatchesBuiltIn) {
  const auto file = load_config((std::filesystem::path(PERFHOM_SOURCE_DIR) / "configs" / "benchmark.yaml").string());
  EXPECT_EQ(file, parse_config(kBenchmarkConfig));
}

TEST(Config, PresetsEvaluate) {
  EXPECT_EQ(make_scalar_preset({SourcePreset::Zero, 3.0}, 1.0, 1.0)({0.3, 0.3}), 0.0);
  EXPECT_EQ(make_scalar_preset({SourcePreset::Constant, 3.0}, 1.0, 1.0)({0.3, 0.3}), 3.0);
  EXPECT_NEAR(make_scalar_preset({SourcePreset::Sine, 2.0}, 2.0, 1.0)({1.0, 0.5}), 2.0, 1e-15);
  EXPECT_NEAR(make_scalar_preset({SourcePreset::Bump, 1.5}, 1.0, 1.0)({0.5, 0.5}), 1.5, 1e-15);
}

TEST(Config, MissingFileIsAnIoFailure) {
  try {
    load_config("/nonexistent/perfhom.yaml");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoFailure);
  }
}
