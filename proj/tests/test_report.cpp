#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "perfhom/errors.hpp"
#include "perfhom/report.hpp"

using namespace perfhom;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("perfhom_test_report_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int line_count(const fs::path& p) {
  std::ifstream in(p);
  int n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

ExperimentConfig lipschitz_config() {
  ExperimentConfig c;
  c.name = "lip";
  c.kind = ExperimentKind::Lipschitz;
  c.holes = {HoleConfig{HoleConfig::Shape::Disk, {0.0, 0.0}, 0.25, {}}};
  c.n = 8;
  c.eps_denominators = {1, 2, 4, 8};
  return c;
}

}  // namespace

TEST(Report, EmptyCellOnlyRunGivesIdentity) {
  ExperimentConfig c;
  c.name = "empty";
  c.weight = WeightMode::GroundState;
  c.n = 8;
  const auto report = run_experiment(c);
  EXPECT_NEAR(report.cell.tensor.a_hat[0][0], 1.0, 1e-12);
  EXPECT_NEAR(report.cell.tensor.a_hat[1][1], 1.0, 1e-12);
  EXPECT_NEAR(report.cell.tensor.a_hat[0][1], 0.0, 1e-12);
  EXPECT_NEAR(report.cell.tensor.a0, 1.0, 1e-12);
  const auto json = to_json(report);
  EXPECT_EQ(json["convergence"]["status"], "skipped");
  EXPECT_EQ(json["spectrum"]["status"], "skipped");
  EXPECT_EQ(json["tool"]["name"], "perfhom");

  const fs::path dir = scratch_dir("empty");
  const auto files = write_outputs(report, dir.string());
  EXPECT_EQ(files.size(), 2u);
  EXPECT_TRUE(fs::exists(dir / "report.json"));
  EXPECT_TRUE(fs::exists(dir / "timings.json"));
  EXPECT_EQ(nlohmann::json::parse(slurp(dir / "report.json")), json);
}

TEST(Report, CsvHasOneRowPerEpsilon) {
  const auto report = run_experiment(lipschitz_config());
  const fs::path dir = scratch_dir("csv");
  write_outputs(report, dir.string());
  ASSERT_TRUE(fs::exists(dir / "lip_lipschitz_r_inf.csv"));
  EXPECT_EQ(line_count(dir / "lip_lipschitz_r_inf.csv"), 5);
  EXPECT_EQ(line_count(dir / "lip_lipschitz_r_p2.csv"), 5);
  const std::string csv = slurp(dir / "lip_lipschitz_r_inf.csv");
  EXPECT_EQ(csv.rfind("epsilon,value\n1,", 0), 0u);
  EXPECT_EQ(to_json(report)["lipschitz"]["status"], "ok");
}

TEST(Report, OutputIsIndependentOfWorkerCount) {
  auto c = lipschitz_config();
  c.workers = 1;
  const auto a = to_json(run_experiment(c)).dump(2);
  c.workers = 3;
  const auto b = to_json(run_experiment(c)).dump(2);
  EXPECT_EQ(a, b);
}

TEST(Report, ErrorRecordCarriesKindAndDetails) {
  const auto cg = error_record(CGNoConvergenceError("stalled", 1e-3, 42));
  EXPECT_EQ(cg["status"], "error");
  EXPECT_EQ(cg["kind"], "CGNoConvergence");
  EXPECT_EQ(cg["iterations"], 42);
  EXPECT_DOUBLE_EQ(cg["residual"].get<double>(), 1e-3);
  const auto cfg = error_record(ConfigValidationError("discretization.n", "odd"));
  EXPECT_EQ(cfg["field"], "discretization.n");
  EXPECT_EQ(error_record(std::runtime_error("x"))["kind"], "Internal");
}

TEST(Report, UnwritableDirectoryIsAnIoFailure) {
  ExperimentConfig c;
  c.n = 4;
  const auto report = run_experiment(c);
  const fs::path blocker = scratch_dir("blocker");
  std::ofstream(blocker.string()) << "file";
  try {
    write_outputs(report, (blocker / "sub").string());
    FAIL() << "expected IoFailure";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::IoFailure);
  }
}
