#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "perfhom/analysis.hpp"
#include "perfhom/config.hpp"

namespace perfhom {

inline constexpr const char* kToolVersion = "1.0.0";

struct CellReport {
  HomogenizedTensor tensor;
  std::optional<double> lambda_bar;
  std::array<double, 2> corrector_residuals{};
  double flux_weak_residual = 0.0;
  double flux_antisymmetry = 0.0;
  Matrix2 flux_b_integrals{};
  int cell_vertices = 0;
  int cell_triangles = 0;
  double cell_area = 0.0;
};

CellReport cell_report(const CellStage& stage, const ExperimentConfig& config);

struct RunReport {
  ExperimentConfig config;
  CellReport cell;
  std::optional<ConvergenceReport> convergence;
  std::optional<LipschitzReport> lipschitz;
  std::optional<SpectralReport> spectrum;
  std::optional<ProbeReport> probes;
  /// Wall-clock seconds per stage; written to timings.json, never into report.json.
  std::map<std::string, double> timings;
};

/// Runs the stages selected by config.kind; `cell_only` forces the cell stage alone.
RunReport run_experiment(const ExperimentConfig& config, bool cell_only = false);

/// Deterministic serialization: sorted keys, skipped stages marked, no timings.
nlohmann::json to_json(const RunReport& report);

/// One `<experiment>_<series>.csv` per series with header `epsilon,value`; returns the paths written.
std::vector<std::string> emit_plot_data(const RunReport& report, const std::string& out_dir);

/// report.json, timings.json and the CSV series; returns the paths written.
std::vector<std::string> write_outputs(const RunReport& report, const std::string& out_dir);

/// Machine-readable record for a failed run.
nlohmann::json error_record(const std::exception& e);

}  // namespace perfhom
