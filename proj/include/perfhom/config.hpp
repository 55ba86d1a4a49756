#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "perfhom/fem/assembly.hpp"
#include "perfhom/geometry.hpp"
#include "perfhom/weight.hpp"

namespace perfhom {

enum class ExperimentKind { CellOnly, Converge, Lipschitz, Spectrum, Probes, All };

enum class CoefficientPreset { Constant, Oscillating };

enum class SourcePreset { Zero, Constant, Sine, Bump };

struct ScalarPreset {
  SourcePreset kind = SourcePreset::Constant;
  double amplitude = 1.0;
  friend bool operator==(const ScalarPreset&, const ScalarPreset&) = default;
};

struct HoleConfig {
  enum class Shape { Disk, Polygon } shape = Shape::Disk;
  Point center;
  double radius = 0.0;
  std::vector<Point> vertices;
  friend bool operator==(const HoleConfig&, const HoleConfig&) = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  ExperimentKind kind = ExperimentKind::CellOnly;
  std::uint64_t seed = 1;

  std::vector<HoleConfig> holes;
  double c0 = 0.2;
  int width = 1;
  int height = 1;

  WeightMode weight = WeightMode::DistanceType;

  CoefficientPreset coefficient = CoefficientPreset::Constant;
  /// a11, a12, a22 of the constant matrix, or of the base matrix modulated by the oscillating preset.
  std::array<double, 3> matrix{1.0, 0.0, 1.0};
  double amplitude = 0.5;

  int n = 16;
  /// Denominators N of eps = 1/N.
  std::vector<int> eps_denominators{4, 8, 16};

  LoadForm form = LoadForm::WeightedSource;
  ScalarPreset f;
  std::array<double, 2> f_vector{1.0, 0.0};
  ScalarPreset F{SourcePreset::Zero, 0.0};

  double cg_tolerance = 1e-10;
  int cg_max_iterations = 0;
  double eigen_tolerance = 1e-8;
  int eigen_max_iterations = 500;

  int spectrum_k = 1;
  /// Solid-mesh resolution for the homogenized spectrum (extrapolated from n and 2n).
  int spectrum_solid_n = 128;

  int probe_trials = 100;
  double lipschitz_p = 4.0;
  std::vector<double> p_values{2.0, 4.0};

  std::string out_dir = "out";
  int workers = 1;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  CellGeometry cell_geometry() const;
  CoefficientField coefficient_field() const;
  /// Right-hand side on the physical domain.
  SourceTerm source() const;
  std::vector<double> epsilons() const;
};

/// Reads a YAML document (JSON is accepted as a subset).
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// Throws ConfigValidationError naming the offending field.
void validate_config(const ExperimentConfig& config);
/// Canonical echo; parse_config(to_json(c).dump()) == c.
nlohmann::json to_json(const ExperimentConfig& config);

/// Parses "1/N" and returns N.
int parse_epsilon(const std::string& text);

std::string to_string(ExperimentKind kind);
ScalarFunction make_scalar_preset(const ScalarPreset& preset, double width, double height);

}  // namespace perfhom
