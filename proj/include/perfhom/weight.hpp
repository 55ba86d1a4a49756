#pragma once

#include <optional>
#include <vector>

#include "perfhom/fem/assembly.hpp"
#include "perfhom/fem/eigen_solve.hpp"
#include "perfhom/geometry.hpp"
#include "perfhom/mesh.hpp"

namespace perfhom {

enum class WeightMode { DistanceType, GroundState };

/// Degenerate weight phi, nodal on a punctured-cell mesh.
struct WeightField {
  std::vector<double> nodal_values;
  WeightMode mode = WeightMode::DistanceType;
  /// Principal periodic-Dirichlet eigenvalue, GroundState only.
  std::optional<double> lambda_bar;
  /// ||phi||_{L^2(Y_*)} = 1.
  bool normalized = false;

  /// Copy with every value multiplied by s.
  WeightField scaled(double s) const;
};

/// Distance profile: identity below c0/4, constant c0/2 above c0/2 and a C^1
/// quadratic blend d + s^2 (c0/2 - d), s = (d - c0/4) / (c0/4), in between.
double capped_distance(double d, double c0);

WeightField distance_weight(const CellGeometry& cell, const Mesh& cell_mesh);

/// Principal eigenpair of -div(A grad) on Y_* with phi = 0 on dT and periodic
/// faces; phi > 0, ||phi||_{L^2(Y_*)} = 1. Without holes returns phi = 1, lambda = 0.
WeightField ground_state_weight(const CellGeometry& cell, const Mesh& cell_mesh, const CoefficientField& a,
                                const EigenSolveOptions& options = {});

/// phi_eps on a tiled domain mesh by vertex lineage (phi_eps(x) = phi(x / eps)).
std::vector<double> evaluate_weight_on_domain(const WeightField& w, const PerforatedDomainSpec& spec,
                                              const Mesh& domain_mesh);

/// Pulls any nodal cell field onto a tiled domain mesh through the lineage.
std::vector<double> pull_back_cell_field(const std::vector<double>& cell_values, const Mesh& domain_mesh);

/// Measured c, C with c dist(x, T) <= phi(x) <= C dist(x, T) over off-hole vertices.
struct Comparability {
  double lower = 0.0;
  double upper = 0.0;
};
Comparability comparability_constants(const CellGeometry& cell, const Mesh& cell_mesh, const WeightField& w);

}  // namespace perfhom
