#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "perfhom/cell_problem.hpp"
#include "perfhom/config.hpp"
#include "perfhom/solvers.hpp"

namespace perfhom {

/// Everything computed once per cell: geometry, meshes, weight, correctors, tensor.
struct CellStage {
  CellGeometry cell;
  CellMeshPair meshes;
  CoefficientField a = CoefficientField::constant(Mat2::identity());
  WeightField weight;
  CorrectorSet correctors;
  HomogenizedTensor tensor;
};

CellStage prepare_cell_stage(const ExperimentConfig& config);
LinearSolveSpec linear_spec(const ExperimentConfig& config);
EigenSolveOptions eigen_options(const ExperimentConfig& config);

struct FirstOrderField {
  std::vector<double> w;
  std::vector<double> eta;
  /// u0 interpolated at the domain vertices.
  std::vector<double> u0;
  double c1 = 0.0;
  /// eta = 0 below dist = inner_layer, eta = 1 above dist = outer_layer.
  double inner_layer = 0.0;
  double outer_layer = 0.0;
};

/// w = u_eps - u0 - eps chi_l(x/eps) d_l u0 eta_eps, nodal on the perforated domain mesh.
FirstOrderField first_order_approximation(const Mesh& domain_mesh, const EpsSolution& u_eps, const Mesh& solid_mesh,
                                          const HomogenizedSolution& u0, const CorrectorSet& correctors,
                                          const PerforatedDomainSpec& spec);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  /// Root-mean-square misfit in log units.
  double residual = 0.0;
  bool reliable = false;
};

/// Least-squares line through (log x, log y); unreliable on non-positive data or misfit > 0.1.
SlopeFit fit_log_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ConvergenceEntry {
  double epsilon = 0.0;
  double e_grad = 0.0;
  /// ||phi_eps grad(u_eps - u0)|| without the corrector term.
  double e_grad_uncorrected = 0.0;
  double e_l2 = 0.0;
  double energy = 0.0;
  double energy_constant = 0.0;
  double f_norm_l2 = 0.0;
  int cg_iterations = 0;
  int domain_vertices = 0;
};

struct ConvergenceReport {
  std::vector<ConvergenceEntry> entries;
  SlopeFit grad;
  SlopeFit l2;
  bool corrector_improves = false;
  /// "SlopeUnreliable", "NoHomogenizationContrast".
  std::vector<std::string> flags;
};

struct LipschitzEntry {
  double epsilon = 0.0;
  std::optional<double> r_inf;
  /// Aligned with the requested p values.
  std::vector<std::optional<double>> r_p;
};

struct LipschitzReport {
  double p_inf = 4.0;
  std::vector<double> p_values;
  std::vector<LipschitzEntry> entries;
  /// max/min across the ladder; empty when not applicable.
  std::optional<double> r_inf_variation;
  std::vector<std::optional<double>> r_p_variation;
};

struct ExtensionProbe {
  double max_ratio = 0.0;
  double linear_ratio = 0.0;
  double analytic_linear_ratio = 0.0;
  int trials = 0;
};

struct ProbeEntry {
  double epsilon = 0.0;
  double poincare = 0.0;
  double sobolev = 0.0;
};

struct ProbeReport {
  std::vector<ProbeEntry> entries;
  /// Cell-level extension constant at n and 2n.
  std::vector<int> extension_resolutions;
  std::vector<ExtensionProbe> extension;
  double poincare_variation = 0.0;
  double sobolev_variation = 0.0;
  double extension_variation = 0.0;
};

/// Runs f(i) for i in [0, count) on up to `workers` threads.
void parallel_for(int count, int workers, const std::function<void(int)>& f);

/// One rung of the eps-ladder: tiled mesh, pulled-back weight and the degenerate solve.
struct EpsInstance {
  PerforatedDomainSpec spec;
  Mesh domain;
  std::vector<double> phi_eps;
  EpsSolution solution;
};

std::vector<EpsInstance> solve_ladder(const ExperimentConfig& config, const CellStage& stage);

ConvergenceReport convergence_study(const ExperimentConfig& config, const CellStage& stage);
ConvergenceReport convergence_study(const ExperimentConfig& config, const CellStage& stage,
                                    const std::vector<EpsInstance>& ladder);
LipschitzReport lipschitz_uniformity(const ExperimentConfig& config, const CellStage& stage);
LipschitzReport lipschitz_uniformity(const ExperimentConfig& config, const std::vector<EpsInstance>& ladder);
SpectralReport spectral_study(const ExperimentConfig& config);
ProbeReport probe_study(const ExperimentConfig& config, const CellStage& stage);

/// (smallest eigenvalue of the phi_eps^2-weighted stiffness vs the mass pencil)^{-1/2}, Dirichlet on dOmega.
double poincare_probe(const Mesh& domain_mesh, const std::vector<double>& phi_eps, const EigenSolveOptions& options = {});

/// Max over sampled fields of ||grad E f||_{L^2(Y)} / ||grad f||_{L^2(Y'_*)} with E the discrete
/// harmonic extension into the holes of `enlarged`.
ExtensionProbe extension_probe(const CellGeometry& enlarged, int n, int trials, std::uint64_t seed,
                               const LinearSolveSpec& spec = {});

/// Max over random smooth fields vanishing on dOmega of ||phi u||_inf / ||phi grad u||_p.
double sobolev_linf_probe(const Mesh& domain_mesh, const std::vector<double>& phi_eps, double width, double height,
                          int trials, std::uint64_t seed, double p = 4.0);

}  // namespace perfhom
