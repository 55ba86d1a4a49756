#pragma once

#include <array>
#include <vector>

#include "perfhom/fem/assembly.hpp"
#include "perfhom/fem/linear_solve.hpp"
#include "perfhom/mesh.hpp"
#include "perfhom/weight.hpp"

namespace perfhom {

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// First-order correctors chi_1, chi_2: periodic, zero unweighted mean on Y_*.
struct CorrectorSet {
  std::array<std::vector<double>, 2> chi;
  std::array<double, 2> mean_values{};
  std::array<double, 2> solver_residuals{};
};

struct HomogenizedTensor {
  /// a_hat[i][j] = int_{Y_*} phi^2 a_ik d_k (y_j + chi_j).
  Matrix2 a_hat{};
  /// int_{Y_*} phi^2.
  double a0 = 0.0;
  /// Symmetric energy form int phi^2 A grad(y_j + chi_j) . grad(y_i + chi_i).
  Matrix2 energy_form{};
  /// max |a_hat - energy_form|.
  double form_discrepancy = 0.0;

  double min_eigenvalue() const;
  double max_abs() const;
  Mat2 symmetric_part() const;
};

/// Phi_kij on the full cell Y (weight extended by zero into T), nodal on `mesh`.
struct FluxCorrectors {
  Mesh mesh;
  /// phi[k][i][j]
  std::array<std::array<std::array<std::vector<double>, 2>, 2>, 2> phi;
  /// Periodic potentials with Laplacian f_ij = b_ij.
  std::array<std::array<std::vector<double>, 2>, 2> potentials;
  /// int_Y b_ij.
  Matrix2 b_integrals{};
  /// b_ij at the three edge midpoints of every full-cell triangle.
  std::array<std::array<std::vector<std::array<double, 3>>, 2>, 2> b_quadrature;
};

/// Solves -div(phi^2 A grad chi_j) = div(phi^2 A e_j) on the periodic punctured cell.
CorrectorSet solve_correctors(const Mesh& cell_mesh, const CoefficientField& a, const WeightField& w,
                              const LinearSolveSpec& spec = {});

HomogenizedTensor homogenized_matrix(const Mesh& cell_mesh, const CoefficientField& a, const WeightField& w,
                                     const CorrectorSet& correctors);

/// Effective tensor of the discrete Bloch family of S - lambda_bar M at zero quasi-momentum,
/// where S, M are the P1 stiffness and mass on the periodic punctured cell and (lambda_bar, phi)
/// is the ground state. a_hat / a0 is half the Hessian of the Bloch eigenvalue at zero.
HomogenizedTensor bloch_tensor(const Mesh& cell_mesh, const CoefficientField& a, const WeightField& ground_state,
                               const LinearSolveSpec& spec = {});

/// `meshes.perforated` must be the mesh the correctors were solved on.
FluxCorrectors flux_correctors(const CellMeshPair& meshes, const CoefficientField& a, const WeightField& w,
                               const CorrectorSet& correctors, const HomogenizedTensor& tensor,
                               const LinearSolveSpec& spec = {});

/// max over (i, j) and a fixed family of periodic trigonometric test functions
/// psi of |sum_k int Phi_kij d_k psi + int b_ij psi| / ||psi||_{H^1(Y)}.
double flux_weak_residual(const FluxCorrectors& flux);

/// max over nodes and (k, i, j) of |Phi_kij + Phi_ikj|.
double flux_antisymmetry_defect(const FluxCorrectors& flux);

}  // namespace perfhom
