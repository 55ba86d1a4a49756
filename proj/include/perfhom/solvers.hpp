#pragma once

#include <array>
#include <memory>
#include <vector>

#include "perfhom/cell_problem.hpp"
#include "perfhom/fem/assembly.hpp"
#include "perfhom/fem/eigen_solve.hpp"
#include "perfhom/fem/linear_solve.hpp"
#include "perfhom/mesh.hpp"

namespace perfhom {

/// Solution of L_eps u = phi_eps f (or div(phi_eps f) + F), u = 0 on dOmega.
struct EpsSolution {
  std::vector<double> u;
  double epsilon = 0.0;
  LoadForm form = LoadForm::WeightedSource;
  /// int phi_eps^2 |grad u|^2.
  double energy = 0.0;
  /// sqrt(energy) / (||f||_2 + ||F||_2), NaN when the data vanish.
  double energy_constant = 0.0;
  double solver_residual = 0.0;
  int iterations = 0;
};

struct HomogenizedSolution {
  std::vector<double> u0;
  /// Area-weighted nodal average of the element gradients.
  std::array<std::vector<double>, 2> recovered_gradient;
  double solver_residual = 0.0;
};

struct SpectralEntry {
  double epsilon = 0.0;
  std::vector<double> lambda_eps;
  /// r_j = |lambda_eps^j - eps^-2 lambda_bar - mu0^j|.
  std::vector<double> residuals;
};

struct SpectralReport {
  std::vector<SpectralEntry> entries;
  double lambda_bar = 0.0;
  /// Homogenized eigenvalues from the Bloch tensor of the discrete cell operator.
  std::vector<double> mu0;
  /// Same eigenproblem with the weighted-corrector tensor (diagnostic).
  std::vector<double> mu0_corrector_tensor;
  std::vector<std::vector<double>> residuals_corrector_tensor;
  double slope = 0.0;
  double intercept = 0.0;
  double fit_residual = 0.0;
  bool strictly_decreasing = false;
};

/// `a` is given in cell coordinates; it is sampled as A(x / eps).
EpsSolution solve_eps_problem(const Mesh& domain_mesh, const CoefficientField& a, const std::vector<double>& phi_eps,
                              const SourceTerm& rhs, double eps, const LinearSolveSpec& spec = {});

/// -div(A_hat grad u0) = F in Omega, u0 = 0 on dOmega.
HomogenizedSolution solve_homogenized(const Mesh& solid_mesh, const HomogenizedTensor& tensor,
                                      const ScalarFunction& source, const LinearSolveSpec& spec = {});

/// F_eps(x) = phi(x / eps) f(x), extended by zero into the holes.
ScalarFunction extended_weighted_source(std::shared_ptr<const Mesh> cell_mesh, std::vector<double> phi,
                                        ScalarFunction f, double eps);

/// Dirichlet eigenvalues of -div(A_eps grad) on Omega_eps (constrained on dOmega and on the holes).
std::vector<double> dirichlet_spectrum_eps(const Mesh& domain_mesh, const CoefficientField& a, double eps, int k,
                                           const EigenSolveOptions& options = {});

/// Eigenvalues of -div(A_hat grad w) = mu a0 w with w = 0 on dOmega.
std::vector<double> homogenized_spectrum(const Mesh& solid_mesh, const HomogenizedTensor& tensor, int k,
                                         const EigenSolveOptions& options = {});

}  // namespace perfhom
