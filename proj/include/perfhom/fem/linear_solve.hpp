#pragma once

#include <span>
#include <vector>

#include "perfhom/fem/sparse.hpp"

namespace perfhom {

enum class Deflation { None, Constants, Vectors };

struct LinearSolveSpec {
  double tolerance = 1e-10;
  /// 0 selects max(2000, 10 * unknowns).
  int max_iterations = 0;
  Deflation deflation = Deflation::None;
  /// Null-space basis in the full index space (Deflation::Vectors).
  std::vector<std::vector<double>> deflation_vectors;
};

/// Constrained indices with prescribed values (empty values means zeros).
struct DirichletData {
  std::vector<int> indices;
  std::vector<double> values;
};

struct SolveResult {
  std::vector<double> x;
  int iterations = 0;
  double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradients on the SPD system left after
/// eliminating the Dirichlet rows and columns and deflating the declared null
/// space. Throws CGNoConvergenceError when the tolerance is not reached.
SolveResult solve_spd(const CsrMatrix& m, std::span<const double> rhs, const LinearSolveSpec& spec,
                      const DirichletData& dirichlet = {}, std::span<const double> initial_guess = {});

}  // namespace perfhom
