#pragma once

#include <span>
#include <vector>

#include "perfhom/mesh.hpp"

namespace perfhom {

/// Compressed sparse row matrix with sorted column indices per row.
struct CsrMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr{0};
  std::vector<int> col_idx;
  std::vector<double> values;
  bool symmetric = false;

  std::size_t nnz() const { return values.size(); }
  /// y = A x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;
  /// Entry (i, j), zero if not stored.
  double at(int i, int j) const;
  /// Position of (i, j) in `values`, or -1.
  int find(int i, int j) const;
  std::vector<double> diagonal() const;
  /// max |a_ij - a_ji| over stored entries.
  double asymmetry() const;
  /// Rows and columns restricted to `keep` (ascending indices).
  CsrMatrix submatrix(std::span<const int> keep) const;
};

/// alpha * A + beta * B.
CsrMatrix linear_combination(double alpha, const CsrMatrix& a, double beta, const CsrMatrix& b);

/// Maps mesh vertices to unknowns. Vertices identified by periodicity share a
/// dof; vertices mapped to -1 are dropped from the system.
struct DofMap {
  std::vector<int> vertex_to_dof;
  int num_dofs = 0;

  static DofMap identity(std::size_t num_vertices);
  /// Periodic identification of opposite cell faces; `dropped` vertices map to -1.
  static DofMap periodic(const Mesh& mesh, std::span<const int> dropped = {});

  /// Sum of vertex contributions per dof (folds a load vector).
  std::vector<double> fold(std::span<const double> vertex_values) const;
  /// Dof values copied back to vertices; dropped vertices get `fill`.
  std::vector<double> expand(std::span<const double> dof_values, double fill = 0.0) const;
};

/// Sparsity pattern of the P1 couplings of `triangles` under `dofs`, values zeroed.
CsrMatrix pattern_from_triangles(const std::vector<Triangle>& triangles, const DofMap& dofs);

}  // namespace perfhom
