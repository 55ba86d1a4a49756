#pragma once

#include <span>
#include <vector>

#include "perfhom/fem/sparse.hpp"

namespace perfhom {

struct EigenPair {
  double value = 0.0;
  std::vector<double> vector;
};

struct EigenSolveOptions {
  /// Relative residual ||S x - lambda M x|| / ||S x|| required for every returned pair.
  double tolerance = 1e-8;
  int max_iterations = 500;
  /// Spectral shift sigma below the wanted eigenvalues; S - sigma M must stay SPD.
  double shift = 0.0;
  double inner_tolerance = 1e-12;
  /// Extra block vectors beyond k.
  int guard_vectors = 2;
};

/// k smallest eigenpairs of S x = lambda M x with x = 0 on `dirichlet`, by
/// blocked inverse iteration with M-orthogonal Gram-Schmidt and Rayleigh-Ritz
/// projection. Eigenvectors are M-normalized and expanded to full size.
std::vector<EigenPair> smallest_eigenpairs(const CsrMatrix& s, const CsrMatrix& m, int k,
                                           std::span<const int> dirichlet = {}, const EigenSolveOptions& options = {});

}  // namespace perfhom
