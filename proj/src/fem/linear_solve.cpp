#include "perfhom/fem/linear_solve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "perfhom/errors.hpp"

namespace perfhom {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// Orthonormal basis (Euclidean) of the deflation space, modified Gram-Schmidt twice.
std::vector<std::vector<double>> orthonormalize(std::vector<std::vector<double>> basis) {
  std::vector<std::vector<double>> out;
  for (auto& v : basis) {
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : out) {
        const double c = dot(v, q);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
      }
    const double nv = norm2(v);
    if (nv < 1e-14) continue;
    for (double& x : v) x /= nv;
    out.push_back(std::move(v));
  }
  return out;
}

void project_out(std::vector<double>& v, const std::vector<std::vector<double>>& basis) {
  for (const auto& q : basis) {
    const double c = dot(v, q);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * q[i];
  }
}

}  // namespace

SolveResult solve_spd(const CsrMatrix& m, std::span<const double> rhs, const LinearSolveSpec& spec,
                      const DirichletData& dirichlet, std::span<const double> initial_guess) {
  PERFHOM_THROW_IF(!(spec.tolerance > 0.0 && spec.tolerance < 1.0), ErrorKind::InvalidArgument,
                   "solver tolerance must lie in (0, 1)");
  PERFHOM_THROW_IF(m.rows != m.cols || static_cast<int>(rhs.size()) != m.rows, ErrorKind::InvalidArgument,
                   "system dimensions do not match");
  PERFHOM_THROW_IF(!dirichlet.values.empty() && dirichlet.values.size() != dirichlet.indices.size(),
                   ErrorKind::InvalidArgument, "Dirichlet values and indices differ in length");
  const int n = m.rows;

  std::vector<double> full(static_cast<std::size_t>(n), 0.0);
  std::vector<char> constrained(static_cast<std::size_t>(n), 0);
  for (std::size_t k = 0; k < dirichlet.indices.size(); ++k) {
    constrained[dirichlet.indices[k]] = 1;
    full[dirichlet.indices[k]] = dirichlet.values.empty() ? 0.0 : dirichlet.values[k];
  }
  std::vector<int> free;
  free.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    if (!constrained[i]) free.push_back(i);

  // Move the prescribed values to the right-hand side.
  std::vector<double> lifted(rhs.begin(), rhs.end());
  if (!dirichlet.indices.empty()) {
    const auto kx = m.multiply(full);
    for (int i = 0; i < n; ++i) lifted[i] -= kx[i];
  }
  const bool reduce = free.size() != static_cast<std::size_t>(n);
  const CsrMatrix reduced = reduce ? m.submatrix(free) : CsrMatrix{};
  const CsrMatrix& a = reduce ? reduced : m;
  const std::size_t nf = free.size();

  std::vector<double> b(nf);
  for (std::size_t k = 0; k < nf; ++k) b[k] = lifted[free[k]];

  std::vector<std::vector<double>> null_space;
  if (spec.deflation == Deflation::Constants) {
    null_space.emplace_back(nf, 1.0);
  } else if (spec.deflation == Deflation::Vectors) {
    for (const auto& v : spec.deflation_vectors) {
      std::vector<double> r(nf);
      for (std::size_t k = 0; k < nf; ++k) r[k] = v[free[k]];
      null_space.push_back(std::move(r));
    }
  }
  null_space = orthonormalize(std::move(null_space));
  project_out(b, null_space);

  std::vector<double> diag = a.diagonal();
  for (double& d : diag) d = d > 0.0 ? 1.0 / d : 1.0;

  std::vector<double> x(nf, 0.0);
  if (!initial_guess.empty())
    for (std::size_t k = 0; k < nf; ++k) x[k] = initial_guess[free[k]];
  project_out(x, null_space);

  SolveResult result;
  const double bnorm = norm2(b);
  std::vector<double> r(nf), z(nf), p(nf), q(nf);
  a.multiply(x, r);
  for (std::size_t k = 0; k < nf; ++k) r[k] = b[k] - r[k];
  project_out(r, null_space);

  const int max_it = spec.max_iterations > 0 ? spec.max_iterations : std::max(2000, 10 * static_cast<int>(nf));
  double rnorm = norm2(r);
  const double target = spec.tolerance * bnorm;
  if (bnorm == 0.0 || rnorm <= target) {
    if (bnorm == 0.0) std::fill(x.begin(), x.end(), 0.0);
  } else {
    for (std::size_t k = 0; k < nf; ++k) z[k] = diag[k] * r[k];
    project_out(z, null_space);
    p = z;
    double rz = dot(r, z);
    int it = 0;
    while (rnorm > target) {
      if (it >= max_it) {
        throw CGNoConvergenceError("CG stalled at relative residual " + std::to_string(rnorm / bnorm) + " after " +
                                       std::to_string(it) + " iterations",
                                   rnorm / bnorm, it);
      }
      a.multiply(p, q);
      const double pq = dot(p, q);
      if (!(pq > 0.0)) {
        throw CGNoConvergenceError("operator is not positive definite on the search space", rnorm / bnorm, it);
      }
      const double alpha = rz / pq;
      for (std::size_t k = 0; k < nf; ++k) {
        x[k] += alpha * p[k];
        r[k] -= alpha * q[k];
      }
      ++it;
      // Refresh the true residual periodically to keep drift out of the stopping test.
      if (it % 500 == 0) {
        a.multiply(x, r);
        for (std::size_t k = 0; k < nf; ++k) r[k] = b[k] - r[k];
        project_out(r, null_space);
      }
      rnorm = norm2(r);
      for (std::size_t k = 0; k < nf; ++k) z[k] = diag[k] * r[k];
      project_out(z, null_space);
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t k = 0; k < nf; ++k) p[k] = z[k] + beta * p[k];
    }
    result.iterations = it;
  }
  project_out(x, null_space);
  a.multiply(x, r);
  for (std::size_t k = 0; k < nf; ++k) r[k] = b[k] - r[k];
  project_out(r, null_space);
  result.relative_residual = bnorm > 0.0 ? norm2(r) / bnorm : 0.0;

  for (std::size_t k = 0; k < nf; ++k) full[free[k]] = x[k];
  result.x = std::move(full);
  return result;
}

}  // namespace perfhom
