#include "perfhom/fem/eigen_solve.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>

#include "perfhom/errors.hpp"
#include "perfhom/fem/linear_solve.hpp"

namespace perfhom {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Deterministic start vectors: the constant vector followed by splitmix64 noise.
std::vector<std::vector<double>> start_block(std::size_t n, int m) {
  std::vector<std::vector<double>> block(static_cast<std::size_t>(m), std::vector<double>(n));
  std::uint64_t state = 0x9E3779B97F4A7C15ull;
  auto next = [&state]() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return static_cast<double>((z ^ (z >> 31)) >> 11) * 0x1.0p-53;
  };
  for (int j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) block[j][i] = j == 0 ? 1.0 : next() - 0.5;
  return block;
}

/// M-orthonormalizes the block in place, dropping numerically dependent columns.
void m_orthonormalize(std::vector<std::vector<double>>& block, const CsrMatrix& m) {
  std::vector<std::vector<double>> out;
  std::vector<std::vector<double>> mout;
  for (auto& v : block) {
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t q = 0; q < out.size(); ++q) {
        const double c = dot(v, mout[q]);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * out[q][i];
      }
    }
    auto mv = m.multiply(v);
    const double nv = std::sqrt(std::max(dot(v, mv), 0.0));
    if (!(nv > 1e-300)) continue;
    for (double& x : v) x /= nv;
    for (double& x : mv) x /= nv;
    out.push_back(std::move(v));
    mout.push_back(std::move(mv));
  }
  block = std::move(out);
}

}  // namespace

std::vector<EigenPair> smallest_eigenpairs(const CsrMatrix& s, const CsrMatrix& m, int k,
                                           std::span<const int> dirichlet, const EigenSolveOptions& options) {
  PERFHOM_THROW_IF(k < 1, ErrorKind::InvalidArgument, "k must be >= 1");
  PERFHOM_THROW_IF(s.rows != m.rows, ErrorKind::InvalidArgument, "pencil matrices differ in size");
  const int n_full = s.rows;
  std::vector<char> constrained(static_cast<std::size_t>(n_full), 0);
  for (int i : dirichlet) constrained[i] = 1;
  std::vector<int> free;
  for (int i = 0; i < n_full; ++i)
    if (!constrained[i]) free.push_back(i);
  const int n = static_cast<int>(free.size());
  PERFHOM_THROW_IF(k > n, ErrorKind::InvalidArgument, "k exceeds the number of unknowns");

  const CsrMatrix sr = s.submatrix(free);
  const CsrMatrix mr = m.submatrix(free);
  const CsrMatrix shifted = options.shift != 0.0 ? linear_combination(1.0, sr, -options.shift, mr) : sr;
  const int block_size = std::min(n, k + std::max(options.guard_vectors, 0));

  auto block = start_block(static_cast<std::size_t>(n), block_size);
  m_orthonormalize(block, mr);
  LinearSolveSpec inner{options.inner_tolerance, 0, Deflation::None, {}};

  std::vector<double> theta;
  std::vector<double> residual(static_cast<std::size_t>(k), 1.0);
  for (int iter = 0; iter < options.max_iterations; ++iter) {
    // Inverse iteration step on every block vector, warm-started from the
    // scaled current Ritz vector.
    std::vector<std::vector<double>> next;
    for (std::size_t j = 0; j < block.size(); ++j) {
      const auto rhs = mr.multiply(block[j]);
      std::vector<double> guess;
      if (!theta.empty() && theta[j] - options.shift > 0.0) {
        guess = block[j];
        for (double& x : guess) x /= (theta[j] - options.shift);
      }
      next.push_back(solve_spd(shifted, rhs, inner, {}, guess).x);
    }
    m_orthonormalize(next, mr);
    PERFHOM_THROW_IF(static_cast<int>(next.size()) < k, ErrorKind::EigenIterationDivergence,
                     "iteration block lost rank");

    // Rayleigh-Ritz on span(next); the block is M-orthonormal so the reduced pencil is standard.
    const int b = static_cast<int>(next.size());
    std::vector<std::vector<double>> snext;
    Eigen::MatrixXd proj(b, b);
    for (int i = 0; i < b; ++i) snext.push_back(sr.multiply(next[i]));
    for (int i = 0; i < b; ++i)
      for (int j = 0; j <= i; ++j) proj(i, j) = proj(j, i) = 0.5 * (dot(next[i], snext[j]) + dot(next[j], snext[i]));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(proj);
    PERFHOM_THROW_IF(ritz.info() != Eigen::Success, ErrorKind::EigenIterationDivergence, "Ritz step failed");

    block.assign(static_cast<std::size_t>(b), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    std::vector<std::vector<double>> sblock = block;
    theta.assign(static_cast<std::size_t>(b), 0.0);
    for (int j = 0; j < b; ++j) {
      theta[j] = ritz.eigenvalues()(j);
      for (int i = 0; i < b; ++i) {
        const double c = ritz.eigenvectors()(i, j);
        for (int r = 0; r < n; ++r) {
          block[j][r] += c * next[i][r];
          sblock[j][r] += c * snext[i][r];
        }
      }
    }
    bool converged = true;
    for (int j = 0; j < k; ++j) {
      const auto mx = mr.multiply(block[j]);
      double num = 0.0, den = 0.0;
      for (int r = 0; r < n; ++r) {
        const double e = sblock[j][r] - theta[j] * mx[r];
        num += e * e;
        den += sblock[j][r] * sblock[j][r];
      }
      residual[j] = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
      if (!(residual[j] <= options.tolerance)) converged = false;
    }
    if (converged) {
      std::vector<EigenPair> out;
      for (int j = 0; j < k; ++j) {
        EigenPair pair;
        pair.value = theta[j];
        pair.vector.assign(static_cast<std::size_t>(n_full), 0.0);
        for (int r = 0; r < n; ++r) pair.vector[free[r]] = block[j][r];
        out.push_back(std::move(pair));
      }
      return out;
    }
  }
  throw Error(ErrorKind::EigenIterationDivergence,
              "eigenpairs not converged after " + std::to_string(options.max_iterations) +
                  " iterations (worst residual " + std::to_string(*std::max_element(residual.begin(), residual.end())) +
                  ")");
}

}  // namespace perfhom
