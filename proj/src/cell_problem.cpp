#include "perfhom/cell_problem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "perfhom/errors.hpp"
#include "perfhom/fem/sparse.hpp"

namespace perfhom {
namespace {

constexpr int kEdgeStart[3] = {0, 1, 2};
constexpr int kEdgeEnd[3] = {1, 2, 0};

/// Quadrature sum over triangle t of w^2 A: int_K phi^2 A, with the same rule as the stiffness.
Mat2 weighted_coefficient(const Mesh& mesh, std::size_t t, const CoefficientField& a, const std::vector<double>& phi) {
  const auto& tri = mesh.triangles[t];
  const auto mids = edge_midpoints(mesh, t);
  const double qw = mesh.area(t) / 3.0;
  Mat2 acc{0.0, 0.0, 0.0};
  for (int q = 0; q < 3; ++q) {
    const double wm = 0.5 * (phi[tri[kEdgeStart[q]]] + phi[tri[kEdgeEnd[q]]]);
    const Mat2 aq = a(mids[q]);
    acc.a11 += qw * wm * wm * aq.a11;
    acc.a12 += qw * wm * wm * aq.a12;
    acc.a22 += qw * wm * wm * aq.a22;
  }
  return acc;
}

Point unit(int j) { return j == 0 ? Point{1.0, 0.0} : Point{0.0, 1.0}; }
double component(Point p, int i) { return i == 0 ? p.x : p.y; }

}  // namespace

double HomogenizedTensor::min_eigenvalue() const { return symmetric_part().min_eigenvalue(); }

double HomogenizedTensor::max_abs() const {
  double m = 0.0;
  for (const auto& row : a_hat)
    for (double v : row) m = std::max(m, std::abs(v));
  return m;
}

Mat2 HomogenizedTensor::symmetric_part() const {
  return {a_hat[0][0], 0.5 * (a_hat[0][1] + a_hat[1][0]), a_hat[1][1]};
}

CorrectorSet solve_correctors(const Mesh& cell_mesh, const CoefficientField& a, const WeightField& w,
                              const LinearSolveSpec& spec) {
  PERFHOM_THROW_IF(cell_mesh.kind != MeshKind::Cell, ErrorKind::MeshLineageMismatch, "expected a punctured-cell mesh");
  PERFHOM_THROW_IF(w.nodal_values.size() != cell_mesh.vertices.size(), ErrorKind::MeshLineageMismatch,
                   "weight is not nodal on this cell mesh");
  const DofMap dofs = DofMap::periodic(cell_mesh);
  const CsrMatrix k = assemble_weighted_stiffness(cell_mesh, a, {w.nodal_values, 2}, &dofs);

  std::array<std::vector<double>, 2> load;
  for (auto& l : load) l.assign(cell_mesh.vertices.size(), 0.0);
  for (std::size_t t = 0; t < cell_mesh.triangles.size(); ++t) {
    const Mat2 acc = weighted_coefficient(cell_mesh, t, a, w.nodal_values);
    const auto grads = shape_gradients(cell_mesh, t);
    for (int j = 0; j < 2; ++j) {
      const Point flux = acc.apply(unit(j));
      for (int i = 0; i < 3; ++i) load[j][cell_mesh.triangles[t][i]] -= dot(flux, grads[i]);
    }
  }

  LinearSolveSpec solve = spec;
  solve.deflation = Deflation::Constants;
  CorrectorSet out;
  const double area = cell_mesh.total_area();
  for (int j = 0; j < 2; ++j) {
    const auto folded = dofs.fold(load[j]);
    const auto result = solve_spd(k, folded, solve);
    out.solver_residuals[j] = result.relative_residual;
    auto chi = dofs.expand(result.x);
    const double mean = integrate(cell_mesh, chi) / area;
    for (double& v : chi) v -= mean;
    out.mean_values[j] = integrate(cell_mesh, chi) / area;
    out.chi[j] = std::move(chi);
  }
  return out;
}

HomogenizedTensor homogenized_matrix(const Mesh& cell_mesh, const CoefficientField& a, const WeightField& w,
                                     const CorrectorSet& correctors) {
  HomogenizedTensor out;
  for (std::size_t t = 0; t < cell_mesh.triangles.size(); ++t) {
    const Mat2 acc = weighted_coefficient(cell_mesh, t, a, w.nodal_values);
    std::array<Point, 2> grad{};
    for (int j = 0; j < 2; ++j) grad[j] = unit(j) + element_gradient(cell_mesh, t, correctors.chi[j]);
    for (int j = 0; j < 2; ++j) {
      const Point flux = acc.apply(grad[j]);
      for (int i = 0; i < 2; ++i) {
        out.a_hat[i][j] += component(flux, i);
        out.energy_form[i][j] += dot(flux, grad[i]);
      }
    }
  }
  out.a0 = 0.0;
  for (std::size_t t = 0; t < cell_mesh.triangles.size(); ++t) {
    const auto& tri = cell_mesh.triangles[t];
    const double qw = cell_mesh.area(t) / 3.0;
    for (int q = 0; q < 3; ++q) {
      const double wm = 0.5 * (w.nodal_values[tri[kEdgeStart[q]]] + w.nodal_values[tri[kEdgeEnd[q]]]);
      out.a0 += qw * wm * wm;
    }
  }
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.form_discrepancy = std::max(out.form_discrepancy, std::abs(out.a_hat[i][j] - out.energy_form[i][j]));
  return out;
}

HomogenizedTensor bloch_tensor(const Mesh& cell_mesh, const CoefficientField& a, const WeightField& ground_state,
                               const LinearSolveSpec& spec) {
  PERFHOM_THROW_IF(ground_state.mode != WeightMode::GroundState || !ground_state.lambda_bar,
                   ErrorKind::InvalidArgument, "Bloch tensor needs the ground-state weight");
  PERFHOM_THROW_IF(ground_state.nodal_values.size() != cell_mesh.vertices.size(), ErrorKind::MeshLineageMismatch,
                   "weight is not nodal on this cell mesh");
  const auto& phi = ground_state.nodal_values;
  const double lambda = *ground_state.lambda_bar;
  // Vertex-level matrices keep the true offsets x_b - x_a of every coupled pair.
  const CsrMatrix lv = linear_combination(1.0, assemble_weighted_stiffness(cell_mesh, a, {}), -lambda,
                                          assemble_weighted_mass(cell_mesh, {}));
  std::array<std::vector<double>, 2> r_vertex;
  for (auto& r : r_vertex) r.assign(cell_mesh.vertices.size(), 0.0);
  Matrix2 second{};
  for (int row = 0; row < lv.rows; ++row) {
    const Point xa = cell_mesh.vertices[row];
    for (int idx = lv.row_ptr[row]; idx < lv.row_ptr[row + 1]; ++idx) {
      const int col = lv.col_idx[idx];
      const Point d = cell_mesh.vertices[col] - xa;
      const double l = lv.values[idx];
      for (int k = 0; k < 2; ++k) {
        r_vertex[k][row] += l * component(d, k) * phi[col];
        for (int m = 0; m < 2; ++m) second[k][m] -= 0.5 * l * component(d, k) * component(d, m) * phi[row] * phi[col];
      }
    }
  }

  const DofMap dofs = DofMap::periodic(cell_mesh, cell_mesh.hole_vertices());
  const CsrMatrix ld = linear_combination(1.0, assemble_weighted_stiffness(cell_mesh, a, {}, &dofs), -lambda,
                                          assemble_weighted_mass(cell_mesh, {}, &dofs));
  std::vector<double> phi_dof(dofs.num_dofs, 0.0);
  for (std::size_t v = 0; v < phi.size(); ++v)
    if (dofs.vertex_to_dof[v] >= 0) phi_dof[dofs.vertex_to_dof[v]] = phi[v];
  const CsrMatrix md = assemble_weighted_mass(cell_mesh, {}, &dofs);
  const auto mphi = md.multiply(phi_dof);
  double a0 = 0.0;
  for (int i = 0; i < dofs.num_dofs; ++i) a0 += phi_dof[i] * mphi[i];

  LinearSolveSpec inner = spec;
  inner.deflation = Deflation::Vectors;
  inner.deflation_vectors = {phi_dof};
  std::array<std::vector<double>, 2> r, psi;
  for (int k = 0; k < 2; ++k) {
    r[k] = dofs.fold(r_vertex[k]);
    auto rhs = r[k];
    for (double& x : rhs) x = -x;
    psi[k] = solve_spd(ld, rhs, inner).x;
  }
  HomogenizedTensor out;
  out.a0 = a0;
  for (int k = 0; k < 2; ++k)
    for (int m = 0; m < 2; ++m) {
      double cross = 0.0;
      for (int i = 0; i < dofs.num_dofs; ++i) cross += r[k][i] * psi[m][i];
      out.a_hat[k][m] = second[k][m] + cross;
    }
  out.energy_form = out.a_hat;
  return out;
}

FluxCorrectors flux_correctors(const CellMeshPair& meshes, const CoefficientField& a, const WeightField& w,
                               const CorrectorSet& correctors, const HomogenizedTensor& tensor,
                               const LinearSolveSpec& spec) {
  const Mesh& full = meshes.full;
  const Mesh& perf = meshes.perforated;
  PERFHOM_THROW_IF(correctors.chi[0].size() != perf.vertices.size() ||
                       w.nodal_values.size() != perf.vertices.size(),
                   ErrorKind::MeshLineageMismatch, "correctors were not solved on this cell mesh");

  // Weight and correctors extended by zero into the holes.
  std::vector<double> phi(full.vertices.size(), 0.0);
  std::array<std::vector<double>, 2> chi;
  for (auto& c : chi) c.assign(full.vertices.size(), 0.0);
  for (std::size_t v = 0; v < perf.vertices.size(); ++v) {
    const int fv = meshes.perforated_to_full[v];
    phi[fv] = w.nodal_values[v];
    chi[0][fv] = correctors.chi[0][v];
    chi[1][fv] = correctors.chi[1][v];
  }

  FluxCorrectors out;
  out.mesh = full;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.b_quadrature[i][j].resize(full.triangles.size());

  for (std::size_t t = 0; t < full.triangles.size(); ++t) {
    const auto& tri = full.triangles[t];
    const auto mids = edge_midpoints(full, t);
    std::array<Point, 2> grad{unit(0), unit(1)};
    if (full.region[t] == 0) {
      for (int j = 0; j < 2; ++j) grad[j] = grad[j] + element_gradient(full, t, chi[j]);
    }
    for (int q = 0; q < 3; ++q) {
      const double wm = full.region[t] == 0 ? 0.5 * (phi[tri[kEdgeStart[q]]] + phi[tri[kEdgeEnd[q]]]) : 0.0;
      const Mat2 aq = a(mids[q]);
      for (int j = 0; j < 2; ++j) {
        const Point flux = aq.apply(grad[j]);
        for (int i = 0; i < 2; ++i)
          out.b_quadrature[i][j][t][q] = tensor.a_hat[i][j] - wm * wm * component(flux, i);
      }
    }
  }

  const DofMap dofs = DofMap::periodic(full);
  const CsrMatrix lap = assemble_weighted_stiffness(full, CoefficientField::constant(Mat2::identity()), {}, &dofs);
  LinearSolveSpec solve = spec;
  solve.deflation = Deflation::Constants;

  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      std::vector<double> load(full.vertices.size(), 0.0);
      double integral = 0.0;
      for (std::size_t t = 0; t < full.triangles.size(); ++t) {
        const auto& tri = full.triangles[t];
        const double qw = full.area(t) / 3.0;
        for (int q = 0; q < 3; ++q) {
          const double val = qw * out.b_quadrature[i][j][t][q];
          integral += val;
          // Weak form of Laplacian f = b: int grad f . grad v = -int b v.
          load[tri[kEdgeStart[q]]] -= 0.5 * val;
          load[tri[kEdgeEnd[q]]] -= 0.5 * val;
        }
      }
      out.b_integrals[i][j] = integral;
      PERFHOM_THROW_IF(std::abs(integral) > 1e-8, ErrorKind::MeanNotZero,
                       "int_Y b_ij = " + std::to_string(integral) + " (inconsistent homogenized tensor)");
      const auto result = solve_spd(lap, dofs.fold(load), solve);
      out.potentials[i][j] = dofs.expand(result.x);
    }
  }

  // grads[i][j][k] = nodal d_k f_ij
  std::array<std::array<std::array<std::vector<double>, 2>, 2>, 2> grads;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      auto g = recover_gradient(full, out.potentials[i][j]);
      grads[i][j][0] = std::move(g[0]);
      grads[i][j][1] = std::move(g[1]);
    }
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        auto& p = out.phi[k][i][j];
        p.resize(full.vertices.size());
        for (std::size_t v = 0; v < p.size(); ++v) p[v] = grads[i][j][k][v] - grads[k][j][i][v];
      }
  return out;
}

double flux_weak_residual(const FluxCorrectors& flux) {
  const Mesh& mesh = flux.mesh;
  constexpr int kModes[][2] = {{1, 0}, {0, 1}, {1, 1}, {1, -1}, {2, 0}, {0, 2}, {2, 1}, {1, 2}};
  double worst = 0.0;
  for (const auto& mode : kModes) {
    for (int parity = 0; parity < 2; ++parity) {
      const Point kv{2.0 * std::numbers::pi * mode[0], 2.0 * std::numbers::pi * mode[1]};
      auto psi = [&](Point y) { return parity == 0 ? std::cos(dot(kv, y)) : std::sin(dot(kv, y)); };
      auto dpsi = [&](Point y) {
        const double d = parity == 0 ? -std::sin(dot(kv, y)) : std::cos(dot(kv, y));
        return d * kv;
      };
      const double h1 = std::sqrt(0.5 + 0.5 * dot(kv, kv));
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
          double s = 0.0;
          for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
            const auto& tri = mesh.triangles[t];
            const auto mids = edge_midpoints(mesh, t);
            const double qw = mesh.area(t) / 3.0;
            for (int q = 0; q < 3; ++q) {
              const int va = tri[kEdgeStart[q]], vb = tri[kEdgeEnd[q]];
              const Point g = dpsi(mids[q]);
              double val = flux.b_quadrature[i][j][t][q] * psi(mids[q]);
              for (int k = 0; k < 2; ++k) {
                const auto& p = flux.phi[k][i][j];
                val += 0.5 * (p[va] + p[vb]) * component(g, k);
              }
              s += qw * val;
            }
          }
          worst = std::max(worst, std::abs(s) / h1);
        }
      }
    }
  }
  return worst;
}

double flux_antisymmetry_defect(const FluxCorrectors& flux) {
  double worst = 0.0;
  for (int k = 0; k < 2; ++k)
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (std::size_t v = 0; v < flux.phi[k][i][j].size(); ++v)
          worst = std::max(worst, std::abs(flux.phi[k][i][j][v] + flux.phi[i][k][j][v]));
  return worst;
}

}  // namespace perfhom
