#include "perfhom/weight.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "perfhom/errors.hpp"
#include "perfhom/fem/sparse.hpp"

namespace perfhom {
namespace {

void check_cell_mesh(const CellGeometry& cell, const Mesh& mesh) {
  PERFHOM_THROW_IF(mesh.kind != MeshKind::Cell, ErrorKind::MeshLineageMismatch, "expected a punctured-cell mesh");
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    PERFHOM_THROW_IF(!cell.holes.empty() && cell.signed_distance(mesh.vertices[v]) < -1e-9,
                     ErrorKind::MeshLineageMismatch, "mesh vertex lies inside a hole of this cell");
  }
}

}  // namespace

WeightField WeightField::scaled(double s) const {
  WeightField out = *this;
  for (double& v : out.nodal_values) v *= s;
  out.normalized = false;
  return out;
}

double capped_distance(double d, double c0) {
  const double lo = 0.25 * c0, hi = 0.5 * c0;
  if (d <= lo) return d;
  if (d >= hi) return hi;
  const double s = (d - lo) / (hi - lo);
  return d + s * s * (hi - d);
}

WeightField distance_weight(const CellGeometry& cell, const Mesh& cell_mesh) {
  check_cell_mesh(cell, cell_mesh);
  WeightField w;
  w.mode = WeightMode::DistanceType;
  w.nodal_values.resize(cell_mesh.vertices.size());
  for (std::size_t v = 0; v < cell_mesh.vertices.size(); ++v) {
    if (cell_mesh.on_hole[v]) {
      w.nodal_values[v] = 0.0;
      continue;
    }
    const double d = cell.holes.empty() ? std::numeric_limits<double>::infinity()
                                        : std::max(cell.signed_distance(cell_mesh.vertices[v]), 0.0);
    w.nodal_values[v] = capped_distance(d, cell.c0);
  }
  // Paired face vertices sit on identical lattice positions modulo one
  // period; copy to make the trace bit-identical.
  for (const auto& [l, r] : cell_mesh.periodic_x) w.nodal_values[r] = w.nodal_values[l];
  for (const auto& [b, t] : cell_mesh.periodic_y) w.nodal_values[t] = w.nodal_values[b];
  return w;
}

WeightField ground_state_weight(const CellGeometry& cell, const Mesh& cell_mesh, const CoefficientField& a,
                                const EigenSolveOptions& options) {
  check_cell_mesh(cell, cell_mesh);
  WeightField w;
  w.mode = WeightMode::GroundState;
  w.normalized = true;
  if (cell.holes.empty()) {
    w.nodal_values.assign(cell_mesh.vertices.size(), 1.0 / std::sqrt(cell_mesh.total_area()));
    w.lambda_bar = 0.0;
    return w;
  }
  const auto hole = cell_mesh.hole_vertices();
  const DofMap dofs = DofMap::periodic(cell_mesh, hole);
  const CsrMatrix s = assemble_weighted_stiffness(cell_mesh, a, {}, &dofs);
  const CsrMatrix m = assemble_weighted_mass(cell_mesh, {}, &dofs);
  auto pairs = smallest_eigenpairs(s, m, 1, {}, options);
  auto& phi = pairs.front().vector;
  double sum = 0.0;
  for (double x : phi) sum += x;
  if (sum < 0.0)
    for (double& x : phi) x = -x;
  const auto mphi = m.multiply(phi);
  double mass = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) mass += phi[i] * mphi[i];
  for (double& x : phi) x /= std::sqrt(mass);
  w.nodal_values = dofs.expand(phi, 0.0);
  w.lambda_bar = pairs.front().value;
  for (std::size_t v = 0; v < cell_mesh.vertices.size(); ++v) {
    PERFHOM_THROW_IF(!cell_mesh.on_hole[v] && !(w.nodal_values[v] > 0.0), ErrorKind::EigenIterationDivergence,
                     "principal eigenvector is not positive off the holes");
  }
  return w;
}

std::vector<double> pull_back_cell_field(const std::vector<double>& cell_values, const Mesh& domain_mesh) {
  PERFHOM_THROW_IF(domain_mesh.kind != MeshKind::Domain || domain_mesh.lineage.size() != domain_mesh.vertices.size(),
                   ErrorKind::MeshLineageMismatch, "domain mesh carries no cell lineage");
  std::vector<double> out(domain_mesh.vertices.size());
  for (std::size_t v = 0; v < out.size(); ++v) {
    const int cv = domain_mesh.lineage[v].cell_vertex;
    PERFHOM_THROW_IF(cv < 0 || static_cast<std::size_t>(cv) >= cell_values.size(), ErrorKind::MeshLineageMismatch,
                     "domain mesh was not tiled from this cell mesh");
    out[v] = cell_values[cv];
  }
  return out;
}

std::vector<double> evaluate_weight_on_domain(const WeightField& w, const PerforatedDomainSpec& spec,
                                              const Mesh& domain_mesh) {
  PERFHOM_THROW_IF(domain_mesh.n % spec.N != 0, ErrorKind::MeshLineageMismatch,
                   "domain resolution is not a multiple of N");
  return pull_back_cell_field(w.nodal_values, domain_mesh);
}

Comparability comparability_constants(const CellGeometry& cell, const Mesh& cell_mesh, const WeightField& w) {
  Comparability c{std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t v = 0; v < cell_mesh.vertices.size(); ++v) {
    if (cell_mesh.on_hole[v]) continue;
    const double d = cell.signed_distance(cell_mesh.vertices[v]);
    if (!(d > 0.0) || std::isinf(d)) continue;
    const double ratio = w.nodal_values[v] / d;
    c.lower = std::min(c.lower, ratio);
    c.upper = std::max(c.upper, ratio);
  }
  return c;
}

}  // namespace perfhom
