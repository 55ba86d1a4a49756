#include "perfhom/solvers.hpp"

#include <cmath>
#include <limits>

#include "perfhom/errors.hpp"
#include "perfhom/fem/norms.hpp"

namespace perfhom {

EpsSolution solve_eps_problem(const Mesh& domain_mesh, const CoefficientField& a, const std::vector<double>& phi_eps,
                              const SourceTerm& rhs, double eps, const LinearSolveSpec& spec) {
  PERFHOM_THROW_IF(phi_eps.size() != domain_mesh.vertices.size(), ErrorKind::MeshLineageMismatch,
                   "phi_eps is not nodal on the domain mesh");
  const CsrMatrix k = assemble_weighted_stiffness(domain_mesh, a.at_scale(eps), {phi_eps, 2});
  const auto load = assemble_load(domain_mesh, rhs, phi_eps);
  // Only dOmega is constrained; the degeneracy of phi_eps replaces a condition on the holes.
  const auto result = solve_spd(k, load, spec, {domain_mesh.outer_vertices(), {}});

  EpsSolution out;
  out.u = result.x;
  out.epsilon = eps;
  out.form = rhs.form;
  out.solver_residual = result.relative_residual;
  out.iterations = result.iterations;
  const double grad = weighted_norm(domain_mesh, out.u, phi_eps, 2.0, true);
  out.energy = grad * grad;
  double data = 0.0;
  if (rhs.f) data += function_norm(domain_mesh, rhs.f, 2.0);
  if (rhs.f_vector) data += function_norm(domain_mesh, rhs.f_vector, 2.0);
  if (rhs.F) data += function_norm(domain_mesh, rhs.F, 2.0);
  out.energy_constant = data > 0.0 ? grad / data : std::numeric_limits<double>::quiet_NaN();
  return out;
}

HomogenizedSolution solve_homogenized(const Mesh& solid_mesh, const HomogenizedTensor& tensor,
                                      const ScalarFunction& source, const LinearSolveSpec& spec) {
  const auto coefficient = CoefficientField::constant(tensor.symmetric_part());
  const CsrMatrix k = assemble_weighted_stiffness(solid_mesh, coefficient, {});
  SourceTerm rhs;
  rhs.form = LoadForm::WeightedSource;
  rhs.f = source;
  const auto load = assemble_load(solid_mesh, rhs, {});
  const auto result = solve_spd(k, load, spec, {solid_mesh.outer_vertices(), {}});
  HomogenizedSolution out;
  out.u0 = result.x;
  out.recovered_gradient = recover_gradient(solid_mesh, out.u0);
  out.solver_residual = result.relative_residual;
  return out;
}

ScalarFunction extended_weighted_source(std::shared_ptr<const Mesh> cell_mesh, std::vector<double> phi,
                                        ScalarFunction f, double eps) {
  auto locator = std::make_shared<const PointLocator>(*cell_mesh);
  auto values = std::make_shared<const std::vector<double>>(std::move(phi));
  return [cell_mesh, locator, values, f = std::move(f), eps](Point x) {
    const double weight = locator->interpolate(*values, cell_coordinate(x, eps), 0.0);
    return weight == 0.0 ? 0.0 : weight * f(x);
  };
}

std::vector<double> dirichlet_spectrum_eps(const Mesh& domain_mesh, const CoefficientField& a, double eps, int k,
                                           const EigenSolveOptions& options) {
  const CsrMatrix s = assemble_weighted_stiffness(domain_mesh, a.at_scale(eps), {});
  const CsrMatrix m = assemble_weighted_mass(domain_mesh, {});
  std::vector<int> constrained;
  for (std::size_t v = 0; v < domain_mesh.vertices.size(); ++v)
    if (domain_mesh.on_outer[v] || domain_mesh.on_hole[v]) constrained.push_back(static_cast<int>(v));
  std::vector<double> out;
  for (const auto& pair : smallest_eigenpairs(s, m, k, constrained, options)) out.push_back(pair.value);
  return out;
}

std::vector<double> homogenized_spectrum(const Mesh& solid_mesh, const HomogenizedTensor& tensor, int k,
                                         const EigenSolveOptions& options) {
  const CsrMatrix s = assemble_weighted_stiffness(solid_mesh, CoefficientField::constant(tensor.symmetric_part()), {});
  CsrMatrix m = assemble_weighted_mass(solid_mesh, {});
  for (double& v : m.values) v *= tensor.a0;
  std::vector<double> out;
  for (const auto& pair : smallest_eigenpairs(s, m, k, solid_mesh.outer_vertices(), options)) out.push_back(pair.value);
  return out;
}

}  // namespace perfhom
