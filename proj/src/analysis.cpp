#include "perfhom/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <memory>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "perfhom/errors.hpp"
#include "perfhom/fem/norms.hpp"

namespace perfhom {
namespace {

double distance_to_rectangle_boundary(Point x, double width, double height) {
  return std::min({x.x, width - x.x, x.y, height - x.y});
}

double variation(const std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi / *lo;
}

std::optional<double> variation(const std::vector<std::optional<double>>& values) {
  std::vector<double> v;
  for (const auto& x : values) {
    if (!x || !(*x > 0.0)) return std::nullopt;
    v.push_back(*x);
  }
  if (v.empty()) return std::nullopt;
  return variation(v);
}

/// Distinct stream per (seed, tag) so ladder entries do not share samples.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double uniform(std::mt19937_64& rng) {
  // Top 53 bits; avoids the implementation-defined std::uniform_real_distribution.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0;
}

double element_energy(const Mesh& mesh, std::size_t t, const std::vector<double>& field) {
  const Point g = element_gradient(mesh, t, field);
  return mesh.area(t) * dot(g, g);
}

EpsInstance solve_instance(const ExperimentConfig& config, const CellStage& stage, int N) {
  EpsInstance inst;
  inst.spec = build_perforated_domain(stage.cell, {config.width, config.height}, N);
  inst.domain = tile_domain_mesh(stage.meshes.perforated, inst.spec);
  inst.phi_eps = evaluate_weight_on_domain(stage.weight, inst.spec, inst.domain);
  inst.solution =
      solve_eps_problem(inst.domain, stage.a, inst.phi_eps, config.source(), inst.spec.epsilon(), linear_spec(config));
  return inst;
}

}  // namespace

void parallel_for(int count, int workers, const std::function<void(int)>& f) {
  const int threads = std::max(1, std::min(workers, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

LinearSolveSpec linear_spec(const ExperimentConfig& config) {
  LinearSolveSpec spec;
  spec.tolerance = config.cg_tolerance;
  spec.max_iterations = config.cg_max_iterations;
  return spec;
}

EigenSolveOptions eigen_options(const ExperimentConfig& config) {
  EigenSolveOptions options;
  options.tolerance = config.eigen_tolerance;
  options.max_iterations = config.eigen_max_iterations;
  options.inner_tolerance = std::clamp(1e-4 * config.eigen_tolerance, 1e-12, 1e-8);
  return options;
}

CellStage prepare_cell_stage(const ExperimentConfig& config) {
  CellStage stage;
  stage.cell = config.cell_geometry();
  stage.meshes = triangulate_cell_pair(stage.cell, config.n);
  stage.a = config.coefficient_field();
  stage.weight = config.weight == WeightMode::DistanceType
                     ? distance_weight(stage.cell, stage.meshes.perforated)
                     : ground_state_weight(stage.cell, stage.meshes.perforated, stage.a, eigen_options(config));
  stage.correctors = solve_correctors(stage.meshes.perforated, stage.a, stage.weight, linear_spec(config));
  stage.tensor = homogenized_matrix(stage.meshes.perforated, stage.a, stage.weight, stage.correctors);
  return stage;
}

std::vector<EpsInstance> solve_ladder(const ExperimentConfig& config, const CellStage& stage) {
  std::vector<EpsInstance> out(config.eps_denominators.size());
  parallel_for(static_cast<int>(out.size()), config.workers,
               [&](int i) { out[i] = solve_instance(config, stage, config.eps_denominators[i]); });
  return out;
}

FirstOrderField first_order_approximation(const Mesh& domain_mesh, const EpsSolution& u_eps, const Mesh& solid_mesh,
                                          const HomogenizedSolution& u0, const CorrectorSet& correctors,
                                          const PerforatedDomainSpec& spec) {
  const std::size_t nv = domain_mesh.vertices.size();
  PERFHOM_THROW_IF(u_eps.u.size() != nv, ErrorKind::MeshLineageMismatch, "u_eps is not nodal on the domain mesh");
  PERFHOM_THROW_IF(u0.u0.size() != solid_mesh.vertices.size(), ErrorKind::MeshLineageMismatch,
                   "u0 is not nodal on the solid mesh");
  std::array<std::vector<double>, 2> chi;
  for (int l = 0; l < 2; ++l) chi[l] = pull_back_cell_field(correctors.chi[l], domain_mesh);

  const double eps = spec.epsilon();
  FirstOrderField out;
  out.c1 = spec.cell.c0 / 4.0;
  out.inner_layer = out.c1 * eps;
  out.outer_layer = 2.0 * out.c1 * eps;
  out.w.resize(nv);
  out.eta.resize(nv);
  out.u0.resize(nv);
  const PointLocator locator(solid_mesh);
  for (std::size_t v = 0; v < nv; ++v) {
    const Point x = domain_mesh.vertices[v];
    const double d = distance_to_rectangle_boundary(x, spec.width, spec.height);
    const double eta = std::clamp(d / out.inner_layer - 1.0, 0.0, 1.0);
    const double base = locator.interpolate(u0.u0, x, 0.0);
    double corrector = 0.0;
    if (eta > 0.0) {
      for (int l = 0; l < 2; ++l) corrector += chi[l][v] * locator.interpolate(u0.recovered_gradient[l], x, 0.0);
    }
    out.eta[v] = eta;
    out.u0[v] = base;
    out.w[v] = u_eps.u[v] - base - eps * corrector * eta;
  }
  return out;
}

SlopeFit fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  SlopeFit fit;
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n) return fit;
  for (std::size_t i = 0; i < n; ++i)
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i])) return fit;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (!(std::abs(denom) > 0.0)) return fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::log(y[i]) - fit.intercept - fit.slope * std::log(x[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / n);
  fit.reliable = fit.residual <= 0.1;
  return fit;
}

ConvergenceReport convergence_study(const ExperimentConfig& config, const CellStage& stage) {
  return convergence_study(config, stage, solve_ladder(config, stage));
}

ConvergenceReport convergence_study(const ExperimentConfig& config, const CellStage& stage,
                                    const std::vector<EpsInstance>& ladder) {
  if (config.form != LoadForm::WeightedSource)
    throw ConfigValidationError("source.form", "convergence study needs the weighted source form");
  const auto cell_mesh = std::make_shared<const Mesh>(stage.meshes.perforated);
  const auto source = config.source();
  ConvergenceReport report;
  report.entries.resize(ladder.size());
  parallel_for(static_cast<int>(ladder.size()), config.workers, [&](int i) {
    const auto& inst = ladder[i];
    const double eps = inst.spec.epsilon();
    const Mesh solid = triangulate_solid(config.width, config.height, inst.spec.N * config.n);
    const auto f_eps = extended_weighted_source(cell_mesh, stage.weight.nodal_values, source.f, eps);
    const auto u0 = solve_homogenized(solid, stage.tensor, f_eps, linear_spec(config));
    const auto first = first_order_approximation(inst.domain, inst.solution, solid, u0, stage.correctors, inst.spec);
    std::vector<double> diff(inst.solution.u.size());
    for (std::size_t v = 0; v < diff.size(); ++v) diff[v] = inst.solution.u[v] - first.u0[v];

    auto& e = report.entries[i];
    e.epsilon = eps;
    e.e_grad = weighted_norm(inst.domain, first.w, inst.phi_eps, 2.0, true);
    e.e_grad_uncorrected = weighted_norm(inst.domain, diff, inst.phi_eps, 2.0, true);
    e.e_l2 = weighted_norm(inst.domain, diff, inst.phi_eps, 2.0, false);
    e.energy = inst.solution.energy;
    e.energy_constant = inst.solution.energy_constant;
    e.f_norm_l2 = function_norm(inst.domain, source.f, 2.0);
    e.cg_iterations = inst.solution.iterations;
    e.domain_vertices = static_cast<int>(inst.domain.vertices.size());
  });

  std::vector<double> eps, grad, l2;
  report.corrector_improves = true;
  for (const auto& e : report.entries) {
    eps.push_back(e.epsilon);
    grad.push_back(e.e_grad);
    l2.push_back(e.e_l2);
    if (!(e.e_grad < e.e_grad_uncorrected)) report.corrector_improves = false;
  }
  report.grad = fit_log_slope(eps, grad);
  report.l2 = fit_log_slope(eps, l2);
  if (!report.grad.reliable || !report.l2.reliable) report.flags.push_back("SlopeUnreliable");
  if (stage.cell.holes.empty() && stage.a.is_constant()) report.flags.push_back("NoHomogenizationContrast");
  return report;
}

LipschitzReport lipschitz_uniformity(const ExperimentConfig& config, const CellStage& stage) {
  return lipschitz_uniformity(config, solve_ladder(config, stage));
}

LipschitzReport lipschitz_uniformity(const ExperimentConfig& config, const std::vector<EpsInstance>& ladder) {
  const auto source = config.source();
  LipschitzReport report;
  report.p_inf = config.lipschitz_p;
  report.p_values = config.p_values;
  report.entries.resize(ladder.size());
  auto data_norm = [&](const Mesh& mesh, double p) {
    double n = 0.0;
    if (source.f) n += function_norm(mesh, source.f, p);
    if (source.f_vector) n += function_norm(mesh, source.f_vector, p);
    if (source.F) n += function_norm(mesh, source.F, p);
    return n;
  };
  auto ratio = [](double num, double den) -> std::optional<double> {
    if (!(den > 0.0)) return std::nullopt;
    return num / den;
  };
  parallel_for(static_cast<int>(ladder.size()), config.workers, [&](int i) {
    const auto& inst = ladder[i];
    auto& e = report.entries[i];
    e.epsilon = inst.spec.epsilon();
    const double grad_inf = weighted_norm(inst.domain, inst.solution.u, inst.phi_eps, kInfinityNorm, true);
    e.r_inf = ratio(grad_inf, data_norm(inst.domain, config.lipschitz_p));
    for (double p : config.p_values)
      e.r_p.push_back(ratio(weighted_norm(inst.domain, inst.solution.u, inst.phi_eps, p, true), data_norm(inst.domain, p)));
  });
  std::vector<std::optional<double>> r_inf;
  for (const auto& e : report.entries) r_inf.push_back(e.r_inf);
  report.r_inf_variation = variation(r_inf);
  for (std::size_t k = 0; k < config.p_values.size(); ++k) {
    std::vector<std::optional<double>> r;
    for (const auto& e : report.entries) r.push_back(e.r_p[k]);
    report.r_p_variation.push_back(variation(r));
  }
  return report;
}

SpectralReport spectral_study(const ExperimentConfig& config) {
  const auto cell = config.cell_geometry();
  const auto a = config.coefficient_field();
  const auto options = eigen_options(config);
  const Mesh cell_mesh = triangulate_cell(cell, config.n);
  const auto ground = ground_state_weight(cell, cell_mesh, a, options);
  const auto bloch = bloch_tensor(cell_mesh, a, ground, linear_spec(config));
  const auto weighted =
      homogenized_matrix(cell_mesh, a, ground, solve_correctors(cell_mesh, a, ground, linear_spec(config)));

  SpectralReport report;
  report.lambda_bar = *ground.lambda_bar;
  const int k = config.spectrum_k;
  // Extrapolate the O(h^2) solid-mesh error away from the homogenized eigenvalues.
  auto extrapolated = [&](const HomogenizedTensor& tensor) {
    const auto coarse = homogenized_spectrum(triangulate_solid(config.width, config.height, config.spectrum_solid_n),
                                             tensor, k, options);
    const auto fine = homogenized_spectrum(
        triangulate_solid(config.width, config.height, 2 * config.spectrum_solid_n), tensor, k, options);
    std::vector<double> out(k);
    for (int j = 0; j < k; ++j) out[j] = (4.0 * fine[j] - coarse[j]) / 3.0;
    return out;
  };
  report.mu0 = extrapolated(bloch);
  report.mu0_corrector_tensor = extrapolated(weighted);

  const int count = static_cast<int>(config.eps_denominators.size());
  report.entries.resize(count);
  report.residuals_corrector_tensor.resize(count);
  parallel_for(count, config.workers, [&](int i) {
    const int N = config.eps_denominators[i];
    const auto spec = build_perforated_domain(cell, {config.width, config.height}, N);
    const Mesh domain = tile_domain_mesh(cell_mesh, spec);
    EigenSolveOptions shifted = options;
    // Just below eps^-2 lambda_bar, a lower bound for the discrete lambda_1.
    shifted.shift = report.lambda_bar * N * N * (1.0 - 1e-12);
    auto& e = report.entries[i];
    e.epsilon = spec.epsilon();
    e.lambda_eps = dirichlet_spectrum_eps(domain, a, e.epsilon, k, shifted);
    const double base = report.lambda_bar * N * N;
    for (int j = 0; j < k; ++j) {
      e.residuals.push_back(std::abs(e.lambda_eps[j] - base - report.mu0[j]));
      report.residuals_corrector_tensor[i].push_back(std::abs(e.lambda_eps[j] - base - report.mu0_corrector_tensor[j]));
    }
  });

  std::vector<double> eps, r1;
  for (const auto& e : report.entries) {
    eps.push_back(e.epsilon);
    r1.push_back(e.residuals.front());
  }
  const auto fit = fit_log_slope(eps, r1);
  report.slope = fit.slope;
  report.intercept = fit.intercept;
  report.fit_residual = fit.residual;
  std::vector<std::size_t> order(eps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return eps[x] > eps[y]; });
  report.strictly_decreasing = true;
  for (std::size_t i = 1; i < order.size(); ++i)
    if (!(r1[order[i]] < r1[order[i - 1]])) report.strictly_decreasing = false;
  return report;
}

double poincare_probe(const Mesh& domain_mesh, const std::vector<double>& phi_eps, const EigenSolveOptions& options) {
  const CsrMatrix s =
      assemble_weighted_stiffness(domain_mesh, CoefficientField::constant(Mat2::identity()), {phi_eps, 2});
  const CsrMatrix m = assemble_weighted_mass(domain_mesh, {});
  const auto pairs = smallest_eigenpairs(s, m, 1, domain_mesh.outer_vertices(), options);
  return 1.0 / std::sqrt(pairs.front().value);
}

ExtensionProbe extension_probe(const CellGeometry& enlarged, int n, int trials, std::uint64_t seed,
                               const LinearSolveSpec& spec) {
  const Mesh full = triangulate_cell_pair(enlarged, n).full;
  Mesh holes = full;
  holes.triangles.clear();
  holes.region.clear();
  std::vector<char> interior(full.vertices.size(), 0);
  for (std::size_t t = 0; t < full.triangles.size(); ++t) {
    if (full.region[t] == 0) continue;
    holes.triangles.push_back(full.triangles[t]);
    holes.region.push_back(full.region[t]);
    for (int v : full.triangles[t]) interior[v] = 1;
  }
  DirichletData fixed;
  for (std::size_t v = 0; v < full.vertices.size(); ++v) {
    if (full.on_hole[v]) interior[v] = 0;
    if (!interior[v]) fixed.indices.push_back(static_cast<int>(v));
  }
  const CsrMatrix k = holes.triangles.empty() ? CsrMatrix{}
                                              : assemble_weighted_stiffness(holes, CoefficientField::constant(Mat2::identity()), {});
  const std::vector<double> zero(full.vertices.size(), 0.0);

  // Returns the ratio, or nullopt when f has no gradient on Y'_*.
  auto ratio = [&](const std::vector<double>& f) -> std::optional<double> {
    double outside = 0.0;
    for (std::size_t t = 0; t < full.triangles.size(); ++t)
      if (full.region[t] == 0) outside += element_energy(full, t, f);
    if (!(outside > 1e-24)) return std::nullopt;
    double inside = 0.0;
    if (!holes.triangles.empty()) {
      fixed.values.clear();
      for (int v : fixed.indices) fixed.values.push_back(f[v]);
      const auto ext = solve_spd(k, zero, spec, fixed).x;
      for (std::size_t t = 0; t < holes.triangles.size(); ++t) inside += element_energy(holes, t, ext);
    }
    return std::sqrt((outside + inside) / outside);
  };

  ExtensionProbe probe;
  probe.trials = trials;
  std::vector<double> f(full.vertices.size());
  for (std::size_t v = 0; v < f.size(); ++v) f[v] = full.vertices[v].x;
  probe.linear_ratio = ratio(f).value_or(0.0);
  double exact_holes = 0.0;
  for (const auto& h : enlarged.holes) exact_holes += h.area();
  probe.analytic_linear_ratio = std::sqrt(1.0 / (1.0 - exact_holes));

  constexpr int kModes = 3;
  std::mt19937_64 rng(stream_seed(seed, static_cast<std::uint64_t>(n)));
  for (int trial = 0; trial < trials; ++trial) {
    std::fill(f.begin(), f.end(), 0.0);
    for (int j = -kModes; j <= kModes; ++j) {
      for (int l = 0; l <= kModes; ++l) {
        if (l == 0 && j <= 0) continue;
        const double c = uniform(rng) / (j * j + l * l), s = uniform(rng) / (j * j + l * l);
        for (std::size_t v = 0; v < f.size(); ++v) {
          const double arg = 2.0 * std::numbers::pi * (j * full.vertices[v].x + l * full.vertices[v].y);
          f[v] += c * std::cos(arg) + s * std::sin(arg);
        }
      }
    }
    if (const auto r = ratio(f)) probe.max_ratio = std::max(probe.max_ratio, *r);
  }
  return probe;
}

double sobolev_linf_probe(const Mesh& domain_mesh, const std::vector<double>& phi_eps, double width, double height,
                          int trials, std::uint64_t seed, double p) {
  constexpr int kModes = 4;
  std::mt19937_64 rng(seed);
  const std::size_t nv = domain_mesh.vertices.size();
  std::array<std::vector<double>, kModes> sx, sy;
  for (int j = 0; j < kModes; ++j) {
    sx[j].resize(nv);
    sy[j].resize(nv);
    for (std::size_t v = 0; v < nv; ++v) {
      sx[j][v] = std::sin((j + 1) * std::numbers::pi * domain_mesh.vertices[v].x / width);
      sy[j][v] = std::sin((j + 1) * std::numbers::pi * domain_mesh.vertices[v].y / height);
    }
  }
  std::vector<double> u(nv);
  double best = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    std::fill(u.begin(), u.end(), 0.0);
    for (int j = 0; j < kModes; ++j) {
      for (int l = 0; l < kModes; ++l) {
        const double c = uniform(rng) / ((j + 1) * (j + 1) + (l + 1) * (l + 1));
        for (std::size_t v = 0; v < nv; ++v) u[v] += c * sx[j][v] * sy[l][v];
      }
    }
    for (int v : domain_mesh.outer_vertices()) u[v] = 0.0;
    const double denom = weighted_norm(domain_mesh, u, phi_eps, p, true);
    if (!(denom > 0.0)) continue;
    best = std::max(best, weighted_norm(domain_mesh, u, phi_eps, kInfinityNorm, false) / denom);
  }
  return best;
}

ProbeReport probe_study(const ExperimentConfig& config, const CellStage& stage) {
  ProbeReport report;
  const int count = static_cast<int>(config.eps_denominators.size());
  report.entries.resize(count);
  parallel_for(count, config.workers, [&](int i) {
    const int N = config.eps_denominators[i];
    const auto spec = build_perforated_domain(stage.cell, {config.width, config.height}, N);
    const Mesh domain = tile_domain_mesh(stage.meshes.perforated, spec);
    const auto phi = evaluate_weight_on_domain(stage.weight, spec, domain);
    auto& e = report.entries[i];
    e.epsilon = spec.epsilon();
    e.poincare = poincare_probe(domain, phi, eigen_options(config));
    e.sobolev = sobolev_linf_probe(domain, phi, config.width, config.height, config.probe_trials,
                                   stream_seed(config.seed, static_cast<std::uint64_t>(N)), config.lipschitz_p);
  });
  const auto enlarged = stage.cell.inflated(stage.cell.c0 / 8.0);
  for (int n : {config.n, 2 * config.n}) {
    report.extension_resolutions.push_back(n);
    report.extension.push_back(extension_probe(enlarged, n, config.probe_trials, config.seed, linear_spec(config)));
  }
  std::vector<double> cp, sob, ext;
  for (const auto& e : report.entries) {
    cp.push_back(e.poincare);
    sob.push_back(e.sobolev);
  }
  for (const auto& e : report.extension) ext.push_back(e.max_ratio);
  report.poincare_variation = variation(cp);
  report.sobolev_variation = variation(sob);
  report.extension_variation = variation(ext);
  return report;
}

}  // namespace perfhom
