#include "perfhom/acceptance.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "perfhom/analysis.hpp"
#include "perfhom/errors.hpp"
#include "perfhom/fem/norms.hpp"
#include "perfhom/report.hpp"

namespace perfhom {

const char* const kBenchmarkConfig = R"(name: benchmark
kind: all
seed: 7
geometry:
  width: 1
  height: 1
  c0: 0.2
  holes:
    - disk: {center: [0, 0], radius: 0.25}
weight: distance
coefficient: {preset: constant, matrix: [1, 0, 1]}
discretization:
  n: 8
  epsilons: ["1/2", "1/4", "1/8"]
source:
  form: weighted
  f: {preset: constant, amplitude: 1}
spectrum: {k: 2, solid_n: 32}
probes: {trials: 20, lipschitz_p: 4, p_values: [2, 4]}
)";

namespace {

/// n = 128 Richardson extrapolation (observed order 2.03) of a_hat_11 for the disk benchmark.
constexpr double kGoldenAhat11 = 0.0052933326;

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << "[violated] " << what << "; ";
    }
  }
};

CellGeometry disk_cell() { return build_cell_geometry({HoleSpec(Disk{{0.0, 0.0}, 0.25})}, 0.2); }

const CoefficientField kIdentity = CoefficientField::constant(Mat2::identity());

std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

std::string fix(double v, int digits = 4) {
  std::ostringstream s;
  s.precision(digits);
  s << std::fixed << v;
  return s.str();
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Gaussian elimination on the free rows of k x = b (fixed entries are zero); with
/// `pin_mean` the singular periodic system is closed by a Lagrange multiplier on sum(x) = 0.
std::vector<double> dense_solve(const CsrMatrix& k, const std::vector<double>& b, const std::vector<int>& fixed,
                                bool pin_mean) {
  std::vector<char> is_fixed(k.rows, 0);
  for (int i : fixed) is_fixed[i] = 1;
  std::vector<int> free;
  for (int i = 0; i < k.rows; ++i)
    if (!is_fixed[i]) free.push_back(i);
  const int n = static_cast<int>(free.size());
  const int size = n + (pin_mean ? 1 : 0);
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(size, size);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
  std::vector<int> position(k.rows, -1);
  for (int i = 0; i < n; ++i) position[free[i]] = i;
  for (int i = 0; i < n; ++i) {
    const int row = free[i];
    rhs(i) = b[row];
    for (int idx = k.row_ptr[row]; idx < k.row_ptr[row + 1]; ++idx)
      if (position[k.col_idx[idx]] >= 0) dense(i, position[k.col_idx[idx]]) += k.values[idx];
    if (pin_mean) dense(i, n) = dense(n, i) = 1.0;
  }
  const Eigen::VectorXd x = dense.partialPivLu().solve(rhs);
  std::vector<double> out(k.rows, 0.0);
  for (int i = 0; i < n; ++i) out[free[i]] = x(i);
  return out;
}

std::vector<double> remove_mean(std::vector<double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  s /= static_cast<double>(v.size());
  for (double& x : v) x -= s;
  return v;
}

std::vector<double> dof_values(const DofMap& dofs, const std::vector<double>& vertex_values) {
  std::vector<double> out(dofs.num_dofs, 0.0);
  for (std::size_t v = 0; v < vertex_values.size(); ++v)
    if (dofs.vertex_to_dof[v] >= 0) out[dofs.vertex_to_dof[v]] = vertex_values[v];
  return out;
}

ExperimentConfig ladder_config(const std::string& yaml) { return parse_config(yaml); }

const char* const kConvergeConfig = R"(name: converge
kind: converge
geometry: {c0: 0.2, holes: [{disk: {center: [0, 0], radius: 0.25}}]}
weight: distance
discretization: {n: 16, epsilons: ["1/4", "1/8", "1/16", "1/32"]}
source: {form: weighted, f: {preset: constant, amplitude: 1}}
probes: {trials: 100, lipschitz_p: 4, p_values: [2, 4]}
)";

// ---------------------------------------------------------------------------

void trivial_cell(Outcome& o) {
  const auto cell = build_cell_geometry({}, 0.2);
  const auto pair = triangulate_cell_pair(cell, 16);
  const auto w = ground_state_weight(cell, pair.perforated, kIdentity);
  double phi_dev = 0.0;
  for (double v : w.nodal_values) phi_dev = std::max(phi_dev, std::abs(v - 1.0));
  const auto chi = solve_correctors(pair.perforated, kIdentity, w);
  const auto t = homogenized_matrix(pair.perforated, kIdentity, w, chi);
  const auto flux = flux_correctors(pair, kIdentity, w, chi, t);
  double chi_max = 0.0, flux_max = 0.0;
  for (const auto& c : chi.chi)
    for (double v : c) chi_max = std::max(chi_max, std::abs(v));
  for (const auto& a : flux.phi)
    for (const auto& b : a)
      for (const auto& c : b)
        for (double v : c) flux_max = std::max(flux_max, std::abs(v));
  const double ahat_dev = std::max({std::abs(t.a_hat[0][0] - 1.0), std::abs(t.a_hat[1][1] - 1.0),
                                    std::abs(t.a_hat[0][1]), std::abs(t.a_hat[1][0])});
  o.require(phi_dev <= 1e-10, "phi == 1");
  o.require(chi_max <= 1e-10, "chi == 0");
  o.require(ahat_dev <= 1e-10, "A_hat == I");
  o.require(std::abs(t.a0 - 1.0) <= 1e-10, "a0 == 1");
  o.require(flux_max <= 1e-10, "Phi == 0");
  o.detail << "max|phi-1|=" << sci(phi_dev) << " max|chi|=" << sci(chi_max) << " max|A_hat-I|=" << sci(ahat_dev)
           << " |a0-1|=" << sci(std::abs(t.a0 - 1.0)) << " max|Phi|=" << sci(flux_max);
}

void tensor_structure(Outcome& o) {
  const auto cell = disk_cell();
  const auto mesh = triangulate_cell(cell, 64);
  const auto w = distance_weight(cell, mesh);
  const auto t = homogenized_matrix(mesh, kIdentity, w, solve_correctors(mesh, kIdentity, w));
  const double asym = std::abs(t.a_hat[0][1] - t.a_hat[1][0]);
  const double iso = std::abs(t.a_hat[0][0] - t.a_hat[1][1]);
  const double rel = std::abs(t.a_hat[0][0] - kGoldenAhat11) / kGoldenAhat11;
  o.require(asym <= 1e-8, "symmetric within 1e-8");
  o.require(t.min_eigenvalue() > 0.0, "positive definite");
  o.require(std::abs(t.a_hat[0][1]) <= 1e-8, "|a12| <= 1e-8");
  o.require(iso <= 1e-6, "a11 == a22 within 1e-6");
  o.require(rel <= 5e-3, "a11 within 0.5% of golden");
  o.detail << "a11=" << t.a_hat[0][0] << " golden=" << kGoldenAhat11 << " rel=" << sci(rel) << " |a12|="
           << sci(std::abs(t.a_hat[0][1])) << " asym=" << sci(asym) << " |a11-a22|=" << sci(iso)
           << " min_eig=" << sci(t.min_eigenvalue());
}

void scaling_covariance(Outcome& o) {
  const auto cell = disk_cell();
  const auto mesh = triangulate_cell(cell, 32);
  const auto w = distance_weight(cell, mesh);
  const auto w2 = w.scaled(2.0);
  const auto c1 = solve_correctors(mesh, kIdentity, w);
  const auto c2 = solve_correctors(mesh, kIdentity, w2);
  const auto t1 = homogenized_matrix(mesh, kIdentity, w, c1);
  const auto t2 = homogenized_matrix(mesh, kIdentity, w2, c2);
  const double chi_diff = std::max(max_abs_diff(c1.chi[0], c2.chi[0]), max_abs_diff(c1.chi[1], c2.chi[1]));
  double tensor_dev = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) tensor_dev = std::max(tensor_dev, std::abs(t2.a_hat[i][j] - 4.0 * t1.a_hat[i][j]));
  tensor_dev /= t1.max_abs();
  const double a0_dev = std::abs(t2.a0 - 4.0 * t1.a0) / t1.a0;
  o.require(chi_diff <= 1e-10, "correctors unchanged");
  o.require(tensor_dev <= 1e-10, "A_hat -> 4 A_hat");
  o.require(a0_dev <= 1e-10, "a0 -> 4 a0");
  o.detail << "max|chi(2phi)-chi(phi)|=" << sci(chi_diff) << " rel|A_hat'-4A_hat|=" << sci(tensor_dev)
           << " rel|a0'-4a0|=" << sci(a0_dev);
}

void dense_oracle(Outcome& o) {
  LinearSolveSpec tight;
  tight.tolerance = 1e-13;
  const auto cell = disk_cell();

  {  // Corrector.
    const auto mesh = triangulate_cell(cell, 12);
    const auto w = distance_weight(cell, mesh);
    const auto chi = solve_correctors(mesh, kIdentity, w, tight);
    const DofMap dofs = DofMap::periodic(mesh);
    const CsrMatrix k = assemble_weighted_stiffness(mesh, kIdentity, {w.nodal_values, 2}, &dofs);
    double worst = 0.0;
    for (int j = 0; j < 2; ++j) {
      // Load -int phi^2 A e_j . grad psi with the midpoint rule, written out element by element.
      std::vector<double> load(mesh.vertices.size(), 0.0);
      for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        const auto grads = shape_gradients(mesh, t);
        double wsq = 0.0;
        for (int q = 0; q < 3; ++q) {
          const double m = 0.5 * (w.nodal_values[tri[q]] + w.nodal_values[tri[(q + 1) % 3]]);
          wsq += m * m;
        }
        const double coeff = mesh.area(t) / 3.0 * wsq;
        for (int a = 0; a < 3; ++a) load[tri[a]] -= coeff * (j == 0 ? grads[a].x : grads[a].y);
      }
      auto x = dofs.expand(dense_solve(k, dofs.fold(load), {}, true));
      const double mean = integrate(mesh, x) / mesh.total_area();
      for (double& v : x) v -= mean;
      worst = std::max(worst, max_abs_diff(x, chi.chi[j]));
    }
    o.require(dofs.num_dofs <= 300, "corrector instance has <= 300 unknowns");
    o.require(worst <= 1e-8, "corrector matches dense solve");
    o.detail << "corrector(" << dofs.num_dofs << " dofs)=" << sci(worst) << " ";
  }
  {  // Degenerate eps-problem.
    const auto mesh = triangulate_cell(cell, 8);
    const auto w = distance_weight(cell, mesh);
    const auto spec = build_perforated_domain(cell, {1, 1}, 2);
    const Mesh domain = tile_domain_mesh(mesh, spec);
    const auto phi = evaluate_weight_on_domain(w, spec, domain);
    SourceTerm rhs;
    rhs.f = [](Point x) { return 1.0 + x.x * x.y; };
    const auto sol = solve_eps_problem(domain, kIdentity, phi, rhs, spec.epsilon(), tight);
    const CsrMatrix k = assemble_weighted_stiffness(domain, kIdentity, {phi, 2});
    const auto x = dense_solve(k, assemble_load(domain, rhs, phi), domain.outer_vertices(), false);
    const int unknowns = static_cast<int>(domain.vertices.size() - domain.outer_vertices().size());
    const double diff = max_abs_diff(x, sol.u);
    o.require(unknowns <= 300, "eps instance has <= 300 unknowns");
    o.require(diff <= 1e-8, "eps-problem matches dense solve");
    o.detail << "eps-problem(" << unknowns << ")=" << sci(diff) << " ";
  }
  {  // Homogenized problem.
    const Mesh solid = triangulate_solid(1.0, 1.0, 16);
    HomogenizedTensor t;
    t.a_hat = {{{0.7, 0.1}, {0.1, 0.4}}};
    t.a0 = 1.0;
    const ScalarFunction f = [](Point x) { return std::sin(std::numbers::pi * x.x) * (1.0 + x.y); };
    const auto sol = solve_homogenized(solid, t, f, tight);
    const CsrMatrix k = assemble_weighted_stiffness(solid, CoefficientField::constant(t.symmetric_part()), {});
    SourceTerm rhs;
    rhs.f = f;
    const auto x = dense_solve(k, assemble_load(solid, rhs, {}), solid.outer_vertices(), false);
    const int unknowns = static_cast<int>(solid.vertices.size() - solid.outer_vertices().size());
    const double diff = max_abs_diff(x, sol.u0);
    o.require(unknowns <= 300, "homogenized instance has <= 300 unknowns");
    o.require(diff <= 1e-8, "homogenized matches dense solve");
    o.detail << "homogenized(" << unknowns << ")=" << sci(diff) << " ";
  }
  {  // Flux potential.
    const auto pair = triangulate_cell_pair(cell, 8);
    const auto w = distance_weight(cell, pair.perforated);
    const auto chi = solve_correctors(pair.perforated, kIdentity, w, tight);
    const auto t = homogenized_matrix(pair.perforated, kIdentity, w, chi);
    const auto flux = flux_correctors(pair, kIdentity, w, chi, t, tight);
    const Mesh& full = flux.mesh;
    const DofMap dofs = DofMap::periodic(full);
    const CsrMatrix k = assemble_weighted_stiffness(full, kIdentity, {}, &dofs);
    double worst = 0.0;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        std::vector<double> load(full.vertices.size(), 0.0);
        for (std::size_t e = 0; e < full.triangles.size(); ++e) {
          const auto& tri = full.triangles[e];
          for (int q = 0; q < 3; ++q) {
            const double val = full.area(e) / 3.0 * flux.b_quadrature[i][j][e][q];
            load[tri[q]] -= 0.5 * val;
            load[tri[(q + 1) % 3]] -= 0.5 * val;
          }
        }
        const auto x = remove_mean(dense_solve(k, dofs.fold(load), {}, true));
        worst = std::max(worst, max_abs_diff(x, remove_mean(dof_values(dofs, flux.potentials[i][j]))));
      }
    o.require(dofs.num_dofs <= 300, "flux instance has <= 300 unknowns");
    o.require(worst <= 1e-8, "flux potential matches dense solve");
    o.detail << "flux-potential(" << dofs.num_dofs << ")=" << sci(worst);
  }
}

struct LadderCache {
  std::optional<ExperimentConfig> config;
  std::optional<CellStage> stage;
  std::vector<EpsInstance> ladder;

  void ensure(int workers) {
    if (config) return;
    config = ladder_config(kConvergeConfig);
    config->workers = workers;
    stage = prepare_cell_stage(*config);
    ladder = solve_ladder(*config, *stage);
  }
};

void convergence_rate(Outcome& o, LadderCache& cache, int workers) {
  cache.ensure(workers);
  const auto rep = convergence_study(*cache.config, *cache.stage, cache.ladder);
  o.require(rep.grad.slope >= 0.125, "E_grad slope >= 0.125");
  o.require(rep.corrector_improves, "corrector improves the gradient error at every eps");
  o.detail << "slope(E_grad)=" << fix(rep.grad.slope) << " (fit residual " << sci(rep.grad.residual)
           << ") slope(E_L2)=" << fix(rep.l2.slope) << " E_grad/E_uncorrected=";
  for (const auto& e : rep.entries) o.detail << fix(e.e_grad / e.e_grad_uncorrected, 3) << " ";
}

void uniform_lipschitz(Outcome& o, LadderCache& cache, int workers) {
  cache.ensure(workers);
  const auto rep = lipschitz_uniformity(*cache.config, cache.ladder);
  const bool ok = rep.r_inf_variation.has_value();
  o.require(ok && *rep.r_inf_variation <= 2.0, "max R_inf / min R_inf <= 2");
  o.detail << "R_inf(p=4)=";
  for (const auto& e : rep.entries) o.detail << fix(e.r_inf.value_or(NAN)) << " ";
  o.detail << "variation=" << (ok ? fix(*rep.r_inf_variation, 3) : "n/a");
}

void uniform_w1p(Outcome& o, int workers) {
  auto config = ladder_config(R"(name: w1p
kind: lipschitz
geometry: {c0: 0.2, holes: [{disk: {center: [0, 0], radius: 0.25}}]}
weight: distance
discretization: {n: 16, epsilons: ["1/4", "1/8", "1/16", "1/32"]}
source: {form: divergence, f_vector: [1, 0.5], F: {preset: constant, amplitude: 1}}
probes: {lipschitz_p: 4, p_values: [2, 4]}
)");
  config.workers = workers;
  const auto rep = lipschitz_uniformity(config, prepare_cell_stage(config));
  for (std::size_t k = 0; k < rep.p_values.size(); ++k) {
    const auto& v = rep.r_p_variation[k];
    o.require(v && *v <= 2.0, "R_p variation <= 2 for p=" + fix(rep.p_values[k], 0));
    o.detail << "p=" << fix(rep.p_values[k], 0) << ": R_p=";
    for (const auto& e : rep.entries) o.detail << fix(e.r_p[k].value_or(NAN)) << " ";
    o.detail << "variation=" << (v ? fix(*v, 3) : "n/a") << "; ";
  }
}

void inequality_probes(Outcome& o, int workers) {
  auto config = ladder_config(kConvergeConfig);
  config.workers = workers;
  // C_P only needs a few digits; the eigenvalue error is quadratic in this residual.
  config.eigen_tolerance = 1e-6;
  const auto stage = prepare_cell_stage(config);
  const auto rep = probe_study(config, stage);
  o.require(rep.poincare_variation <= 2.0, "C_P variation <= 2");
  o.require(rep.sobolev_variation <= 2.0, "Sobolev ratio variation <= 2");
  o.detail << "C_P=";
  for (const auto& e : rep.entries) o.detail << fix(e.poincare) << " ";
  o.detail << "(var " << fix(rep.poincare_variation, 3) << ") sobolev=";
  for (const auto& e : rep.entries) o.detail << fix(e.sobolev) << " ";
  o.detail << "(var " << fix(rep.sobolev_variation, 3) << ") ";

  // Refinement sweep of the cell-level extension constant.
  const auto enlarged = stage.cell.inflated(stage.cell.c0 / 8.0);
  std::vector<double> ratios;
  o.detail << "C_E(n)=";
  for (int n : {16, 32, 64}) {
    const auto e = extension_probe(enlarged, n, config.probe_trials, config.seed);
    ratios.push_back(e.max_ratio);
    const double lin = std::abs(e.linear_ratio - e.analytic_linear_ratio) / e.analytic_linear_ratio;
    o.require(lin <= 0.01, "linear extension ratio within 1% at n=" + std::to_string(n));
    o.detail << n << ":" << fix(e.max_ratio) << " (linear rel err " << sci(lin) << ") ";
  }
  const double ext_var = *std::max_element(ratios.begin(), ratios.end()) / *std::min_element(ratios.begin(), ratios.end());
  o.require(ext_var <= 2.0, "C_E variation <= 2");
  o.detail << "var " << fix(ext_var, 3);
}

void spectral(Outcome& o, int workers) {
  auto config = ladder_config(R"(name: spectrum
kind: spectrum
geometry: {c0: 0.2, holes: [{disk: {center: [0, 0], radius: 0.25}}]}
weight: ground_state
discretization: {n: 16, epsilons: ["1/4", "1/8", "1/16"]}
spectrum: {k: 1, solid_n: 128}
)");
  config.workers = workers;
  const auto rep = spectral_study(config);
  o.require(rep.strictly_decreasing, "r1 strictly decreasing");
  o.require(rep.slope >= 0.5, "r1 slope >= 0.5");
  o.detail << "lambda_bar=" << fix(rep.lambda_bar, 6) << " mu0=" << fix(rep.mu0[0], 6) << " r1=";
  for (const auto& e : rep.entries) o.detail << sci(e.residuals[0]) << " ";
  o.detail << "slope=" << fix(rep.slope, 3) << "; ";

  const auto empty = build_cell_geometry({}, 0.2);
  const auto spec = build_perforated_domain(empty, {1, 1}, 4);
  const Mesh domain = tile_domain_mesh(triangulate_cell(empty, 16), spec);
  const double lambda = dirichlet_spectrum_eps(domain, kIdentity, spec.epsilon(), 1).front();
  const double exact = 2.0 * std::numbers::pi * std::numbers::pi;
  const double rel = std::abs(lambda - exact) / exact;
  o.require(rel <= 0.01, "no-hole lambda_1 within 1% of 2 pi^2");
  o.detail << "no-hole lambda_1=" << fix(lambda, 5) << " (rel " << sci(rel) << ")";
}

void flux_identities(Outcome& o) {
  const auto cell = disk_cell();
  std::vector<double> residuals;
  double antisym = 0.0, b_max = 0.0;
  for (int n : {16, 32, 64}) {
    const auto pair = triangulate_cell_pair(cell, n);
    const auto w = distance_weight(cell, pair.perforated);
    const auto chi = solve_correctors(pair.perforated, kIdentity, w);
    const auto t = homogenized_matrix(pair.perforated, kIdentity, w, chi);
    const auto flux = flux_correctors(pair, kIdentity, w, chi, t);
    residuals.push_back(flux_weak_residual(flux));
    antisym = std::max(antisym, flux_antisymmetry_defect(flux));
    for (const auto& row : flux.b_integrals)
      for (double v : row) b_max = std::max(b_max, std::abs(v));
  }
  o.require(antisym == 0.0, "Phi_kij = -Phi_ikj exactly");
  o.require(b_max <= 1e-8, "|int b_ij| <= 1e-8");
  o.detail << "weak residual n=16,32,64: ";
  for (double r : residuals) o.detail << sci(r) << " ";
  for (std::size_t i = 1; i < residuals.size(); ++i) {
    const double ratio = residuals[i - 1] / residuals[i];
    o.require(ratio >= 1.8, "residual shrinks >= 1.8x per doubling");
    o.detail << "ratio " << fix(ratio, 2) << " ";
  }
  o.detail << "antisymmetry=" << sci(antisym) << " max|int b|=" << sci(b_max);
}

std::map<std::string, std::string> read_tree(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name == "timings.json") continue;
    std::ifstream in(entry.path(), std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    files[name] = buf.str();
  }
  return files;
}

void determinism(Outcome& o, int workers) {
  namespace fs = std::filesystem;
  const auto config = parse_config(kBenchmarkConfig);
  std::random_device rd;
  const fs::path root = fs::temp_directory_path() / ("perfhom-determinism-" + std::to_string(rd()));
  std::vector<std::map<std::string, std::string>> trees;
  for (int run = 0; run < 2; ++run) {
    auto c = config;
    // The second run uses a different worker count: ordering must not leak into the bytes.
    c.workers = run == 0 ? 1 : std::max(2, workers);
    const auto dir = root / ("run" + std::to_string(run));
    write_outputs(run_experiment(c), dir.string());
    trees.push_back(read_tree(dir));
  }
  fs::remove_all(root);
  o.require(trees[0].count("report.json") == 1, "report.json written");
  o.require(trees[0] == trees[1], "byte-identical outputs");
  std::size_t csvs = 0;
  for (const auto& [name, _] : trees[0])
    if (name.ends_with(".csv")) ++csvs;
  o.detail << trees[0].size() << " files compared (" << csvs << " CSV), identical=" << (trees[0] == trees[1] ? "yes" : "no");
}

}  // namespace

std::vector<CriterionResult> run_acceptance(std::ostream& log, int workers, const std::vector<int>& only) {
  LadderCache cache;
  struct Entry {
    int id;
    const char* name;
    double time_limit;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Entry> entries = {
      {1, "trivial-cell exactness", 1.0, trivial_cell},
      {2, "tensor structure", 30.0, tensor_structure},
      {3, "scaling covariance", 0.0, scaling_covariance},
      {4, "dense-oracle equivalence", 0.0, dense_oracle},
      {5, "convergence rate", 600.0, [&](Outcome& o) { convergence_rate(o, cache, workers); }},
      {6, "uniform Lipschitz", 0.0, [&](Outcome& o) { uniform_lipschitz(o, cache, workers); }},
      {7, "uniform W^{1,p}", 0.0, [&](Outcome& o) { uniform_w1p(o, workers); }},
      {8, "inequality probes", 0.0, [&](Outcome& o) { inequality_probes(o, workers); }},
      {9, "spectral asymptotics", 0.0, [&](Outcome& o) { spectral(o, workers); }},
      {10, "flux-corrector identities", 0.0, flux_identities},
      {11, "determinism", 0.0, [&](Outcome& o) { determinism(o, workers); }},
  };
  std::vector<CriterionResult> results;
  for (const auto& e : entries) {
    if (!only.empty() && std::find(only.begin(), only.end(), e.id) == only.end()) continue;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      e.run(o);
    } catch (const std::exception& ex) {
      o.passed = false;
      o.detail << "exception: " << ex.what();
    }
    CriterionResult r;
    r.id = e.id;
    r.name = e.name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    // Criterion 5 bundles the shared ladder solve, so its limit covers that work too.
    if (e.time_limit > 0.0 && r.seconds > e.time_limit) {
      o.passed = false;
      o.detail << " [violated] runtime " << fix(r.seconds, 2) << "s exceeds " << fix(e.time_limit, 0) << "s";
    }
    r.passed = o.passed;
    r.detail = o.detail.str();
    log << (r.passed ? "PASS" : "FAIL") << "  criterion " << r.id << " (" << r.name << ", " << fix(r.seconds, 2)
        << "s): " << r.detail << std::endl;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace perfhom
