#include "perfhom/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "perfhom/errors.hpp"

namespace perfhom {
namespace {

using Json = nlohmann::json;

Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json num(const std::optional<double>& v) { return v ? num(*v) : Json(nullptr); }

Json matrix_json(const Matrix2& m) { return Json::array({{num(m[0][0]), num(m[0][1])}, {num(m[1][0]), num(m[1][1])}}); }

Json fit_json(const SlopeFit& f) {
  return {{"slope", num(f.slope)}, {"intercept", num(f.intercept)}, {"residual", num(f.residual)},
          {"reliable", f.reliable}};
}

Json skipped() { return {{"status", "skipped"}}; }

class Timer {
 public:
  Timer(std::map<std::string, double>& sink, std::string name) : sink_(sink), name_(std::move(name)) {}
  ~Timer() { sink_[name_] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  std::map<std::string, double>& sink_;
  std::string name_;
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string p_label(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p);
  std::string s = buf;
  for (char& c : s)
    if (c == '.') c = '_';
  return s;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(ErrorKind::IoFailure, "write failed for '" + path.string() + "'");
}

}  // namespace

CellReport cell_report(const CellStage& stage, const ExperimentConfig& config) {
  CellReport r;
  r.tensor = stage.tensor;
  r.lambda_bar = stage.weight.lambda_bar;
  r.corrector_residuals = stage.correctors.solver_residuals;
  const auto flux =
      flux_correctors(stage.meshes, stage.a, stage.weight, stage.correctors, stage.tensor, linear_spec(config));
  r.flux_weak_residual = flux_weak_residual(flux);
  r.flux_antisymmetry = flux_antisymmetry_defect(flux);
  r.flux_b_integrals = flux.b_integrals;
  r.cell_vertices = static_cast<int>(stage.meshes.perforated.vertices.size());
  r.cell_triangles = static_cast<int>(stage.meshes.perforated.triangles.size());
  r.cell_area = stage.meshes.perforated.total_area();
  return r;
}

RunReport run_experiment(const ExperimentConfig& config, bool cell_only) {
  validate_config(config);
  RunReport report;
  report.config = config;
  CellStage stage;
  {
    Timer t(report.timings, "cell");
    stage = prepare_cell_stage(config);
    report.cell = cell_report(stage, config);
  }
  if (cell_only) return report;
  const auto kind = config.kind;
  const bool all = kind == ExperimentKind::All;
  std::vector<EpsInstance> ladder;
  if (all || kind == ExperimentKind::Converge || kind == ExperimentKind::Lipschitz) {
    Timer t(report.timings, "eps_ladder");
    ladder = solve_ladder(config, stage);
  }
  if ((all && config.form == LoadForm::WeightedSource) || kind == ExperimentKind::Converge) {
    Timer t(report.timings, "convergence");
    report.convergence = convergence_study(config, stage, ladder);
  }
  if (all || kind == ExperimentKind::Lipschitz) {
    Timer t(report.timings, "lipschitz");
    report.lipschitz = lipschitz_uniformity(config, ladder);
  }
  if (all || kind == ExperimentKind::Spectrum) {
    Timer t(report.timings, "spectrum");
    report.spectrum = spectral_study(config);
  }
  if (all || kind == ExperimentKind::Probes) {
    Timer t(report.timings, "probes");
    report.probes = probe_study(config, stage);
  }
  return report;
}

Json to_json(const RunReport& r) {
  Json out;
  out["tool"] = {{"name", "perfhom"}, {"version", kToolVersion}};
  out["config"] = to_json(r.config);

  const auto& c = r.cell;
  out["cell"] = {{"a_hat", matrix_json(c.tensor.a_hat)},
                 {"a0", num(c.tensor.a0)},
                 {"energy_form", matrix_json(c.tensor.energy_form)},
                 {"form_discrepancy", num(c.tensor.form_discrepancy)},
                 {"min_eigenvalue", num(c.tensor.min_eigenvalue())},
                 {"lambda_bar", num(c.lambda_bar)},
                 {"corrector_residuals", {num(c.corrector_residuals[0]), num(c.corrector_residuals[1])}},
                 {"flux_weak_residual", num(c.flux_weak_residual)},
                 {"flux_antisymmetry_defect", num(c.flux_antisymmetry)},
                 {"flux_b_integrals", matrix_json(c.flux_b_integrals)},
                 {"mesh", {{"vertices", c.cell_vertices}, {"triangles", c.cell_triangles}, {"area", num(c.cell_area)}}},
                 {"status", "ok"}};

  if (r.convergence) {
    const auto& cv = *r.convergence;
    Json entries = Json::array();
    for (const auto& e : cv.entries) {
      entries.push_back({{"epsilon", num(e.epsilon)},
                         {"e_grad", num(e.e_grad)},
                         {"e_grad_uncorrected", num(e.e_grad_uncorrected)},
                         {"e_l2", num(e.e_l2)},
                         {"energy", num(e.energy)},
                         {"energy_constant", num(e.energy_constant)},
                         {"f_norm_l2", num(e.f_norm_l2)},
                         {"cg_iterations", e.cg_iterations},
                         {"domain_vertices", e.domain_vertices}});
    }
    out["convergence"] = {{"entries", entries},
                          {"grad_fit", fit_json(cv.grad)},
                          {"l2_fit", fit_json(cv.l2)},
                          {"corrector_improves", cv.corrector_improves},
                          {"flags", cv.flags},
                          {"status", "ok"}};
  } else {
    out["convergence"] = skipped();
  }

  if (r.lipschitz) {
    const auto& l = *r.lipschitz;
    Json entries = Json::array();
    for (const auto& e : l.entries) {
      Json rp = Json::array();
      for (const auto& v : e.r_p) rp.push_back(num(v));
      entries.push_back({{"epsilon", num(e.epsilon)}, {"r_inf", num(e.r_inf)}, {"r_p", rp}});
    }
    Json rpv = Json::array();
    for (const auto& v : l.r_p_variation) rpv.push_back(num(v));
    out["lipschitz"] = {{"p_inf", num(l.p_inf)},
                        {"p_values", l.p_values},
                        {"entries", entries},
                        {"r_inf_variation", num(l.r_inf_variation)},
                        {"r_p_variation", rpv},
                        {"status", l.r_inf_variation ? "ok" : "NotApplicable"}};
  } else {
    out["lipschitz"] = skipped();
  }

  if (r.spectrum) {
    const auto& s = *r.spectrum;
    Json entries = Json::array();
    for (std::size_t i = 0; i < s.entries.size(); ++i) {
      const auto& e = s.entries[i];
      Json lam = Json::array(), res = Json::array(), resw = Json::array();
      for (double v : e.lambda_eps) lam.push_back(num(v));
      for (double v : e.residuals) res.push_back(num(v));
      for (double v : s.residuals_corrector_tensor[i]) resw.push_back(num(v));
      entries.push_back({{"epsilon", num(e.epsilon)},
                         {"lambda_eps", lam},
                         {"residuals", res},
                         {"residuals_corrector_tensor", resw}});
    }
    Json mu0 = Json::array(), mu0w = Json::array();
    for (double v : s.mu0) mu0.push_back(num(v));
    for (double v : s.mu0_corrector_tensor) mu0w.push_back(num(v));
    out["spectrum"] = {{"lambda_bar", num(s.lambda_bar)},
                       {"mu0", mu0},
                       {"mu0_corrector_tensor", mu0w},
                       {"entries", entries},
                       {"r1_fit", {{"slope", num(s.slope)}, {"intercept", num(s.intercept)}, {"residual", num(s.fit_residual)}}},
                       {"r1_strictly_decreasing", s.strictly_decreasing},
                       {"status", "ok"}};
  } else {
    out["spectrum"] = skipped();
  }

  if (r.probes) {
    const auto& p = *r.probes;
    Json entries = Json::array();
    for (const auto& e : p.entries)
      entries.push_back({{"epsilon", num(e.epsilon)}, {"poincare", num(e.poincare)}, {"sobolev", num(e.sobolev)}});
    Json ext = Json::array();
    for (std::size_t i = 0; i < p.extension.size(); ++i) {
      const auto& e = p.extension[i];
      ext.push_back({{"n", p.extension_resolutions[i]},
                     {"max_ratio", num(e.max_ratio)},
                     {"linear_ratio", num(e.linear_ratio)},
                     {"analytic_linear_ratio", num(e.analytic_linear_ratio)},
                     {"trials", e.trials}});
    }
    out["probes"] = {{"entries", entries},
                     {"extension", ext},
                     {"poincare_variation", num(p.poincare_variation)},
                     {"sobolev_variation", num(p.sobolev_variation)},
                     {"extension_variation", num(p.extension_variation)},
                     {"status", "ok"}};
  } else {
    out["probes"] = skipped();
  }
  return out;
}

std::vector<std::string> emit_plot_data(const RunReport& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot create '" + out_dir + "': " + ec.message());
  std::vector<std::string> paths;
  auto series = [&](const std::string& name, const std::vector<std::pair<double, double>>& rows) {
    std::string text = "epsilon,value\n";
    for (const auto& [x, y] : rows) text += format_value(x) + "," + format_value(y) + "\n";
    const auto path = fs::path(out_dir) / (name + ".csv");
    write_file(path, text);
    paths.push_back(path.string());
  };
  const std::string prefix = r.config.name + "_";
  if (r.convergence) {
    std::vector<std::pair<double, double>> grad, raw, l2;
    for (const auto& e : r.convergence->entries) {
      grad.emplace_back(e.epsilon, e.e_grad);
      raw.emplace_back(e.epsilon, e.e_grad_uncorrected);
      l2.emplace_back(e.epsilon, e.e_l2);
    }
    series(prefix + "converge_grad", grad);
    series(prefix + "converge_grad_uncorrected", raw);
    series(prefix + "converge_l2", l2);
  }
  if (r.lipschitz && r.lipschitz->r_inf_variation) {
    std::vector<std::pair<double, double>> rinf;
    for (const auto& e : r.lipschitz->entries) rinf.emplace_back(e.epsilon, *e.r_inf);
    series(prefix + "lipschitz_r_inf", rinf);
    for (std::size_t k = 0; k < r.lipschitz->p_values.size(); ++k) {
      if (!r.lipschitz->r_p_variation[k]) continue;
      std::vector<std::pair<double, double>> rp;
      for (const auto& e : r.lipschitz->entries) rp.emplace_back(e.epsilon, *e.r_p[k]);
      series(prefix + "lipschitz_r_p" + p_label(r.lipschitz->p_values[k]), rp);
    }
  }
  if (r.spectrum && !r.spectrum->entries.empty()) {
    const std::size_t k = r.spectrum->mu0.size();
    for (std::size_t j = 0; j < k; ++j) {
      std::vector<std::pair<double, double>> res;
      for (const auto& e : r.spectrum->entries) res.emplace_back(e.epsilon, e.residuals[j]);
      series(prefix + "spectrum_residual_" + std::to_string(j + 1), res);
    }
  }
  if (r.probes) {
    std::vector<std::pair<double, double>> cp, sob;
    for (const auto& e : r.probes->entries) {
      cp.emplace_back(e.epsilon, e.poincare);
      sob.emplace_back(e.epsilon, e.sobolev);
    }
    series(prefix + "probes_poincare", cp);
    series(prefix + "probes_sobolev", sob);
  }
  return paths;
}

std::vector<std::string> write_outputs(const RunReport& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot create '" + out_dir + "': " + ec.message());
  std::vector<std::string> paths;
  const auto report_path = fs::path(out_dir) / "report.json";
  write_file(report_path, to_json(r).dump(2) + "\n");
  paths.push_back(report_path.string());
  Json timings(r.timings);
  const auto timing_path = fs::path(out_dir) / "timings.json";
  write_file(timing_path, timings.dump(2) + "\n");
  paths.push_back(timing_path.string());
  for (auto& p : emit_plot_data(r, out_dir)) paths.push_back(std::move(p));
  return paths;
}

Json error_record(const std::exception& e) {
  Json out{{"status", "error"}, {"message", e.what()}};
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    out["kind"] = std::string(to_string(err->kind()));
    if (const auto* cfg = dynamic_cast<const ConfigValidationError*>(&e)) out["field"] = cfg->field();
    if (const auto* cg = dynamic_cast<const CGNoConvergenceError*>(&e)) {
      out["residual"] = num(cg->residual());
      out["iterations"] = cg->iterations();
    }
  } else {
    out["kind"] = "Internal";
  }
  return out;
}

}  // namespace perfhom
