#include "perfhom/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "perfhom/errors.hpp"

namespace perfhom {
namespace {

using Json = nlohmann::json;

template <typename T>
T scalar(const YAML::Node& node, const std::string& field) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigValidationError(field, "wrong value type");
  }
}

void check_keys(const YAML::Node& node, const std::string& prefix, const std::set<std::string>& allowed) {
  if (!node.IsMap()) throw ConfigValidationError(prefix.empty() ? "<root>" : prefix, "expected a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) throw ConfigValidationError(prefix.empty() ? key : prefix + "." + key, "unknown key");
  }
}

template <typename T>
void read(const YAML::Node& parent, const char* key, const std::string& prefix, T& out) {
  if (const auto node = parent[key]) out = scalar<T>(node, prefix.empty() ? key : prefix + "." + key);
}

Point read_point(const YAML::Node& node, const std::string& field) {
  if (!node.IsSequence() || node.size() != 2) throw ConfigValidationError(field, "expected [x, y]");
  return {scalar<double>(node[0], field), scalar<double>(node[1], field)};
}

const char* preset_name(SourcePreset p) {
  switch (p) {
    case SourcePreset::Zero: return "zero";
    case SourcePreset::Constant: return "constant";
    case SourcePreset::Sine: return "sine";
    case SourcePreset::Bump: return "bump";
  }
  return "zero";
}

ScalarPreset read_preset(const YAML::Node& node, const std::string& field) {
  check_keys(node, field, {"preset", "amplitude"});
  ScalarPreset p;
  const auto name = node["preset"] ? scalar<std::string>(node["preset"], field + ".preset") : "constant";
  if (name == "zero") p.kind = SourcePreset::Zero;
  else if (name == "constant") p.kind = SourcePreset::Constant;
  else if (name == "sine") p.kind = SourcePreset::Sine;
  else if (name == "bump") p.kind = SourcePreset::Bump;
  else throw ConfigValidationError(field + ".preset", "unknown preset '" + name + "'");
  read(node, "amplitude", field, p.amplitude);
  if (p.kind == SourcePreset::Zero) p.amplitude = 0.0;
  return p;
}

Json preset_json(const ScalarPreset& p) { return {{"preset", preset_name(p.kind)}, {"amplitude", p.amplitude}}; }

const std::pair<const char*, ExperimentKind> kKinds[] = {
    {"cell", ExperimentKind::CellOnly},         {"converge", ExperimentKind::Converge},
    {"lipschitz", ExperimentKind::Lipschitz},   {"spectrum", ExperimentKind::Spectrum},
    {"probes", ExperimentKind::Probes},         {"all", ExperimentKind::All}};

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& [name, k] : kKinds)
    if (k == kind) return name;
  return "cell";
}

int parse_epsilon(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    std::size_t used = 0;
    try {
      const double num = std::stod(text.substr(0, slash), &used);
      if (used != slash || num != 1.0) throw ConfigValidationError("discretization.epsilons", "'" + text + "' is not 1/N");
      const std::string den = text.substr(slash + 1);
      const int n = std::stoi(den, &used);
      if (used != den.size() || n < 1) throw ConfigValidationError("discretization.epsilons", "'" + text + "' is not 1/N");
      return n;
    } catch (const std::logic_error&) {
      throw ConfigValidationError("discretization.epsilons", "'" + text + "' is not 1/N");
    }
  }
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::logic_error&) {
    throw ConfigValidationError("discretization.epsilons", "'" + text + "' is not a number");
  }
  if (!(value > 0.0) || value > 1.0)
    throw ConfigValidationError("discretization.epsilons", "'" + text + "' is outside (0, 1]");
  const long n = std::lround(1.0 / value);
  if (std::abs(1.0 / static_cast<double>(n) - value) > 1e-12 * value)
    throw ConfigValidationError("discretization.epsilons", "'" + text + "' is not of the form 1/N");
  return static_cast<int>(n);
}

ScalarFunction make_scalar_preset(const ScalarPreset& preset, double width, double height) {
  const double a = preset.amplitude;
  switch (preset.kind) {
    case SourcePreset::Zero: return [](Point) { return 0.0; };
    case SourcePreset::Constant: return [a](Point) { return a; };
    case SourcePreset::Sine:
      return [a, width, height](Point x) {
        return a * std::sin(std::numbers::pi * x.x / width) * std::sin(std::numbers::pi * x.y / height);
      };
    case SourcePreset::Bump: {
      const Point c{0.5 * width, 0.5 * height};
      const double sigma = 0.25 * std::min(width, height);
      return [a, c, sigma](Point x) {
        const Point d = x - c;
        return a * std::exp(-dot(d, d) / (sigma * sigma));
      };
    }
  }
  return [](Point) { return 0.0; };
}

CellGeometry ExperimentConfig::cell_geometry() const {
  std::vector<HoleSpec> specs;
  for (std::size_t i = 0; i < holes.size(); ++i) {
    const auto& h = holes[i];
    if (h.shape == HoleConfig::Shape::Disk) specs.emplace_back(Disk{h.center, h.radius}, static_cast<int>(i));
    else specs.emplace_back(Polygon{h.vertices}, static_cast<int>(i));
  }
  return build_cell_geometry(std::move(specs), c0);
}

CoefficientField ExperimentConfig::coefficient_field() const {
  const Mat2 base{matrix[0], matrix[1], matrix[2]};
  if (coefficient == CoefficientPreset::Constant) return CoefficientField::constant(base);
  const double amp = amplitude;
  return CoefficientField::periodic([base, amp](Point y) {
    const double s = 1.0 + amp * std::cos(2.0 * std::numbers::pi * y.x) * std::cos(2.0 * std::numbers::pi * y.y);
    return s * base;
  });
}

SourceTerm ExperimentConfig::source() const {
  SourceTerm s;
  s.form = form;
  if (form == LoadForm::WeightedSource) {
    s.f = make_scalar_preset(f, width, height);
  } else {
    const Point v{f_vector[0], f_vector[1]};
    s.f_vector = [v](Point) { return v; };
    if (F.kind != SourcePreset::Zero) s.F = make_scalar_preset(F, width, height);
  }
  return s;
}

std::vector<double> ExperimentConfig::epsilons() const {
  std::vector<double> out;
  for (int n : eps_denominators) out.push_back(1.0 / n);
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::ConfigParseError, std::string("config is not valid YAML: ") + e.what());
  }
  if (!root || root.IsNull()) throw Error(ErrorKind::ConfigParseError, "config is empty");
  check_keys(root, "", {"name", "kind", "seed", "geometry", "weight", "coefficient", "discretization", "source",
                        "solver", "spectrum", "probes", "output"});
  ExperimentConfig c;
  read(root, "name", "", c.name);
  if (root["kind"]) {
    const auto kind = scalar<std::string>(root["kind"], "kind");
    bool found = false;
    for (const auto& [name, k] : kKinds)
      if (kind == name) c.kind = k, found = true;
    if (!found) throw ConfigValidationError("kind", "unknown experiment kind '" + kind + "'");
  }
  read(root, "seed", "", c.seed);

  if (const auto g = root["geometry"]) {
    check_keys(g, "geometry", {"width", "height", "c0", "holes"});
    read(g, "width", "geometry", c.width);
    read(g, "height", "geometry", c.height);
    read(g, "c0", "geometry", c.c0);
    if (const auto hs = g["holes"]) {
      if (!hs.IsSequence()) throw ConfigValidationError("geometry.holes", "expected a list");
      for (std::size_t i = 0; i < hs.size(); ++i) {
        const std::string field = "geometry.holes[" + std::to_string(i) + "]";
        const auto h = hs[i];
        check_keys(h, field, {"disk", "polygon"});
        HoleConfig hc;
        if (h["disk"] && !h["polygon"]) {
          check_keys(h["disk"], field + ".disk", {"center", "radius"});
          if (!h["disk"]["center"] || !h["disk"]["radius"])
            throw ConfigValidationError(field + ".disk", "needs center and radius");
          hc.center = read_point(h["disk"]["center"], field + ".disk.center");
          hc.radius = scalar<double>(h["disk"]["radius"], field + ".disk.radius");
        } else if (h["polygon"] && !h["disk"]) {
          hc.shape = HoleConfig::Shape::Polygon;
          if (!h["polygon"].IsSequence()) throw ConfigValidationError(field + ".polygon", "expected a list of points");
          for (const auto& p : h["polygon"]) hc.vertices.push_back(read_point(p, field + ".polygon"));
        } else {
          throw ConfigValidationError(field, "give exactly one of disk or polygon");
        }
        c.holes.push_back(std::move(hc));
      }
    }
  }

  if (root["weight"]) {
    const auto w = scalar<std::string>(root["weight"], "weight");
    if (w == "distance") c.weight = WeightMode::DistanceType;
    else if (w == "ground_state") c.weight = WeightMode::GroundState;
    else throw ConfigValidationError("weight", "expected distance or ground_state");
  }

  if (const auto a = root["coefficient"]) {
    check_keys(a, "coefficient", {"preset", "matrix", "amplitude"});
    if (a["preset"]) {
      const auto p = scalar<std::string>(a["preset"], "coefficient.preset");
      if (p == "constant" || p == "identity") c.coefficient = CoefficientPreset::Constant;
      else if (p == "oscillating") c.coefficient = CoefficientPreset::Oscillating;
      else throw ConfigValidationError("coefficient.preset", "unknown preset '" + p + "'");
    }
    if (const auto m = a["matrix"]) {
      if (!m.IsSequence() || m.size() != 3) throw ConfigValidationError("coefficient.matrix", "expected [a11, a12, a22]");
      for (int i = 0; i < 3; ++i) c.matrix[i] = scalar<double>(m[i], "coefficient.matrix");
    }
    read(a, "amplitude", "coefficient", c.amplitude);
  }

  if (const auto d = root["discretization"]) {
    check_keys(d, "discretization", {"n", "epsilons"});
    read(d, "n", "discretization", c.n);
    if (const auto e = d["epsilons"]) {
      if (!e.IsSequence()) throw ConfigValidationError("discretization.epsilons", "expected a list");
      c.eps_denominators.clear();
      for (const auto& v : e) c.eps_denominators.push_back(parse_epsilon(scalar<std::string>(v, "discretization.epsilons")));
    }
  }

  if (const auto s = root["source"]) {
    check_keys(s, "source", {"form", "f", "f_vector", "F"});
    if (s["form"]) {
      const auto form = scalar<std::string>(s["form"], "source.form");
      if (form == "weighted") c.form = LoadForm::WeightedSource;
      else if (form == "divergence") c.form = LoadForm::DivForm;
      else throw ConfigValidationError("source.form", "expected weighted or divergence");
    }
    if (s["f"]) c.f = read_preset(s["f"], "source.f");
    if (const auto v = s["f_vector"]) c.f_vector = {read_point(v, "source.f_vector").x, read_point(v, "source.f_vector").y};
    if (s["F"]) c.F = read_preset(s["F"], "source.F");
  }

  if (const auto s = root["solver"]) {
    check_keys(s, "solver", {"cg_tolerance", "cg_max_iterations", "eigen_tolerance", "eigen_max_iterations"});
    read(s, "cg_tolerance", "solver", c.cg_tolerance);
    read(s, "cg_max_iterations", "solver", c.cg_max_iterations);
    read(s, "eigen_tolerance", "solver", c.eigen_tolerance);
    read(s, "eigen_max_iterations", "solver", c.eigen_max_iterations);
  }
  if (const auto s = root["spectrum"]) {
    check_keys(s, "spectrum", {"k", "solid_n"});
    read(s, "k", "spectrum", c.spectrum_k);
    read(s, "solid_n", "spectrum", c.spectrum_solid_n);
  }
  if (const auto s = root["probes"]) {
    check_keys(s, "probes", {"trials", "lipschitz_p", "p_values"});
    read(s, "trials", "probes", c.probe_trials);
    read(s, "lipschitz_p", "probes", c.lipschitz_p);
    if (const auto p = s["p_values"]) {
      if (!p.IsSequence()) throw ConfigValidationError("probes.p_values", "expected a list");
      c.p_values.clear();
      for (const auto& v : p) c.p_values.push_back(scalar<double>(v, "probes.p_values"));
    }
  }
  if (const auto s = root["output"]) {
    check_keys(s, "output", {"dir", "workers"});
    read(s, "dir", "output", c.out_dir);
    read(s, "workers", "output", c.workers);
  }
  validate_config(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot read config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate_config(const ExperimentConfig& c) {
  if (c.width < 1) throw ConfigValidationError("geometry.width", "must be a positive integer");
  if (c.height < 1) throw ConfigValidationError("geometry.height", "must be a positive integer");
  if (!(c.c0 > 0.0)) throw ConfigValidationError("geometry.c0", "must be positive");
  for (std::size_t i = 0; i < c.holes.size(); ++i) {
    const auto& h = c.holes[i];
    const std::string field = "geometry.holes[" + std::to_string(i) + "]";
    if (h.shape == HoleConfig::Shape::Disk && !(h.radius > 0.0)) throw ConfigValidationError(field, "radius must be positive");
    if (h.shape == HoleConfig::Shape::Polygon && h.vertices.size() < 3)
      throw ConfigValidationError(field, "polygon needs at least three vertices");
  }
  CellGeometry cell;
  try {
    cell = c.cell_geometry();
  } catch (const Error& e) {
    throw ConfigValidationError("geometry.holes", e.what());
  }
  const Mat2 m{c.matrix[0], c.matrix[1], c.matrix[2]};
  if (!(m.a11 > 0.0) || !(m.min_eigenvalue() > 0.0)) throw ConfigValidationError("coefficient.matrix", "not positive definite");
  if (c.coefficient == CoefficientPreset::Oscillating && !(std::abs(c.amplitude) < 1.0))
    throw ConfigValidationError("coefficient.amplitude", "must lie in (-1, 1)");
  if (c.n < 2 || c.n % 2 != 0) throw ConfigValidationError("discretization.n", "must be an even integer >= 2");
  const bool converge = c.kind == ExperimentKind::Converge || c.kind == ExperimentKind::All;
  if (converge && c.n < 8) throw ConfigValidationError("discretization.n", "convergence runs need n >= 8");
  if (c.kind != ExperimentKind::CellOnly) {
    if (c.eps_denominators.empty()) throw ConfigValidationError("discretization.epsilons", "empty ladder");
    std::set<int> seen;
    for (int n : c.eps_denominators) {
      if (n < 1) throw ConfigValidationError("discretization.epsilons", "must be of the form 1/N");
      if (!seen.insert(n).second) throw ConfigValidationError("discretization.epsilons", "duplicate value");
      try {
        build_perforated_domain(cell, {c.width, c.height}, n);
      } catch (const Error& e) {
        throw ConfigValidationError("discretization.epsilons", "1/" + std::to_string(n) + ": " + e.what());
      }
    }
    if (converge && c.eps_denominators.size() < 3)
      throw ConfigValidationError("discretization.epsilons", "convergence runs need at least three values");
  }
  if (c.form == LoadForm::WeightedSource && c.F.kind != SourcePreset::Zero)
    throw ConfigValidationError("source.F", "only the divergence form takes F");
  if (!(c.cg_tolerance > 0.0)) throw ConfigValidationError("solver.cg_tolerance", "must be positive");
  if (c.cg_max_iterations < 0) throw ConfigValidationError("solver.cg_max_iterations", "must be >= 0");
  if (!(c.eigen_tolerance > 0.0)) throw ConfigValidationError("solver.eigen_tolerance", "must be positive");
  if (c.eigen_max_iterations < 1) throw ConfigValidationError("solver.eigen_max_iterations", "must be >= 1");
  if (c.spectrum_k < 1) throw ConfigValidationError("spectrum.k", "must be >= 1");
  if (c.spectrum_solid_n < 2 || c.spectrum_solid_n % 2 != 0)
    throw ConfigValidationError("spectrum.solid_n", "must be an even integer >= 2");
  if (c.probe_trials < 1) throw ConfigValidationError("probes.trials", "must be >= 1");
  if (!(c.lipschitz_p > 2.0)) throw ConfigValidationError("probes.lipschitz_p", "must exceed the dimension 2");
  if (c.p_values.empty()) throw ConfigValidationError("probes.p_values", "empty list");
  for (double p : c.p_values)
    if (!(p >= 1.0) || std::isinf(p)) throw ConfigValidationError("probes.p_values", "values must be finite and >= 1");
  if (c.workers < 1) throw ConfigValidationError("output.workers", "must be >= 1");
}

nlohmann::json to_json(const ExperimentConfig& c) {
  Json holes = Json::array();
  for (const auto& h : c.holes) {
    if (h.shape == HoleConfig::Shape::Disk) {
      holes.push_back({{"disk", {{"center", {h.center.x, h.center.y}}, {"radius", h.radius}}}});
    } else {
      Json pts = Json::array();
      for (const auto& p : h.vertices) pts.push_back({p.x, p.y});
      holes.push_back({{"polygon", pts}});
    }
  }
  Json eps = Json::array();
  for (int n : c.eps_denominators) eps.push_back("1/" + std::to_string(n));
  Json out;
  out["name"] = c.name;
  out["kind"] = to_string(c.kind);
  out["seed"] = c.seed;
  out["geometry"] = {{"width", c.width}, {"height", c.height}, {"c0", c.c0}, {"holes", holes}};
  out["weight"] = c.weight == WeightMode::DistanceType ? "distance" : "ground_state";
  out["coefficient"] = {{"preset", c.coefficient == CoefficientPreset::Constant ? "constant" : "oscillating"},
                        {"matrix", c.matrix},
                        {"amplitude", c.amplitude}};
  out["discretization"] = {{"n", c.n}, {"epsilons", eps}};
  out["source"] = {{"form", c.form == LoadForm::WeightedSource ? "weighted" : "divergence"},
                   {"f", preset_json(c.f)},
                   {"f_vector", c.f_vector},
                   {"F", preset_json(c.F)}};
  out["solver"] = {{"cg_tolerance", c.cg_tolerance},
                   {"cg_max_iterations", c.cg_max_iterations},
                   {"eigen_tolerance", c.eigen_tolerance},
                   {"eigen_max_iterations", c.eigen_max_iterations}};
  out["spectrum"] = {{"k", c.spectrum_k}, {"solid_n", c.spectrum_solid_n}};
  out["probes"] = {{"trials", c.probe_trials}, {"lipschitz_p", c.lipschitz_p}, {"p_values", c.p_values}};
  return out;
}

}  // namespace perfhom
