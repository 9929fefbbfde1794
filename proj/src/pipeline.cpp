//
// Copyright 2026 The gdpcurve Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "pipeline.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "gdpcurve/baseline_pointwise.hpp"
#include "gdpcurve/evaluation.hpp"
#include "gdpcurve/gdp_mechanism.hpp"
#include "gdpcurve/rkhs_mean.hpp"
#include "gdpcurve/surface.hpp"
#include "io.hpp"

namespace gdpcurve {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr std::uint64_t kTagSanitize = 0x53414eULL;
constexpr std::uint64_t kTagBaseline = 0x424153ULL;
constexpr std::uint64_t kTagVerify = 0x564552ULL;
constexpr std::uint64_t kTagVerifyCurve = 0x435256ULL;

std::string basename_of(const std::string& path) {
  return fs::path(path).filename().string();
}

std::string stem_of(const std::string& path) { return fs::path(path).stem().string(); }

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end == value.c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError("config key '" + key + "': malformed number '" + value + "'");
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (value.empty() || end == value.c_str() || *end != '\0' || errno == ERANGE) {
    throw ConfigError("config key '" + key + "': malformed integer '" + value + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(value.c_str(), &end, 10);
  if (value.empty() || end == value.c_str() || *end != '\0' || errno == ERANGE ||
      value.front() == '-') {
    throw ConfigError("config key '" + key + "': malformed unsigned integer '" + value + "'");
  }
  return v;
}

const char* to_string(SensitivityMode mode) {
  return mode == SensitivityMode::kDataDriven ? "data-driven" : "supplied";
}

}  // namespace

PipelineConfig parse_config(const std::string& text) {
  PipelineConfig config;
  std::map<std::string, bool> seen;
  std::istringstream stream(text);
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped.front() == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_number) +
                        ": expected 'key = value', got '" + stripped + "'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (seen[key]) {
      throw ConfigError("config line " + std::to_string(line_number) + ": repeated key '" +
                        key + "'");
    }
    seen[key] = true;
    if (key == "m") config.m = parse_int(key, value);
    else if (key == "J") config.J = parse_int(key, value);
    else if (key == "rho") config.rho = parse_double(key, value);
    else if (key == "alpha") config.alpha = parse_double(key, value);
    else if (key == "phi_x") config.phi_x = parse_double(key, value);
    else if (key == "phi_y") config.phi_y = parse_double(key, value);
    else if (key == "phi_z") config.phi_z = parse_double(key, value);
    else if (key == "mu_x") config.mu_x = parse_double(key, value);
    else if (key == "mu_y") config.mu_y = parse_double(key, value);
    else if (key == "mu_z") config.mu_z = parse_double(key, value);
    else if (key == "sensitivity") {
      if (value == "data-driven") config.sensitivity = SensitivityMode::kDataDriven;
      else if (value == "supplied") config.sensitivity = SensitivityMode::kSupplied;
      else throw ConfigError("config key 'sensitivity': expected data-driven or supplied, got '" + value + "'");
    }
    else if (key == "tau_x") config.tau_x = parse_double(key, value);
    else if (key == "tau_y") config.tau_y = parse_double(key, value);
    else if (key == "tau_z") config.tau_z = parse_double(key, value);
    else if (key == "baseline_mu_total") config.baseline_mu_total = parse_double(key, value);
    else if (key == "n_surfaces") config.n_surfaces = parse_int(key, value);
    else if (key == "n_r") config.n_r = parse_int(key, value);
    else if (key == "perturbation") config.perturbation = parse_double(key, value);
    else if (key == "scale_jitter") config.scale_jitter = parse_double(key, value);
    else if (key == "rotation_jitter") config.rotation_jitter = parse_double(key, value);
    else if (key == "verify_samples") config.verify_samples = parse_uint(key, value);
    else if (key == "seed") config.seed = parse_uint(key, value);
    else if (key == "threads") config.threads = static_cast<int>(parse_int(key, value));
    else if (key == "input_dir") config.input_dir = value;
    else if (key == "output_dir") config.output_dir = value;
    else if (key == "reference_cloud") config.reference_cloud = value;
    else if (key == "estimate_cloud") config.estimate_cloud = value;
    else throw ConfigError("config line " + std::to_string(line_number) + ": unknown key '" + key + "'");
  }
  return config;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream stream(path);
  if (!stream) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << stream.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const PipelineConfig& c) {
  std::string out;
  auto put = [&out](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  put("m", std::to_string(c.m));
  put("J", std::to_string(c.J));
  put("rho", format_double(c.rho));
  put("alpha", format_double(c.alpha));
  put("phi_x", format_double(c.phi_x));
  put("phi_y", format_double(c.phi_y));
  put("phi_z", format_double(c.phi_z));
  put("mu_x", format_double(c.mu_x));
  put("mu_y", format_double(c.mu_y));
  put("mu_z", format_double(c.mu_z));
  put("sensitivity", to_string(c.sensitivity));
  put("tau_x", format_double(c.tau_x));
  put("tau_y", format_double(c.tau_y));
  put("tau_z", format_double(c.tau_z));
  put("baseline_mu_total", format_double(c.baseline_mu_total));
  put("n_surfaces", std::to_string(c.n_surfaces));
  put("n_r", std::to_string(c.n_r));
  put("perturbation", format_double(c.perturbation));
  put("scale_jitter", format_double(c.scale_jitter));
  put("rotation_jitter", format_double(c.rotation_jitter));
  put("verify_samples", std::to_string(c.verify_samples));
  put("seed", std::to_string(c.seed));
  put("threads", std::to_string(c.threads));
  put("input_dir", c.input_dir);
  put("output_dir", c.output_dir);
  put("reference_cloud", c.reference_cloud);
  put("estimate_cloud", c.estimate_cloud);
  return out;
}

void validate_config(const PipelineConfig& c) {
  auto fail = [](const std::string& message) { throw ConfigError("config: " + message); };
  if (c.m < 3) fail("m must be at least 3");
  if (c.J < 1) fail("J must be positive");
  if (!(c.rho > 0)) fail("rho must be positive");
  if (!(c.alpha > 0) || !(c.alpha <= 1)) fail("alpha must lie in (0, 1]");
  if (!(c.phi_x > 0) || !(c.phi_y > 0) || !(c.phi_z > 0)) fail("phi must be positive");
  if (!(c.mu_x > 0) || !(c.mu_y > 0) || !(c.mu_z > 0)) fail("mu must be positive");
  if (c.sensitivity == SensitivityMode::kSupplied &&
      (!(c.tau_x >= 0) || !(c.tau_y >= 0) || !(c.tau_z >= 0))) {
    fail("supplied tau must be nonnegative");
  }
  if (!(c.baseline_mu_total >= 0)) fail("baseline_mu_total must be nonnegative");
  if (c.n_surfaces < 1) fail("n_surfaces must be positive");
  if (c.n_r < 2) fail("n_r must be at least 2");
  if (c.J > c.n_r) fail("J cannot exceed n_r");
  if (!(c.perturbation >= 0) || !(c.scale_jitter >= 0) || !(c.rotation_jitter >= 0)) {
    fail("jitter amplitudes must be nonnegative");
  }
  if (c.verify_samples < 10000) fail("verify_samples must be at least 10000");
  if (c.threads < 1) fail("threads must be positive");
}

namespace {

// ---------------------------------------------------------------------------
// Stage plumbing
// ---------------------------------------------------------------------------

std::string require_output_dir(const PipelineConfig& config) {
  if (config.output_dir.empty()) throw ConfigError("config: output_dir is required");
  fs::create_directories(config.output_dir);
  return config.output_dir;
}

std::string resolve_input(const PipelineConfig& config, const std::string& fallback) {
  if (!config.input_dir.empty()) return config.input_dir;
  if (config.output_dir.empty()) {
    throw ConfigError("config: input_dir (or output_dir for stage defaults) is required");
  }
  return join(config.output_dir, fallback);
}

json parameters_json(const PipelineConfig& c) {
  // Deliberately excludes threads and paths: reports must not change with
  // execution details.
  json p;
  p["m"] = c.m;
  p["J"] = c.J;
  p["rho"] = c.rho;
  p["alpha"] = c.alpha;
  p["phi"] = {c.phi_x, c.phi_y, c.phi_z};
  p["mu"] = {c.mu_x, c.mu_y, c.mu_z};
  p["sensitivity"] = to_string(c.sensitivity);
  p["seed"] = std::to_string(c.seed);
  return p;
}

void write_report(const PipelineConfig& config, const std::string& name, const json& report) {
  write_text_file(join(require_output_dir(config), name), report.dump(2) + "\n");
}

std::vector<RadialCurveSet<double>> read_curve_sets(const std::string& dir) {
  if (!fs::is_directory(dir)) throw DataError("curve directory not found: " + dir);
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("curves_", 0) == 0 && name.size() > 4 &&
        name.substr(name.size() - 4) == ".csv") {
      names.push_back(entry.path().string());
    }
  }
  if (names.empty()) throw DataError("curve directory holds no curves_*.csv files: " + dir);
  std::sort(names.begin(), names.end());
  std::vector<RadialCurveSet<double>> sets;
  sets.reserve(names.size());
  for (const std::string& name : names) sets.push_back(read_curve_set_csv(name));
  for (std::size_t i = 1; i < sets.size(); ++i) {
    if (sets[i].J != sets[0].J || sets[i].grid.m != sets[0].grid.m) {
      throw DataError("curve sets disagree on (J, m): " + names[i]);
    }
    if ((sets[i].radii_selected - sets[0].radii_selected).cwiseAbs().maxCoeff() > 1e-9) {
      throw DataError("curve sets disagree on selected radii: " + names[i]);
    }
  }
  return sets;
}

const MatrixX<double>& coordinate_field(const RadialCurveSet<double>& set, int w) {
  return w == 0 ? set.x : w == 1 ? set.y : set.z;
}

MatrixX<double>& coordinate_field(RadialCurveSet<double>& set, int w) {
  return w == 0 ? set.x : w == 1 ? set.y : set.z;
}

}  // namespace

// ---------------------------------------------------------------------------
// Stages
// ---------------------------------------------------------------------------

json run_generate(const PipelineConfig& config) {
  validate_config(config);
  const std::string out = require_output_dir(config);
  SyntheticConfig<double> synth;
  synth.n_surfaces = config.n_surfaces;
  synth.n_r = config.n_r;
  synth.m = config.m;
  synth.perturbation = config.perturbation;
  synth.scale_jitter = config.scale_jitter;
  synth.rotation_jitter = config.rotation_jitter;
  const std::vector<DiskSurface<double>> faces = generate_synthetic_dataset(synth, config.seed);
  const std::string dataset_dir = join(out, "dataset");
  write_dataset(dataset_dir, faces);
  json report;
  report["stage"] = "generate";
  report["parameters"] = parameters_json(config);
  report["n_surfaces"] = config.n_surfaces;
  report["n_r"] = config.n_r;
  report["perturbation"] = config.perturbation;
  report["scale_jitter"] = config.scale_jitter;
  report["rotation_jitter"] = config.rotation_jitter;
  report["dataset"] = "dataset";
  write_report(config, "generate_report.json", report);
  return report;
}

json run_preprocess(const PipelineConfig& config) {
  validate_config(config);
  const std::string out = require_output_dir(config);
  const std::string input = resolve_input(config, "dataset");
  const std::vector<DiskSurface<double>> raw = read_dataset(input);
  std::vector<DiskSurface<double>> processed(raw.size());
  // The first face (after normalization) serves as the alignment template.
  processed[0] = normalize(raw[0]);
  const PointCloud<double> reference = surface_to_point_cloud(processed[0]);
  std::vector<double> objectives(raw.size(), 0.0);
  parallel_for(raw.size(), config.threads, [&](std::size_t i) {
    if (i == 0) return;
    const DiskSurface<double> unit = normalize(raw[i]);
    const ProcrustesResult<double> aligned =
        procrustes_align(surface_to_point_cloud(unit), reference);
    processed[i] = rotated(unit, aligned.rotation);
    objectives[i] = (aligned.aligned.points - reference.points).squaredNorm();
  });
  const std::string out_dir = join(out, "preprocessed");
  write_dataset(out_dir, processed);
  json report;
  report["stage"] = "preprocess";
  report["parameters"] = parameters_json(config);
  report["n_surfaces"] = processed.size();
  report["template"] = "surface_0000.csv";
  report["alignment_objectives"] = objectives;
  report["output"] = "preprocessed";
  write_report(config, "preprocess_report.json", report);
  return report;
}

json run_extract(const PipelineConfig& config) {
  validate_config(config);
  const std::string out = require_output_dir(config);
  const std::string input = resolve_input(config, "preprocessed");
  const std::vector<DiskSurface<double>> surfaces = read_dataset(input);
  const std::string curves_dir = join(out, "curves");
  fs::create_directories(curves_dir);
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    const RadialCurveSet<double> set = extract_radial_curves(surfaces[i], config.J);
    char name[32];
    std::snprintf(name, sizeof name, "curves_%04zu.csv", i);
    write_curve_set_csv(join(curves_dir, name), set);
  }
  json report;
  report["stage"] = "extract";
  report["parameters"] = parameters_json(config);
  report["n_surfaces"] = surfaces.size();
  report["J"] = config.J;
  report["output"] = "curves";
  write_report(config, "extract_report.json", report);
  return report;
}

json run_sanitize(const PipelineConfig& config) {
  validate_config(config);
  const std::string out = require_output_dir(config);
  const std::string input = resolve_input(config, "curves");
  const std::vector<RadialCurveSet<double>> sets = read_curve_sets(input);
  const Eigen::Index n = static_cast<Eigen::Index>(sets.size());
  const Eigen::Index J = sets[0].J;
  if (J != config.J) {
    throw DataError("curve sets carry J=" + std::to_string(J) + " but config expects J=" +
                    std::to_string(config.J));
  }
  const CircleGrid<double> grid = sets[0].grid;
  PeriodicKernelParams<double> kernel_params{config.rho, config.alpha};
  const KernelEigenbasis<double> basis = build_eigenbasis(grid, kernel_params);
  const PrivacyBudget<double> budget =
      make_privacy_budget(config.mu_x, config.mu_y, config.mu_z, J);

  const double phis[3] = {config.phi_x, config.phi_y, config.phi_z};
  const double mus[3] = {config.mu_x, config.mu_y, config.mu_z};
  const double taus_supplied[3] = {config.tau_x, config.tau_y, config.tau_z};
  const char* coords = "xyz";

  RadialCurveSet<double> mean_set = sets[0];
  RadialCurveSet<double> private_set = sets[0];
  struct Release {
    Eigen::Index j;
    int w;
    double tau, delta, sigma, mu, phi;
    std::uint64_t seed;
  };
  std::vector<Release> releases(static_cast<std::size_t>(J) * 3);

  parallel_for(static_cast<std::size_t>(J) * 3, config.threads, [&](std::size_t task) {
    const Eigen::Index j = static_cast<Eigen::Index>(task / 3);
    const int w = static_cast<int>(task % 3);
    CurveSample<double> sample;
    sample.grid = grid;
    sample.curves.resize(grid.m, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      sample.curves.col(i) =
          coordinate_field(sets[static_cast<std::size_t>(i)], w).row(j).transpose();
    }
    const double tau = config.sensitivity == SensitivityMode::kDataDriven
                           ? tau_from_sample(sample)
                           : taus_supplied[w];
    const double delta = sensitivity_bound(tau, n, phis[w]);
    const GdpParams<double> params = calibrate_sigma(delta, mus[w]);
    const RkhsMean<double> mean = rkhs_mean(sample, basis, phis[w]);
    const std::uint64_t release_seed =
        derive_seed(config.seed, kTagSanitize, static_cast<std::uint64_t>(j),
                    static_cast<std::uint64_t>(w));
    const SanitizedCurve<double> sanitized = sanitize(mean, basis, params, release_seed);
    coordinate_field(mean_set, w).row(j) = mean.values.transpose();
    coordinate_field(private_set, w).row(j) = sanitized.values.transpose();
    releases[task] = {j, w, tau, delta, params.sigma, mus[w], phis[w], release_seed};
  });

  write_curve_set_csv(join(out, "mean_curves.csv"), mean_set);
  write_curve_set_csv(join(out, "private_curves.csv"), private_set);
  write_curves_obj(join(out, "private_curves.obj"), private_set);
  write_point_cloud_csv(join(out, "mean_cloud.csv"), curves_to_point_cloud(mean_set));
  write_point_cloud_csv(join(out, "private_cloud.csv"), curves_to_point_cloud(private_set));

  json report;
  report["stage"] = "sanitize";
  report["parameters"] = parameters_json(config);
  report["n_surfaces"] = n;
  report["mu_total"] = budget.mu_total;
  double sum_sq = 0.0;
  json list = json::array();
  for (const Release& r : releases) {
    json entry;
    entry["curve_index"] = r.j;
    entry["coordinate"] = std::string(1, coords[r.w]);
    entry["mu"] = r.mu;
    entry["phi"] = r.phi;
    entry["tau"] = r.tau;
    entry["delta_bound"] = r.delta;
    entry["sigma"] = r.sigma;
    entry["seed"] = std::to_string(r.seed);
    entry["sensitivity_provenance"] = to_string(config.sensitivity);
    list.push_back(entry);
    sum_sq += r.mu * r.mu;
  }
  report["budget_sum_of_squares"] = sum_sq;
  report["releases"] = list;
  report["artifacts"] = {"mean_curves.csv", "private_curves.csv", "private_curves.obj",
                         "mean_cloud.csv", "private_cloud.csv"};
  write_report(config, "release_report.json", report);
  return report;
}

json run_baseline(const PipelineConfig& config) {
  validate_config(config);
  const std::string out = require_output_dir(config);
  const std::string input = resolve_input(config, "dataset");
  const std::vector<DiskSurface<double>> surfaces = read_dataset(input);
  std::vector<PointCloud<double>> clouds;
  clouds.reserve(surfaces.size());
  for (const DiskSurface<double>& s : surfaces) clouds.push_back(surface_to_point_cloud(s));

  const PointCloud<double> mean = pointwise_mean(clouds);
  const PointwiseSensitivity<double> sens = pointwise_sensitivity(clouds);
  const PrivacyBudget<double> budget =
      make_privacy_budget(config.mu_x, config.mu_y, config.mu_z, config.J);
  const double mu_total =
      config.baseline_mu_total > 0 ? config.baseline_mu_total : budget.mu_total;
  const double mu_p = split_budget(mu_total, mean.size());
  const PointCloud<double> noisy = pointwise_sanitize(
      mean, sens, mu_p, derive_seed(config.seed, kTagBaseline), config.threads);

  write_point_cloud_csv(join(out, "baseline_mean_cloud.csv"), mean);
  write_point_cloud_csv(join(out, "baseline_private_cloud.csv"), noisy);

  json report;
  report["stage"] = "baseline";
  report["parameters"] = parameters_json(config);
  report["n_surfaces"] = surfaces.size();
  report["points"] = mean.size();
  report["mu_total"] = mu_total;
  report["mu_p"] = mu_p;
  report["budget_sum_of_squares"] = mu_p * mu_p * 3.0 * static_cast<double>(mean.size());
  report["max_delta"] = sens.deltas.maxCoeff();
  report["sensitivity_provenance"] = "data-driven";
  report["seed"] = std::to_string(derive_seed(config.seed, kTagBaseline));
  report["artifacts"] = {"baseline_mean_cloud.csv", "baseline_private_cloud.csv"};
  write_report(config, "baseline_report.json", report);
  return report;
}

json run_evaluate(const PipelineConfig& config) {
  validate_config(config);
  if (config.reference_cloud.empty() || config.estimate_cloud.empty()) {
    throw ConfigError("config: evaluate needs reference_cloud and estimate_cloud");
  }
  const PointCloud<double> reference = read_point_cloud_csv(config.reference_cloud);
  const PointCloud<double> estimate = read_point_cloud_csv(config.estimate_cloud);

  json metrics = json::array();
  if (reference.size() == estimate.size()) {
    json entry;
    entry["metric"] = "mse_pointwise";
    entry["value"] = mse_pointwise(reference, estimate);
    metrics.push_back(entry);
  }
  {
    json entry;
    entry["metric"] = "mse_nearest";
    entry["value"] = mse_nearest(reference, estimate);
    metrics.push_back(entry);
  }
  {
    const AlignScaleResult<double> aligned = align_scale(reference, estimate);
    json entry;
    entry["metric"] = "mse_nearest_aligned";
    entry["value"] = aligned.objective;
    entry["scale_a"] = aligned.scale;
    entry["iterations"] = aligned.iterations;
    metrics.push_back(entry);
  }
  json report;
  report["stage"] = "evaluate";
  report["reference_id"] = basename_of(config.reference_cloud);
  report["estimate_id"] = basename_of(config.estimate_cloud);
  report["metrics"] = metrics;
  write_report(config, "evaluation_" + stem_of(config.estimate_cloud) + ".json", report);
  return report;
}

json run_verify(const PipelineConfig& config) {
  validate_config(config);
  const CircleGrid<double> grid = make_circle_grid<double>(config.m);
  PeriodicKernelParams<double> kernel_params{config.rho, config.alpha};
  const KernelEigenbasis<double> basis = build_eigenbasis(grid, kernel_params);

  // Synthetic adjacent pair: n smooth curves with ambient norm <= tau; D'
  // replaces the first one.
  const double tau = config.sensitivity == SensitivityMode::kSupplied ? config.tau_x : 1.0;
  const Eigen::Index n = config.n_surfaces;
  auto draw_curve = [&](std::uint64_t index) {
    Rng rng(derive_seed(config.seed, kTagVerifyCurve, index));
    VectorX<double> scaled(basis.modes());
    for (Eigen::Index j = 0; j < basis.modes(); ++j) {
      scaled[j] = std::sqrt(basis.eigenvalues[j]) * rng.normal();
    }
    VectorX<double> curve = basis.eigenvectors * scaled;
    const double target = tau * (0.5 + 0.5 * rng.uniform());
    const double norm = ambient_norm(curve, grid);
    if (norm > 0) curve *= target / norm;
    return curve;
  };
  CurveSample<double> d;
  d.grid = grid;
  d.curves.resize(config.m, n);
  for (Eigen::Index i = 0; i < n; ++i) d.curves.col(i) = draw_curve(static_cast<std::uint64_t>(i));
  CurveSample<double> dprime = d;
  dprime.curves.col(0) = draw_curve(static_cast<std::uint64_t>(n));

  const double phi = config.phi_x;
  const double mu = config.mu_x;
  const RkhsMean<double> mean_d = rkhs_mean(d, basis, phi);
  const RkhsMean<double> mean_dp = rkhs_mean(dprime, basis, phi);
  const double delta_bound = sensitivity_bound(tau, n, phi);
  const GdpParams<double> params = calibrate_sigma(delta_bound, mu);
  const PrivacyLossReport<double> mc = verify_privacy_loss(
      mean_d, mean_dp, basis, params, static_cast<std::size_t>(config.verify_samples),
      derive_seed(config.seed, kTagVerify), config.threads);

  const double inv_n = 1.0 / static_cast<double>(mc.n_samples);
  const double mean_tol = 4.0 * mc.delta_realized * std::sqrt(inv_n);
  const double var_tol =
      5.0 * mc.delta_realized * mc.delta_realized * std::sqrt(2.0 * inv_n);
  const bool normality_ok = std::abs(mc.stat_mean) <= mean_tol &&
                            std::abs(mc.stat_variance - mc.delta_realized * mc.delta_realized) <=
                                var_tol;
  bool tails_ok = true;
  for (Eigen::Index e = 0; e < mc.epsilons.size(); ++e) {
    const double se = std::sqrt(std::max(mc.tail_expected[e] * (1 - mc.tail_expected[e]), 0.0) * inv_n);
    if (std::abs(mc.tail_empirical[e] - mc.tail_expected[e]) > 4.0 * se + 1e-9) tails_ok = false;
  }
  bool tradeoff_ok = true;
  for (Eigen::Index a = 0; a < mc.alphas.size(); ++a) {
    const double se = std::sqrt(std::max(mc.beta_expected[a] * (1 - mc.beta_expected[a]), 0.0) * inv_n);
    if (mc.beta_empirical[a] < mc.beta_expected[a] - 4.0 * se - 1e-9) tradeoff_ok = false;
  }
  const bool bound_ok = mc.delta_realized <= delta_bound * (1.0 + 1e-12);

  json report;
  report["stage"] = "verify";
  report["parameters"] = parameters_json(config);
  report["n_curves"] = n;
  report["tau"] = tau;
  report["phi"] = phi;
  report["mu"] = mu;
  report["sigma"] = params.sigma;
  report["n_samples"] = mc.n_samples;
  report["delta_bound"] = delta_bound;
  report["delta_realized"] = mc.delta_realized;
  report["mu_realized"] = mc.mu_realized;
  report["sensitivity_bound_ok"] = bound_ok;
  report["stat_mean"] = mc.stat_mean;
  report["stat_variance"] = mc.stat_variance;
  report["stat_variance_target"] = mc.delta_realized * mc.delta_realized;
  report["normality_ok"] = normality_ok;
  report["epsilons"] = std::vector<double>(mc.epsilons.begin(), mc.epsilons.end());
  report["tail_empirical"] = std::vector<double>(mc.tail_empirical.begin(), mc.tail_empirical.end());
  report["tail_expected"] = std::vector<double>(mc.tail_expected.begin(), mc.tail_expected.end());
  report["tails_ok"] = tails_ok;
  report["alphas"] = std::vector<double>(mc.alphas.begin(), mc.alphas.end());
  report["beta_empirical"] = std::vector<double>(mc.beta_empirical.begin(), mc.beta_empirical.end());
  report["beta_expected"] = std::vector<double>(mc.beta_expected.begin(), mc.beta_expected.end());
  report["tradeoff_ok"] = tradeoff_ok;
  report["passed"] = bound_ok && normality_ok && tails_ok && tradeoff_ok;
  write_report(config, "verification_report.json", report);
  return report;
}

json run_demo(const PipelineConfig& config) {
  validate_config(config);
  const std::string out = require_output_dir(config);
  PipelineConfig stage = config;
  stage.input_dir.clear();

  run_generate(stage);
  run_preprocess(stage);
  run_extract(stage);
  const json sanitize_report = run_sanitize(stage);
  const json baseline_report = run_baseline(stage);

  PipelineConfig eval = stage;
  eval.reference_cloud = join(out, "baseline_mean_cloud.csv");
  eval.estimate_cloud = join(out, "private_cloud.csv");
  const json eval_functional = run_evaluate(eval);
  eval.estimate_cloud = join(out, "baseline_private_cloud.csv");
  const json eval_baseline = run_evaluate(eval);
  const json verify_report = run_verify(stage);

  json summary;
  summary["stage"] = "demo";
  summary["parameters"] = parameters_json(config);
  summary["mu_total"] = sanitize_report["mu_total"];
  summary["baseline_mu_p"] = baseline_report["mu_p"];
  summary["functional_evaluation"] = eval_functional;
  summary["baseline_evaluation"] = eval_baseline;
  summary["verify_passed"] = verify_report["passed"];
  summary["artifacts"] = {"dataset",
                          "preprocessed",
                          "curves",
                          "mean_curves.csv",
                          "private_curves.csv",
                          "private_curves.obj",
                          "mean_cloud.csv",
                          "private_cloud.csv",
                          "baseline_mean_cloud.csv",
                          "baseline_private_cloud.csv",
                          "release_report.json",
                          "baseline_report.json",
                          "verification_report.json"};
  write_report(config, "demo_summary.json", summary);
  return summary;
}

}  // namespace gdpcurve
