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

#ifndef GDPCURVE_PIPELINE_HPP
#define GDPCURVE_PIPELINE_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

#include "gdpcurve/common.hpp"

// End-to-end experiment pipeline on file-based datasets:
//
//   generate -> preprocess -> extract -> sanitize -> baseline -> evaluate
//                                                            -> verify
//
// Every stage is a pure function of (files, config); all randomness flows
// from config.seed through per-task subseeds, so artifacts are byte-identical
// across runs and across thread counts. Reports embed only file basenames
// and never timestamps, keeping them byte-stable too.

namespace gdpcurve {

enum class SensitivityMode { kDataDriven, kSupplied };

struct PipelineConfig {
  // grid, kernel, smoothing, budgets (defaults follow the experiment setup)
  Eigen::Index m = 80;
  Eigen::Index J = 23;
  double rho = 1.0;
  double alpha = 1.0;
  double phi_x = 0.01;
  double phi_y = 0.01;
  double phi_z = 0.005;
  double mu_x = 0.2;
  double mu_y = 0.2;
  double mu_z = 0.55;
  // sensitivity bookkeeping
  SensitivityMode sensitivity = SensitivityMode::kDataDriven;
  double tau_x = 1.0;  // used only in supplied mode
  double tau_y = 1.0;
  double tau_z = 1.0;
  double baseline_mu_total = 0.0;  // 0 = match the functional budget mu_T
  // synthetic generator
  Eigen::Index n_surfaces = 50;
  Eigen::Index n_r = 40;
  double perturbation = 0.05;
  double scale_jitter = 0.05;
  double rotation_jitter = 0.0;
  // Monte-Carlo verifier
  std::uint64_t verify_samples = 100000;
  // execution
  std::uint64_t seed = 1;
  int threads = 1;
  // paths; stages default their input to the previous stage's output inside
  // output_dir when input_dir is empty
  std::string input_dir;
  std::string output_dir;
  std::string reference_cloud;
  std::string estimate_cloud;

  bool operator==(const PipelineConfig&) const = default;
};

// Flat "key = value" text; '#' lines are comments; unknown or repeated keys
// are errors.
PipelineConfig parse_config(const std::string& text);
PipelineConfig load_config(const std::string& path);
std::string serialize_config(const PipelineConfig& config);
void validate_config(const PipelineConfig& config);

nlohmann::ordered_json run_generate(const PipelineConfig& config);
nlohmann::ordered_json run_preprocess(const PipelineConfig& config);
nlohmann::ordered_json run_extract(const PipelineConfig& config);
nlohmann::ordered_json run_sanitize(const PipelineConfig& config);
nlohmann::ordered_json run_baseline(const PipelineConfig& config);
nlohmann::ordered_json run_evaluate(const PipelineConfig& config);
nlohmann::ordered_json run_verify(const PipelineConfig& config);
nlohmann::ordered_json run_demo(const PipelineConfig& config);

}  // namespace gdpcurve

#endif  // GDPCURVE_PIPELINE_HPP
