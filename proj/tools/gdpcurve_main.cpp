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

#include <cstdio>
#include <exception>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "../src/pipeline.hpp"

// Exit codes: 0 success, 2 config error, 3 data error, 4 numerical failure.

namespace {

using gdpcurve::PipelineConfig;

struct CliState {
  CLI::App app{"Differentially private mean release for disk-parameterized surfaces"};
  PipelineConfig parsed;  // flag values land here
  std::string config_path;
  std::string sensitivity;
  std::vector<std::function<void(PipelineConfig&)>> overrides;

  template <typename T>
  void option(const std::string& name, T PipelineConfig::*field, const std::string& desc) {
    CLI::Option* opt = app.add_option(name, parsed.*field, desc);
    overrides.push_back([this, opt, field](PipelineConfig& config) {
      if (opt->count() > 0) config.*field = parsed.*field;
    });
  }
};

PipelineConfig assemble_config(CliState& state) {
  PipelineConfig config;
  if (!state.config_path.empty()) config = gdpcurve::load_config(state.config_path);
  for (const auto& apply : state.overrides) apply(config);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CliState state;
  CLI::App& app = state.app;
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--config", state.config_path, "config file (flat key = value lines)");
  state.option("--m", &PipelineConfig::m, "angle grid size");
  state.option("--J", &PipelineConfig::J, "number of radial curves");
  state.option("--rho", &PipelineConfig::rho, "kernel range");
  state.option("--alpha", &PipelineConfig::alpha, "kernel smoothness in (0,1]");
  state.option("--phi-x", &PipelineConfig::phi_x, "smoothing penalty, x coordinate");
  state.option("--phi-y", &PipelineConfig::phi_y, "smoothing penalty, y coordinate");
  state.option("--phi-z", &PipelineConfig::phi_z, "smoothing penalty, z coordinate");
  state.option("--mu-x", &PipelineConfig::mu_x, "GDP budget, x coordinate");
  state.option("--mu-y", &PipelineConfig::mu_y, "GDP budget, y coordinate");
  state.option("--mu-z", &PipelineConfig::mu_z, "GDP budget, z coordinate");
  state.option("--tau-x", &PipelineConfig::tau_x, "supplied norm bound, x coordinate");
  state.option("--tau-y", &PipelineConfig::tau_y, "supplied norm bound, y coordinate");
  state.option("--tau-z", &PipelineConfig::tau_z, "supplied norm bound, z coordinate");
  state.option("--baseline-mu-total", &PipelineConfig::baseline_mu_total,
               "baseline total budget (0 = match functional mu_T)");
  state.option("--n-surfaces", &PipelineConfig::n_surfaces, "synthetic dataset size");
  state.option("--n-r", &PipelineConfig::n_r, "radial grid size");
  state.option("--perturbation", &PipelineConfig::perturbation, "synthetic bump amplitude");
  state.option("--scale-jitter", &PipelineConfig::scale_jitter, "synthetic scale spread");
  state.option("--rotation-jitter", &PipelineConfig::rotation_jitter, "synthetic pose spread");
  state.option("--verify-samples", &PipelineConfig::verify_samples, "Monte-Carlo sample count");
  state.option("--seed", &PipelineConfig::seed, "master RNG seed");
  state.option("--threads", &PipelineConfig::threads, "worker threads (output is identical for any value)");
  state.option("--input-dir", &PipelineConfig::input_dir, "stage input directory");
  state.option("--output-dir", &PipelineConfig::output_dir, "artifact directory");
  state.option("--reference-cloud", &PipelineConfig::reference_cloud, "evaluation reference CSV");
  state.option("--estimate-cloud", &PipelineConfig::estimate_cloud, "evaluation estimate CSV");
  {
    CLI::Option* opt = app.add_option("--sensitivity", state.sensitivity,
                                      "sensitivity provenance: data-driven or supplied");
    state.overrides.push_back([&state, opt](PipelineConfig& config) {
      if (opt->count() == 0) return;
      if (state.sensitivity == "data-driven") {
        config.sensitivity = gdpcurve::SensitivityMode::kDataDriven;
      } else if (state.sensitivity == "supplied") {
        config.sensitivity = gdpcurve::SensitivityMode::kSupplied;
      } else {
        throw gdpcurve::ConfigError("--sensitivity: expected data-driven or supplied, got '" +
                                    state.sensitivity + "'");
      }
    });
  }

  struct Stage {
    const char* name;
    const char* desc;
    nlohmann::ordered_json (*run)(const PipelineConfig&);
  };
  const Stage stages[] = {
      {"generate", "write a synthetic face dataset", gdpcurve::run_generate},
      {"preprocess", "normalize to unit area and align to the first face", gdpcurve::run_preprocess},
      {"extract", "slice each surface into J radial curves", gdpcurve::run_extract},
      {"sanitize", "release the GDP functional mean of the curve dataset", gdpcurve::run_sanitize},
      {"baseline", "release the point-wise GDP mean of the raw clouds", gdpcurve::run_baseline},
      {"evaluate", "MSE metrics between a reference and an estimate cloud", gdpcurve::run_evaluate},
      {"verify", "Monte-Carlo audit of the privacy-loss arithmetic", gdpcurve::run_verify},
      {"demo", "full synthetic experiment end to end", gdpcurve::run_demo},
  };
  for (const Stage& stage : stages) {
    app.add_subcommand(stage.name, stage.desc);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const PipelineConfig config = assemble_config(state);
    for (const Stage& stage : stages) {
      if (app.get_subcommand(stage.name)->parsed()) {
        const nlohmann::ordered_json report = stage.run(config);
        std::printf("%s\n", report.dump(2).c_str());
        break;
      }
    }
    return 0;
  } catch (const gdpcurve::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const gdpcurve::DomainError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const gdpcurve::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const gdpcurve::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  }
}
