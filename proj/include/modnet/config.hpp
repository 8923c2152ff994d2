#pragma once

#include <cstddef>
#include <vector>

#include "json.hpp"
#include "modnet/dataset.hpp"
#include "modnet/network.hpp"

namespace modnet {

// Every tunable of the pipeline. JSON keys follow the conventional symbol
// names: a1, n, m, l_d, D, lambda, epsilon, xi, C, method, zeta, x_min,
// x_max, plus the extensions listed in config_keys().
struct ExperimentConfig {
  // data
  std::size_t n = 1000;  // training samples
  std::size_t m = 0;     // test samples
  std::size_t block_size = 5;
  std::size_t kappa = 0;
  double alpha = 0.0;
  // network and training
  std::vector<std::size_t> layer_sizes = {15, 15, 15};
  TrainingConfig training;
  double x_min = -3.0;
  double x_max = 3.0;
  RangeMode input_range = RangeMode::kGlobal;
  RangeMode output_range = RangeMode::kGlobal;
  // extraction, detection, bundling
  double xi = 0.3;
  std::vector<std::size_t> communities = {3};
  std::size_t restarts = 10;
  std::size_t em_iterations = 200;
  int method = 2;
  double zeta = 0.3;
  bool modularity_on_pruned = false;
  // execution
  std::size_t threads = 1;

  // Throws ConfigError on any out-of-range value.
  void validate() const;

  NormalizationOptions normalization() const;

  // Settings for the decomposition experiment. Desk scale uses blocks of 5
  // and n = 1000; full scale uses blocks of 15, n = 3000, a1 = 4000.
  static ExperimentConfig decomposition(bool full_scale = false);
  // Settings for the modularity / generalization-error study (n = m = 500,
  // a1 = 2000, blocks of 5).
  static ExperimentConfig correlation();
  // Settings for tabular data analysis (D = 4, lambda 1e-7, xi 0.5, C 5,
  // method 3, inputs in [-1, 1]). Layer sizes must be set for the data.
  static ExperimentConfig tabular();
};

nlohmann::json to_json(const ExperimentConfig& cfg);
// Overlays the keys present in `j` onto `base`. Unknown keys throw
// ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j, ExperimentConfig base = {});
const std::vector<const char*>& config_keys();

nlohmann::json to_json(const TrainingConfig& cfg);
TrainingConfig training_from_json(const nlohmann::json& j);

}  // namespace modnet
