#include "modnet/config.hpp"

#include <algorithm>
#include <string>

#include "modnet/errors.hpp"

namespace modnet {

using nlohmann::json;

void ExperimentConfig::validate() const {
  training.validate();
  if (n == 0) throw ConfigError("n must be positive");
  if (block_size == 0) throw ConfigError("block_size must be positive");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in [0, 1)");
  if (layer_sizes.size() < 2) throw ConfigError("l_d needs at least two layers");
  if (std::find(layer_sizes.begin(), layer_sizes.end(), 0u) != layer_sizes.end())
    throw ConfigError("every layer needs at least one unit");
  if (!(x_max > x_min)) throw ConfigError("x_max must exceed x_min");
  if (!(xi >= 0.0)) throw ConfigError("xi must be >= 0");
  if (communities.empty() ||
      std::find(communities.begin(), communities.end(), 0u) != communities.end())
    throw ConfigError("C must be positive");
  if (communities.size() != 1 && communities.size() != layer_sizes.size())
    throw ConfigError("C must be a single value or one per layer");
  if (restarts == 0) throw ConfigError("restarts must be positive");
  if (method < 1 || method > 4) throw ConfigError("method must be 1, 2, 3 or 4");
  if (!(zeta >= 0.0 && zeta <= 1.0)) throw ConfigError("zeta must lie in [0, 1]");
  if (threads == 0) throw ConfigError("threads must be positive");
}

NormalizationOptions ExperimentConfig::normalization() const {
  NormalizationOptions o;
  o.x_min = x_min;
  o.x_max = x_max;
  o.input_mode = input_range;
  o.output_mode = output_range;
  return o;
}

ExperimentConfig ExperimentConfig::decomposition(bool full_scale) {
  ExperimentConfig c;
  c.training.lambda = 1e-6;
  c.training.epsilon = 1e-3;
  c.xi = 0.3;
  c.communities = {3};
  c.method = 2;
  c.zeta = 0.3;
  c.m = 0;
  if (full_scale) {
    c.n = 3000;
    c.block_size = 15;
    c.training.a1 = 4000;
    c.layer_sizes = {45, 45, 45};
  } else {
    c.n = 1000;
    c.block_size = 5;
    c.training.a1 = 4000;
    c.layer_sizes = {15, 15, 15};
  }
  return c;
}

ExperimentConfig ExperimentConfig::correlation() {
  ExperimentConfig c;
  c.n = 500;
  c.m = 500;
  c.block_size = 5;
  c.layer_sizes = {15, 15, 15};
  c.training.a1 = 2000;
  c.training.lambda = 1e-6;
  c.xi = 0.3;
  c.communities = {3};
  c.method = 2;
  c.zeta = 0.3;
  return c;
}

ExperimentConfig ExperimentConfig::tabular() {
  ExperimentConfig c;
  c.layer_sizes = {24, 20, 20, 18};
  c.training.a1 = 2000;
  c.training.lambda = 1e-7;
  c.xi = 0.5;
  c.communities = {5};
  c.method = 3;
  c.zeta = 0.3;
  c.x_min = -1.0;
  c.x_max = 1.0;
  return c;
}

namespace {

const char* range_name(RangeMode m) { return m == RangeMode::kGlobal ? "global" : "per_dimension"; }

RangeMode range_from(const json& j) {
  const auto s = j.get<std::string>();
  if (s == "global") return RangeMode::kGlobal;
  if (s == "per_dimension") return RangeMode::kPerDimension;
  throw ConfigError("range mode must be \"global\" or \"per_dimension\"");
}

}  // namespace

const std::vector<const char*>& config_keys() {
  static const std::vector<const char*> keys = {
      "a1",        "n",          "m",       "l_d",          "D",          "lambda",
      "epsilon",   "eta0",       "xi",      "C",            "method",     "zeta",
      "x_min",     "x_max",      "block_size", "kappa",     "alpha",      "restarts",
      "em_iterations", "input_range", "output_range", "modularity_on_pruned", "threads"};
  return keys;
}

json to_json(const ExperimentConfig& c) {
  return json{{"a1", c.training.a1},
              {"n", c.n},
              {"m", c.m},
              {"l_d", c.layer_sizes},
              {"D", c.layer_sizes.size()},
              {"lambda", c.training.lambda},
              {"epsilon", c.training.epsilon},
              {"eta0", c.training.eta0},
              {"xi", c.xi},
              {"C", c.communities.size() == 1 ? json(c.communities[0]) : json(c.communities)},
              {"method", c.method},
              {"zeta", c.zeta},
              {"x_min", c.x_min},
              {"x_max", c.x_max},
              {"block_size", c.block_size},
              {"kappa", c.kappa},
              {"alpha", c.alpha},
              {"restarts", c.restarts},
              {"em_iterations", c.em_iterations},
              {"input_range", range_name(c.input_range)},
              {"output_range", range_name(c.output_range)},
              {"modularity_on_pruned", c.modularity_on_pruned},
              {"threads", c.threads}};
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig c) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  const auto& keys = config_keys();
  for (const auto& [key, value] : j.items())
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; }))
      throw ConfigError("unknown config key '" + key + "'");
  try {
    if (j.contains("a1")) c.training.a1 = j["a1"].get<double>();
    if (j.contains("n")) c.n = j["n"].get<std::size_t>();
    if (j.contains("m")) c.m = j["m"].get<std::size_t>();
    if (j.contains("l_d")) c.layer_sizes = j["l_d"].get<std::vector<std::size_t>>();
    if (j.contains("lambda")) c.training.lambda = j["lambda"].get<double>();
    if (j.contains("epsilon")) c.training.epsilon = j["epsilon"].get<double>();
    if (j.contains("eta0")) c.training.eta0 = j["eta0"].get<double>();
    if (j.contains("xi")) c.xi = j["xi"].get<double>();
    if (j.contains("C")) {
      c.communities = j["C"].is_array() ? j["C"].get<std::vector<std::size_t>>()
                                        : std::vector<std::size_t>{j["C"].get<std::size_t>()};
    }
    if (j.contains("method")) c.method = j["method"].get<int>();
    if (j.contains("zeta")) c.zeta = j["zeta"].get<double>();
    if (j.contains("x_min")) c.x_min = j["x_min"].get<double>();
    if (j.contains("x_max")) c.x_max = j["x_max"].get<double>();
    if (j.contains("block_size")) c.block_size = j["block_size"].get<std::size_t>();
    if (j.contains("kappa")) c.kappa = j["kappa"].get<std::size_t>();
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (j.contains("restarts")) c.restarts = j["restarts"].get<std::size_t>();
    if (j.contains("em_iterations")) c.em_iterations = j["em_iterations"].get<std::size_t>();
    if (j.contains("input_range")) c.input_range = range_from(j["input_range"]);
    if (j.contains("output_range")) c.output_range = range_from(j["output_range"]);
    if (j.contains("modularity_on_pruned"))
      c.modularity_on_pruned = j["modularity_on_pruned"].get<bool>();
    if (j.contains("threads")) c.threads = j["threads"].get<std::size_t>();
    if (j.contains("D") && j["D"].get<std::size_t>() != c.layer_sizes.size())
      throw ConfigError("D does not match the length of l_d");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  c.validate();
  return c;
}

json to_json(const TrainingConfig& t) {
  return json{{"lambda", t.lambda}, {"epsilon", t.epsilon}, {"a1", t.a1},
              {"eta0", t.eta0},     {"seed", t.seed}};
}

TrainingConfig training_from_json(const json& j) {
  TrainingConfig t;
  t.lambda = j.at("lambda").get<double>();
  t.epsilon = j.at("epsilon").get<double>();
  t.a1 = j.at("a1").get<double>();
  t.eta0 = j.at("eta0").get<double>();
  t.seed = j.at("seed").get<std::uint64_t>();
  return t;
}

}  // namespace modnet
