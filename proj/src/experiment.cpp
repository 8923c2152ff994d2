#include "modnet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include "modnet/errors.hpp"
#include "modnet/modularity.hpp"
#include "modnet/rng.hpp"

namespace modnet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {
// Sub-stream ids for one trial.
enum TrialStream : std::uint64_t { kData = 0, kInit = 1, kTrain = 2, kDetect = 3, kSplit = 4 };

std::size_t argmax_index(const std::vector<double>& v) {
  return static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
}

json provenance(const ExperimentConfig& cfg, std::uint64_t seed) {
  return json{{"config", to_json(cfg)}, {"seed", seed}};
}
}  // namespace

TrialData split_normalized(const Dataset& all, std::size_t n, std::size_t m,
                           const NormalizationOptions& options) {
  if (n + m > all.size()) throw ArgumentError("not enough samples for the requested split");
  const Dataset norm = normalize_data(all, options);
  return {slice_rows(norm, 0, n), slice_rows(norm, n, n + m)};
}

PipelineResult run_pipeline(const ExperimentConfig& cfg, const Dataset& train, std::uint64_t seed) {
  cfg.validate();
  if (cfg.layer_sizes.front() != train.input_dim() || cfg.layer_sizes.back() != train.output_dim())
    throw ConfigError("l_d must start with the input dimension (" +
                      std::to_string(train.input_dim()) + ") and end with the output dimension (" +
                      std::to_string(train.output_dim()) + ")");
  PipelineResult r;
  TrainingConfig tc = cfg.training;
  tc.seed = derive_seed(seed, kTrain);
  r.network = train_sgd(init_params(cfg.layer_sizes, derive_seed(seed, kInit)), train, tc);
  r.graph = extract_adjacency(r.network, cfg.xi);

  EmOptions em;
  em.restarts = cfg.restarts;
  em.iterations = cfg.em_iterations;
  r.models = detect_all_layers(r.graph, cfg.communities, em, derive_seed(seed, kDetect));
  r.structure = structure_from_models(r.models);
  r.representation = prune_unnecessary(
      bundle(r.structure, r.graph, bundle_method_from_int(cfg.method), cfg.zeta));
  return r;
}

std::vector<std::vector<std::size_t>> reference_labels(const LayerGraph& graph,
                                                       const GroundTruth& truth) {
  const std::size_t depth = graph.depth();
  if (depth < 2) throw ArgumentError("graph needs at least two layers");
  std::vector<std::vector<std::size_t>> labels(depth);
  auto copy_truth = [&](std::size_t layer, const std::vector<std::size_t>& blocks) {
    for (std::size_t u : graph.unit_map[layer]) {
      if (u >= blocks.size()) throw ShapeError("graph layer is wider than the ground truth");
      labels[layer].push_back(blocks[u]);
    }
  };
  copy_truth(0, truth.block_of.front());
  copy_truth(depth - 1, truth.block_of.back());
  for (std::size_t d = 1; d + 1 < depth; ++d) {
    const Matrix& in = graph.connections[d - 1];
    const Matrix& out = graph.connections[d];
    for (std::size_t k = 0; k < graph.width(d); ++k) {
      std::vector<double> score(GroundTruth::kBlocks, 0.0);
      for (std::size_t i = 0; i < in.rows(); ++i)
        if (is_connected(in(i, k))) score[labels[d - 1][i]] += 1.0;
      if (d + 2 == depth)
        for (std::size_t j = 0; j < out.cols(); ++j)
          if (is_connected(out(k, j))) score[labels[d + 1][j]] += 1.0;
      labels[d].push_back(argmax_index(score));
    }
  }
  return labels;
}

std::size_t count_cross_block_bundles(const ModularRepresentation& repr,
                                      const std::vector<std::vector<std::size_t>>& labels) {
  auto majority = [&](std::size_t layer, std::size_t id) {
    const Community* c = repr.find(layer, id);
    if (!c) throw ArgumentError("bundled connection refers to a missing community");
    std::map<std::size_t, std::size_t> counts;
    for (std::size_t k : c->members) ++counts[labels.at(layer).at(k)];
    return std::max_element(counts.begin(), counts.end(),
                            [](auto& a, auto& b) { return a.second < b.second; })
        ->first;
  };
  std::size_t cross = 0;
  for (const auto& e : repr.connections)
    if (majority(e.layer, e.from) != majority(e.layer + 1, e.to)) ++cross;
  return cross;
}

ExperimentRecord run_synthetic_trial(const ExperimentConfig& cfg, std::uint64_t seed,
                                     std::size_t index,
                                     const std::optional<fs::path>& artifact_dir,
                                     PipelineResult* keep) {
  ExperimentRecord rec;
  rec.index = index;
  rec.seed = seed;
  try {
    cfg.validate();
    SynthOptions so;
    so.samples = cfg.n + cfg.m;
    so.block_size = cfg.block_size;
    so.kappa = cfg.kappa;
    so.alpha = cfg.alpha;
    auto [all, truth] = generate_synthetic(so, derive_seed(seed, kData));
    const TrialData data = split_normalized(all, cfg.n, cfg.m, cfg.normalization());

    PipelineResult r = run_pipeline(cfg, data.train, seed);
    rec.training_error = training_error(r.network, data.train);
    if (cfg.m > 0) rec.generalization_error = generalization_error(r.network, data.test);
    rec.modularity = network_modularity(r.graph, r.structure,
                                        cfg.modularity_on_pruned ? &r.representation : nullptr);
    rec.bundled_connections = r.representation.connections.size();
    rec.surviving_units = r.graph.total_units();

    const auto labels = reference_labels(r.graph, truth);
    rec.exact_all_layers = true;
    double ari_sum = 0.0;
    for (std::size_t d = 0; d < r.graph.depth(); ++d) {
      LayerRecovery lr;
      lr.exact = same_partition(r.structure.assignment[d], labels[d]);
      lr.ari = adjusted_rand_index(r.structure.assignment[d], labels[d]);
      rec.exact_all_layers &= lr.exact;
      ari_sum += lr.ari;
      rec.recovery.push_back(lr);
    }
    rec.mean_ari = ari_sum / static_cast<double>(r.graph.depth());
    rec.cross_block_bundles = count_cross_block_bundles(r.representation, labels);

    if (artifact_dir) {
      const fs::path dir = *artifact_dir / ("trial_" + std::to_string(index));
      fs::create_directories(dir);
      const json prov = provenance(cfg, seed);
      save_network(dir / "network.json", r.network, prov);
      save_graph(dir / "graph.json", r.graph, prov);
      save_communities(dir / "communities.json", r.models, prov);
      save_representation(dir / "representation.json", r.representation, prov);
      save_ground_truth(dir / "ground_truth.json", truth, prov);
      for (const char* f :
           {"network.json", "graph.json", "communities.json", "representation.json",
            "ground_truth.json"})
        rec.artifacts.push_back((dir / f).string());
    }
    rec.ok = true;
    if (keep) *keep = std::move(r);
  } catch (const Error& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  return rec;
}

std::vector<ExperimentRecord> run_trials(std::size_t count, std::size_t threads,
                                         const std::function<ExperimentRecord(std::size_t)>& fn) {
  std::vector<ExperimentRecord> out(count);
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  for (std::size_t t = 0; t < threads; ++t)
    workers.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) out[i] = fn(i);
    });
  workers.clear();
  return out;
}

DecompositionReport run_decomposition(const ExperimentConfig& cfg,
                                      const std::vector<std::uint64_t>& seeds,
                                      const std::optional<fs::path>& artifact_dir) {
  cfg.validate();
  DecompositionReport rep;
  rep.trials = run_trials(seeds.size(), cfg.threads, [&](std::size_t i) {
    return run_synthetic_trial(cfg, seeds[i], i, artifact_dir);
  });
  double ari = 0.0;
  std::size_t ok = 0;
  for (const auto& t : rep.trials) {
    if (!t.ok) {
      ++rep.failed;
      continue;
    }
    ++ok;
    ari += t.mean_ari;
    if (t.exact_all_layers) ++rep.exact_recoveries;
    if (t.exact_all_layers && t.cross_block_bundles == 0) ++rep.clean_recoveries;
  }
  if (ok > 0) rep.mean_ari = ari / static_cast<double>(ok);
  return rep;
}

CorrelationResult correlate_records(const std::vector<ExperimentRecord>& records) {
  std::vector<double> g, q;
  for (const auto& r : records)
    if (r.ok) {
      g.push_back(r.generalization_error);
      q.push_back(r.modularity);
    }
  return pearson(g, q);
}

CorrelationReport run_correlation(const ExperimentConfig& cfg, std::size_t trials,
                                  std::uint64_t seed,
                                  const std::optional<fs::path>& artifact_dir) {
  cfg.validate();
  if (cfg.m == 0) throw ConfigError("the correlation study needs a test set (m > 0)");
  if (trials < 3) throw ConfigError("the correlation study needs at least 3 trials");
  CorrelationReport rep;
  rep.trials = run_trials(trials, cfg.threads, [&](std::size_t i) {
    return run_synthetic_trial(cfg, derive_seed(seed, i), i, artifact_dir);
  });
  rep.failed = static_cast<std::size_t>(
      std::count_if(rep.trials.begin(), rep.trials.end(), [](auto& t) { return !t.ok; }));
  rep.correlation = correlate_records(rep.trials);
  return rep;
}

TabularReport run_tabular_analysis(const fs::path& table_path, const TableSchema& schema,
                                   const ExperimentConfig& cfg, std::size_t trials,
                                   std::uint64_t seed) {
  return run_tabular_analysis(dataset_from_table(read_table(table_path, schema.delimiter), schema),
                              cfg, trials, seed);
}

TabularReport run_tabular_analysis(const TableIngest& ingest, const ExperimentConfig& cfg,
                                   std::size_t trials, std::uint64_t seed) {
  cfg.validate();
  if (trials == 0) throw ConfigError("need at least one trial");
  const Dataset& raw = ingest.data;
  if (raw.size() < 2) throw ArgumentError("need at least two complete rows");

  TabularReport rep;
  rep.dropped_rows = ingest.dropped_rows;
  rep.train_size = raw.size() / 2;
  rep.test_size = raw.size() - rep.train_size;

  const Dataset norm = normalize_data(raw, cfg.normalization());
  std::vector<std::size_t> order(norm.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng = make_rng(derive_seed(seed, kSplit));
  std::shuffle(order.begin(), order.end(), rng);
  Dataset shuffled = norm;
  for (std::size_t r = 0; r < order.size(); ++r) {
    std::copy_n(norm.inputs.row(order[r]).begin(), norm.input_dim(), shuffled.inputs.row(r).begin());
    std::copy_n(norm.outputs.row(order[r]).begin(), norm.output_dim(),
                shuffled.outputs.row(r).begin());
  }
  const Dataset train = slice_rows(shuffled, 0, rep.train_size);
  const Dataset test = slice_rows(shuffled, rep.train_size, shuffled.size());

  std::vector<PipelineResult> results(trials);
  rep.trials = run_trials(trials, cfg.threads, [&](std::size_t i) {
    ExperimentRecord rec;
    rec.index = i;
    rec.seed = derive_seed(seed, 1 + i);
    try {
      PipelineResult r = run_pipeline(cfg, train, rec.seed);
      rec.training_error = training_error(r.network, train);
      rec.generalization_error = generalization_error(r.network, test);
      rec.modularity = network_modularity(r.graph, r.structure,
                                          cfg.modularity_on_pruned ? &r.representation : nullptr);
      rec.bundled_connections = r.representation.connections.size();
      rec.surviving_units = r.graph.total_units();
      rec.ok = true;
      results[i] = std::move(r);
    } catch (const Error& e) {
      rec.error = e.what();
    }
    return rec;
  });

  std::optional<std::size_t> best;
  for (const auto& t : rep.trials)
    if (t.ok && (!best || t.generalization_error < rep.trials[*best].generalization_error))
      best = t.index;
  if (!best) throw NumericDomainError("every tabular trial failed: " + rep.trials[0].error);
  rep.best_trial = *best;
  rep.best = std::move(results[*best]);

  rep.unit_names.push_back(raw.input_names);
  for (std::size_t d = 1; d + 1 < cfg.layer_sizes.size(); ++d) {
    std::vector<std::string> names;
    for (std::size_t u = 0; u < cfg.layer_sizes[d]; ++u)
      names.push_back("h" + std::to_string(d + 1) + "_" + std::to_string(u + 1));
    rep.unit_names.push_back(std::move(names));
  }
  rep.unit_names.push_back(raw.output_names);
  try {
    rep.correlation = correlate_records(rep.trials);
  } catch (const NumericDomainError&) {
    rep.correlation.reset();
  }
  return rep;
}

namespace {
std::string num(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}
}  // namespace

void write_records_tsv(std::ostream& out, const std::vector<ExperimentRecord>& records) {
  out << "index\tseed\tok\ttraining_error\tgeneralization_error\tmodularity\texact_all_layers"
         "\tmean_ari\tcross_block_bundles\tbundled_connections\tsurviving_units\terror\n";
  for (const auto& r : records)
    out << r.index << '\t' << r.seed << '\t' << r.ok << '\t' << num(r.training_error) << '\t'
        << num(r.generalization_error) << '\t' << num(r.modularity) << '\t'
        << r.exact_all_layers << '\t' << num(r.mean_ari) << '\t' << r.cross_block_bundles << '\t'
        << r.bundled_connections << '\t' << r.surviving_units << '\t' << r.error << '\n';
}

void write_decomposition_summary(std::ostream& out, const DecompositionReport& rep) {
  out << "decomposition: " << rep.trials.size() << " trials, " << rep.failed << " failed\n"
      << "  exact recovery in every layer: " << rep.exact_recoveries << '\n'
      << "  exact and free of cross-block bundles: " << rep.clean_recoveries << '\n'
      << "  mean adjusted Rand index: " << num(rep.mean_ari) << '\n';
}

void write_correlation_summary(std::ostream& out, const CorrelationReport& rep) {
  out << "correlation of generalization error and modularity: " << rep.trials.size()
      << " trials, " << rep.failed << " failed\n"
      << "  R = " << num(rep.correlation.r) << "\n  p = " << num(rep.correlation.p)
      << "\n  N = " << rep.correlation.n << '\n';
}

void write_tabular_summary(std::ostream& out, const TabularReport& rep) {
  out << "tabular analysis: " << rep.trials.size() << " trials\n"
      << "  dropped rows with missing values: " << rep.dropped_rows << '\n'
      << "  train/test split: " << rep.train_size << '/' << rep.test_size << '\n'
      << "  best trial: " << rep.best_trial
      << " (generalization error " << num(rep.trials[rep.best_trial].generalization_error)
      << ", modularity " << num(rep.trials[rep.best_trial].modularity) << ")\n";
  if (rep.correlation)
    out << "  R(G, Q) = " << num(rep.correlation->r) << ", p = " << num(rep.correlation->p) << '\n';
  out << "  communities after pruning: " << rep.best.representation.communities.size()
      << ", bundled connections: " << rep.best.representation.connections.size() << '\n';
}

}  // namespace modnet
