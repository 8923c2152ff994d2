#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "modnet/community.hpp"
#include "modnet/config.hpp"
#include "modnet/graph.hpp"
#include "modnet/io.hpp"
#include "modnet/modular.hpp"
#include "modnet/network.hpp"
#include "modnet/stats.hpp"
#include "modnet/synth.hpp"

namespace modnet {

struct LayerRecovery {
  bool exact = false;  // same set partition as the reference labels
  double ari = 0.0;    // adjusted Rand index against the reference labels
};

// One trained network and everything measured on it.
struct ExperimentRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;

  double training_error = std::numeric_limits<double>::quiet_NaN();
  double generalization_error = std::numeric_limits<double>::quiet_NaN();
  double modularity = std::numeric_limits<double>::quiet_NaN();

  // Synthetic runs only.
  std::vector<LayerRecovery> recovery;
  bool exact_all_layers = false;
  double mean_ari = std::numeric_limits<double>::quiet_NaN();
  std::size_t cross_block_bundles = 0;

  std::size_t bundled_connections = 0;
  std::size_t surviving_units = 0;
  std::vector<std::string> artifacts;
};

// Intermediate objects of one pipeline run.
struct PipelineResult {
  NetworkParams network;
  LayerGraph graph;
  std::vector<CommunityModel> models;
  CommunityStructure structure;
  ModularRepresentation representation;  // pruned
};

// Train/test data of one trial after normalization.
struct TrialData {
  Dataset train;
  Dataset test;
};

// Normalizes the full dataset and splits it into the first n rows (train)
// and the following m rows (test).
TrialData split_normalized(const Dataset& all, std::size_t n, std::size_t m,
                           const NormalizationOptions& options);

// init -> train -> extract -> detect -> bundle -> prune, with sub-seeds
// derived from `seed`.
PipelineResult run_pipeline(const ExperimentConfig& cfg, const Dataset& train, std::uint64_t seed);

// Reference labels for every surviving unit of `graph`: input/output units
// take their ground-truth block; hidden units take the block they have the
// most binarized connections to in the neighbouring labelled layers.
std::vector<std::vector<std::size_t>> reference_labels(const LayerGraph& graph,
                                                       const GroundTruth& truth);

// Bundled connections whose endpoint communities carry different majority
// reference labels.
std::size_t count_cross_block_bundles(const ModularRepresentation& repr,
                                      const std::vector<std::vector<std::size_t>>& labels);

// Generates data, runs the pipeline and scores it. Errors are caught and
// recorded in the returned record (ok == false).
ExperimentRecord run_synthetic_trial(const ExperimentConfig& cfg, std::uint64_t seed,
                                     std::size_t index = 0,
                                     const std::optional<std::filesystem::path>& artifact_dir = {},
                                     PipelineResult* keep = nullptr);

// Runs `fn(i)` for i in [0, count) on cfg.threads workers. Results land at
// their index so the outcome does not depend on scheduling.
std::vector<ExperimentRecord> run_trials(std::size_t count, std::size_t threads,
                                         const std::function<ExperimentRecord(std::size_t)>& fn);

struct DecompositionReport {
  std::vector<ExperimentRecord> trials;
  std::size_t exact_recoveries = 0;  // every layer matches
  std::size_t clean_recoveries = 0;  // exact and no cross-block bundle
  std::size_t failed = 0;
  double mean_ari = std::numeric_limits<double>::quiet_NaN();
};

DecompositionReport run_decomposition(const ExperimentConfig& cfg,
                                      const std::vector<std::uint64_t>& seeds,
                                      const std::optional<std::filesystem::path>& artifact_dir = {});

struct CorrelationReport {
  CorrelationResult correlation;
  std::vector<ExperimentRecord> trials;
  std::size_t failed = 0;
};

// Pearson R and p over (generalization error, modularity) of `trials`
// trials, trial i seeded with derive_seed(seed, i). Needs cfg.m > 0.
CorrelationReport run_correlation(const ExperimentConfig& cfg, std::size_t trials,
                                  std::uint64_t seed,
                                  const std::optional<std::filesystem::path>& artifact_dir = {});

// Pearson over the ok records; throws UndefinedCorrelationError if fewer
// than three or either series is constant.
CorrelationResult correlate_records(const std::vector<ExperimentRecord>& records);

struct TabularReport {
  std::vector<ExperimentRecord> trials;
  std::size_t dropped_rows = 0;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t best_trial = 0;
  PipelineResult best;
  std::vector<std::vector<std::string>> unit_names;  // input names, hidden ids, output names
  std::optional<CorrelationResult> correlation;
};

// Ingests the table, drops incomplete rows, shuffles with `seed`, splits
// floor(N/2) / rest, runs `trials` pipelines and keeps the one with the
// smallest generalization error.
TabularReport run_tabular_analysis(const std::filesystem::path& table_path,
                                   const TableSchema& schema, const ExperimentConfig& cfg,
                                   std::size_t trials, std::uint64_t seed);

// Same as above for already ingested data.
TabularReport run_tabular_analysis(const TableIngest& ingest, const ExperimentConfig& cfg,
                                   std::size_t trials, std::uint64_t seed);

// One row per record, tab separated, with a header line.
void write_records_tsv(std::ostream& out, const std::vector<ExperimentRecord>& records);
void write_decomposition_summary(std::ostream& out, const DecompositionReport& report);
void write_correlation_summary(std::ostream& out, const CorrelationReport& report);
void write_tabular_summary(std::ostream& out, const TabularReport& report);

}  // namespace modnet
