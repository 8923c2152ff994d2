// modnet command-line interface.
//
// Exit codes: 0 success, 1 unexpected failure, 2 usage, 3 configuration or
// argument, 4 numeric domain (including divergence and empty layers), 5 I/O
// or file format.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "modnet/errors.hpp"
#include "modnet/experiment.hpp"
#include "modnet/io.hpp"
#include "modnet/modularity.hpp"
#include "modnet/rng.hpp"

namespace fs = std::filesystem;
using namespace modnet;
using nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kOther = 1, kUsage = 2, kConfig = 3, kNumeric = 4, kIo = 5 };

// Values given on the command line; unset ones fall back to the config file,
// then to the built-in defaults.
struct Overrides {
  std::optional<double> a1, lambda, epsilon, eta0, xi, zeta, x_min, x_max, alpha;
  std::optional<std::size_t> n, m, block_size, kappa, restarts, em_iterations, threads;
  std::optional<int> method;
  std::vector<std::size_t> layers, communities;
};

struct Globals {
  std::uint64_t seed = 0;
  std::string config_path;
  Overrides o;
};

ExperimentConfig resolve(const Globals& g, ExperimentConfig base) {
  if (!g.config_path.empty()) base = config_from_json(read_json_file(g.config_path), base);
  const Overrides& o = g.o;
  auto set = [](auto& dst, const auto& src) {
    if (src) dst = *src;
  };
  set(base.training.a1, o.a1);
  set(base.training.lambda, o.lambda);
  set(base.training.epsilon, o.epsilon);
  set(base.training.eta0, o.eta0);
  set(base.xi, o.xi);
  set(base.zeta, o.zeta);
  set(base.x_min, o.x_min);
  set(base.x_max, o.x_max);
  set(base.alpha, o.alpha);
  set(base.n, o.n);
  set(base.m, o.m);
  set(base.block_size, o.block_size);
  set(base.kappa, o.kappa);
  set(base.restarts, o.restarts);
  set(base.em_iterations, o.em_iterations);
  set(base.threads, o.threads);
  set(base.method, o.method);
  if (!o.layers.empty()) base.layer_sizes = o.layers;
  if (!o.communities.empty()) base.communities = o.communities;
  base.validate();
  return base;
}

json provenance(const ExperimentConfig& cfg, std::uint64_t seed, const std::string& command) {
  return json{{"command", command}, {"config", to_json(cfg)}, {"seed", seed}};
}

void add_training_flags(CLI::App* app, Overrides& o) {
  app->add_option("--a1", o.a1, "iterations per training sample");
  app->add_option("--lambda", o.lambda, "L1 penalty");
  app->add_option("--epsilon", o.epsilon, "derivative stabilizer");
  app->add_option("--eta0", o.eta0, "initial learning rate");
  app->add_option("--layers", o.layers, "layer sizes, e.g. 15,15,15")->delimiter(',');
  app->add_option("--x-min", o.x_min, "input range lower bound");
  app->add_option("--x-max", o.x_max, "input range upper bound");
}

void add_detect_flags(CLI::App* app, Overrides& o) {
  app->add_option("-C,--communities", o.communities, "communities per layer (one or one per layer)")
      ->delimiter(',');
  app->add_option("--restarts", o.restarts, "EM restarts per layer");
  app->add_option("--em-iterations", o.em_iterations, "EM iterations per restart");
}

void add_bundle_flags(CLI::App* app, Overrides& o) {
  app->add_option("--method", o.method, "bundled-connection rule 1-4");
  app->add_option("--zeta", o.zeta, "density threshold");
}

std::vector<std::vector<std::string>> names_from_provenance(const json& prov) {
  if (prov.contains("unit_names")) return prov["unit_names"].get<std::vector<std::vector<std::string>>>();
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extract modular representations from layered neural networks"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  Globals g;
  app.add_option("--seed", g.seed, "base random seed");
  app.add_option("--config", g.config_path, "JSON config (keys a1, n, m, l_d, D, lambda, ...)");
  Overrides& o = g.o;

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic dataset with planted blocks");
  bool independent = false;
  std::string synth_out, synth_truth;
  synth->add_flag("--independent", independent, "three independent blocks (kappa = alpha = 0)");
  synth->add_option("--n", o.n, "number of samples");
  synth->add_option("--block-size", o.block_size, "units per block");
  synth->add_option("--kappa", o.kappa, "cross-block bundles added to the generator");
  synth->add_option("--alpha", o.alpha, "input dependence");
  synth->add_option("-o,--out", synth_out, "dataset file (default: stdout)");
  synth->add_option("--truth", synth_truth, "write the ground truth here");

  // train
  auto* train = app.add_subcommand("train", "train a sparse layered network");
  std::string train_data, train_out, train_schema;
  train->add_option("--data", train_data, "delimited table with a header row")->required();
  train->add_option("--schema", train_schema, "column schema JSON (inputs, outputs, delimiter, log1p)");
  train->add_option("-o,--out", train_out, "network file")->required();
  add_training_flags(train, o);

  // extract-graph
  auto* extract = app.add_subcommand("extract-graph", "binarize weights and drop isolated units");
  std::string ex_net, ex_out;
  extract->add_option("--network", ex_net, "network file")->required();
  extract->add_option("-o,--out", ex_out, "layer graph file")->required();
  extract->add_option("--xi", o.xi, "weight removing threshold");

  // detect
  auto* detect = app.add_subcommand("detect", "EM community detection in every layer");
  std::string det_graph, det_out;
  detect->add_option("--graph", det_graph, "layer graph file")->required();
  detect->add_option("-o,--out", det_out, "communities file")->required();
  add_detect_flags(detect, o);

  // bundle
  auto* bund = app.add_subcommand("bundle", "bundled connections and pruning");
  std::string b_graph, b_comm, b_out, b_report;
  bool no_prune = false;
  bund->add_option("--graph", b_graph, "layer graph file")->required();
  bund->add_option("--communities", b_comm, "communities file")->required();
  bund->add_option("-o,--out", b_out, "representation file")->required();
  bund->add_option("--report", b_report, "membership report file (default: stdout)");
  bund->add_flag("--no-prune", no_prune, "keep unnecessary communities");
  add_bundle_flags(bund, o);

  // modularity
  auto* modq = app.add_subcommand("modularity", "modularity Q of a community structure");
  std::string q_graph, q_comm, q_repr;
  bool q_single = false;
  modq->add_option("--graph", q_graph, "layer graph file")->required();
  auto* q_comm_opt = modq->add_option("--communities", q_comm, "communities file");
  modq->add_flag("--single", q_single, "the whole network as one community")->excludes(q_comm_opt);
  modq->add_option("--representation", q_repr, "count only units kept in this representation");

  // export-graph
  auto* exp = app.add_subcommand("export-graph", "Graphviz DOT or edge list export");
  std::string e_repr, e_graph, e_out, e_format = "dot";
  exp->add_option("--representation", e_repr, "representation file (dot)");
  exp->add_option("--graph", e_graph, "layer graph file (edges)");
  exp->add_option("--format", e_format, "dot or edges")->check(CLI::IsMember({"dot", "edges"}));
  exp->add_option("-o,--out", e_out, "output file (default: stdout)");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "run a seeded experiment");
  std::string kind, out_dir, table, schema_path;
  std::size_t trials = 10;
  bool full_scale = false, keep_artifacts = false;
  experiment->add_option("kind", kind, "decomposition, correlation or tabular")
      ->required()
      ->check(CLI::IsMember({"decomposition", "correlation", "tabular"}));
  experiment->add_option("--trials", trials, "number of trials");
  experiment->add_option("--out-dir", out_dir, "directory for records, summary and artifacts");
  experiment->add_flag("--full-scale", full_scale, "45-unit networks, n = 3000");
  experiment->add_flag("--artifacts", keep_artifacts, "persist every trial's artifacts");
  experiment->add_option("--table", table, "input table (tabular)");
  experiment->add_option("--schema", schema_path, "column schema JSON (tabular)");
  experiment->add_option("--n", o.n, "training samples");
  experiment->add_option("--m", o.m, "test samples");
  experiment->add_option("--block-size", o.block_size, "units per block");
  experiment->add_option("--kappa", o.kappa, "cross-block bundles");
  experiment->add_option("--alpha", o.alpha, "input dependence");
  experiment->add_option("--threads", o.threads, "worker threads");
  experiment->add_option("--xi", o.xi, "weight removing threshold");
  add_training_flags(experiment, o);
  add_detect_flags(experiment, o);
  add_bundle_flags(experiment, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (synth->parsed()) {
      const ExperimentConfig cfg = resolve(g, ExperimentConfig::decomposition());
      SynthOptions so;
      so.samples = cfg.n;
      so.block_size = cfg.block_size;
      so.kappa = independent ? 0 : cfg.kappa;
      so.alpha = independent ? 0.0 : cfg.alpha;
      const auto [data, truth] = generate_synthetic(so, g.seed);
      if (synth_out.empty()) {
        write_dataset(std::cout, data);
      } else {
        write_dataset(synth_out, data);
      }
      if (!synth_truth.empty())
        save_ground_truth(synth_truth, truth, provenance(cfg, g.seed, "synth"));
    } else if (train->parsed()) {
      const TableSchema schema = train_schema.empty() ? TableSchema{} : load_schema(train_schema);
      const Dataset raw = read_dataset(train_data, schema);
      ExperimentConfig base = ExperimentConfig::decomposition();
      // Without explicit sizes the ends follow the data.
      base.layer_sizes.front() = raw.input_dim();
      base.layer_sizes.back() = raw.output_dim();
      ExperimentConfig cfg = resolve(g, base);
      if (cfg.layer_sizes.front() != raw.input_dim() || cfg.layer_sizes.back() != raw.output_dim())
        throw ConfigError("layer sizes do not match the data dimensions");
      const Dataset data = normalize_data(raw, cfg.normalization());
      TrainingConfig tc = cfg.training;
      tc.seed = derive_seed(g.seed, 2);
      const NetworkParams net = train_sgd(init_params(cfg.layer_sizes, derive_seed(g.seed, 1)), data, tc);
      json prov = provenance(cfg, g.seed, "train");
      std::vector<std::vector<std::string>> names{raw.input_names};
      for (std::size_t d = 1; d + 1 < net.depth(); ++d) {
        std::vector<std::string> h;
        for (std::size_t u = 0; u < net.layer_sizes[d]; ++u)
          h.push_back("h" + std::to_string(d + 1) + "_" + std::to_string(u + 1));
        names.push_back(std::move(h));
      }
      names.push_back(raw.output_names);
      prov["unit_names"] = names;
      save_network(train_out, net, prov);
      std::cout << "training error " << training_error(net, data) << '\n';
    } else if (extract->parsed()) {
      const ExperimentConfig cfg = resolve(g, ExperimentConfig::decomposition());
      const json doc = read_artifact(ex_net, "modnet-network");
      const LayerGraph graph = extract_adjacency(network_from_json(doc), cfg.xi);
      json prov = provenance(cfg, g.seed, "extract-graph");
      if (doc["provenance"].contains("unit_names")) prov["unit_names"] = doc["provenance"]["unit_names"];
      save_graph(ex_out, graph, prov);
      std::cout << "surviving units " << graph.total_units() << '\n';
    } else if (detect->parsed()) {
      const ExperimentConfig cfg = resolve(g, ExperimentConfig::decomposition());
      const LayerGraph graph = load_graph(det_graph);
      EmOptions em;
      em.restarts = cfg.restarts;
      em.iterations = cfg.em_iterations;
      // Same sub-stream as the experiment pipeline.
      const auto models = detect_all_layers(graph, cfg.communities, em, derive_seed(g.seed, 3));
      save_communities(det_out, models, provenance(cfg, g.seed, "detect"));
      for (std::size_t d = 0; d < models.size(); ++d) {
        std::cout << "layer " << d + 1 << ':';
        for (std::size_t c : assign(models[d])) std::cout << ' ' << c + 1;
        std::cout << '\n';
      }
    } else if (bund->parsed()) {
      const ExperimentConfig cfg = resolve(g, ExperimentConfig::decomposition());
      const json gdoc = read_artifact(b_graph, "modnet-layer-graph");
      const LayerGraph graph = graph_from_json(gdoc);
      const auto structure = structure_from_models(load_communities(b_comm));
      ModularRepresentation repr =
          bundle(structure, graph, bundle_method_from_int(cfg.method), cfg.zeta);
      if (!no_prune) repr = prune_unnecessary(std::move(repr));
      json prov = provenance(cfg, g.seed, "bundle");
      const auto names = names_from_provenance(gdoc["provenance"]);
      if (!names.empty()) prov["unit_names"] = names;
      save_representation(b_out, repr, prov);
      std::ostringstream report;
      write_membership_report(report, repr, names);
      if (b_report.empty()) {
        std::cout << report.str();
      } else {
        write_text_file(b_report, report.str());
      }
    } else if (modq->parsed()) {
      const LayerGraph graph = load_graph(q_graph);
      double q = 0.0;
      if (q_single) {
        const Matrix adjacency = modified_adjacency(graph);
        q = modularity_q(mixing_matrix(adjacency, std::vector<std::size_t>(adjacency.rows(), 0), 1));
      } else {
        if (q_comm.empty()) throw ConfigError("modularity needs --communities or --single");
        const auto structure = structure_from_models(load_communities(q_comm));
        std::optional<ModularRepresentation> repr;
        if (!q_repr.empty()) repr = load_representation(q_repr);
        q = network_modularity(graph, structure, repr ? &*repr : nullptr);
      }
      std::cout << "Q = " << std::setprecision(17) << q << '\n';
    } else if (exp->parsed()) {
      std::ostringstream out;
      if (e_format == "dot") {
        if (e_repr.empty()) throw ConfigError("dot export needs --representation");
        const json doc = read_artifact(e_repr, "modnet-representation");
        write_dot(out, representation_from_json(doc), names_from_provenance(doc["provenance"]));
      } else {
        if (e_graph.empty()) throw ConfigError("edge export needs --graph");
        write_edge_list(out, load_graph(e_graph));
      }
      if (e_out.empty()) {
        std::cout << out.str();
      } else {
        write_text_file(e_out, out.str());
      }
    } else if (experiment->parsed()) {
      std::optional<fs::path> dir;
      if (!out_dir.empty()) {
        dir = out_dir;
        fs::create_directories(*dir);
      }
      const std::optional<fs::path> artifacts =
          keep_artifacts && dir ? std::optional<fs::path>(*dir / "artifacts") : std::nullopt;
      std::ostringstream records, summary;
      if (kind == "decomposition") {
        const ExperimentConfig cfg = resolve(g, ExperimentConfig::decomposition(full_scale));
        std::vector<std::uint64_t> seeds;
        for (std::size_t i = 0; i < trials; ++i) seeds.push_back(derive_seed(g.seed, i));
        const auto rep = run_decomposition(cfg, seeds, artifacts);
        write_records_tsv(records, rep.trials);
        write_decomposition_summary(summary, rep);
      } else if (kind == "correlation") {
        ExperimentConfig base = ExperimentConfig::correlation();
        if (full_scale) {
          base.n = base.m = 3000;
          base.block_size = 15;
          base.layer_sizes = {45, 45, 45};
          base.training.a1 = 4000;
        }
        const ExperimentConfig cfg = resolve(g, base);
        const auto rep = run_correlation(cfg, trials, g.seed, artifacts);
        write_records_tsv(records, rep.trials);
        write_correlation_summary(summary, rep);
      } else {
        if (table.empty()) throw ConfigError("tabular experiment needs --table");
        const TableSchema schema = schema_path.empty() ? TableSchema{} : load_schema(schema_path);
        const TableIngest ingest = dataset_from_table(read_table(table, schema.delimiter), schema);
        ExperimentConfig base = ExperimentConfig::tabular();
        base.layer_sizes.front() = ingest.data.input_dim();
        base.layer_sizes.back() = ingest.data.output_dim();
        const ExperimentConfig cfg = resolve(g, base);
        const auto rep = run_tabular_analysis(ingest, cfg, trials, g.seed);
        write_records_tsv(records, rep.trials);
        write_tabular_summary(summary, rep);
        if (dir) {
          const json prov = provenance(cfg, rep.trials[rep.best_trial].seed, "experiment tabular");
          save_network(*dir / "best_network.json", rep.best.network, prov);
          save_representation(*dir / "best_representation.json", rep.best.representation, prov);
          std::ostringstream dot, members;
          write_dot(dot, rep.best.representation, rep.unit_names);
          write_membership_report(members, rep.best.representation, rep.unit_names);
          write_text_file(*dir / "best_representation.dot", dot.str());
          write_text_file(*dir / "communities.txt", members.str());
        }
      }
      if (dir) {
        write_text_file(*dir / "records.tsv", records.str());
        write_text_file(*dir / "summary.txt", summary.str());
      } else {
        std::cout << records.str();
      }
      std::cout << summary.str();
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ArgumentError& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kConfig;
  } catch (const NumericDomainError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const EmptyLayerError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kNumeric;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return kOk;
}
