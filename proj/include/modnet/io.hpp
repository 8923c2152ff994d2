#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "modnet/community.hpp"
#include "modnet/config.hpp"
#include "modnet/dataset.hpp"
#include "modnet/graph.hpp"
#include "modnet/modular.hpp"
#include "modnet/network.hpp"
#include "modnet/synth.hpp"

namespace modnet {

// Artifact files are JSON objects of the form
//   {"format": "<kind>", "version": 1, "provenance": {...}, ...payload}
// where provenance carries the producing config and seed. Doubles are written
// in shortest round-trip form so a save/load cycle is bit-exact.
inline constexpr int kFormatVersion = 1;

nlohmann::json to_json(const NetworkParams& net);
NetworkParams network_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LayerGraph& graph);
LayerGraph graph_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CommunityModel& model);
CommunityModel community_model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ModularRepresentation& repr);
ModularRepresentation representation_from_json(const nlohmann::json& j);
nlohmann::json to_json(const GroundTruth& truth);
GroundTruth ground_truth_from_json(const nlohmann::json& j);

// Reads the file, checks "format" and "version", returns the whole document.
nlohmann::json read_artifact(const std::filesystem::path& path, const std::string& format);
void write_artifact(const std::filesystem::path& path, const std::string& format,
                    nlohmann::json payload, const nlohmann::json& provenance);

void save_network(const std::filesystem::path& path, const NetworkParams& net,
                  const nlohmann::json& provenance = nlohmann::json::object());
NetworkParams load_network(const std::filesystem::path& path);

void save_graph(const std::filesystem::path& path, const LayerGraph& graph,
                const nlohmann::json& provenance = nlohmann::json::object());
LayerGraph load_graph(const std::filesystem::path& path);

// Per-layer models together with their hard assignment.
void save_communities(const std::filesystem::path& path, const std::vector<CommunityModel>& models,
                      const nlohmann::json& provenance = nlohmann::json::object());
std::vector<CommunityModel> load_communities(const std::filesystem::path& path);

void save_representation(const std::filesystem::path& path, const ModularRepresentation& repr,
                         const nlohmann::json& provenance = nlohmann::json::object());
ModularRepresentation load_representation(const std::filesystem::path& path);

void save_ground_truth(const std::filesystem::path& path, const GroundTruth& truth,
                       const nlohmann::json& provenance = nlohmann::json::object());
GroundTruth load_ground_truth(const std::filesystem::path& path);

// Delimiter-separated text with a header row. Empty fields and NA/NaN are
// missing values.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;
};

Table read_table(const std::filesystem::path& path, char delimiter = ',');

// Which columns feed the network. Empty lists mean "columns whose names
// start with x" / "columns whose names start with y".
struct TableSchema {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  char delimiter = ',';
  bool log1p = false;
};

TableSchema schema_from_json(const nlohmann::json& j);
TableSchema load_schema(const std::filesystem::path& path);

struct TableIngest {
  Dataset data;
  std::size_t dropped_rows = 0;  // rows with a missing designated value
};

// Selects the designated columns, drops incomplete rows and applies log(1+x)
// when requested. Unknown column names throw ConfigError.
TableIngest dataset_from_table(const Table& table, const TableSchema& schema);

// Inputs first, then outputs, as "x..." / "y..." columns (or the dataset's
// own names), in shortest round-trip decimal.
void write_dataset(const std::filesystem::path& path, const Dataset& data, char delimiter = ',');
void write_dataset(std::ostream& out, const Dataset& data, char delimiter = ',');
Dataset read_dataset(const std::filesystem::path& path, const TableSchema& schema = {});

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace modnet
