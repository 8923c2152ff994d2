#include "modnet/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "modnet/errors.hpp"

namespace modnet {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"values", std::move(rows)}};
}

Matrix matrix_from(const json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto& rows = j.at("values");
  if (rows.size() != m.rows()) throw FormatError("matrix row count mismatch");
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto values = rows[r].get<std::vector<double>>();
    if (values.size() != m.cols()) throw FormatError("matrix column count mismatch");
    std::copy(values.begin(), values.end(), m.row(r).begin());
  }
  return m;
}

// Runs `f`, translating JSON access errors into FormatError.
template <typename F>
auto parse_guard(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed ") + what + ": " + e.what());
  }
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(const std::string& line, char delimiter) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, delimiter)) out.push_back(field);
  if (!line.empty() && line.back() == delimiter) out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  const auto ws = " \t\r\"";
  s.erase(0, s.find_first_not_of(ws));
  const auto end = s.find_last_not_of(ws);
  s.erase(end == std::string::npos ? 0 : end + 1);
  return s;
}

}  // namespace

json to_json(const NetworkParams& net) {
  json w = json::array();
  for (const auto& m : net.weights) w.push_back(matrix_json(m));
  return json{{"layer_sizes", net.layer_sizes},
              {"depth", net.depth()},
              {"weights", std::move(w)},
              {"biases", net.biases}};
}

NetworkParams network_from_json(const json& j) {
  return parse_guard("network", [&] {
    NetworkParams net;
    net.layer_sizes = j.at("layer_sizes").get<std::vector<std::size_t>>();
    if (j.at("depth").get<std::size_t>() != net.layer_sizes.size())
      throw FormatError("depth does not match layer_sizes");
    for (const auto& m : j.at("weights")) net.weights.push_back(matrix_from(m));
    net.biases = j.at("biases").get<std::vector<std::vector<double>>>();
    try {
      net.validate();
    } catch (const Error& e) {
      throw FormatError(std::string("invalid network: ") + e.what());
    }
    return net;
  });
}

json to_json(const LayerGraph& graph) {
  json c = json::array();
  for (const auto& m : graph.connections) c.push_back(matrix_json(m));
  return json{{"xi", graph.xi}, {"unit_map", graph.unit_map}, {"connections", std::move(c)}};
}

LayerGraph graph_from_json(const json& j) {
  return parse_guard("layer graph", [&] {
    LayerGraph g;
    g.xi = j.at("xi").get<double>();
    g.unit_map = j.at("unit_map").get<std::vector<std::vector<std::size_t>>>();
    for (const auto& m : j.at("connections")) g.connections.push_back(matrix_from(m));
    try {
      g.validate();
    } catch (const Error& e) {
      throw FormatError(std::string("invalid layer graph: ") + e.what());
    }
    return g;
  });
}

json to_json(const CommunityModel& model) {
  return json{{"communities", model.communities()},
              {"prior", model.params.prior},
              {"tau", matrix_json(model.params.incoming)},
              {"tau_prime", matrix_json(model.params.outgoing)},
              {"responsibilities", matrix_json(model.responsibilities)},
              {"assignment", assign(model)},
              {"expected_log_likelihood", model.expected_log_likelihood}};
}

CommunityModel community_model_from_json(const json& j) {
  return parse_guard("community model", [&] {
    CommunityModel m;
    m.params.prior = j.at("prior").get<std::vector<double>>();
    m.params.incoming = matrix_from(j.at("tau"));
    m.params.outgoing = matrix_from(j.at("tau_prime"));
    m.responsibilities = matrix_from(j.at("responsibilities"));
    m.expected_log_likelihood = j.at("expected_log_likelihood").get<double>();
    if (m.responsibilities.cols() != m.params.prior.size() ||
        j.at("communities").get<std::size_t>() != m.params.prior.size())
      throw FormatError("community count mismatch");
    return m;
  });
}

json to_json(const ModularRepresentation& repr) {
  json coms = json::array();
  for (const auto& c : repr.communities)
    coms.push_back(json{{"layer", c.layer}, {"id", c.id}, {"members", c.members}, {"units", c.units}});
  json edges = json::array();
  for (const auto& e : repr.connections)
    edges.push_back(json{{"layer", e.layer}, {"from", e.from}, {"to", e.to}, {"density", e.density}});
  return json{{"depth", repr.depth},
              {"method", static_cast<int>(repr.method)},
              {"zeta", repr.zeta},
              {"pruned", repr.pruned},
              {"communities", std::move(coms)},
              {"bundled_connections", std::move(edges)}};
}

ModularRepresentation representation_from_json(const json& j) {
  return parse_guard("modular representation", [&] {
    ModularRepresentation r;
    r.depth = j.at("depth").get<std::size_t>();
    r.method = bundle_method_from_int(j.at("method").get<int>());
    r.zeta = j.at("zeta").get<double>();
    r.pruned = j.at("pruned").get<bool>();
    for (const auto& c : j.at("communities"))
      r.communities.push_back({c.at("layer").get<std::size_t>(), c.at("id").get<std::size_t>(),
                               c.at("members").get<std::vector<std::size_t>>(),
                               c.at("units").get<std::vector<std::size_t>>()});
    for (const auto& e : j.at("bundled_connections"))
      r.connections.push_back({e.at("layer").get<std::size_t>(), e.at("from").get<std::size_t>(),
                               e.at("to").get<std::size_t>(), e.at("density").get<double>()});
    return r;
  });
}

json to_json(const GroundTruth& t) {
  json bundles = json::array();
  for (const auto& b : t.bundles)
    bundles.push_back(json{{"layer", b.layer}, {"from_block", b.from_block}, {"to_block", b.to_block}});
  return json{{"block_size", t.block_size}, {"kappa", t.kappa},
              {"alpha", t.alpha},           {"block_of", t.block_of},
              {"generator", to_json(t.generator)}, {"bundles", std::move(bundles)}};
}

GroundTruth ground_truth_from_json(const json& j) {
  return parse_guard("ground truth", [&] {
    GroundTruth t;
    t.block_size = j.at("block_size").get<std::size_t>();
    t.kappa = j.at("kappa").get<std::size_t>();
    t.alpha = j.at("alpha").get<double>();
    t.block_of = j.at("block_of").get<std::vector<std::vector<std::size_t>>>();
    t.generator = network_from_json(j.at("generator"));
    for (const auto& b : j.at("bundles"))
      t.bundles.push_back({b.at("layer").get<std::size_t>(), b.at("from_block").get<std::size_t>(),
                           b.at("to_block").get<std::size_t>()});
    return t;
  });
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

json read_artifact(const fs::path& path, const std::string& format) {
  json j = read_json_file(path);
  return parse_guard(format.c_str(), [&] {
    if (!j.is_object() || j.at("format").get<std::string>() != format)
      throw FormatError(path.string() + " is not a " + format + " file");
    const int version = j.at("version").get<int>();
    if (version != kFormatVersion)
      throw FormatError(path.string() + ": unsupported version " + std::to_string(version));
    return j;
  });
}

void write_artifact(const fs::path& path, const std::string& format, json payload,
                    const json& provenance) {
  json doc = {{"format", format}, {"version", kFormatVersion}, {"provenance", provenance}};
  for (auto& [k, v] : payload.items()) doc[k] = std::move(v);
  write_text_file(path, doc.dump(1) + "\n");
}

void save_network(const fs::path& path, const NetworkParams& net, const json& provenance) {
  write_artifact(path, "modnet-network", to_json(net), provenance);
}
NetworkParams load_network(const fs::path& path) {
  return network_from_json(read_artifact(path, "modnet-network"));
}

void save_graph(const fs::path& path, const LayerGraph& graph, const json& provenance) {
  write_artifact(path, "modnet-layer-graph", to_json(graph), provenance);
}
LayerGraph load_graph(const fs::path& path) {
  return graph_from_json(read_artifact(path, "modnet-layer-graph"));
}

void save_communities(const fs::path& path, const std::vector<CommunityModel>& models,
                      const json& provenance) {
  json layers = json::array();
  for (const auto& m : models) layers.push_back(to_json(m));
  write_artifact(path, "modnet-communities", json{{"layers", std::move(layers)}}, provenance);
}
std::vector<CommunityModel> load_communities(const fs::path& path) {
  const json j = read_artifact(path, "modnet-communities");
  return parse_guard("communities", [&] {
    std::vector<CommunityModel> out;
    for (const auto& l : j.at("layers")) out.push_back(community_model_from_json(l));
    return out;
  });
}

void save_representation(const fs::path& path, const ModularRepresentation& repr,
                         const json& provenance) {
  write_artifact(path, "modnet-representation", to_json(repr), provenance);
}
ModularRepresentation load_representation(const fs::path& path) {
  return representation_from_json(read_artifact(path, "modnet-representation"));
}

void save_ground_truth(const fs::path& path, const GroundTruth& truth, const json& provenance) {
  write_artifact(path, "modnet-ground-truth", to_json(truth), provenance);
}
GroundTruth load_ground_truth(const fs::path& path) {
  return ground_truth_from_json(read_artifact(path, "modnet-ground-truth"));
}

Table read_table(const fs::path& path, char delimiter) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  Table t;
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": missing header row");
  for (auto& h : split(line, delimiter)) t.header.push_back(trim(h));
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(line, delimiter);
    if (fields.size() != t.header.size())
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(t.header.size()) + " fields, got " +
                        std::to_string(fields.size()));
    std::vector<std::optional<double>> row;
    for (const auto& raw : fields) {
      const std::string f = trim(raw);
      if (f.empty() || f == "NA" || f == "NaN" || f == "nan" || f == "null") {
        row.emplace_back();
        continue;
      }
      double v = 0.0;
      const char* first = f.data() + (f.front() == '+' ? 1 : 0);
      auto [ptr, ec] = std::from_chars(first, f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size())
        throw FormatError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + f +
                          "'");
      row.emplace_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

TableSchema schema_from_json(const json& j) {
  return parse_guard("schema", [&] {
    TableSchema s;
    if (j.contains("inputs")) s.inputs = j["inputs"].get<std::vector<std::string>>();
    if (j.contains("outputs")) s.outputs = j["outputs"].get<std::vector<std::string>>();
    if (j.contains("delimiter")) {
      const auto d = j["delimiter"].get<std::string>();
      if (d.size() != 1) throw ConfigError("delimiter must be a single character");
      s.delimiter = d[0];
    }
    if (j.contains("log1p")) s.log1p = j["log1p"].get<bool>();
    return s;
  });
}

TableSchema load_schema(const fs::path& path) { return schema_from_json(read_json_file(path)); }

TableIngest dataset_from_table(const Table& table, const TableSchema& schema) {
  auto resolve = [&](const std::vector<std::string>& wanted, char prefix) {
    std::vector<std::size_t> idx;
    if (wanted.empty()) {
      for (std::size_t c = 0; c < table.header.size(); ++c)
        if (!table.header[c].empty() && table.header[c][0] == prefix) idx.push_back(c);
    } else {
      for (const auto& name : wanted) {
        auto it = std::find(table.header.begin(), table.header.end(), name);
        if (it == table.header.end()) throw ConfigError("column '" + name + "' not in table");
        idx.push_back(static_cast<std::size_t>(it - table.header.begin()));
      }
    }
    if (idx.empty()) throw ConfigError(std::string("no ") + prefix + " columns found");
    return idx;
  };
  const auto in_cols = resolve(schema.inputs, 'x');
  const auto out_cols = resolve(schema.outputs, 'y');

  TableIngest result;
  std::vector<const std::vector<std::optional<double>>*> complete;
  for (const auto& row : table.rows) {
    auto has = [&](std::size_t c) { return row[c].has_value(); };
    if (std::all_of(in_cols.begin(), in_cols.end(), has) &&
        std::all_of(out_cols.begin(), out_cols.end(), has))
      complete.push_back(&row);
    else
      ++result.dropped_rows;
  }
  Dataset& d = result.data;
  d.inputs = Matrix(complete.size(), in_cols.size());
  d.outputs = Matrix(complete.size(), out_cols.size());
  for (std::size_t c : in_cols) d.input_names.push_back(table.header[c]);
  for (std::size_t c : out_cols) d.output_names.push_back(table.header[c]);
  auto value = [&](double v) {
    if (!schema.log1p) return v;
    if (v <= -1.0) throw NumericDomainError("log(1+x) needs x > -1");
    return std::log1p(v);
  };
  for (std::size_t r = 0; r < complete.size(); ++r) {
    for (std::size_t c = 0; c < in_cols.size(); ++c) d.inputs(r, c) = value(*(*complete[r])[in_cols[c]]);
    for (std::size_t c = 0; c < out_cols.size(); ++c)
      d.outputs(r, c) = value(*(*complete[r])[out_cols[c]]);
  }
  return result;
}

void write_dataset(const fs::path& path, const Dataset& data, char delimiter) {
  std::ostringstream out;
  write_dataset(out, data, delimiter);
  write_text_file(path, out.str());
}

void write_dataset(std::ostream& out, const Dataset& data, char delimiter) {
  data.validate();
  auto name = [](const std::vector<std::string>& names, char prefix, std::size_t i) {
    return i < names.size() ? names[i] : std::string(1, prefix) + std::to_string(i + 1);
  };
  for (std::size_t c = 0; c < data.input_dim(); ++c)
    out << (c ? std::string(1, delimiter) : "") << name(data.input_names, 'x', c);
  for (std::size_t c = 0; c < data.output_dim(); ++c)
    out << delimiter << name(data.output_names, 'y', c);
  out << '\n';
  for (std::size_t r = 0; r < data.size(); ++r) {
    for (std::size_t c = 0; c < data.input_dim(); ++c)
      out << (c ? std::string(1, delimiter) : "") << format_double(data.inputs(r, c));
    for (std::size_t c = 0; c < data.output_dim(); ++c)
      out << delimiter << format_double(data.outputs(r, c));
    out << '\n';
  }
}

Dataset read_dataset(const fs::path& path, const TableSchema& schema) {
  auto ingest = dataset_from_table(read_table(path, schema.delimiter), schema);
  if (ingest.dropped_rows > 0)
    throw FormatError(path.string() + ": " + std::to_string(ingest.dropped_rows) +
                      " rows have missing values");
  return std::move(ingest.data);
}

}  // namespace modnet
