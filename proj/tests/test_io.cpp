#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "modnet/errors.hpp"
#include "modnet/io.hpp"

using namespace modnet;
namespace fs = std::filesystem;

namespace {

class IoTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("modnet_io_" + std::to_string(std::random_device{}()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  fs::path path(const std::string& name) const { return dir_ / name; }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
  }

  fs::path dir_;
};

void truncate_file(const fs::path& p) {
  const auto size = fs::file_size(p);
  fs::resize_file(p, size / 2);
}

}  // namespace

TEST_F(IoTest, NetworkRoundTripIsExact) {
  TrainingConfig cfg;
  cfg.a1 = 20;
  Dataset d;
  d.inputs = Matrix(3, 2, 0.3);
  d.inputs(1, 0) = -1.7;
  d.outputs = Matrix(3, 2, 0.6);
  const NetworkParams net = train_sgd(init_params({2, 4, 2}, 3), d, cfg);
  save_network(path("net.json"), net, {{"seed", 3}});
  EXPECT_EQ(load_network(path("net.json")), net);
  EXPECT_EQ(read_artifact(path("net.json"), "modnet-network")["provenance"]["seed"], 3);
}

TEST_F(IoTest, TruncatedFileIsAFormatError) {
  save_network(path("net.json"), init_params({3, 3, 3}, 1));
  truncate_file(path("net.json"));
  EXPECT_THROW(load_network(path("net.json")), FormatError);
}

TEST_F(IoTest, WrongFormatOrVersion) {
  save_network(path("net.json"), init_params({2, 2}, 1));
  EXPECT_THROW(load_graph(path("net.json")), FormatError);
  write("v2.json", R"({"format": "modnet-network", "version": 2})");
  EXPECT_THROW(load_network(path("v2.json")), FormatError);
  write("missing.json", R"({"format": "modnet-network", "version": 1})");
  EXPECT_THROW(load_network(path("missing.json")), FormatError);
  EXPECT_THROW(load_network(path("absent.json")), IoError);
}

TEST_F(IoTest, GraphCommunitiesRepresentationRoundTrip) {
  NetworkParams net = init_params({4, 5, 3}, 2);
  const LayerGraph g = extract_adjacency(net, 0.3);
  save_graph(path("g.json"), g);
  EXPECT_EQ(load_graph(path("g.json")), g);

  EmOptions o;
  o.iterations = 20;
  o.restarts = 2;
  const auto models = detect_all_layers(g, {2}, o, 4);
  save_communities(path("c.json"), models);
  EXPECT_EQ(load_communities(path("c.json")), models);

  const auto s = structure_from_models(models);
  const auto repr = prune_unnecessary(bundle(s, g, BundleMethod::kDensity, 0.3));
  save_representation(path("r.json"), repr);
  const auto back = load_representation(path("r.json"));
  EXPECT_EQ(back, repr);
  EXPECT_EQ(back.connections, repr.connections);
}

TEST_F(IoTest, GroundTruthRoundTrip) {
  const auto [data, truth] = gen_dependent(10, 2, 5, 5);
  save_ground_truth(path("t.json"), truth);
  EXPECT_EQ(load_ground_truth(path("t.json")), truth);
}

TEST_F(IoTest, DatasetRoundTripIsExact) {
  const auto [data, truth] = gen_independent(25, 5, 11);
  write_dataset(path("d.csv"), data);
  const Dataset back = read_dataset(path("d.csv"));
  EXPECT_EQ(back.inputs, data.inputs);
  EXPECT_EQ(back.outputs, data.outputs);
  EXPECT_EQ(back.input_names, data.input_names);
}

TEST_F(IoTest, TableMissingValuesAndSchema) {
  write("t.csv", "age,x1,y1,count\n1,2,3,0\n2,NA,4,0\n3,5,,0\n4,6,7,0\n");
  const Table t = read_table(path("t.csv"));
  ASSERT_EQ(t.rows.size(), 4u);
  EXPECT_FALSE(t.rows[1][1].has_value());
  TableSchema s;
  const TableIngest in = dataset_from_table(t, s);
  EXPECT_EQ(in.dropped_rows, 2u);
  EXPECT_EQ(in.data.size(), 2u);
  EXPECT_EQ(in.data.inputs(1, 0), 6.0);

  s.inputs = {"age", "count"};
  s.outputs = {"y1"};
  s.log1p = true;
  const TableIngest logged = dataset_from_table(t, s);
  EXPECT_EQ(logged.dropped_rows, 1u);
  EXPECT_EQ(logged.data.inputs(0, 1), 0.0);  // log(1 + 0)
  EXPECT_DOUBLE_EQ(logged.data.inputs(0, 0), std::log(2.0));

  s.inputs = {"nope"};
  EXPECT_THROW(dataset_from_table(t, s), ConfigError);
}

TEST_F(IoTest, TableErrors) {
  write("bad.csv", "x1,y1\n1,abc\n");
  EXPECT_THROW(read_table(path("bad.csv")), FormatError);
  write("ragged.csv", "x1,y1\n1,2,3\n");
  EXPECT_THROW(read_table(path("ragged.csv")), FormatError);
  write("empty.csv", "");
  EXPECT_THROW(read_table(path("empty.csv")), FormatError);
  write("semi.csv", "x1;y1\n1;2\n");
  EXPECT_EQ(read_table(path("semi.csv"), ';').rows[0][1], 2.0);
}

TEST_F(IoTest, SchemaFile) {
  write("s.json", R"({"inputs": ["a"], "outputs": ["b"], "delimiter": "\t", "log1p": true})");
  const TableSchema s = load_schema(path("s.json"));
  EXPECT_EQ(s.delimiter, '\t');
  EXPECT_TRUE(s.log1p);
  write("bad.json", R"({"delimiter": "ab"})");
  EXPECT_THROW(load_schema(path("bad.json")), ConfigError);
}
