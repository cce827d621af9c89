#include <gtest/gtest.h>

#include <filesystem>

#include "fixtures.hpp"
#include "hts/error.hpp"
#include "hts/serialize.hpp"
#include "hts/synth.hpp"

namespace hts {
namespace {

TEST(DagJson, RoundTrip) {
  const Dag g = testing::walkthrough_dag();
  EXPECT_EQ(dag_from_json(to_json(g)), g);
  EXPECT_EQ(dag_from_json(R"({"d": 3, "edges": [[0, 2]]})").edges(), (std::vector<Edge>{{0, 2}}));
}

TEST(DagJson, RejectsBadInput) {
  EXPECT_THROW(dag_from_json("{"), IoError);
  EXPECT_THROW(dag_from_json(R"({"edges": []})"), IoError);
  EXPECT_THROW(dag_from_json(R"({"d": 2, "edges": [[0, 1], [1, 0]]})"), StructuralError);
}

TEST(OrderJson, RoundTrip) {
  const LinearOrder perm({2, 0, 1});
  EXPECT_EQ(std::get<LinearOrder>(order_from_json(to_json(perm))), perm);
  const HierarchicalOrder layers({{0}, {1, 2}, {3}});
  EXPECT_EQ(std::get<HierarchicalOrder>(order_from_json(to_json(layers))), layers);
  EXPECT_THROW(order_from_json(R"({"nodes": [0]})"), IoError);
}

TEST(ParentSetsJson, UsesVertexNames) {
  ParentSets p(4);
  p.add(1, 3);
  p.add(2, 3);
  const std::string text = to_json(p);
  EXPECT_NE(text.find("\"x3\""), std::string::npos);
  EXPECT_NE(text.find("\"x1\""), std::string::npos);
  EXPECT_EQ(parent_sets_from_json(text), p);
  EXPECT_EQ(parent_sets_from_json(R"({"parents": {"x2": ["x0"]}})").of(2), (VertexSet{0}));
}

TEST(ArsJson, RoundTrip) {
  Ars ars(3);
  ars.set_ancestor(0, 1, 2);
  ars.set_unrelated(1, 2, ApRelation::unrelated_ap2, 3);
  EXPECT_EQ(ars_from_json(to_json(ars)), ars);
  EXPECT_THROW(ars_from_json(R"({"relations": [[0, 3], [3, 0]]})"), IoError);
}

TEST(DatasetCsv, RoundTripIsExact) {
  ScmConfig c;
  c.seed = 3;
  const Dataset ds = simulate(erdos_renyi_dag(4, 4.0, 1), 30, c).data;
  const std::string csv = to_csv(ds);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "x0,x1,x2,x3");
  EXPECT_EQ(dataset_from_csv(csv).values(), ds.values());
}

TEST(DatasetCsv, RejectsMalformedText) {
  EXPECT_THROW(dataset_from_csv(""), IoError);
  EXPECT_THROW(dataset_from_csv("x1,x0\n1,2\n3,4\n"), IoError);
  EXPECT_THROW(dataset_from_csv("x0,x1\n1,2\n3\n"), IoError);
  EXPECT_THROW(dataset_from_csv("x0\n1\nfoo\n"), IoError);
}

TEST(VertexNames, Parse) {
  EXPECT_EQ(vertex_name(12), "x12");
  EXPECT_EQ(parse_vertex_name("x7"), 7);
  EXPECT_THROW(parse_vertex_name("y7"), IoError);
  EXPECT_THROW(parse_vertex_name("x"), IoError);
}

TEST(Files, MissingFileReportsPath) {
  try {
    read_text_file("/nonexistent/dir/file.json");
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/dir/file.json"), std::string::npos);
  }
  const auto path = std::filesystem::temp_directory_path() / "hts_serialize_roundtrip.txt";
  write_text_file(path, "abc\n");
  EXPECT_EQ(read_text_file(path), "abc\n");
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace hts
