#include <gtest/gtest.h>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <unistd.h>
#include <dynleiden/dynamic.hpp>
#include <dynleiden/io.hpp>
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dynleiden;
namespace fs = std::filesystem;

namespace {
class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("dynleiden-io-" + std::to_string(::getpid()) + "-" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& text) {
    auto p = (dir_ / name).string();
    std::ofstream(p) << text;
    return p;
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::size_t error_line(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const parse_error& e) {
    return e.line();
  }
  return 0;
}
}  // namespace


#pragma region GRAPH FILES
using GraphFiles = TempDir;

TEST_F(GraphFiles, EdgeListTriangle) {
  auto p = write("tri.edges", "# triangle\n0 1\n1 2 1.0\n% other comment\n2 0\n\n");
  Graph g = load_graph(p);
  EXPECT_EQ(oracle::dense(g), oracle::dense(fixtures::tri()));
}

TEST_F(GraphFiles, MatrixMarketTriangle) {
  auto p = write("tri.mtx", "%%MatrixMarket matrix coordinate pattern symmetric\n% c\n3 3 3\n2 1\n3 1\n3 2\n");
  Graph g = load_graph(p);
  EXPECT_EQ(oracle::dense(g), oracle::dense(fixtures::tri()));
}

TEST_F(GraphFiles, MatrixMarketWeightedDropsSelfLoops) {
  auto p = write("w.mtx", "%%MatrixMarket matrix coordinate real general\n3 3 3\n1 2 2.5\n2 2 7\n3 1 1\n");
  Graph g = load_graph(p, GraphFormat::matrix_market);
  EXPECT_EQ(g.size(), 4u);
  EXPECT_FLOAT_EQ(*g.edge_weight(1, 0), 2.5f);
  EXPECT_FALSE(g.has_edge(1, 1));
}

TEST_F(GraphFiles, TruncatedMatrixMarketReportsLine) {
  auto p = write("t.mtx", "%%MatrixMarket matrix coordinate pattern symmetric\n4 4 3\n2 1\n3 1\n");
  EXPECT_EQ(error_line([&] { load_graph(p); }), 5u);
  auto q = write("x.mtx", "%%MatrixMarket matrix coordinate pattern symmetric\n3 3 1\n2 1\n3 1\n");
  EXPECT_EQ(error_line([&] { load_graph(q); }), 4u);
}

TEST_F(GraphFiles, BadEdgeListLines) {
  EXPECT_EQ(error_line([&] { load_graph(write("a.edges", "0 1\n1 x\n")); }), 2u);
  EXPECT_EQ(error_line([&] { load_graph(write("b.edges", "0 1\n1 2 -1\n")); }), 2u);
  EXPECT_EQ(error_line([&] { load_graph(write("c.edges", "0 1 2 3\n")); }), 1u);
  EXPECT_THROW(load_graph(path("missing.edges")), input_error);
}

TEST_F(GraphFiles, EdgeListRoundTrip) {
  std::mt19937_64 rng(3);
  Graph g = fixtures::random_weighted(40, 0.2, 5, rng);
  write_edge_list(path("g.edges"), g);
  Graph h = load_graph(path("g.edges"));
  EXPECT_EQ(oracle::dense(h), oracle::dense(g));
}

TEST(Format, Names) {
  EXPECT_EQ(parse_format("mtx"), GraphFormat::matrix_market);
  EXPECT_EQ(parse_format("edge-list"), GraphFormat::edge_list);
  EXPECT_THROW(parse_format("csv"), input_error);
}

TEST(Samples, Load) {
  Graph g = load_graph(DYNLEIDEN_SAMPLES "/k3k3.edges");
  EXPECT_EQ(oracle::dense(g), oracle::dense(fixtures::k3k3()));
  auto b = load_batch(DYNLEIDEN_SAMPLES "/k3k3.batch", g);
  EXPECT_EQ(b.undirected_size(), 3u);
  EXPECT_EQ(oracle::dense(load_graph(DYNLEIDEN_SAMPLES "/triangle.mtx")), oracle::dense(fixtures::tri()));
}
#pragma endregion


#pragma region TEMPORAL
using Temporal = TempDir;

TEST_F(Temporal, OrdersByTimeAndSkipsDuplicates) {
  auto p = write("s.txt", "0 1 5\n1 2 1\n2 3 2\n3 3 3\n2 1 4\n3 0 6\n0 2 7\n");
  auto t = load_temporal(p, 0.5, 1, 2);
  EXPECT_EQ(t.stream_edges, 6u);
  // By time: (1,2) (2,3) (2,1) | (0,1) (3,0) (0,2)
  EXPECT_EQ(t.base.size(), 4u);
  EXPECT_TRUE(t.base.has_edge(1, 2) && t.base.has_edge(2, 3));
  ASSERT_EQ(t.batches.size(), 2u);
  EXPECT_EQ(t.batches[0].insertions, (std::vector<Edge>{{0, 1, 1}, {1, 0, 1}}));
  EXPECT_EQ(t.batches[1].insertions, (std::vector<Edge>{{0, 3, 1}, {3, 0, 1}}));
  EXPECT_TRUE(t.batches[1].deletions.empty());
}

TEST_F(Temporal, ShortStreamFails) {
  auto p = write("s.txt", "0 1 1\n1 2 2\n2 3 3\n");
  EXPECT_THROW(load_temporal(p, 0.5, 2, 2), input_error);
}

TEST_F(Temporal, Sample) {
  auto t = load_temporal(DYNLEIDEN_SAMPLES "/temporal_600.txt", 0.9, 5, 100);
  EXPECT_EQ(t.batches.size(), 100u);
  Graph g = t.base;
  for (const auto& b : t.batches) g = apply_batch(g, b);
  EXPECT_EQ(g.size(), t.base.size() + 1000u);
}
#pragma endregion


#pragma region BATCH FILES
using BatchFiles = TempDir;

TEST_F(BatchFiles, PlusMinusLines) {
  Graph g = fixtures::k3k3();
  auto b = load_batch(write("b.txt", "# c\n- 2 3\n+ 0 4 2.5\n"), g);
  EXPECT_EQ(b.deletions, (std::vector<Edge>{{2, 3, 1}, {3, 2, 1}}));
  EXPECT_EQ(b.insertions, (std::vector<Edge>{{0, 4, 2.5f}, {4, 0, 2.5f}}));
}

TEST_F(BatchFiles, Errors) {
  Graph g = fixtures::k3k3();
  EXPECT_EQ(error_line([&] { load_batch(write("a.txt", "+ 0 4\n- 0 4\n"), g); }), 2u);
  EXPECT_EQ(error_line([&] { load_batch(write("b.txt", "* 0 4\n"), g); }), 1u);
  EXPECT_EQ(error_line([&] { load_batch(write("c.txt", "+ 0 9\n"), g); }), 1u);
}
#pragma endregion


#pragma region RESULTS
TEST(Results, HeaderAndEmptyFields) {
  ResultRow r;
  r.graph = "a,b";
  r.algorithm = "df";
  r.batch_fraction = 0.001;
  r.trial = 2;
  r.threads = 4;
  r.modularity = 0.5;
  r.disconnected = 0;
  r.affected_fraction = 0.25;
  std::ostringstream out;
  write_results(out, {r});
  EXPECT_EQ(out.str(),
            "graph,algorithm,batch_fraction,trial,threads,runtime_ms,modularity,disconnected,"
            "affected_fraction,split_fraction,refine_fraction,match_percent\n"
            "\"a,b\",df,0.001,2,4,,0.5,0,0.25,,,\n");
}
#pragma endregion


#pragma region SNAPSHOT
using Snapshot = TempDir;

TEST_F(Snapshot, RoundTrip) {
  Graph g = fixtures::k3k3();
  auto x = DynamicContext::from_membership(g, {0, 0, 0, 3, 3, 3});
  x.delta_sigma[3] = 0.75;
  save_context(path("s.bin"), x);
  auto y = load_context(path("s.bin"));
  EXPECT_EQ(y.membership, x.membership);
  EXPECT_EQ(y.K, x.K);
  EXPECT_EQ(y.sigma, x.sigma);
  EXPECT_EQ(y.delta_sigma, x.delta_sigma);
}

TEST_F(Snapshot, RejectsOtherFiles) {
  EXPECT_THROW(load_context(write("junk.bin", "not a snapshot at all")), input_error);
  Graph g = fixtures::tri();
  save_context(path("s.bin"), DynamicContext::from_membership(g, {0, 0, 0}));
  fs::resize_file(path("s.bin"), fs::file_size(path("s.bin")) - 4);
  EXPECT_THROW(load_context(path("s.bin")), input_error);
}
#pragma endregion
