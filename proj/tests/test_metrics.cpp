#include <gtest/gtest.h>
#include <random>
#include <dynleiden/metrics.hpp>
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace dynleiden;

TEST(Modularity, SingleCommunityIsZero) {
  EXPECT_NEAR(modularity(fixtures::tri(), Membership{0, 0, 0}), 0.0, 1e-15);
}

TEST(Modularity, SingleEdgeSingletons) {
  Graph g = build_graph({{0, 1, 1}}, 2);
  EXPECT_DOUBLE_EQ(modularity(g, Membership{0, 1}), -0.5);
}

TEST(Modularity, TwoTriangles) {
  Graph g = fixtures::k3k3();
  Membership m{0, 0, 0, 3, 3, 3};
  double expected = oracle::modularity(oracle::dense(g), m);
  EXPECT_NEAR(expected, 5.0 / 14.0, 1e-12);
  EXPECT_NEAR(modularity(g, m), expected, 1e-12);
}

TEST(Modularity, RejectsBadIds) {
  EXPECT_THROW(modularity(fixtures::tri(), Membership{0, 0, 3}), input_error);
  EXPECT_THROW(modularity(fixtures::tri(), Membership{0, 0}), input_error);
}

TEST(DeltaModularity, OwnCommunityIsZero) {
  EXPECT_EQ(delta_modularity(fixtures::k3k3(), Membership{0, 0, 0, 3, 3, 3}, 2, 0), 0.0);
}

TEST(DeltaModularity, MatchesDifferenceOfModularity) {
  Graph g = fixtures::k3k3();
  Membership before{0, 0, 0, 3, 3, 3}, after{0, 0, 3, 3, 3, 3};
  auto A = oracle::dense(g);
  double expected = oracle::modularity(A, after) - oracle::modularity(A, before);
  EXPECT_NEAR(delta_modularity(g, before, 2, 3), expected, 1e-12);
}

TEST(DeltaModularity, ReverseMoveNegates) {
  Graph g = fixtures::k3k3();
  Membership before{0, 0, 0, 3, 3, 3}, after{0, 0, 3, 3, 3, 3};
  EXPECT_NEAR(delta_modularity(g, after, 2, 0), -delta_modularity(g, before, 2, 3), 1e-12);
}

TEST(DeltaModularity, RandomMovesMatchOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 2 + rng() % 40;
    Graph g = fixtures::random_weighted(n, 0.25, 5, rng);
    if (g.total_weight() == 0) continue;
    Membership m = fixtures::random_membership(n, 1 + rng() % n, rng);
    vertex_id i = vertex_id(rng() % n), c = m[rng() % n];
    Membership moved = m;
    moved[i] = c;
    auto A = oracle::dense(g);
    double expected = oracle::modularity(A, moved) - oracle::modularity(A, m);
    EXPECT_NEAR(delta_modularity(g, m, i, c), expected, 1e-9);
  }
}

TEST(Disconnected, Basics) {
  Graph g = fixtures::k3k3();
  EXPECT_EQ(disconnected_count(g, Membership{0, 1, 2, 3, 4, 5}), 0u);
  EXPECT_EQ(disconnected_count(g, Membership{0, 0, 0, 3, 3, 3}), 0u);
  Graph h = apply_batch(g, {{{2, 3, 1}, {3, 2, 1}}, {}});
  EXPECT_EQ(disconnected_count(h, Membership{0, 0, 0, 0, 0, 0}), 1u);
}

TEST(Disconnected, AgreesWithUnionFind) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 256;
    Graph g = fixtures::random_weighted(n, 3.0 / double(n), 1, rng);
    Membership m = fixtures::random_membership(n, 1 + rng() % std::max<std::size_t>(1, n / 4), rng);
    EXPECT_EQ(disconnected_count(g, m), oracle::disconnected(oracle::dense(g), m));
  }
}

TEST(MatchPercent, Basics) {
  EXPECT_EQ(match_percent(Membership{1, 2, 3, 4}, Membership{1, 2, 3, 4}), 100);
  EXPECT_EQ(match_percent(Membership{1, 2, 3, 4}, Membership{0, 0, 0, 0}), 0);
  EXPECT_EQ(match_percent(Membership{1, 2, 3, 4}, Membership{1, 2, 0, 0}), 50);
  EXPECT_THROW(match_percent(Membership{1}, Membership{1, 2}), input_error);
}
