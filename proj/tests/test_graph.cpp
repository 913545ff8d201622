#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "cbim/graph.hpp"
#include "support.hpp"

using namespace cbim;

TEST_CASE("directed edge list loads verbatim") {
  const auto path = testing::write_file("tiny_directed.txt", "0 1\n1 2\n");
  const WeightedGraph g = load_edge_list(path, true);
  CHECK(g.node_count == 3);
  CHECK(g.arc_count() == 2);
  CHECK(g.out[0].size() == 1);
  CHECK(g.out[0][0].to == 1);
  CHECK(g.out[1][0].to == 2);
  CHECK(g.out[2].empty());
}

TEST_CASE("undirected line yields both arcs") {
  const auto path = testing::write_file("tiny_undirected.txt", "0 1\n");
  const WeightedGraph g = load_edge_list(path, false);
  CHECK(g.node_count == 2);
  CHECK(g.arc_count() == 2);
  CHECK(g.out[0][0].to == 1);
  CHECK(g.out[1][0].to == 0);
}

TEST_CASE("comments are skipped") {
  const auto path = testing::write_file("commented.txt", "# comment\n0 1\n");
  const WeightedGraph g = load_edge_list(path, false);
  CHECK(g.node_count == 2);
  CHECK(g.arc_count() == 2);
}

TEST_CASE("self-loops dropped, duplicate arcs collapsed, ids re-mapped densely") {
  const auto path = testing::write_file("messy.txt", "7 7\n100 7\n100 7\n7 100\n42 100\n");
  const WeightedGraph g = load_edge_list(path, true);
  CHECK(g.node_count == 3);
  // first appearance order over kept arcs: 100, 7, 42
  CHECK(g.original_id == std::vector<long long>{100, 7, 42});
  CHECK(g.arc_count() == 3);  // 100->7, 7->100, 42->100
}

TEST_CASE("malformed line reports its number") {
  const auto path = testing::write_file("broken.txt", "0 1\n2 x\n");
  CHECK_THROWS_WITH_AS(load_edge_list(path, true), doctest::Contains(":2:"), DataError);
}

TEST_CASE("extra fields on a line are rejected") {
  const auto path = testing::write_file("wide.txt", "0 1 0.5\n");
  CHECK_THROWS_AS(load_edge_list(path, true), DataError);
}

TEST_CASE("empty graph is an error") {
  const auto path = testing::write_file("only_comments.txt", "# nothing\n");
  CHECK_THROWS_AS(load_edge_list(path, true), DataError);
  CHECK_THROWS_AS(load_edge_list("/nonexistent/file.txt", true), DataError);
}

TEST_CASE("loading the same file twice is idempotent") {
  const auto path = testing::write_pa_graph("idempotent.txt", 40, 2, 11);
  const WeightedGraph a = assign_weights(load_edge_list(path, false));
  const WeightedGraph b = assign_weights(load_edge_list(path, false));
  CHECK(a.node_count == b.node_count);
  REQUIRE(a.arc_count() == b.arc_count());
  for (int u = 0; u < a.node_count; ++u) {
    REQUIRE(a.out[u].size() == b.out[u].size());
    for (std::size_t e = 0; e < a.out[u].size(); ++e) {
      CHECK(a.out[u][e].to == b.out[u][e].to);
      CHECK(a.out[u][e].weight == b.out[u][e].weight);
    }
  }
}

TEST_CASE("two arcs into one node split the weight evenly") {
  const auto path = testing::write_file("shared_target.txt", "0 2\n1 2\n");
  const WeightedGraph g = assign_weights(load_edge_list(path, true));
  // node "2" was interned second, so it is dense id 1
  REQUIRE(g.original_id[1] == 2);
  REQUIRE(g.in[1].size() == 2);
  CHECK(g.in[1][0].weight == doctest::Approx(0.5));
  CHECK(g.in[1][1].weight == doctest::Approx(0.5));
}

TEST_CASE("single arc carries weight one") {
  const auto path = testing::write_file("single_arc.txt", "0 1\n");
  const WeightedGraph g = assign_weights(load_edge_list(path, true));
  CHECK(g.in[1][0].weight == 1.0);
}

TEST_CASE("undirected triangle weights are all one half") {
  const auto path = testing::write_file("triangle.txt", "0 1\n1 2\n2 0\n");
  const WeightedGraph g = assign_weights(load_edge_list(path, false));
  for (int v = 0; v < 3; ++v) {
    for (const Arc& arc : g.in[v]) CHECK(arc.weight == doctest::Approx(0.5));
  }
}

TEST_CASE("incoming weights sum to one on every reachable node") {
  const auto path = testing::write_pa_graph("weight_sums.txt", 120, 3, 5);
  const WeightedGraph g = assign_weights(load_edge_list(path, false));
  for (int v = 0; v < g.node_count; ++v) {
    if (g.in[v].empty()) continue;
    Scalar sum = 0.0;
    for (const Arc& arc : g.in[v]) sum += arc.weight;
    CHECK(std::abs(sum - 1.0) <= kWeightSumTol);
  }
}

TEST_CASE("threshold draws are reproducible and stream-separated") {
  const auto path = testing::write_file("thresholds_graph.txt", "0 1\n1 2\n2 3\n");
  const WeightedGraph g = load_edge_list(path, true);
  const RngLabel label{123, Stream::kThresholds, 4, 7};
  const ThresholdDraw a = sample_thresholds(g, label);
  const ThresholdDraw b = sample_thresholds(g, label);
  CHECK((a.xi.array() == b.xi.array()).all());
  CHECK((a.xi.array() >= 0.0).all());
  CHECK((a.xi.array() < 1.0).all());

  const ThresholdDraw c = sample_thresholds(g, RngLabel{123, Stream::kThresholds, 4, 8});
  CHECK_FALSE((a.xi.array() == c.xi.array()).all());
}

TEST_CASE("threshold sample mean matches the uniform law") {
  WeightedGraph g;
  g.node_count = 100000;
  g.out.resize(g.node_count);
  g.in.resize(g.node_count);
  const ThresholdDraw draw = sample_thresholds(g, RngLabel{99, Stream::kThresholds, 1, 1});
  const Scalar mean = draw.xi.mean();
  CHECK(mean >= 0.49);
  CHECK(mean <= 0.51);
}

TEST_CASE("star center is the top seed") {
  const auto path = testing::write_file("star.txt", "0 1\n0 2\n0 3\n0 4\n0 5\n");
  const WeightedGraph g = load_edge_list(path, false);
  const SeedSet seeds = select_seeds_by_degree(g, 1);
  CHECK(seeds.nodes == std::vector<int>{0});
}

TEST_CASE("degree ties break toward the lower original id") {
  const auto path = testing::write_file("path3.txt", "0 1\n1 2\n");
  const WeightedGraph g = load_edge_list(path, false);
  const SeedSet seeds = select_seeds_by_degree(g, 2);
  CHECK(seeds.nodes == std::vector<int>{1, 0});
}

TEST_CASE("seed selection matches a brute-force degree sort") {
  const auto path = testing::write_file("random5.txt", "0 1\n0 2\n0 3\n1 2\n3 4\n");
  const WeightedGraph g = load_edge_list(path, false);
  const SeedSet seeds = select_seeds_by_degree(g, 3);

  // independent oracle: exhaustive sort of (degree, id) pairs
  std::vector<int> order(g.node_count);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto da = g.out[a].size(), db = g.out[b].size();
    if (da != db) return da > db;
    return g.original_id[a] < g.original_id[b];
  });
  CHECK(seeds.nodes == std::vector<int>(order.begin(), order.begin() + 3));
}

TEST_CASE("seed selection ignores edge-list permutation") {
  const auto a = testing::write_file("perm_a.txt", "0 1\n0 2\n3 0\n1 2\n");
  const auto b = testing::write_file("perm_b.txt", "1 2\n3 0\n0 2\n0 1\n");
  const WeightedGraph ga = load_edge_list(a, false);
  const WeightedGraph gb = load_edge_list(b, false);
  // map dense ids back to original ids before comparing
  const SeedSet sa = select_seeds_by_degree(ga, 3);
  const SeedSet sb = select_seeds_by_degree(gb, 3);
  for (int j = 0; j < 3; ++j) CHECK(ga.original_id[sa[j]] == gb.original_id[sb[j]]);
}

TEST_CASE("seed count must be positive and within the node count") {
  const auto path = testing::write_file("bounds.txt", "0 1\n");
  const WeightedGraph g = load_edge_list(path, false);
  CHECK_THROWS_AS(select_seeds_by_degree(g, 0), std::invalid_argument);
  CHECK_THROWS_AS(select_seeds_by_degree(g, -1), std::invalid_argument);
  CHECK_THROWS_AS(select_seeds_by_degree(g, 3), std::invalid_argument);
}
