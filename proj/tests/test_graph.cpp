#include <doctest.h>

#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "mlgw/graph.hpp"
#include "mlgw/rng.hpp"
#include "support/oracles.hpp"

using namespace mlgw;
using testutil::edge;
using testutil::node;

namespace {

LoadOptions plain() {
  LoadOptions o;
  o.symmetrize = false;
  o.normalize_features = false;
  return o;
}

}  // namespace

TEST_CASE("build_graph assigns dense ids in record order with a sorted vocabulary") {
  const auto g = build_graph({node("b", {1, 0}, {"zebra"}), node("a", {0, 1}, {"ant", "zebra"}),
                              node("c", {1, 1})},
                             {edge("b", "a"), edge("a", "c")}, plain());
  CHECK(g.num_nodes() == 3);
  CHECK(g.external_ids == std::vector<std::string>{"b", "a", "c"});
  CHECK(g.internal_id("a") == 1);
  CHECK(g.label_names == std::vector<std::string>{"ant", "zebra"});
  CHECK(g.labels[0] == std::vector<int>{1});
  CHECK(g.labels[1] == std::vector<int>{0, 1});
  CHECK(g.labels[2].empty());
  CHECK(g.labeled[0] == 1);
  CHECK(g.labeled[2] == 0);
  CHECK(g.has_label(1, 0));
  CHECK(!g.has_label(0, 0));
  CHECK(g.label_cardinality(1) == 2);
  CHECK(g.out_degree(0) == 1);
  CHECK(g.out_degree(2) == 0);  // directed: no symmetrize
  CHECK(g.has_node("c"));
  CHECK(!g.has_node("d"));
  CHECK_THROWS_AS(g.internal_id("d"), InputError);
}

TEST_CASE("symmetrize inserts reverse adjacency sharing the edge record") {
  LoadOptions o = plain();
  o.symmetrize = true;
  const auto g = build_graph({node("a", {1}), node("b", {2})}, {edge("a", "b", {7.0})}, o);
  CHECK(g.num_edge_records() == 1);  // one record, both directions
  REQUIRE(g.out_degree(0) == 1);
  REQUIRE(g.out_degree(1) == 1);
  CHECK(g.adjacency[0][0].neighbor == 1);
  CHECK(g.adjacency[1][0].neighbor == 0);
  CHECK(g.adjacency[0][0].edge == g.adjacency[1][0].edge);
  CHECK(g.edge_features(0, 0) == 7.0);

  // A self-loop is not doubled by symmetrization.
  const auto h = build_graph({node("a", {1})}, {edge("a", "a")}, o);
  CHECK(h.out_degree(0) == 1);
}

TEST_CASE("feature normalization scales node columns to unit norm") {
  LoadOptions o = plain();
  o.normalize_features = true;
  const auto g = build_graph({node("a", {3, 4}), node("z", {0, 0})}, {}, o);
  CHECK(g.features(0, 0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(g.features(1, 0) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(g.features.col(1).norm() == 0.0);  // zero vectors stay zero
}

TEST_CASE("edges without features are zero-filled to the edge dimension") {
  const auto g = build_graph({node("a", {1}), node("b", {2}), node("c", {3})},
                             {edge("a", "b", {1.0, 2.0, 3.0}), edge("b", "c")}, plain());
  CHECK(g.edge_feature_dim() == 3);
  CHECK(g.edge_features(0, 1) == 0.0);
  CHECK(g.edge_features(1, 1) == 0.0);
  CHECK(g.edge_features(2, 1) == 0.0);
  CHECK(g.zero_edge_features().size() == 3);
}

TEST_CASE("a single unlabeled node forms a valid graph") {
  const auto g = build_graph({node("only", {1, 2, 3})}, {}, plain());
  CHECK(g.num_nodes() == 1);
  CHECK(g.num_labels() == 0);
  CHECK(g.out_degree(0) == 0);
}

TEST_CASE("malformed inputs are rejected with the offending record") {
  CHECK_THROWS_AS(build_graph({}, {}, plain()), InputError);
  CHECK_THROWS_WITH_AS(
      build_graph({node("a", {1}), node("a", {2})}, {}, plain()),
      doctest::Contains("duplicate node id 'a'"), InputError);
  CHECK_THROWS_WITH_AS(build_graph({node("a", {1}), node("b", {1, 2})}, {}, plain()),
                       doctest::Contains("node 'b'"), InputError);
  CHECK_THROWS_WITH_AS(build_graph({node("a", {1})}, {edge("a", "ghost")}, plain()),
                       doctest::Contains("'ghost'"), InputError);
  CHECK_THROWS_WITH_AS(
      build_graph({node("a", {1}), node("b", {1})},
                  {edge("a", "b", {1.0}), edge("b", "a", {1.0, 2.0})}, plain()),
      doctest::Contains("expected 1"), InputError);

  LoadOptions expect = plain();
  expect.expect_feature_dim = 4;
  CHECK_THROWS_WITH_AS(build_graph({node("a", {1})}, {}, expect),
                       doctest::Contains("expected 4"), InputError);
}

TEST_CASE("file loading reports 1-based line numbers for bad records") {
  testutil::TempDir dir("graph_lines");
  const std::string nodes_path = dir.file("nodes.jsonl");
  const std::string edges_path = dir.file("edges.jsonl");
  {
    std::ofstream out(nodes_path);
    out << R"({"id":"a","features":[1.0]})" << "\n";
    out << "\n";  // blank lines are skipped without advancing the record count
    out << R"({"id":"b","features":"oops"})" << "\n";
  }
  {
    std::ofstream out(edges_path);
  }
  CHECK_THROWS_WITH_AS(load_graph(nodes_path, edges_path, plain()),
                       doctest::Contains((nodes_path + ":3").c_str()), InputError);
  CHECK_THROWS_WITH_AS(load_graph(dir.file("missing.jsonl"), edges_path, plain()),
                       doctest::Contains("missing.jsonl"), InputError);
}

TEST_CASE("save and load round-trip the graph exactly") {
  const auto g = testutil::random_graph(17, 5, 2, 3, /*seed=*/31);
  testutil::TempDir dir("graph_rt");
  save_graph(g, dir.file("nodes.jsonl"), dir.file("edges.jsonl"));

  LoadOptions o;
  o.symmetrize = g.symmetrized;
  o.normalize_features = false;
  const auto h = load_graph(dir.file("nodes.jsonl"), dir.file("edges.jsonl"), o);

  CHECK(h.external_ids == g.external_ids);
  CHECK(h.label_names == g.label_names);
  CHECK(h.labels == g.labels);
  CHECK(h.labeled == g.labeled);
  CHECK(testutil::bits_equal(h.features, g.features));  // JSON doubles round-trip
  CHECK(testutil::bits_equal(h.edge_features, g.edge_features));
  CHECK(h.edge_endpoints == g.edge_endpoints);
  REQUIRE(h.adjacency.size() == g.adjacency.size());
  for (std::size_t v = 0; v < g.adjacency.size(); ++v) {
    REQUIRE(h.adjacency[v].size() == g.adjacency[v].size());
    for (std::size_t i = 0; i < g.adjacency[v].size(); ++i) {
      CHECK(h.adjacency[v][i].neighbor == g.adjacency[v][i].neighbor);
      CHECK(h.adjacency[v][i].edge == g.adjacency[v][i].edge);
    }
  }

  // Normalized features re-load idempotently: normalizing a unit vector is a
  // no-op, so a second save/load cycle is byte-stable.
  LoadOptions on = o;
  on.normalize_features = true;
  const auto g1 = load_graph(dir.file("nodes.jsonl"), dir.file("edges.jsonl"), on);
  save_graph(g1, dir.file("n2.jsonl"), dir.file("e2.jsonl"));
  const auto g2 = load_graph(dir.file("n2.jsonl"), dir.file("e2.jsonl"), on);
  CHECK(testutil::bits_equal(g1.features, g2.features));
}

TEST_CASE("a citation-scale graph loads with the expected shape") {
  // Shape mirrors a familiar four-area bibliography benchmark: 28,702 nodes,
  // 68,335 undirected edges, 4 labels, mean label cardinality about 1.18.
  const int n = 28702, m = 68335, L = 4;
  Rng rng(2024);
  std::vector<NodeRecord> nodes;
  nodes.reserve(n);
  std::vector<EdgeRecord> edges;
  edges.reserve(m);
  std::int64_t label_count = 0;
  for (int v = 0; v < n; ++v) {
    std::vector<double> f = {rng.normal(), rng.normal(), rng.normal(), rng.normal()};
    std::vector<std::string> ls = {"area" + std::to_string(v % L)};
    if (rng.uniform01() < 0.18) ls.push_back("area" + std::to_string((v + 1) % L));
    label_count += static_cast<std::int64_t>(ls.size());
    nodes.push_back(node("p" + std::to_string(v), std::move(f), std::move(ls)));
  }
  for (int e = 0; e < m; ++e) {
    const int a = static_cast<int>(rng.uniform_int(n));
    int b = static_cast<int>(rng.uniform_int(n));
    if (a == b) b = (b + 1) % n;
    edges.push_back(edge("p" + std::to_string(a), "p" + std::to_string(b)));
  }

  LoadOptions o;
  o.symmetrize = true;
  o.normalize_features = true;
  const auto g = build_graph(nodes, edges, o);
  CHECK(g.num_nodes() == n);
  CHECK(g.num_edge_records() == m);
  CHECK(g.num_labels() == L);
  const double cardinality = static_cast<double>(label_count) / n;
  CHECK(cardinality == doctest::Approx(1.18).epsilon(0.01));
  std::int64_t adj_total = 0;
  for (NodeId v = 0; v < g.num_nodes(); ++v) adj_total += g.out_degree(v);
  CHECK(adj_total == 2 * static_cast<std::int64_t>(m));  // no self-loops were generated
}

TEST_CASE("remove_nodes drops incident edges and remaps ids in order") {
  // Triangle a-b-c (symmetrized); removing c leaves the a-b edge intact.
  LoadOptions o = plain();
  o.symmetrize = true;
  const auto g = build_graph(
      {node("a", {1}, {"x"}), node("b", {2}, {"y"}), node("c", {3}, {"x", "y"})},
      {edge("a", "b"), edge("b", "c"), edge("c", "a")}, o);

  const auto [h, tr] = remove_nodes(g, {2});
  CHECK(h.num_nodes() == 2);
  CHECK(h.external_ids == std::vector<std::string>{"a", "b"});
  CHECK(h.num_edge_records() == 1);
  CHECK(h.edge_endpoints[0] == std::make_pair(NodeId{0}, NodeId{1}));
  CHECK(h.out_degree(0) == 1);
  CHECK(h.out_degree(1) == 1);
  CHECK(h.label_names == g.label_names);  // vocabulary survives even if a label empties
  CHECK(tr.old_to_new == std::vector<NodeId>{0, 1, -1});
  CHECK(tr.new_to_old == std::vector<NodeId>{0, 1});
  CHECK(testutil::bits_equal(h.features.col(1), g.features.col(1)));

  // Removing the middle node of a path disconnects the ends.
  const auto path = build_graph({node("a", {1}), node("b", {2}), node("c", {3})},
                                {edge("a", "b"), edge("b", "c")}, o);
  const auto [p2, tr2] = remove_nodes(path, {1});
  CHECK(p2.num_nodes() == 2);
  CHECK(p2.num_edge_records() == 0);
  CHECK(p2.out_degree(0) == 0);
  CHECK(p2.out_degree(1) == 0);
  CHECK(tr2.old_to_new == std::vector<NodeId>{0, -1, 1});

  CHECK_THROWS_AS(remove_nodes(g, {99}), InputError);
  CHECK_THROWS_AS(remove_nodes(g, {0, 1, 2}), InputError);  // nothing would remain
}
