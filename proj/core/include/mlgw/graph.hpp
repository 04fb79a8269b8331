#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mlgw/errors.hpp"

namespace mlgw {

using NodeId = std::int32_t;  // dense internal id, assigned in file order
using EdgeId = std::int32_t;  // dense edge-record id, assigned in file order

struct AdjEntry {
  NodeId neighbor;
  EdgeId edge;  // -1 only for synthesized dead-end self-transitions
};

struct NodeRecord {
  std::string id;
  std::vector<double> features;
  std::vector<std::string> labels;  // empty = unlabeled
};

struct EdgeRecord {
  std::string src, dst;
  std::vector<double> features;  // empty = zero-filled to the edge feature dim
};

struct LoadOptions {
  bool symmetrize = false;        // insert (v,u) for every (u,v), sharing the record
  bool normalize_features = true; // scale nonzero node features to unit norm
  int expect_feature_dim = -1;    // -1: infer from the first node record
  int expect_edge_feature_dim = -1;  // -1: infer from the first edge record with features
};

/* Immutable attributed multigraph. Directed storage; undirected inputs are
   handled by the symmetrize-on-load option. Node/edge features are dense
   columns; labels are kept as sorted index lists against a sorted name
   vocabulary. Construction functions validate all invariants; treat the
   result as read-only. */
struct AttributedGraph {
  // nodes
  std::vector<std::string> external_ids;             // internal id -> external id
  std::unordered_map<std::string, NodeId> id_of;     // external id -> internal id
  Eigen::MatrixXd features;                          // F x n, one column per node
  std::vector<std::vector<int>> labels;              // sorted label indices per node
  std::vector<char> labeled;                         // labeled mask
  std::vector<std::string> label_names;              // sorted vocabulary

  // edges
  Eigen::MatrixXd edge_features;                     // Fe x m, one column per record
  std::vector<std::pair<NodeId, NodeId>> edge_endpoints;  // record direction
  std::vector<std::vector<AdjEntry>> adjacency;      // out-neighbors, insertion order
  bool symmetrized = false;

  int num_nodes() const { return static_cast<int>(external_ids.size()); }
  int num_edge_records() const { return static_cast<int>(edge_endpoints.size()); }
  int num_labels() const { return static_cast<int>(label_names.size()); }
  int feature_dim() const { return static_cast<int>(features.rows()); }
  int edge_feature_dim() const { return static_cast<int>(edge_features.rows()); }

  NodeId internal_id(const std::string& external) const;  // throws InputError
  bool has_node(const std::string& external) const { return id_of.count(external) > 0; }
  bool has_label(NodeId v, int label) const;
  int out_degree(NodeId v) const { return static_cast<int>(adjacency[v].size()); }
  int label_cardinality(NodeId v) const { return static_cast<int>(labels[v].size()); }

  // Zero vector of edge-feature size, used for missing/synthetic edges.
  Eigen::VectorXd zero_edge_features() const { return Eigen::VectorXd::Zero(edge_features.rows()); }
};

// Validating constructors. Both throw InputError with the offending record
// (and, for files, the 1-based line number) on malformed input.
AttributedGraph build_graph(const std::vector<NodeRecord>& nodes,
                            const std::vector<EdgeRecord>& edges, const LoadOptions& options);
AttributedGraph load_graph(const std::string& nodes_path, const std::string& edges_path,
                           const LoadOptions& options);

// Writes the graph back out in the same JSON Lines schema it is loaded from.
void save_graph(const AttributedGraph& g, const std::string& nodes_path,
                const std::string& edges_path);

/* Node removal for inductive evaluation: returns the graph without the given
   nodes and their incident edges, plus the id translation. Remaining nodes
   keep their relative order and external ids. */
struct NodeTranslation {
  std::vector<NodeId> old_to_new;  // -1 for removed nodes
  std::vector<NodeId> new_to_old;
};
std::pair<AttributedGraph, NodeTranslation> remove_nodes(const AttributedGraph& g,
                                                         const std::vector<NodeId>& to_remove);

}  // namespace mlgw
