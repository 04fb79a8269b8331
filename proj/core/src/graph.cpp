#include "mlgw/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace mlgw {

using nlohmann::json;

NodeId AttributedGraph::internal_id(const std::string& external) const {
  auto it = id_of.find(external);
  if (it == id_of.end()) throw InputError("unknown node id '" + external + "'");
  return it->second;
}

bool AttributedGraph::has_label(NodeId v, int label) const {
  const auto& ls = labels[v];
  return std::binary_search(ls.begin(), ls.end(), label);
}

AttributedGraph build_graph(const std::vector<NodeRecord>& nodes,
                            const std::vector<EdgeRecord>& edges, const LoadOptions& options) {
  if (nodes.empty()) throw InputError("graph must contain at least one node");

  AttributedGraph g;
  g.symmetrized = options.symmetrize;

  // Feature dimension: explicit expectation wins, otherwise the first record.
  int fdim = options.expect_feature_dim;
  if (fdim < 0) fdim = static_cast<int>(nodes.front().features.size());

  // Label vocabulary: sorted union of all label names.
  std::set<std::string> vocab;
  for (const auto& n : nodes) vocab.insert(n.labels.begin(), n.labels.end());
  g.label_names.assign(vocab.begin(), vocab.end());
  std::unordered_map<std::string, int> label_index;
  for (std::size_t i = 0; i < g.label_names.size(); ++i)
    label_index[g.label_names[i]] = static_cast<int>(i);

  g.features.resize(fdim, static_cast<Eigen::Index>(nodes.size()));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (g.id_of.count(n.id)) throw InputError("duplicate node id '" + n.id + "'");
    if (static_cast<int>(n.features.size()) != fdim) {
      throw InputError("node '" + n.id + "' has " + std::to_string(n.features.size()) +
                       " features, expected " + std::to_string(fdim));
    }
    const NodeId id = static_cast<NodeId>(i);
    g.id_of[n.id] = id;
    g.external_ids.push_back(n.id);
    for (int j = 0; j < fdim; ++j) g.features(j, id) = n.features[j];
    if (options.normalize_features) {
      const double norm = g.features.col(id).norm();
      // Skip near-unit norms so normalization is idempotent (load -> save ->
      // load reproduces features bit for bit).
      if (norm > 0.0 && std::abs(norm - 1.0) > 1e-12) g.features.col(id) /= norm;
    }

    std::vector<int> ls;
    for (const auto& name : n.labels) ls.push_back(label_index.at(name));
    std::sort(ls.begin(), ls.end());
    ls.erase(std::unique(ls.begin(), ls.end()), ls.end());
    g.labels.push_back(std::move(ls));
    g.labeled.push_back(n.labels.empty() ? 0 : 1);
  }

  int edim = options.expect_edge_feature_dim;
  if (edim < 0) {
    edim = 0;
    for (const auto& e : edges) {
      if (!e.features.empty()) {
        edim = static_cast<int>(e.features.size());
        break;
      }
    }
  }

  g.adjacency.resize(nodes.size());
  g.edge_features.resize(edim, static_cast<Eigen::Index>(edges.size()));
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    auto su = g.id_of.find(e.src);
    if (su == g.id_of.end()) throw InputError("edge endpoint '" + e.src + "' is not a node");
    auto sv = g.id_of.find(e.dst);
    if (sv == g.id_of.end()) throw InputError("edge endpoint '" + e.dst + "' is not a node");
    if (!e.features.empty() && static_cast<int>(e.features.size()) != edim) {
      throw InputError("edge " + e.src + "->" + e.dst + " has " +
                       std::to_string(e.features.size()) + " features, expected " +
                       std::to_string(edim));
    }
    const EdgeId eid = static_cast<EdgeId>(i);
    for (int j = 0; j < edim; ++j) {
      g.edge_features(j, eid) = e.features.empty() ? 0.0 : e.features[j];  // zero-fill
    }
    g.edge_endpoints.emplace_back(su->second, sv->second);
    g.adjacency[su->second].push_back({sv->second, eid});
    if (options.symmetrize && su->second != sv->second) {
      g.adjacency[sv->second].push_back({su->second, eid});
    }
  }
  return g;
}

namespace {

std::vector<double> parse_double_array(const json& a) {
  std::vector<double> out;
  out.reserve(a.size());
  for (const auto& v : a) out.push_back(v.get<double>());
  return out;
}

// Applies `fn` to every non-blank line; errors are tagged with path:line.
template <typename Fn>
void for_each_jsonl(const std::string& path, Fn fn) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
      fn(j);
    } catch (const json::exception& e) {
      throw InputError(path + ":" + std::to_string(lineno) + ": malformed record: " + e.what());
    } catch (const InputError& e) {
      throw InputError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

}  // namespace

AttributedGraph load_graph(const std::string& nodes_path, const std::string& edges_path,
                           const LoadOptions& options) {
  std::vector<NodeRecord> nodes;
  for_each_jsonl(nodes_path, [&](const json& j) {
    NodeRecord n;
    n.id = j.at("id").get<std::string>();
    n.features = parse_double_array(j.at("features"));
    if (j.contains("labels")) n.labels = j.at("labels").get<std::vector<std::string>>();
    nodes.push_back(std::move(n));
  });

  std::vector<EdgeRecord> edges;
  for_each_jsonl(edges_path, [&](const json& j) {
    EdgeRecord e;
    e.src = j.at("src").get<std::string>();
    e.dst = j.at("dst").get<std::string>();
    if (j.contains("features")) e.features = parse_double_array(j.at("features"));
    edges.push_back(std::move(e));
  });

  return build_graph(nodes, edges, options);
}

void save_graph(const AttributedGraph& g, const std::string& nodes_path,
                const std::string& edges_path) {
  std::ofstream nodes(nodes_path, std::ios::binary);
  if (!nodes) throw InputError("cannot open file for writing: " + nodes_path);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    json j;
    j["id"] = g.external_ids[v];
    json feats = json::array();
    for (Eigen::Index i = 0; i < g.features.rows(); ++i) feats.push_back(g.features(i, v));
    j["features"] = std::move(feats);
    if (g.labeled[v]) {
      json ls = json::array();
      for (int l : g.labels[v]) ls.push_back(g.label_names[l]);
      j["labels"] = std::move(ls);
    }
    nodes << j.dump() << "\n";
  }

  std::ofstream edges(edges_path, std::ios::binary);
  if (!edges) throw InputError("cannot open file for writing: " + edges_path);
  for (EdgeId e = 0; e < g.num_edge_records(); ++e) {
    json j;
    j["src"] = g.external_ids[g.edge_endpoints[e].first];
    j["dst"] = g.external_ids[g.edge_endpoints[e].second];
    if (g.edge_feature_dim() > 0) {
      json feats = json::array();
      for (Eigen::Index i = 0; i < g.edge_features.rows(); ++i)
        feats.push_back(g.edge_features(i, e));
      j["features"] = std::move(feats);
    }
    edges << j.dump() << "\n";
  }
}

std::pair<AttributedGraph, NodeTranslation> remove_nodes(const AttributedGraph& g,
                                                         const std::vector<NodeId>& to_remove) {
  std::vector<char> removed(g.num_nodes(), 0);
  for (NodeId v : to_remove) {
    if (v < 0 || v >= g.num_nodes()) {
      throw InputError("remove_nodes: unknown node id " + std::to_string(v));
    }
    removed[v] = 1;
  }

  NodeTranslation tr;
  tr.old_to_new.assign(g.num_nodes(), -1);
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (!removed[v]) {
      tr.old_to_new[v] = static_cast<NodeId>(tr.new_to_old.size());
      tr.new_to_old.push_back(v);
    }
  }
  if (tr.new_to_old.empty()) throw InputError("remove_nodes: cannot remove every node");

  AttributedGraph out;
  out.symmetrized = g.symmetrized;
  out.label_names = g.label_names;
  const auto n_new = static_cast<Eigen::Index>(tr.new_to_old.size());
  out.features.resize(g.features.rows(), n_new);
  for (Eigen::Index i = 0; i < n_new; ++i) {
    const NodeId old = tr.new_to_old[i];
    out.features.col(i) = g.features.col(old);
    out.external_ids.push_back(g.external_ids[old]);
    out.id_of[g.external_ids[old]] = static_cast<NodeId>(i);
    out.labels.push_back(g.labels[old]);
    out.labeled.push_back(g.labeled[old]);
  }

  // Surviving edge records keep their relative order and get dense new ids.
  std::vector<EdgeId> edge_old_to_new(g.num_edge_records(), -1);
  std::vector<EdgeId> kept;
  for (EdgeId e = 0; e < g.num_edge_records(); ++e) {
    const auto [u, v] = g.edge_endpoints[e];
    if (!removed[u] && !removed[v]) {
      edge_old_to_new[e] = static_cast<EdgeId>(kept.size());
      kept.push_back(e);
    }
  }
  out.edge_features.resize(g.edge_features.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t i = 0; i < kept.size(); ++i) {
    const EdgeId e = kept[i];
    out.edge_features.col(static_cast<Eigen::Index>(i)) = g.edge_features.col(e);
    out.edge_endpoints.emplace_back(tr.old_to_new[g.edge_endpoints[e].first],
                                    tr.old_to_new[g.edge_endpoints[e].second]);
  }

  out.adjacency.resize(tr.new_to_old.size());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (removed[v]) continue;
    auto& adj = out.adjacency[tr.old_to_new[v]];
    for (const AdjEntry& a : g.adjacency[v]) {
      if (a.edge >= 0 && edge_old_to_new[a.edge] >= 0) {
        adj.push_back({tr.old_to_new[a.neighbor], edge_old_to_new[a.edge]});
      }
    }
  }
  return {std::move(out), std::move(tr)};
}

}  // namespace mlgw
