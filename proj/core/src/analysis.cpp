#include "mlgw/analysis.hpp"

#include <fstream>

#include "mlgw/errors.hpp"

namespace mlgw::analysis {

namespace {

// The node occupied after each step, optionally preceded by the start node.
std::vector<NodeId> visited_nodes(const walk::Episode& ep, const AttributedGraph& g,
                                  bool include_start) {
  std::vector<NodeId> out;
  out.reserve(ep.steps.size() + (include_start ? 1 : 0));
  if (include_start) out.push_back(ep.start);
  for (const walk::StepRecord& st : ep.steps) {
    if (st.action < 0 || st.action >= static_cast<int>(st.neighbors.size()))
      throw ConsistencyError("episode step has an out-of-range action");
    const NodeId v = st.neighbors[static_cast<std::size_t>(st.action)];
    if (v < 0 || v >= g.num_nodes())
      throw InputError("episode visits unknown node id " + std::to_string(v));
    out.push_back(v);
  }
  return out;
}

void check_agent(const walk::Episode& ep, const AttributedGraph& g) {
  if (ep.agent < 0 || ep.agent >= g.num_labels())
    throw ConsistencyError("episode agent index " + std::to_string(ep.agent) +
                           " does not match the graph's labels");
  if (ep.start < 0 || ep.start >= g.num_nodes())
    throw InputError("episode starts at unknown node id " + std::to_string(ep.start));
}

}  // namespace

VisitHeatmap build_heatmap(const std::vector<walk::Episode>& episodes,
                           const AttributedGraph& g, const VisitOptions& options) {
  const int L = g.num_labels();
  VisitHeatmap h;
  h.labels = g.label_names;
  h.matrix = Eigen::MatrixXd::Zero(L, L);

  for (const walk::Episode& ep : episodes) {
    check_agent(ep, g);
    // Only walks that start on a node actually carrying the agent's label
    // say anything about that label's neighborhood.
    if (!g.has_label(ep.start, ep.agent)) continue;
    for (NodeId v : visited_nodes(ep, g, options.include_start))
      for (int l : g.labels[static_cast<std::size_t>(v)]) h.matrix(l, ep.agent) += 1.0;
  }

  if (options.normalize) {
    for (int c = 0; c < L; ++c) {
      const double total = h.matrix.col(c).sum();
      if (total > 0.0) h.matrix.col(c) /= total;
    }
    h.normalized = true;
  }
  return h;
}

std::vector<double> labels_per_visited_node(const std::vector<walk::Episode>& episodes,
                                            const AttributedGraph& g,
                                            const VisitOptions& options) {
  if (episodes.empty()) throw InputError("no episodes given");
  const int L = g.num_labels();
  std::vector<double> label_sum(static_cast<std::size_t>(L), 0.0);
  std::vector<std::int64_t> visits(static_cast<std::size_t>(L), 0);

  for (const walk::Episode& ep : episodes) {
    check_agent(ep, g);
    for (NodeId v : visited_nodes(ep, g, options.include_start)) {
      label_sum[static_cast<std::size_t>(ep.agent)] +=
          static_cast<double>(g.labels[static_cast<std::size_t>(v)].size());
      ++visits[static_cast<std::size_t>(ep.agent)];
    }
  }

  std::vector<double> out(static_cast<std::size_t>(L), 0.0);
  for (int l = 0; l < L; ++l)
    if (visits[static_cast<std::size_t>(l)] > 0)
      out[static_cast<std::size_t>(l)] =
          label_sum[static_cast<std::size_t>(l)] /
          static_cast<double>(visits[static_cast<std::size_t>(l)]);
  return out;
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

void write_heatmap_csv(const std::string& path, const VisitHeatmap& h) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out.precision(17);
  out << "visited_label";
  for (const std::string& name : h.labels) out << ',' << csv_escape(name);
  out << '\n';
  for (Eigen::Index r = 0; r < h.matrix.rows(); ++r) {
    out << csv_escape(h.labels[static_cast<std::size_t>(r)]);
    for (Eigen::Index c = 0; c < h.matrix.cols(); ++c) out << ',' << h.matrix(r, c);
    out << '\n';
  }
  if (!out) throw InputError("failed while writing '" + path + "'");
}

void write_stats_csv(const std::string& path, const std::vector<double>& per_agent) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out.precision(17);
  out << "agent,labels_per_visited_node\n";
  for (std::size_t i = 0; i < per_agent.size(); ++i)
    out << i << ',' << per_agent[i] << '\n';
  if (!out) throw InputError("failed while writing '" + path + "'");
}

}  // namespace mlgw::analysis
