#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mlgw/graph.hpp"
#include "mlgw/walk.hpp"

/* Trajectory analytics over recorded episodes: which labels the agents'
   walks actually visit, and how label-dense the visited nodes are.

   "Visited nodes" are the nodes the walk moves to, one per step, repeats
   counted each time; the start node itself is excluded by default (its
   labels are what the walk is trying to infer). Both statistics are pure
   functions of the episode records, so recomputation from an exported trace
   matches the in-memory result exactly. */

namespace mlgw::analysis {

struct VisitHeatmap {
  // Rows = visited-node labels; columns = agents, fed by episodes whose
  // start node carries the agent's label. Column-normalized when requested.
  Eigen::MatrixXd matrix;
  std::vector<std::string> labels;
  bool normalized = false;
};

struct VisitOptions {
  bool include_start = false;
  bool normalize = true;  // each nonzero column sums to 1
};

// Counts label occurrences (multi-labeled nodes increment every label they
// carry) over the visited nodes of each agent's label-bearing starts.
VisitHeatmap build_heatmap(const std::vector<walk::Episode>& episodes,
                           const AttributedGraph& g, const VisitOptions& options = {});

// Mean number of labels per visited node occurrence, per agent (unlabeled
// nodes count 0; agents without episodes report 0). Throws InputError when
// `episodes` is empty.
std::vector<double> labels_per_visited_node(const std::vector<walk::Episode>& episodes,
                                            const AttributedGraph& g,
                                            const VisitOptions& options = {});

// CSV matrix with label-name header row and column.
void write_heatmap_csv(const std::string& path, const VisitHeatmap& h);

// CSV rows (agent, value), one per agent.
void write_stats_csv(const std::string& path, const std::vector<double>& per_agent);

}  // namespace mlgw::analysis
