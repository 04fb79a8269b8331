#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mlgw/graph.hpp"
#include "mlgw/nn.hpp"
#include "mlgw/rng.hpp"
#include "mlgw/types.hpp"

/* Episode mechanics for one label-specific agent walking the graph.

   Per step at node v with out-neighbors N(v):
     1. score every candidate k via the agent scorer on [h_prev|x_v|x_e|x_k];
     2. sample the next node from the normalized scores (variants i/reg) or
        from the renormalized elementwise product with the shared-policy
        scores (variant reg+);
     3. aggregate c_n = sum of x_k over candidates with score > 0.5;
     4. advance the history GRU on [x_v | c_n].
   A node with no out-neighbors self-transitions with probability 1 and
   c_n = 0. After T steps the classifier reads h_T. */

namespace mlgw::walk {

using Eigen::VectorXd;

struct StepRecord {
  NodeId node = 0;                   // v_t
  std::vector<NodeId> neighbors;     // candidate targets, adjacency order
  std::vector<EdgeId> edges;         // parallel edge ids (-1 for dead-end self)
  VectorXd scores;                   // agent sigmoid scores per candidate
  VectorXd distilled_scores;         // shared-policy scores (empty under variant i)
  int action = 0;                    // index into neighbors
  double prob_local = 1.0;           // normalized agent probability of the action
  double prob_distilled = 1.0;       // normalized shared-policy probability (1 under variant i)
  double prob_sampling = 1.0;        // probability under the distribution actually sampled
  bool dead_end = false;
  VectorXd aggregate;                // c_n
  nn::GruState gru;                  // forward cache; gru.h is the recorded history h_t

  const VectorXd& history() const { return gru.h; }
};

struct Episode {
  int agent = 0;
  NodeId start = 0;
  std::vector<StepRecord> steps;  // exactly T
  double p = 0.5;                 // classifier output on h_T
  double reward = 0.0;            // +1 if thresholded p matches the label bit, else -1
  bool has_reward = false;        // false when the start node is unlabeled
  Variant variant = Variant::reg;

  const VectorXd& h_final() const { return steps.back().gru.h; }
};

/* ---- step-level operations (exposed for tests and gradient code) ------- */

// Sigmoid scores for each candidate, weights shared across candidates.
VectorXd score_neighbors(const nn::ScoreParams& sp, const AttributedGraph& g,
                         const VectorXd& h_prev, NodeId v,
                         const std::vector<NodeId>& neighbors, const std::vector<EdgeId>& edges);

// Draws an index from the categorical distribution proportional to `weights`
// and returns (index, normalized probability).
std::pair<int, double> sample_action(const VectorXd& weights, Rng& rng);

// c_n: sum of neighbor features with score strictly above 0.5.
VectorXd aggregate_neighbors(const AttributedGraph& g, const std::vector<NodeId>& neighbors,
                             const VectorXd& scores);

/* ---- episodes ------------------------------------------------------------ */

Episode run_episode(const AttributedGraph& g, const nn::ModelParams& params, int agent,
                    NodeId start, int T, Rng& rng);

// Re-runs the forward passes with a forced action sequence; bit-identical to
// the original episode when given its recorded actions.
Episode replay_episode(const AttributedGraph& g, const nn::ModelParams& params, int agent,
                       NodeId start, const std::vector<int>& actions);

// Mean classifier probability per agent over M episodes from `node`.
// Deterministic in (seed, node, agent, episode index) regardless of caller.
std::vector<double> predict_node(const AttributedGraph& g, const nn::ModelParams& params,
                                 NodeId node, int T, int M, std::uint64_t seed,
                                 std::uint64_t seed_tag = stream_tag::predict);

// p > 0.5 decision per label.
std::vector<std::uint8_t> threshold_predictions(const std::vector<double>& mean_p);

/* ---- trace serialization -------------------------------------------------- */

inline constexpr int kTraceFormatVersion = 1;

// One JSON object per line with external node ids; fields mirror StepRecord.
void write_trace(const std::string& path, const std::vector<Episode>& episodes,
                 const AttributedGraph& g);
std::string episode_to_json(const Episode& ep, const AttributedGraph& g);

// Parses a trace written by write_trace. The GRU caches are not part of the
// format; imported episodes carry recorded values only (enough for analysis).
std::vector<Episode> read_trace(const std::string& path, const AttributedGraph& g);

}  // namespace mlgw::walk
