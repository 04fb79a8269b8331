#pragma once

#include <cstdint>
#include <vector>

#include "mlgw/graph.hpp"
#include "mlgw/learn.hpp"
#include "mlgw/metrics.hpp"
#include "mlgw/nn.hpp"
#include "mlgw/stratify.hpp"
#include "mlgw/types.hpp"

/* The k-fold evaluation protocol tying stratification, training, prediction
   and metrics together.

   Supervision regimes: tr1 trains on fold f and tests on the remaining
   labeled nodes; tr4 trains on the complement of fold f and tests on fold f.

   Modes: transductive trains inside the full graph (test labels are simply
   never used); inductive removes the test nodes and their incident edges
   before training and predicts them back in the full graph afterwards. */

namespace mlgw::protocol {

// Thresholded mean predictions for `nodes`, one row per node in input order.
// Work is chunked like training: byte-identical for any worker count.
std::vector<std::vector<bool>> predict_labels(const AttributedGraph& g,
                                              const nn::ModelParams& params,
                                              const std::vector<NodeId>& nodes,
                                              int walk_length, int episodes_per_node,
                                              std::uint64_t seed, int workers = 1);

// Ground-truth indicator rows for `nodes`.
std::vector<std::vector<bool>> true_labels(const AttributedGraph& g,
                                           const std::vector<NodeId>& nodes);

struct FoldResult {
  int fold = 0;
  std::vector<NodeId> train_nodes;  // ids in the full graph
  std::vector<NodeId> test_nodes;
  metrics::MetricsReport report;
  std::vector<learn::EpochLogRow> train_log;
  nn::ModelParams params;
};

// Trains and evaluates one fold. The fold's training seed is
// derive_seed(seed, {stream_tag::protocol, fold}).
FoldResult run_fold(const AttributedGraph& g, const FoldAssignment& assignment, int fold,
                    Regime regime, Mode mode, const learn::HyperParams& hp,
                    std::uint64_t seed, int workers = 1);

struct ProtocolResult {
  FoldAssignment assignment;
  std::vector<FoldResult> folds;
  double mean_micro_f1 = 0.0;  // unweighted means over folds
  double mean_macro_f1 = 0.0;
};

ProtocolResult run_protocol(const AttributedGraph& g, int k, Regime regime, Mode mode,
                            const learn::HyperParams& hp, std::uint64_t seed,
                            int workers = 1);

}  // namespace mlgw::protocol
