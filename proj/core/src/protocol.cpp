#include "mlgw/protocol.hpp"

#include <algorithm>
#include <utility>

#include "mlgw/errors.hpp"
#include "mlgw/log.hpp"
#include "mlgw/parallel.hpp"
#include "mlgw/walk.hpp"

namespace mlgw::protocol {

std::vector<std::vector<bool>> predict_labels(const AttributedGraph& g,
                                              const nn::ModelParams& params,
                                              const std::vector<NodeId>& nodes,
                                              int walk_length, int episodes_per_node,
                                              std::uint64_t seed, int workers) {
  const int n = static_cast<int>(nodes.size());
  std::vector<std::vector<bool>> rows(nodes.size());
  if (n == 0) return rows;
  const int n_chunks = std::min(kWorkChunks, n);
  // Every row is written exactly once, and the per-node prediction streams
  // depend only on (seed, node, agent, episode), so order cannot matter.
  run_chunks(std::max(1, workers), n_chunks, [&](int c) {
    const auto [lo, hi] = chunk_range(c, n_chunks, n);
    for (int i = lo; i < hi; ++i) {
      const std::vector<double> mean_p = walk::predict_node(
          g, params, nodes[static_cast<std::size_t>(i)], walk_length, episodes_per_node,
          seed);
      const std::vector<std::uint8_t> bits = walk::threshold_predictions(mean_p);
      auto& row = rows[static_cast<std::size_t>(i)];
      row.resize(bits.size());
      for (std::size_t l = 0; l < bits.size(); ++l) row[l] = bits[l] != 0;
    }
  });
  return rows;
}

std::vector<std::vector<bool>> true_labels(const AttributedGraph& g,
                                           const std::vector<NodeId>& nodes) {
  std::vector<std::vector<bool>> rows(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const NodeId v = nodes[i];
    if (v < 0 || v >= g.num_nodes())
      throw InputError("node id out of range: " + std::to_string(v));
    rows[i].assign(static_cast<std::size_t>(g.num_labels()), false);
    for (int l : g.labels[static_cast<std::size_t>(v)])
      rows[i][static_cast<std::size_t>(l)] = true;
  }
  return rows;
}

FoldResult run_fold(const AttributedGraph& g, const FoldAssignment& assignment, int fold,
                    Regime regime, Mode mode, const learn::HyperParams& hp,
                    std::uint64_t seed, int workers) {
  if (fold < 0 || fold >= assignment.k) throw InputError("fold index out of range");

  FoldResult fr;
  fr.fold = fold;
  if (regime == Regime::tr1) {
    fr.train_nodes = assignment.fold_nodes(fold);
    fr.test_nodes = assignment.complement_nodes(fold);
  } else {
    fr.train_nodes = assignment.complement_nodes(fold);
    fr.test_nodes = assignment.fold_nodes(fold);
  }
  if (fr.test_nodes.empty()) throw InputError("fold " + std::to_string(fold) +
                                              " leaves no test nodes");

  const std::uint64_t fold_seed =
      derive_seed(seed, {stream_tag::protocol, static_cast<std::uint64_t>(fold)});
  learn::TrainOptions opts;
  opts.seed = fold_seed;
  opts.workers = workers;

  if (mode == Mode::transductive) {
    learn::TrainResult res = learn::train(g, fr.train_nodes, hp, opts);
    fr.params = std::move(res.params);
    fr.train_log = std::move(res.log);
  } else {
    auto [sub, tr] = remove_nodes(g, fr.test_nodes);
    std::vector<NodeId> mapped;
    mapped.reserve(fr.train_nodes.size());
    for (NodeId v : fr.train_nodes) mapped.push_back(tr.old_to_new[v]);
    learn::TrainResult res = learn::train(sub, mapped, hp, opts);
    fr.params = std::move(res.params);
    fr.train_log = std::move(res.log);
  }

  const auto y_pred = predict_labels(g, fr.params, fr.test_nodes, hp.walk_length,
                                     hp.episodes_per_node, fold_seed, workers);
  const auto y_true = true_labels(g, fr.test_nodes);
  fr.report = metrics::compute_metrics(y_true, y_pred, g.label_names);
  return fr;
}

ProtocolResult run_protocol(const AttributedGraph& g, int k, Regime regime, Mode mode,
                            const learn::HyperParams& hp, std::uint64_t seed,
                            int workers) {
  ProtocolResult pr;
  pr.assignment = stratified_kfold(g, k, seed);
  for (int f = 0; f < k; ++f) {
    log_info("protocol: fold " + std::to_string(f + 1) + "/" + std::to_string(k));
    pr.folds.push_back(run_fold(g, pr.assignment, f, regime, mode, hp, seed, workers));
    pr.mean_micro_f1 += pr.folds.back().report.micro_f1;
    pr.mean_macro_f1 += pr.folds.back().report.macro_f1;
  }
  pr.mean_micro_f1 /= static_cast<double>(k);
  pr.mean_macro_f1 /= static_cast<double>(k);
  return pr;
}

}  // namespace mlgw::protocol
