#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mlgw/graph.hpp"
#include "mlgw/nn.hpp"
#include "mlgw/types.hpp"
#include "mlgw/walk.hpp"

/* Policy-gradient training of the per-label agents plus the shared policy.

   Per-step regularized return (probabilities from the step records):
     R(u) = r + alpha * log pi_d(a_u) - (alpha + beta) * log pi_local(a_u)
   and the step-t gradient coefficient is G_t = sum_{u>=t} gamma^(T-u) R(u).

   Gradient conventions: every function below accumulates minimization-form
   gradients (the optimizer subtracts them), i.e. the negative of the
   return-weighted ascent terms, plus the ordinary BCE gradient for the
   classifier. R(u) is treated as a constant: no gradient flows through its
   log-probability terms. The score-function terms backpropagate through the
   sigmoid scores of every candidate at the step and, through the history
   argument of the scorer input, back down the whole GRU chain. */

namespace mlgw::learn {

// Probabilities are floored at this value before any log.
inline constexpr double kProbFloor = 1e-12;

struct HyperParams {
  int hidden_dim = 128;       // d
  int walk_length = 10;       // T
  double lr = 1e-2;
  int episodes_per_node = 3;  // M
  double gamma = 0.9;
  double alpha = 1.0;         // pull toward the shared policy
  double beta = 0.1;          // entropy pressure
  int epochs = 20;
  int batch_size = 32;
  Variant variant = Variant::reg;
  nn::OptimizerKind optimizer = nn::OptimizerKind::adam;
  bool use_baseline = false;  // moving-average return baseline
  int checkpoint_every = 0;   // epochs between checkpoint callbacks; 0 = final only

  void validate() const;  // throws InputError
};

// R(u) for one recorded step (0-based u). Unlabeled-start episodes have no
// reward term. Under variant `independent` this is exactly the raw reward.
double regularized_return(const walk::Episode& ep, int u, const HyperParams& hp);

// G_t for every step; `baseline` is subtracted from each coefficient.
std::vector<double> step_coefficients(const walk::Episode& ep, const HyperParams& hp,
                                      double baseline = 0.0);

/* Batch gradient ops. All episodes must belong to the same agent for the
   local/supervised ops; scaling is 1/N with N = episodes.size(). */

// Score-function term for the agent parameters: gradients into the scorer
// and, via backprop through time on the history, the GRU.
void local_policy_gradient(const AttributedGraph& g, const nn::ModelParams& params,
                           const std::vector<const walk::Episode*>& episodes,
                           const HyperParams& hp, nn::AgentParams& out);

// Shared-policy gradients: the probability-matching term
//   alpha * gamma^(T-t) * (pi_local(a_t) - pi_d(a_t)) * dlog pi_d(a_t)
// always, plus the joint-sampling score-function term under variant reg+.
void distilled_policy_gradient(const AttributedGraph& g, const nn::ModelParams& params,
                               const std::vector<const walk::Episode*>& episodes,
                               const HyperParams& hp, nn::ScoreParams& out);

// BCE of the classifier on h_T against the label bit, backpropagated through
// the classifier and the full GRU chain (never through the scorer: the
// aggregation indicator and the discrete sampling block those paths).
// Returns scale * loss.
double supervised_gradient(const AttributedGraph& g, const nn::ModelParams& params,
                           const walk::Episode& ep, bool label_bit, double scale,
                           nn::AgentParams& out);

/* ---- training loop ------------------------------------------------------ */

struct EpochLogRow {
  int epoch = 0;
  int agent = 0;
  double mean_reward = 0.0;
  double supervised_loss = 0.0;
  double mean_kl = 0.0;     // mean per-step KL(pi_local || pi_d); 0 under variant i
  double wall_time_s = 0.0; // shared across the epoch's rows
};

struct TrainOptions {
  std::uint64_t seed = 0;
  int workers = 1;
  // Invoked after every hp.checkpoint_every-th epoch (1-based) when set.
  std::function<void(int epoch, const nn::ModelParams&)> checkpoint_fn;
};

struct TrainResult {
  nn::ModelParams params;
  std::vector<EpochLogRow> log;
  std::uint64_t prob_floor_hits = 0;  // diagnostic: how often the floor clipped a log
};

/* Epochs iterate the labeled training nodes in seeded shuffled batches; per
   start node each agent samples M episodes; one optimizer step per batch per
   parameter group. Episode work is distributed over `workers` threads in a
   fixed number of chunks whose gradients merge in chunk order, so results
   are byte-identical for any worker count. */
TrainResult train(const AttributedGraph& g, const std::vector<NodeId>& train_nodes,
                  const HyperParams& hp, const TrainOptions& opts);

// CSV: epoch,agent,mean_reward,supervised_loss,mean_kl,wall_time_s
void write_train_log_csv(const std::string& path, const std::vector<EpochLogRow>& log);

}  // namespace mlgw::learn
