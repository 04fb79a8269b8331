#include "mlgw/learn.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <memory>

#include "mlgw/errors.hpp"
#include "mlgw/log.hpp"
#include "mlgw/parallel.hpp"

namespace mlgw::learn {

using Eigen::VectorXd;

void HyperParams::validate() const {
  if (hidden_dim < 1) throw InputError("hidden_dim must be >= 1");
  if (walk_length < 1) throw InputError("walk_length must be >= 1");
  if (!std::isfinite(lr) || lr <= 0.0) throw InputError("lr must be positive and finite");
  if (episodes_per_node < 1) throw InputError("episodes_per_node must be >= 1");
  if (!(gamma > 0.0) || gamma > 1.0) throw InputError("gamma must lie in (0, 1]");
  if (alpha < 0.0 || beta < 0.0) throw InputError("alpha and beta must be non-negative");
  if (epochs < 0) throw InputError("epochs must be >= 0");
  if (batch_size < 1) throw InputError("batch_size must be >= 1");
  if (checkpoint_every < 0) throw InputError("checkpoint_every must be >= 0");
}

namespace {

double floored_log(double p, std::uint64_t* hits) {
  if (p < kProbFloor) {
    if (hits != nullptr) ++*hits;
    p = kProbFloor;
  }
  return std::log(p);
}

double return_at(const walk::Episode& ep, int u, const HyperParams& hp, std::uint64_t* hits) {
  const walk::StepRecord& st = ep.steps[static_cast<std::size_t>(u)];
  // The environment reward is delayed: only the final step carries it.
  double r = 0.0;
  if (u + 1 == static_cast<int>(ep.steps.size()) && ep.has_reward) r = ep.reward;
  if (hp.variant == Variant::independent) return r;
  return r + hp.alpha * floored_log(st.prob_distilled, hits) -
         (hp.alpha + hp.beta) * floored_log(st.prob_local, hits);
}

std::vector<double> coefficients(const walk::Episode& ep, const HyperParams& hp,
                                 double baseline, std::uint64_t* hits) {
  const int T = static_cast<int>(ep.steps.size());
  std::vector<double> g(static_cast<std::size_t>(T));
  double acc = 0.0;
  double w = 1.0;  // gamma^(T-1-u), built while walking backwards
  for (int u = T - 1; u >= 0; --u) {
    acc += w * return_at(ep, u, hp, hits);
    w *= hp.gamma;
    g[static_cast<std::size_t>(u)] = acc - baseline;
  }
  return g;
}

// Backpropagates one per-candidate pre-activation coefficient vector through
// the scorer at one step: parameter gradients into *out (when given) and the
// gradient w.r.t. the history input into *gh (when given).
void score_step_backward(const AttributedGraph& g, const nn::ScoreParams& sp,
                         const walk::StepRecord& st, int d, int F, int Fe,
                         const VectorXd& c, nn::ScoreParams* out, VectorXd* gh,
                         const VectorXd& h_prev) {
  const double csum = c.sum();
  if (out != nullptr) {
    out->w.grad.block(0, 0, 1, d) += csum * h_prev.transpose();
    out->w.grad.block(0, d, 1, F) += csum * g.features.col(st.node).transpose();
    for (Eigen::Index k = 0; k < c.size(); ++k) {
      if (c[k] == 0.0) continue;
      if (Fe > 0 && st.edges[static_cast<std::size_t>(k)] >= 0)
        out->w.grad.block(0, d + F, 1, Fe) +=
            c[k] * g.edge_features.col(st.edges[static_cast<std::size_t>(k)]).transpose();
      out->w.grad.block(0, d + F + Fe, 1, F) +=
          c[k] * g.features.col(st.neighbors[static_cast<std::size_t>(k)]).transpose();
    }
    out->b.grad(0, 0) += csum;
  }
  if (gh != nullptr) *gh += csum * sp.w.value.block(0, 0, 1, d).transpose();
}

struct TermFlags {
  bool policy = false;      // return-weighted score-function terms
  bool supervised = false;  // classifier BCE
  bool matching = false;    // shared-policy probability matching
};

struct EpisodeStats {
  double supervised_loss = 0.0;  // unscaled BCE
  double g1 = 0.0;               // coefficient of the first step, pre-baseline
};

/* One fused backward pass over a recorded episode. agent_out sinks the
   scorer/GRU/classifier gradients (null to skip them and the whole BPTT),
   dist_out sinks the shared-policy gradients. */
EpisodeStats episode_backward(const AttributedGraph& g, const nn::ModelParams& params,
                              const walk::Episode& ep, const HyperParams& hp,
                              const TermFlags& terms, double scale, double baseline,
                              bool label_bit, nn::AgentParams* agent_out,
                              nn::ScoreParams* dist_out, std::uint64_t* floor_hits) {
  if (ep.agent < 0 || ep.agent >= params.num_agents())
    throw ConsistencyError("episode agent index " + std::to_string(ep.agent) +
                           " does not fit the model");
  if (ep.variant != params.variant || ep.variant != hp.variant)
    throw ConsistencyError("episode was sampled under variant '" + to_string(ep.variant) +
                           "' but the model/hyper-parameters use '" +
                           to_string(params.variant) + "'/'" + to_string(hp.variant) + "'");
  if (ep.steps.empty()) throw InputError("episode has no steps");
  if (agent_out != nullptr && ep.steps.front().gru.z.size() == 0)
    throw InputError(
        "episode lacks recorded network caches (trace imports must be replayed first)");

  const nn::AgentParams& ap = params.agents[static_cast<std::size_t>(ep.agent)];
  const int d = params.hidden_dim;
  const int F = params.feature_dim;
  const int Fe = params.edge_feature_dim;
  const int T = static_cast<int>(ep.steps.size());
  const bool joint = hp.variant == Variant::reg_plus;
  const bool shared = hp.variant != Variant::independent;
  const VectorXd hzero = VectorXd::Zero(d);

  EpisodeStats stats;

  // dL/dh_t, allocated lazily; seeded[t] marks a non-trivial entry.
  std::vector<VectorXd> dh(static_cast<std::size_t>(T));
  std::vector<char> seeded(static_cast<std::size_t>(T), 0);
  auto dh_at = [&](int t) -> VectorXd& {
    auto& slot = dh[static_cast<std::size_t>(t)];
    if (!seeded[static_cast<std::size_t>(t)]) {
      slot = VectorXd::Zero(d);
      seeded[static_cast<std::size_t>(t)] = 1;
    }
    return slot;
  };

  std::vector<double> coef;
  if (terms.policy) {
    coef = coefficients(ep, hp, baseline, floor_hits);
    stats.g1 = coef.front() + baseline;
  }

  if (terms.policy || terms.matching) {
    // gamma^(T-1-t) for the matching term's discount.
    std::vector<double> gpow(static_cast<std::size_t>(T));
    gpow[static_cast<std::size_t>(T - 1)] = 1.0;
    for (int t = T - 2; t >= 0; --t)
      gpow[static_cast<std::size_t>(t)] = gpow[static_cast<std::size_t>(t + 1)] * hp.gamma;

    for (int t = 0; t < T; ++t) {
      const walk::StepRecord& st = ep.steps[static_cast<std::size_t>(t)];
      // A dead end has a single forced candidate: every log-probability
      // derivative and the matching residual vanish identically.
      if (st.dead_end) continue;
      const int K = static_cast<int>(st.neighbors.size());
      const int a = st.action;
      const VectorXd& phi = st.scores;
      const VectorXd& h_prev =
          t == 0 ? hzero : ep.steps[static_cast<std::size_t>(t - 1)].gru.h;
      // Policy seeds flow into dh[t-1]; at t = 0 the history is the constant
      // zero vector, so the seed has nowhere to go.
      VectorXd* gh = (agent_out != nullptr && t > 0) ? &dh_at(t - 1) : nullptr;

      if ((joint || terms.matching) && shared &&
          st.distilled_scores.size() != phi.size())
        throw InputError("step lacks recorded shared-policy scores");

      if (terms.policy && agent_out != nullptr) {
        const double mult = -scale * coef[static_cast<std::size_t>(t)];
        VectorXd c(K);
        if (!joint) {
          const double s = phi.sum();
          for (int k = 0; k < K; ++k)
            c[k] = mult * ((k == a ? 1.0 - phi[a] : 0.0) - phi[k] * (1.0 - phi[k]) / s);
        } else {
          const VectorXd& psi = st.distilled_scores;
          const double s2 = phi.dot(psi);
          for (int k = 0; k < K; ++k)
            c[k] = mult *
                   ((k == a ? 1.0 - phi[a] : 0.0) - phi[k] * (1.0 - phi[k]) * psi[k] / s2);
        }
        score_step_backward(g, ap.score, st, d, F, Fe, c, &agent_out->score, gh, h_prev);
      }

      if (terms.policy && joint && (agent_out != nullptr || dist_out != nullptr)) {
        // Joint sampling: the shared scorer sits inside the sampled
        // log-probability too, gradient w.r.t. its pre-activations plus, via
        // the history argument, the GRU chain.
        const VectorXd& psi = st.distilled_scores;
        const double s2 = phi.dot(psi);
        const double mult = -scale * coef[static_cast<std::size_t>(t)];
        VectorXd c(K);
        for (int k = 0; k < K; ++k)
          c[k] = mult *
                 ((k == a ? 1.0 - psi[a] : 0.0) - psi[k] * (1.0 - psi[k]) * phi[k] / s2);
        score_step_backward(g, *params.distilled, st, d, F, Fe, c, dist_out, gh, h_prev);
      }

      if (terms.matching && shared && dist_out != nullptr) {
        // alpha * gamma^(T-t) * (pi_local(a) - pi_d(a)) * dlog pi_d(a); a
        // pure shared-policy term, so no history seed.
        const VectorXd& psi = st.distilled_scores;
        const double mult = -scale * hp.alpha * gpow[static_cast<std::size_t>(t)] *
                            (st.prob_local - st.prob_distilled);
        if (mult != 0.0) {
          const double s = psi.sum();
          VectorXd c(K);
          for (int k = 0; k < K; ++k)
            c[k] = mult * ((k == a ? 1.0 - psi[a] : 0.0) - psi[k] * (1.0 - psi[k]) / s);
          score_step_backward(g, *params.distilled, st, d, F, Fe, c, dist_out, nullptr,
                              h_prev);
        }
      }
    }
  }

  if (terms.supervised) {
    const VectorXd& h_final = ep.steps.back().gru.h;
    const double p = ep.p;
    const double y = label_bit ? 1.0 : 0.0;
    stats.supervised_loss =
        -(y * floored_log(p, floor_hits) + (1.0 - y) * floored_log(1.0 - p, floor_hits));
    if (agent_out != nullptr) {
      const double s = scale * (p - y);  // BCE through the output sigmoid
      agent_out->clf.w.grad.row(0) += s * h_final.transpose();
      agent_out->clf.b.grad(0, 0) += s;
      dh_at(T - 1) += s * ap.clf.w.value.row(0).transpose();
    }
  }

  if (agent_out != nullptr) {
    // Backprop through time. Policy terms seed dh[t-1], the classifier seeds
    // dh[T-1]; each consumed step propagates into the one before it.
    VectorXd x(2 * F);
    VectorXd sink = VectorXd::Zero(d);  // discarded gradient of the zero start state
    for (int t = T - 1; t >= 0; --t) {
      if (!seeded[static_cast<std::size_t>(t)]) continue;
      const walk::StepRecord& st = ep.steps[static_cast<std::size_t>(t)];
      const VectorXd& h_prev =
          t == 0 ? hzero : ep.steps[static_cast<std::size_t>(t - 1)].gru.h;
      x << g.features.col(st.node), st.aggregate;
      nn::gru_backward(ap.gru, h_prev, x, st.gru, dh[static_cast<std::size_t>(t)],
                       agent_out->gru, t > 0 ? dh_at(t - 1) : sink, nullptr);
    }
  }

  return stats;
}

}  // namespace

double regularized_return(const walk::Episode& ep, int u, const HyperParams& hp) {
  if (u < 0 || u >= static_cast<int>(ep.steps.size()))
    throw InputError("step index out of range");
  return return_at(ep, u, hp, nullptr);
}

std::vector<double> step_coefficients(const walk::Episode& ep, const HyperParams& hp,
                                      double baseline) {
  if (ep.steps.empty()) throw InputError("episode has no steps");
  return coefficients(ep, hp, baseline, nullptr);
}

void local_policy_gradient(const AttributedGraph& g, const nn::ModelParams& params,
                           const std::vector<const walk::Episode*>& episodes,
                           const HyperParams& hp, nn::AgentParams& out) {
  if (episodes.empty()) throw InputError("no episodes given");
  for (const walk::Episode* ep : episodes) {
    if (ep == nullptr) throw InputError("null episode");
    if (ep->agent != episodes.front()->agent)
      throw ConsistencyError("episodes span multiple agents");
  }
  if (out.score.w.grad.cols() != params.score_input_dim())
    throw ConsistencyError("gradient sink does not match the model shape");
  const double scale = 1.0 / static_cast<double>(episodes.size());
  TermFlags terms;
  terms.policy = true;
  for (const walk::Episode* ep : episodes)
    episode_backward(g, params, *ep, hp, terms, scale, 0.0, false, &out, nullptr, nullptr);
}

void distilled_policy_gradient(const AttributedGraph& g, const nn::ModelParams& params,
                               const std::vector<const walk::Episode*>& episodes,
                               const HyperParams& hp, nn::ScoreParams& out) {
  if (hp.variant == Variant::independent)
    throw ConsistencyError("the independent variant has no shared policy");
  if (!params.distilled.has_value())
    throw ConsistencyError("model carries no shared-policy parameters");
  if (episodes.empty()) throw InputError("no episodes given");
  if (out.w.grad.cols() != params.score_input_dim())
    throw ConsistencyError("gradient sink does not match the model shape");
  const double scale = 1.0 / static_cast<double>(episodes.size());
  TermFlags terms;
  terms.policy = true;  // contributes only under joint sampling
  terms.matching = true;
  for (const walk::Episode* ep : episodes) {
    if (ep == nullptr) throw InputError("null episode");
    episode_backward(g, params, *ep, hp, terms, scale, 0.0, false, nullptr, &out, nullptr);
  }
}

double supervised_gradient(const AttributedGraph& g, const nn::ModelParams& params,
                           const walk::Episode& ep, bool label_bit, double scale,
                           nn::AgentParams& out) {
  if (out.score.w.grad.cols() != params.score_input_dim())
    throw ConsistencyError("gradient sink does not match the model shape");
  HyperParams hp;  // only the variant matters for a supervised-only pass
  hp.variant = ep.variant;
  TermFlags terms;
  terms.supervised = true;
  const EpisodeStats stats =
      episode_backward(g, params, ep, hp, terms, scale, 0.0, label_bit, &out, nullptr,
                       nullptr);
  return scale * stats.supervised_loss;
}

/* ---- training loop ------------------------------------------------------ */

namespace {

struct AgentStats {
  double reward = 0.0;
  double loss = 0.0;
  double kl = 0.0;
  double g1 = 0.0;
  std::int64_t episodes = 0;
  std::int64_t kl_steps = 0;
};

struct ChunkAccum {
  std::vector<std::unique_ptr<nn::AgentParams>> agents;  // lazily allocated sinks
  std::unique_ptr<nn::ScoreParams> distilled;
  std::vector<AgentStats> stats;
  std::uint64_t floor_hits = 0;
};

void add_grads(nn::Tensor& dst, const nn::Tensor& src) { dst.grad += src.grad; }

void add_grads(nn::ScoreParams& dst, const nn::ScoreParams& src) {
  add_grads(dst.w, src.w);
  add_grads(dst.b, src.b);
}

void add_grads(nn::AgentParams& dst, const nn::AgentParams& src) {
  add_grads(dst.score, src.score);
  add_grads(dst.gru.Wz, src.gru.Wz);
  add_grads(dst.gru.Uz, src.gru.Uz);
  add_grads(dst.gru.bz, src.gru.bz);
  add_grads(dst.gru.Wr, src.gru.Wr);
  add_grads(dst.gru.Ur, src.gru.Ur);
  add_grads(dst.gru.br, src.gru.br);
  add_grads(dst.gru.W, src.gru.W);
  add_grads(dst.gru.U, src.gru.U);
  add_grads(dst.gru.b, src.gru.b);
  add_grads(dst.clf.w, src.clf.w);
  add_grads(dst.clf.b, src.clf.b);
}

}  // namespace

TrainResult train(const AttributedGraph& g, const std::vector<NodeId>& train_nodes,
                  const HyperParams& hp, const TrainOptions& opts) {
  hp.validate();
  if (train_nodes.empty()) throw InputError("training set is empty");
  for (NodeId v : train_nodes) {
    if (v < 0 || v >= g.num_nodes())
      throw InputError("training node id out of range: " + std::to_string(v));
    if (!g.labeled[static_cast<std::size_t>(v)])
      throw InputError("training node '" + g.external_ids[static_cast<std::size_t>(v)] +
                       "' is unlabeled");
  }
  {
    std::vector<NodeId> sorted(train_nodes);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InputError("training set contains duplicate nodes");
  }
  for (int l = 0; l < g.num_labels(); ++l) {
    const bool any = std::any_of(train_nodes.begin(), train_nodes.end(),
                                 [&](NodeId v) { return g.has_label(v, l); });
    if (!any)
      log_warn("train: label '" + g.label_names[static_cast<std::size_t>(l)] +
               "' has no positive training example");
  }

  TrainResult res{nn::ModelParams::init(g.label_names, g.feature_dim(),
                                        g.edge_feature_dim(), hp.hidden_dim, hp.variant,
                                        opts.seed),
                  {},
                  0};
  nn::ModelParams& params = res.params;
  const int L = params.num_agents();
  const int M = hp.episodes_per_node;
  const bool shared = hp.variant != Variant::independent;
  const int workers = std::max(1, opts.workers);
  const nn::Optimizer opt{hp.optimizer, hp.lr};
  std::vector<double> baseline(static_cast<std::size_t>(L), 0.0);
  std::vector<NodeId> order(train_nodes);
  int last_checkpoint = 0;

  for (int epoch = 0; epoch < hp.epochs; ++epoch) {
    const auto t_start = std::chrono::steady_clock::now();
    Rng shuffle_rng =
        Rng::stream(opts.seed, {stream_tag::shuffle, static_cast<std::uint64_t>(epoch)});
    shuffle_rng.shuffle(order);

    std::vector<AgentStats> epoch_stats(static_cast<std::size_t>(L));
    const int n_batches =
        (static_cast<int>(order.size()) + hp.batch_size - 1) / hp.batch_size;

    for (int b = 0; b < n_batches; ++b) {
      const int begin = b * hp.batch_size;
      const int bn = std::min<int>(hp.batch_size, static_cast<int>(order.size()) - begin);
      const int n_tasks = L * bn * M;
      const int n_chunks = std::min(kWorkChunks, n_tasks);
      std::vector<ChunkAccum> chunks(static_cast<std::size_t>(n_chunks));

      run_chunks(workers, n_chunks, [&](int c) {
        ChunkAccum& acc = chunks[static_cast<std::size_t>(c)];
        acc.agents.resize(static_cast<std::size_t>(L));
        acc.stats.resize(static_cast<std::size_t>(L));
        const auto [t0, t1] = chunk_range(c, n_chunks, n_tasks);
        for (int task = t0; task < t1; ++task) {
          // Agent-major task order: (agent, node position, episode index).
          const int agent = task / (bn * M);
          const int rem = task % (bn * M);
          const NodeId start = order[static_cast<std::size_t>(begin + rem / M)];
          Rng rng = Rng::stream(
              opts.seed, {stream_tag::episode, static_cast<std::uint64_t>(epoch),
                          static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(task)});
          const walk::Episode e =
              walk::run_episode(g, params, agent, start, hp.walk_length, rng);

          auto& sink = acc.agents[static_cast<std::size_t>(agent)];
          if (!sink)
            sink = std::make_unique<nn::AgentParams>(
                params.agents[static_cast<std::size_t>(agent)].grad_only());
          if (shared && !acc.distilled)
            acc.distilled =
                std::make_unique<nn::ScoreParams>(params.distilled->grad_only());

          TermFlags terms;
          terms.policy = true;
          terms.supervised = true;
          terms.matching = shared;
          const EpisodeStats es = episode_backward(
              g, params, e, hp, terms, 1.0 / static_cast<double>(bn * M),
              hp.use_baseline ? baseline[static_cast<std::size_t>(agent)] : 0.0,
              g.has_label(start, agent), sink.get(),
              shared ? acc.distilled.get() : nullptr, &acc.floor_hits);

          AgentStats& s = acc.stats[static_cast<std::size_t>(agent)];
          s.reward += e.reward;
          s.loss += es.supervised_loss;
          s.g1 += es.g1;
          ++s.episodes;
          if (shared) {
            for (const walk::StepRecord& st : e.steps) {
              if (st.dead_end) continue;
              const double si = st.scores.sum();
              const double sd = st.distilled_scores.sum();
              for (Eigen::Index k = 0; k < st.scores.size(); ++k) {
                const double pi = st.scores[k] / si;
                const double pd = st.distilled_scores[k] / sd;
                s.kl += pi * (std::log(std::max(pi, kProbFloor)) -
                              std::log(std::max(pd, kProbFloor)));
              }
              ++s.kl_steps;
            }
          }
        }
      });

      // Serial merge in chunk order keeps floating-point addition order fixed.
      std::vector<AgentStats> batch_stats(static_cast<std::size_t>(L));
      for (const ChunkAccum& acc : chunks) {
        for (int l = 0; l < L; ++l) {
          if (acc.agents[static_cast<std::size_t>(l)])
            add_grads(params.agents[static_cast<std::size_t>(l)],
                      *acc.agents[static_cast<std::size_t>(l)]);
          const AgentStats& cs = acc.stats[static_cast<std::size_t>(l)];
          AgentStats& bs = batch_stats[static_cast<std::size_t>(l)];
          bs.reward += cs.reward;
          bs.loss += cs.loss;
          bs.kl += cs.kl;
          bs.g1 += cs.g1;
          bs.episodes += cs.episodes;
          bs.kl_steps += cs.kl_steps;
        }
        if (acc.distilled) add_grads(*params.distilled, *acc.distilled);
        res.prob_floor_hits += acc.floor_hits;
      }

      params.for_each_tensor([&](nn::Tensor& t) { opt.step(t); });

      for (int l = 0; l < L; ++l) {
        AgentStats& bs = batch_stats[static_cast<std::size_t>(l)];
        AgentStats& es = epoch_stats[static_cast<std::size_t>(l)];
        if (hp.use_baseline && bs.episodes > 0)
          baseline[static_cast<std::size_t>(l)] =
              0.9 * baseline[static_cast<std::size_t>(l)] +
              0.1 * bs.g1 / static_cast<double>(bs.episodes);
        es.reward += bs.reward;
        es.loss += bs.loss;
        es.kl += bs.kl;
        es.episodes += bs.episodes;
        es.kl_steps += bs.kl_steps;
      }
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    double mean_reward_all = 0.0;
    for (int l = 0; l < L; ++l) {
      const AgentStats& s = epoch_stats[static_cast<std::size_t>(l)];
      EpochLogRow row;
      row.epoch = epoch;
      row.agent = l;
      row.mean_reward = s.episodes > 0 ? s.reward / static_cast<double>(s.episodes) : 0.0;
      row.supervised_loss =
          s.episodes > 0 ? s.loss / static_cast<double>(s.episodes) : 0.0;
      row.mean_kl = s.kl_steps > 0 ? s.kl / static_cast<double>(s.kl_steps) : 0.0;
      row.wall_time_s = wall;
      if (!std::isfinite(row.mean_reward) || !std::isfinite(row.supervised_loss))
        throw DivergenceError("training diverged at epoch " + std::to_string(epoch) +
                              " (agent " + std::to_string(l) + ")");
      mean_reward_all += row.mean_reward / static_cast<double>(L);
      res.log.push_back(row);
    }
    log_info("train: epoch " + std::to_string(epoch + 1) + "/" +
             std::to_string(hp.epochs) + " mean_reward=" +
             std::to_string(mean_reward_all));

    if (opts.checkpoint_fn && hp.checkpoint_every > 0 &&
        (epoch + 1) % hp.checkpoint_every == 0) {
      opts.checkpoint_fn(epoch + 1, params);
      last_checkpoint = epoch + 1;
    }
  }

  if (opts.checkpoint_fn && hp.epochs > 0 && last_checkpoint != hp.epochs)
    opts.checkpoint_fn(hp.epochs, params);
  return res;
}

void write_train_log_csv(const std::string& path, const std::vector<EpochLogRow>& log) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << "epoch,agent,mean_reward,supervised_loss,mean_kl,wall_time_s\n";
  out << std::setprecision(17);
  for (const EpochLogRow& row : log)
    out << row.epoch << ',' << row.agent << ',' << row.mean_reward << ','
        << row.supervised_loss << ',' << row.mean_kl << ',' << row.wall_time_s << '\n';
  if (!out) throw InputError("failed while writing '" + path + "'");
}

}  // namespace mlgw::learn
