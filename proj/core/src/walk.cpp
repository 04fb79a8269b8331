#include "mlgw/walk.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace mlgw::walk {

using nlohmann::json;

VectorXd score_neighbors(const nn::ScoreParams& sp, const AttributedGraph& g,
                         const VectorXd& h_prev, NodeId v,
                         const std::vector<NodeId>& neighbors, const std::vector<EdgeId>& edges) {
  const Eigen::Index d = h_prev.size();
  const Eigen::Index F = g.feature_dim();
  const Eigen::Index Fe = g.edge_feature_dim();
  const auto w = sp.w.value.row(0);

  // Shared weights over [h_prev | x_v | x_e | x_k]: the h_prev and x_v terms
  // are common to every candidate, so hoist them out of the loop.
  double base = sp.b.value(0, 0);
  base += w.segment(0, d).dot(h_prev);
  base += w.segment(d, F).dot(g.features.col(v));

  VectorXd scores(static_cast<Eigen::Index>(neighbors.size()));
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    double pre = base;
    if (Fe > 0 && edges[i] >= 0) pre += w.segment(d + F, Fe).dot(g.edge_features.col(edges[i]));
    pre += w.segment(d + F + Fe, F).dot(g.features.col(neighbors[i]));
    scores[static_cast<Eigen::Index>(i)] = nn::sigmoid(pre);
  }
  return scores;
}

std::pair<int, double> sample_action(const VectorXd& weights, Rng& rng) {
  const double total = weights.sum();
  const double u = rng.uniform01() * total;
  double acc = 0.0;
  int pick = static_cast<int>(weights.size()) - 1;
  for (Eigen::Index i = 0; i + 1 < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) {
      pick = static_cast<int>(i);
      break;
    }
  }
  return {pick, weights[pick] / total};
}

VectorXd aggregate_neighbors(const AttributedGraph& g, const std::vector<NodeId>& neighbors,
                             const VectorXd& scores) {
  VectorXd c = VectorXd::Zero(g.feature_dim());
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    if (scores[static_cast<Eigen::Index>(i)] > 0.5) c += g.features.col(neighbors[i]);
  }
  return c;
}

namespace {

Episode run_impl(const AttributedGraph& g, const nn::ModelParams& params, int agent,
                 NodeId start, int T, Rng* rng, const std::vector<int>* forced) {
  if (start < 0 || start >= g.num_nodes()) {
    throw InputError("run_episode: unknown start node id " + std::to_string(start));
  }
  if (agent < 0 || agent >= params.num_agents()) {
    throw ConsistencyError("run_episode: agent index " + std::to_string(agent) +
                           " out of range for " + std::to_string(params.num_agents()) +
                           " agents");
  }
  if (T < 1) throw InputError("run_episode: walk length must be at least 1");
  if (g.feature_dim() != params.feature_dim || g.edge_feature_dim() != params.edge_feature_dim) {
    throw ConsistencyError("run_episode: graph feature dims (" +
                           std::to_string(g.feature_dim()) + "," +
                           std::to_string(g.edge_feature_dim()) +
                           ") do not match parameters (" + std::to_string(params.feature_dim) +
                           "," + std::to_string(params.edge_feature_dim) + ")");
  }
  if (forced && static_cast<int>(forced->size()) != T) {
    throw InputError("replay_episode: expected " + std::to_string(T) + " actions, got " +
                     std::to_string(forced->size()));
  }

  const nn::AgentParams& ap = params.agents[agent];
  Episode ep;
  ep.agent = agent;
  ep.start = start;
  ep.variant = params.variant;
  ep.steps.reserve(static_cast<std::size_t>(T));

  VectorXd h_prev = VectorXd::Zero(params.hidden_dim);
  NodeId v = start;

  for (int t = 0; t < T; ++t) {
    StepRecord st;
    st.node = v;

    const auto& adj = g.adjacency[v];
    if (adj.empty()) {
      // Dead end: self-transition with probability 1 and zero aggregate.
      st.dead_end = true;
      st.neighbors = {v};
      st.edges = {-1};
      st.scores = score_neighbors(ap.score, g, h_prev, v, st.neighbors, st.edges);
      if (params.distilled) {
        st.distilled_scores =
            score_neighbors(*params.distilled, g, h_prev, v, st.neighbors, st.edges);
      }
      st.action = 0;
      st.aggregate = VectorXd::Zero(g.feature_dim());
      if (forced && (*forced)[t] != 0) {
        throw InputError("replay_episode: action " + std::to_string((*forced)[t]) +
                         " at dead-end step " + std::to_string(t));
      }
    } else {
      st.neighbors.reserve(adj.size());
      st.edges.reserve(adj.size());
      for (const AdjEntry& a : adj) {
        st.neighbors.push_back(a.neighbor);
        st.edges.push_back(a.edge);
      }
      st.scores = score_neighbors(ap.score, g, h_prev, v, st.neighbors, st.edges);
      if (params.distilled) {
        st.distilled_scores =
            score_neighbors(*params.distilled, g, h_prev, v, st.neighbors, st.edges);
      }

      VectorXd weights = st.scores;
      if (params.variant == Variant::reg_plus) {
        weights = weights.cwiseProduct(st.distilled_scores);
      }
      if (forced) {
        const int a = (*forced)[t];
        if (a < 0 || a >= static_cast<int>(st.neighbors.size())) {
          throw InputError("replay_episode: action " + std::to_string(a) + " at step " +
                           std::to_string(t) + " is out of range");
        }
        st.action = a;
        st.prob_sampling = weights[a] / weights.sum();
      } else {
        auto [a, p] = sample_action(weights, *rng);
        st.action = a;
        st.prob_sampling = p;
      }
      st.prob_local = st.scores[st.action] / st.scores.sum();
      st.prob_distilled = params.distilled
                              ? st.distilled_scores[st.action] / st.distilled_scores.sum()
                              : 1.0;
      st.aggregate = aggregate_neighbors(g, st.neighbors, st.scores);
    }

    VectorXd x(2 * g.feature_dim());
    x << g.features.col(v), st.aggregate;
    st.gru = nn::gru_forward(ap.gru, h_prev, x);
    h_prev = st.gru.h;
    v = st.neighbors[static_cast<std::size_t>(st.action)];
    ep.steps.push_back(std::move(st));
  }

  ep.p = nn::affine_sigmoid(ap.clf.w, ap.clf.b, h_prev);
  if (g.labeled[start]) {
    const bool bit = g.has_label(start, agent);
    ep.reward = ((ep.p > 0.5) == bit) ? 1.0 : -1.0;
    ep.has_reward = true;
  }
  return ep;
}

}  // namespace

Episode run_episode(const AttributedGraph& g, const nn::ModelParams& params, int agent,
                    NodeId start, int T, Rng& rng) {
  return run_impl(g, params, agent, start, T, &rng, nullptr);
}

Episode replay_episode(const AttributedGraph& g, const nn::ModelParams& params, int agent,
                       NodeId start, const std::vector<int>& actions) {
  return run_impl(g, params, agent, start, static_cast<int>(actions.size()), nullptr, &actions);
}

std::vector<double> predict_node(const AttributedGraph& g, const nn::ModelParams& params,
                                 NodeId node, int T, int M, std::uint64_t seed,
                                 std::uint64_t seed_tag) {
  if (M < 1) throw InputError("predict_node: episode count must be at least 1");
  std::vector<double> mean_p(static_cast<std::size_t>(params.num_agents()), 0.0);
  for (int agent = 0; agent < params.num_agents(); ++agent) {
    double sum = 0.0;
    for (int m = 0; m < M; ++m) {
      Rng rng = Rng::stream(seed, {seed_tag, static_cast<std::uint64_t>(node),
                                   static_cast<std::uint64_t>(agent),
                                   static_cast<std::uint64_t>(m)});
      sum += run_episode(g, params, agent, node, T, rng).p;
    }
    mean_p[static_cast<std::size_t>(agent)] = sum / M;
  }
  return mean_p;
}

std::vector<std::uint8_t> threshold_predictions(const std::vector<double>& mean_p) {
  std::vector<std::uint8_t> out(mean_p.size(), 0);
  for (std::size_t i = 0; i < mean_p.size(); ++i) out[i] = mean_p[i] > 0.5 ? 1 : 0;
  return out;
}

/* ---- trace serialization --------------------------------------------------- */

namespace {

json vector_to_json(const VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

VectorXd json_to_vector(const json& a) {
  VectorXd v(static_cast<Eigen::Index>(a.size()));
  Eigen::Index i = 0;
  for (const auto& x : a) v[i++] = x.get<double>();
  return v;
}

}  // namespace

std::string episode_to_json(const Episode& ep, const AttributedGraph& g) {
  json j;
  j["agent"] = ep.agent;
  j["start"] = g.external_ids[ep.start];
  j["p"] = ep.p;
  j["reward"] = ep.reward;
  j["has_reward"] = ep.has_reward;
  j["variant"] = to_string(ep.variant);
  json steps = json::array();
  for (const StepRecord& st : ep.steps) {
    json s;
    s["node"] = g.external_ids[st.node];
    json nb = json::array();
    for (NodeId n : st.neighbors) nb.push_back(g.external_ids[n]);
    s["neighbors"] = std::move(nb);
    s["scores"] = vector_to_json(st.scores);
    s["action"] = st.action;
    s["prob_local"] = st.prob_local;
    s["prob_distilled"] = st.prob_distilled;
    s["dead_end"] = st.dead_end;
    s["aggregate"] = vector_to_json(st.aggregate);
    s["history"] = vector_to_json(st.gru.h);
    steps.push_back(std::move(s));
  }
  j["steps"] = std::move(steps);
  return j.dump();
}

void write_trace(const std::string& path, const std::vector<Episode>& episodes,
                 const AttributedGraph& g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open trace file for writing: " + path);
  for (const Episode& ep : episodes) out << episode_to_json(ep, g) << "\n";
}

std::vector<Episode> read_trace(const std::string& path, const AttributedGraph& g) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open trace file: " + path);

  std::vector<Episode> episodes;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      Episode ep;
      ep.agent = j.at("agent").get<int>();
      ep.start = g.internal_id(j.at("start").get<std::string>());
      ep.p = j.at("p").get<double>();
      ep.reward = j.at("reward").get<double>();
      ep.has_reward = j.at("has_reward").get<bool>();
      ep.variant = parse_variant(j.at("variant").get<std::string>());
      for (const auto& s : j.at("steps")) {
        StepRecord st;
        st.node = g.internal_id(s.at("node").get<std::string>());
        for (const auto& n : s.at("neighbors")) {
          st.neighbors.push_back(g.internal_id(n.get<std::string>()));
        }
        st.scores = json_to_vector(s.at("scores"));
        st.action = s.at("action").get<int>();
        st.prob_local = s.at("prob_local").get<double>();
        st.prob_distilled = s.at("prob_distilled").get<double>();
        st.dead_end = s.at("dead_end").get<bool>();
        st.aggregate = json_to_vector(s.at("aggregate"));
        st.gru.h = json_to_vector(s.at("history"));
        if (st.action < 0 || st.action >= static_cast<int>(st.neighbors.size())) {
          throw InputError("action index out of range");
        }
        ep.steps.push_back(std::move(st));
      }
      if (ep.steps.empty()) throw InputError("episode has no steps");
      episodes.push_back(std::move(ep));
    } catch (const json::exception& e) {
      throw InputError(path + ":" + std::to_string(lineno) + ": malformed trace line: " +
                       e.what());
    } catch (const InputError& e) {
      throw InputError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return episodes;
}

}  // namespace mlgw::walk
