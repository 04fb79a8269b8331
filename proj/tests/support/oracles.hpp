#pragma once

/* Shared test machinery: small graph builders, central-difference gradient
   checking, exhaustive episode enumeration for expectation oracles, an
   independent one-vs-rest logistic classifier used as a walk-free baseline,
   and temp-file helpers. Everything here recomputes results from first
   principles so the library under test never validates itself. */

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mlgw/graph.hpp"
#include "mlgw/learn.hpp"
#include "mlgw/nn.hpp"
#include "mlgw/rng.hpp"
#include "mlgw/walk.hpp"

namespace testutil {

using Eigen::MatrixXd;
using Eigen::VectorXd;

/* ---- numeric comparison -------------------------------------------------- */

// Central differences carry O(eps^2) truncation error plus an eps-divided
// rounding term; the floor keeps tiny entries from demanding impossible
// relative agreement.
inline constexpr double kFdEps = 1e-5;
inline constexpr double kFdRelTol = 1e-4;

inline double rel_err(double a, double b) {
  const double denom = std::max({std::abs(a), std::abs(b), 1e-3});
  return std::abs(a - b) / denom;
}

// Exact floating-point equality, entry by entry (no tolerance).
inline bool bits_equal(const MatrixXd& a, const MatrixXd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

// Exact equality of every tensor value in two parameter bundles.
inline bool params_bits_equal(const mlgw::nn::ModelParams& a,
                              const mlgw::nn::ModelParams& b) {
  std::vector<const mlgw::nn::Tensor*> ta, tb;
  a.for_each_tensor([&](const mlgw::nn::Tensor& t) { ta.push_back(&t); });
  b.for_each_tensor([&](const mlgw::nn::Tensor& t) { tb.push_back(&t); });
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (ta[i]->name != tb[i]->name) return false;
    if (!bits_equal(ta[i]->value, tb[i]->value)) return false;
  }
  return true;
}

/* ---- finite differences --------------------------------------------------- */

// d(loss)/d(slot) by central differences; restores the slot afterwards.
inline double central_diff(double& slot, const std::function<double()>& loss,
                           double eps = kFdEps) {
  const double keep = slot;
  slot = keep + eps;
  const double hi = loss();
  slot = keep - eps;
  const double lo = loss();
  slot = keep;
  return (hi - lo) / (2.0 * eps);
}

// Worst relative disagreement between an analytic gradient matrix and the
// central-difference gradient of `loss` w.r.t. every entry of `t.value`.
inline double fd_max_err(mlgw::nn::Tensor& t, const MatrixXd& analytic,
                         const std::function<double()>& loss, double eps = kFdEps) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < t.value.rows(); ++i) {
    for (Eigen::Index j = 0; j < t.value.cols(); ++j) {
      const double fd = central_diff(t.value(i, j), loss, eps);
      worst = std::max(worst, rel_err(analytic(i, j), fd));
    }
  }
  return worst;
}

// Same sweep over a free vector (inputs, hidden states).
inline double fd_max_err_vec(VectorXd& v, const VectorXd& analytic,
                             const std::function<double()>& loss, double eps = kFdEps) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double fd = central_diff(v(i), loss, eps);
    worst = std::max(worst, rel_err(analytic(i), fd));
  }
  return worst;
}

// (live tensor, analytic gradient) pairs for whole-parameter-bundle sweeps.
struct TensorPair {
  mlgw::nn::Tensor* live;
  const mlgw::nn::Tensor* grad;
  TensorPair(mlgw::nn::Tensor& l, const mlgw::nn::Tensor& g) : live(&l), grad(&g) {}
};

inline std::vector<TensorPair> gru_pairs(mlgw::nn::GruParams& live,
                                         const mlgw::nn::GruParams& grad) {
  return {{live.Wz, grad.Wz}, {live.Uz, grad.Uz}, {live.bz, grad.bz},
          {live.Wr, grad.Wr}, {live.Ur, grad.Ur}, {live.br, grad.br},
          {live.W, grad.W},   {live.U, grad.U},   {live.b, grad.b}};
}

inline std::vector<TensorPair> agent_pairs(mlgw::nn::AgentParams& live,
                                           const mlgw::nn::AgentParams& grad) {
  std::vector<TensorPair> out = gru_pairs(live.gru, grad.gru);
  out.emplace_back(live.score.w, grad.score.w);
  out.emplace_back(live.score.b, grad.score.b);
  out.emplace_back(live.clf.w, grad.clf.w);
  out.emplace_back(live.clf.b, grad.clf.b);
  return out;
}

inline double fd_max_err_pairs(const std::vector<TensorPair>& pairs,
                               const std::function<double()>& loss, double eps = kFdEps) {
  double worst = 0.0;
  for (const TensorPair& p : pairs)
    worst = std::max(worst, fd_max_err(*p.live, p.grad->grad, loss, eps));
  return worst;
}

/* ---- graph builders -------------------------------------------------------- */

inline mlgw::NodeRecord node(std::string id, std::vector<double> features,
                             std::vector<std::string> labels = {}) {
  return {std::move(id), std::move(features), std::move(labels)};
}

inline mlgw::EdgeRecord edge(std::string src, std::string dst,
                             std::vector<double> features = {}) {
  return {std::move(src), std::move(dst), std::move(features)};
}

/* A fully labeled random graph: ring plus seeded chords, features N(0, 1)
   left unnormalized so gradient magnitudes stay O(1). Labels cycle through
   the vocabulary; every node carries one or two labels. */
inline mlgw::AttributedGraph random_graph(int n, int F, int Fe, int L, std::uint64_t seed,
                                          int chords = 2) {
  mlgw::Rng rng(mlgw::mix64(seed));
  std::vector<mlgw::NodeRecord> nodes;
  std::vector<mlgw::EdgeRecord> edges;
  for (int v = 0; v < n; ++v) {
    std::vector<double> f(static_cast<std::size_t>(F));
    for (double& x : f) x = rng.normal();
    std::vector<std::string> labels = {"L" + std::to_string(v % L)};
    if (v % 3 == 0 && L > 1) labels.push_back("L" + std::to_string((v + 1) % L));
    nodes.push_back(node("n" + std::to_string(v), std::move(f), std::move(labels)));
  }
  auto edge_features = [&]() {
    std::vector<double> f(static_cast<std::size_t>(Fe));
    for (double& x : f) x = 0.5 * rng.normal();
    return f;
  };
  for (int v = 0; v < n; ++v)
    edges.push_back(edge("n" + std::to_string(v), "n" + std::to_string((v + 1) % n),
                         Fe > 0 ? edge_features() : std::vector<double>{}));
  for (int c = 0; c < chords * n; ++c) {
    const int a = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    const int b = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    if (a == b) continue;
    edges.push_back(edge("n" + std::to_string(a), "n" + std::to_string(b),
                         Fe > 0 ? edge_features() : std::vector<double>{}));
  }
  mlgw::LoadOptions opt;
  opt.symmetrize = true;
  opt.normalize_features = false;
  return mlgw::build_graph(nodes, edges, opt);
}

// Random model parameters over a graph's shape.
inline mlgw::nn::ModelParams random_params(const mlgw::AttributedGraph& g, int hidden,
                                           mlgw::Variant variant, std::uint64_t seed) {
  return mlgw::nn::ModelParams::init(g.label_names, g.feature_dim(), g.edge_feature_dim(),
                                     hidden, variant, seed);
}

/* ---- exhaustive episode enumeration ---------------------------------------- */

/* Visits every T-step action sequence reachable from `start` (dead ends have
   the single forced action 0). The node path is a pure function of the
   action sequence, so the tree is walked without touching any policy. */
inline void enumerate_action_seqs(const mlgw::AttributedGraph& g, mlgw::NodeId start, int T,
                                  const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> actions;
  std::function<void(mlgw::NodeId, int)> rec = [&](mlgw::NodeId v, int depth) {
    if (depth == T) {
      visit(actions);
      return;
    }
    const auto& adj = g.adjacency[static_cast<std::size_t>(v)];
    const int K = adj.empty() ? 1 : static_cast<int>(adj.size());
    for (int a = 0; a < K; ++a) {
      actions.push_back(a);
      rec(adj.empty() ? v : adj[static_cast<std::size_t>(a)].neighbor, depth + 1);
      actions.pop_back();
    }
  };
  rec(start, 0);
}

// Probability of a recorded episode under the distribution that sampled it.
inline double trajectory_probability(const mlgw::walk::Episode& ep) {
  double p = 1.0;
  for (const auto& st : ep.steps) p *= st.prob_sampling;
  return p;
}

/* ---- independent baseline: one-vs-rest ridge logistic regression ----------- */

/* Full-batch gradient descent on L2-regularized logistic loss per label,
   run to near-convergence. Used as the walk-free reference classifier on
   raw node features. */
struct LogisticBaseline {
  MatrixXd W;   // L x F
  VectorXd b;   // L

  static LogisticBaseline fit(const MatrixXd& X,  // F x n, one column per example
                              const std::vector<std::vector<bool>>& Y, int L,
                              double l2 = 1e-3, int iters = 3000, double lr = 0.5) {
    const Eigen::Index F = X.rows();
    const Eigen::Index n = X.cols();
    LogisticBaseline m;
    m.W = MatrixXd::Zero(L, F);
    m.b = VectorXd::Zero(L);
    for (int l = 0; l < L; ++l) {
      VectorXd y(n);
      for (Eigen::Index i = 0; i < n; ++i)
        y(i) = Y[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)] ? 1.0 : 0.0;
      VectorXd w = VectorXd::Zero(F);
      double bias = 0.0;
      for (int it = 0; it < iters; ++it) {
        VectorXd z = X.transpose() * w + VectorXd::Constant(n, bias);
        VectorXd p(n);
        for (Eigen::Index i = 0; i < n; ++i) p(i) = 1.0 / (1.0 + std::exp(-z(i)));
        const VectorXd d = (p - y) / static_cast<double>(n);
        const VectorXd gw = X * d + l2 * w;
        const double gb = d.sum();
        w -= lr * gw;
        bias -= lr * gb;
      }
      m.W.row(l) = w.transpose();
      m.b(l) = bias;
    }
    return m;
  }

  std::vector<std::vector<bool>> predict(const MatrixXd& X) const {
    std::vector<std::vector<bool>> out(static_cast<std::size_t>(X.cols()));
    for (Eigen::Index i = 0; i < X.cols(); ++i) {
      auto& row = out[static_cast<std::size_t>(i)];
      row.resize(static_cast<std::size_t>(W.rows()));
      const VectorXd z = W * X.col(i) + b;
      for (Eigen::Index l = 0; l < W.rows(); ++l)
        row[static_cast<std::size_t>(l)] = z(l) > 0.0;
    }
    return out;
  }
};

/* ---- files ------------------------------------------------------------------ */

// Unique scratch directory, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    static std::uint64_t counter = 0;
    const auto base = std::filesystem::temp_directory_path();
    path = base / ("mlgw_test_" + tag + "_" + std::to_string(++counter) + "_" +
                   std::to_string(static_cast<std::uint64_t>(
                       std::chrono::steady_clock::now().time_since_epoch().count())));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bool files_identical(const std::string& a, const std::string& b) {
  return read_file(a) == read_file(b);
}

// Equality of CSV files ignoring the named columns (header-matched); used to
// compare training logs whose wall-time column legitimately varies.
inline bool csv_equal_ignoring(const std::string& path_a, const std::string& path_b,
                               const std::vector<std::string>& ignored) {
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  std::istringstream a(read_file(path_a)), b(read_file(path_b));
  std::string la, lb;
  std::vector<int> skip;
  bool first = true;
  while (true) {
    const bool ga = static_cast<bool>(std::getline(a, la));
    const bool gb = static_cast<bool>(std::getline(b, lb));
    if (ga != gb) return false;
    if (!ga) return true;
    const auto ca = split(la), cb = split(lb);
    if (ca.size() != cb.size()) return false;
    if (first) {
      for (std::size_t i = 0; i < ca.size(); ++i)
        if (std::find(ignored.begin(), ignored.end(), ca[i]) != ignored.end())
          skip.push_back(static_cast<int>(i));
      first = false;
      if (la != lb) return false;
      continue;
    }
    for (std::size_t i = 0; i < ca.size(); ++i) {
      if (std::find(skip.begin(), skip.end(), static_cast<int>(i)) != skip.end()) continue;
      if (ca[i] != cb[i]) return false;
    }
  }
}

}  // namespace testutil
