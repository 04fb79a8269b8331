#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mlgw/rng.hpp"
#include "mlgw/types.hpp"

/* Minimal differentiable core: exactly the three small networks the walker
   needs (per-neighbor scorer, GRU history encoder, affine classifier) with
   hand-derived backward passes, plus Adam/SGD. Deliberately not a general
   autodiff engine. All math is double precision. */

namespace mlgw::nn {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double sigmoid(double x);
VectorXd sigmoid_vec(const VectorXd& x);

/* ---- parameter tensors ------------------------------------------------ */

struct Tensor {
  std::string name;
  MatrixXd value;
  MatrixXd grad;
  MatrixXd m, v;            // Adam moments, allocated on first optimizer step
  std::int64_t steps = 0;   // Adam step count

  Tensor() = default;
  Tensor(std::string n, Eigen::Index rows, Eigen::Index cols)
      : name(std::move(n)),
        value(MatrixXd::Zero(rows, cols)),
        grad(MatrixXd::Zero(rows, cols)) {}

  // Accumulation-only twin: same name and grad shape, no values/moments.
  // Backward passes read values from the live tensor and may write gradients
  // into a twin owned by a worker chunk.
  static Tensor grad_only(const Tensor& like) {
    Tensor t;
    t.name = like.name;
    t.grad = MatrixXd::Zero(like.value.rows(), like.value.cols());
    return t;
  }

  void zero_grad() { grad.setZero(); }
};

// Glorot-uniform initialization: limit sqrt(6 / (fan_in + fan_out)) with
// fan_in = cols, fan_out = rows. Bias tensors stay zero by construction.
void init_glorot(Tensor& t, Rng& rng);

/* ---- affine + sigmoid (scorer and classifier share this shape) -------- */

// y = sigmoid(w.x + b); w is 1 x n, b is 1 x 1, x is n.
double affine_sigmoid(const Tensor& w, const Tensor& b, const VectorXd& x);

// Accumulates gradients for upstream gy into gw/gb; optionally accumulates
// the input gradient into *gx. y must be the forward output for (w, b, x).
void affine_sigmoid_backward(const Tensor& w, const VectorXd& x, double y, double gy,
                             Tensor& gw, Tensor& gb, VectorXd* gx = nullptr);

/* ---- GRU cell ---------------------------------------------------------- */

struct GruParams {
  Tensor Wz, Uz, bz;  // update gate
  Tensor Wr, Ur, br;  // reset gate
  Tensor W, U, b;     // candidate state

  static GruParams make(const std::string& prefix, int hidden, int input);
  GruParams grad_only() const;
  int hidden() const { return static_cast<int>(Wz.grad.rows()); }
  int input() const { return static_cast<int>(Wz.grad.cols()); }
};

// Forward caches everything the backward pass needs.
struct GruState {
  VectorXd z, r, hbar;  // gate activations and candidate state
  VectorXd uh;          // U * h_prev (candidate path, pre reset gate)
  VectorXd h;           // new hidden state
};

/*  z = sigmoid(Wz x + Uz h_prev + bz)
    r = sigmoid(Wr x + Ur h_prev + br)
    hbar = tanh(W x + r . (U h_prev) + b)
    h = z . hbar + (1 - z) . h_prev                                        */
GruState gru_forward(const GruParams& p, const VectorXd& h_prev, const VectorXd& x);

// Accumulates parameter gradients into `out` and d/dh_prev into gh_prev;
// optionally also d/dx into *gx. `st` must come from gru_forward on the same
// (p, h_prev, x).
void gru_backward(const GruParams& p, const VectorXd& h_prev, const VectorXd& x,
                  const GruState& st, const VectorXd& gh,
                  GruParams& out, VectorXd& gh_prev, VectorXd* gx = nullptr);

/* ---- model parameter bundles ------------------------------------------ */

// Per-neighbor scorer: scalar sigmoid score over [h_prev | x_v | x_e | x_k].
struct ScoreParams {
  Tensor w, b;
  static ScoreParams make(const std::string& prefix, int input);
  ScoreParams grad_only() const;
};

// Label classifier: p = sigmoid(w . h_T + b).
struct ClassifierParams {
  Tensor w, b;
  static ClassifierParams make(const std::string& prefix, int hidden);
  ClassifierParams grad_only() const;
};

struct AgentParams {
  ScoreParams score;
  GruParams gru;
  ClassifierParams clf;
  AgentParams grad_only() const;
};

// All per-label agents plus the shared (distilled) policy. The shared policy
// exists exactly when the variant is not `independent`.
struct ModelParams {
  std::vector<AgentParams> agents;
  std::optional<ScoreParams> distilled;
  std::vector<std::string> labels;  // one agent per label, same order
  int feature_dim = 0;
  int edge_feature_dim = 0;
  int hidden_dim = 0;
  Variant variant = Variant::reg;

  static ModelParams init(const std::vector<std::string>& labels, int feature_dim,
                          int edge_feature_dim, int hidden_dim, Variant variant,
                          std::uint64_t seed);

  int num_agents() const { return static_cast<int>(agents.size()); }
  int score_input_dim() const { return hidden_dim + 2 * feature_dim + edge_feature_dim; }
  int gru_input_dim() const { return 2 * feature_dim; }

  void for_each_tensor(const std::function<void(Tensor&)>& fn);
  void for_each_tensor(const std::function<void(const Tensor&)>& fn) const;
  void zero_grads();
};

/* ---- optimizers --------------------------------------------------------- */

enum class OptimizerKind { adam, sgd };

inline std::string to_string(OptimizerKind k) {
  return k == OptimizerKind::adam ? "adam" : "sgd";
}

inline OptimizerKind parse_optimizer(const std::string& s) {
  if (s == "adam") return OptimizerKind::adam;
  if (s == "sgd") return OptimizerKind::sgd;
  throw InputError("unknown optimizer '" + s + "' (expected adam or sgd)");
}

struct Optimizer {
  OptimizerKind kind = OptimizerKind::adam;
  double lr = 1e-2;
  double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;  // Adam constants

  // Applies the accumulated gradient and zeroes it. Throws DivergenceError
  // (naming the tensor) on non-finite gradients or resulting values.
  void step(Tensor& t) const;
};

}  // namespace mlgw::nn
