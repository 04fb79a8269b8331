#include "mlgw/nn.hpp"

#include <cmath>

namespace mlgw::nn {

double sigmoid(double x) {
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

VectorXd sigmoid_vec(const VectorXd& x) {
  VectorXd y(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) y[i] = sigmoid(x[i]);
  return y;
}

void init_glorot(Tensor& t, Rng& rng) {
  const double fan_in = static_cast<double>(t.value.cols());
  const double fan_out = static_cast<double>(t.value.rows());
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  // Row-major fill order so the layout matches the serialized form.
  for (Eigen::Index i = 0; i < t.value.rows(); ++i)
    for (Eigen::Index j = 0; j < t.value.cols(); ++j)
      t.value(i, j) = (2.0 * rng.uniform01() - 1.0) * limit;
}

/* ---- affine + sigmoid --------------------------------------------------- */

double affine_sigmoid(const Tensor& w, const Tensor& b, const VectorXd& x) {
  return sigmoid((w.value.row(0) * x)(0) + b.value(0, 0));
}

void affine_sigmoid_backward(const Tensor& w, const VectorXd& x, double y, double gy,
                             Tensor& gw, Tensor& gb, VectorXd* gx) {
  const double s = gy * y * (1.0 - y);  // through the sigmoid
  gw.grad.row(0) += s * x.transpose();
  gb.grad(0, 0) += s;
  if (gx) *gx += s * w.value.row(0).transpose();
}

/* ---- GRU ----------------------------------------------------------------- */

GruParams GruParams::make(const std::string& prefix, int hidden, int input) {
  GruParams p;
  p.Wz = Tensor(prefix + ".Wz", hidden, input);
  p.Uz = Tensor(prefix + ".Uz", hidden, hidden);
  p.bz = Tensor(prefix + ".bz", hidden, 1);
  p.Wr = Tensor(prefix + ".Wr", hidden, input);
  p.Ur = Tensor(prefix + ".Ur", hidden, hidden);
  p.br = Tensor(prefix + ".br", hidden, 1);
  p.W = Tensor(prefix + ".W", hidden, input);
  p.U = Tensor(prefix + ".U", hidden, hidden);
  p.b = Tensor(prefix + ".b", hidden, 1);
  return p;
}

GruParams GruParams::grad_only() const {
  GruParams g;
  g.Wz = Tensor::grad_only(Wz);
  g.Uz = Tensor::grad_only(Uz);
  g.bz = Tensor::grad_only(bz);
  g.Wr = Tensor::grad_only(Wr);
  g.Ur = Tensor::grad_only(Ur);
  g.br = Tensor::grad_only(br);
  g.W = Tensor::grad_only(W);
  g.U = Tensor::grad_only(U);
  g.b = Tensor::grad_only(b);
  return g;
}

GruState gru_forward(const GruParams& p, const VectorXd& h_prev, const VectorXd& x) {
  GruState st;
  st.z = sigmoid_vec(p.Wz.value * x + p.Uz.value * h_prev + p.bz.value.col(0));
  st.r = sigmoid_vec(p.Wr.value * x + p.Ur.value * h_prev + p.br.value.col(0));
  st.uh = p.U.value * h_prev;
  st.hbar = (p.W.value * x + st.r.cwiseProduct(st.uh) + p.b.value.col(0)).array().tanh();
  st.h = st.z.cwiseProduct(st.hbar) + (VectorXd::Ones(st.z.size()) - st.z).cwiseProduct(h_prev);
  return st;
}

void gru_backward(const GruParams& p, const VectorXd& h_prev, const VectorXd& x,
                  const GruState& st, const VectorXd& gh,
                  GruParams& out, VectorXd& gh_prev, VectorXd* gx) {
  const VectorXd ones = VectorXd::Ones(gh.size());

  // h = z . hbar + (1 - z) . h_prev
  const VectorXd dz = gh.cwiseProduct(st.hbar - h_prev);
  const VectorXd dhbar = gh.cwiseProduct(st.z);
  gh_prev += gh.cwiseProduct(ones - st.z);

  // hbar = tanh(W x + r . uh + b)
  const VectorXd dpre_h = dhbar.cwiseProduct(ones - st.hbar.cwiseProduct(st.hbar));
  const VectorXd dr = dpre_h.cwiseProduct(st.uh);
  const VectorXd duh = dpre_h.cwiseProduct(st.r);

  // gates
  const VectorXd dpre_z = dz.cwiseProduct(st.z).cwiseProduct(ones - st.z);
  const VectorXd dpre_r = dr.cwiseProduct(st.r).cwiseProduct(ones - st.r);

  out.W.grad.noalias() += dpre_h * x.transpose();
  out.U.grad.noalias() += duh * h_prev.transpose();
  out.b.grad.col(0) += dpre_h;
  out.Wz.grad.noalias() += dpre_z * x.transpose();
  out.Uz.grad.noalias() += dpre_z * h_prev.transpose();
  out.bz.grad.col(0) += dpre_z;
  out.Wr.grad.noalias() += dpre_r * x.transpose();
  out.Ur.grad.noalias() += dpre_r * h_prev.transpose();
  out.br.grad.col(0) += dpre_r;

  gh_prev.noalias() += p.Uz.value.transpose() * dpre_z;
  gh_prev.noalias() += p.Ur.value.transpose() * dpre_r;
  gh_prev.noalias() += p.U.value.transpose() * duh;

  if (gx) {
    gx->noalias() += p.Wz.value.transpose() * dpre_z;
    gx->noalias() += p.Wr.value.transpose() * dpre_r;
    gx->noalias() += p.W.value.transpose() * dpre_h;
  }
}

/* ---- parameter bundles ---------------------------------------------------- */

ScoreParams ScoreParams::make(const std::string& prefix, int input) {
  ScoreParams p;
  p.w = Tensor(prefix + ".w", 1, input);
  p.b = Tensor(prefix + ".b", 1, 1);
  return p;
}

ScoreParams ScoreParams::grad_only() const {
  ScoreParams g;
  g.w = Tensor::grad_only(w);
  g.b = Tensor::grad_only(b);
  return g;
}

ClassifierParams ClassifierParams::make(const std::string& prefix, int hidden) {
  ClassifierParams p;
  p.w = Tensor(prefix + ".w", 1, hidden);
  p.b = Tensor(prefix + ".b", 1, 1);
  return p;
}

ClassifierParams ClassifierParams::grad_only() const {
  ClassifierParams g;
  g.w = Tensor::grad_only(w);
  g.b = Tensor::grad_only(b);
  return g;
}

AgentParams AgentParams::grad_only() const {
  AgentParams g;
  g.score = score.grad_only();
  g.gru = gru.grad_only();
  g.clf = clf.grad_only();
  return g;
}

ModelParams ModelParams::init(const std::vector<std::string>& labels, int feature_dim,
                              int edge_feature_dim, int hidden_dim, Variant variant,
                              std::uint64_t seed) {
  ModelParams mp;
  mp.labels = labels;
  mp.feature_dim = feature_dim;
  mp.edge_feature_dim = edge_feature_dim;
  mp.hidden_dim = hidden_dim;
  mp.variant = variant;

  const int score_in = mp.score_input_dim();
  const int gru_in = mp.gru_input_dim();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string prefix = "agent" + std::to_string(i);
    AgentParams ap;
    ap.score = ScoreParams::make(prefix + ".score", score_in);
    ap.gru = GruParams::make(prefix + ".gru", hidden_dim, gru_in);
    ap.clf = ClassifierParams::make(prefix + ".clf", hidden_dim);
    mp.agents.push_back(std::move(ap));
  }
  if (variant != Variant::independent) {
    mp.distilled = ScoreParams::make("distilled", score_in);
  }

  // Each weight tensor gets its own stream so initialization is independent
  // of iteration order; biases stay zero.
  std::uint64_t tensor_idx = 0;
  auto glorot = [&](Tensor& t) {
    Rng rng = Rng::stream(seed, {stream_tag::init, tensor_idx++});
    init_glorot(t, rng);
  };
  for (auto& a : mp.agents) {
    glorot(a.score.w);
    glorot(a.gru.Wz);
    glorot(a.gru.Uz);
    glorot(a.gru.Wr);
    glorot(a.gru.Ur);
    glorot(a.gru.W);
    glorot(a.gru.U);
    glorot(a.clf.w);
  }
  if (mp.distilled) glorot(mp.distilled->w);
  return mp;
}

void ModelParams::for_each_tensor(const std::function<void(Tensor&)>& fn) {
  for (auto& a : agents) {
    fn(a.score.w);
    fn(a.score.b);
    fn(a.gru.Wz);
    fn(a.gru.Uz);
    fn(a.gru.bz);
    fn(a.gru.Wr);
    fn(a.gru.Ur);
    fn(a.gru.br);
    fn(a.gru.W);
    fn(a.gru.U);
    fn(a.gru.b);
    fn(a.clf.w);
    fn(a.clf.b);
  }
  if (distilled) {
    fn(distilled->w);
    fn(distilled->b);
  }
}

void ModelParams::for_each_tensor(const std::function<void(const Tensor&)>& fn) const {
  const_cast<ModelParams*>(this)->for_each_tensor(
      [&](Tensor& t) { fn(static_cast<const Tensor&>(t)); });
}

void ModelParams::zero_grads() {
  for_each_tensor([](Tensor& t) { t.zero_grad(); });
}

/* ---- optimizers ------------------------------------------------------------ */

void Optimizer::step(Tensor& t) const {
  if (!t.grad.allFinite()) {
    throw DivergenceError("non-finite gradient in tensor '" + t.name + "'");
  }
  if (kind == OptimizerKind::sgd) {
    t.value.noalias() -= lr * t.grad;
  } else {
    if (t.m.size() == 0) {
      t.m = MatrixXd::Zero(t.value.rows(), t.value.cols());
      t.v = MatrixXd::Zero(t.value.rows(), t.value.cols());
    }
    t.steps += 1;
    t.m = beta1 * t.m + (1.0 - beta1) * t.grad;
    t.v = beta2 * t.v + (1.0 - beta2) * t.grad.cwiseProduct(t.grad);
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t.steps));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t.steps));
    const MatrixXd mhat = t.m / bc1;
    const MatrixXd vhat = t.v / bc2;
    t.value.array() -= lr * mhat.array() / (vhat.array().sqrt() + eps);
  }
  if (!t.value.allFinite()) {
    throw DivergenceError("non-finite values in tensor '" + t.name + "' after optimizer step");
  }
  t.zero_grad();
}

}  // namespace mlgw::nn
