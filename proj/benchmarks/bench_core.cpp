/* Microbenchmarks for the hot paths: the GRU cell, single-episode walks as a
   function of walk length, and a full training epoch on a small graph.

   Run with, e.g.:
     ./build/benchmarks/mlgw_benchmarks --benchmark_min_time=0.2s
*/

#include <cstdint>
#include <vector>

#include <benchmark/benchmark.h>

#include "mlgw/graph.hpp"
#include "mlgw/learn.hpp"
#include "mlgw/nn.hpp"
#include "mlgw/rng.hpp"
#include "mlgw/synthetic.hpp"
#include "mlgw/walk.hpp"

namespace {

namespace nn = mlgw::nn;
namespace walk = mlgw::walk;
namespace learn = mlgw::learn;

using Eigen::VectorXd;

VectorXd random_vec(int n, mlgw::Rng& rng) {
  VectorXd v(n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = rng.normal();
  return v;
}

nn::GruParams make_gru(int hidden, int input, std::uint64_t seed) {
  nn::GruParams p = nn::GruParams::make("bench", hidden, input);
  mlgw::Rng rng(mlgw::mix64(seed));
  for (nn::Tensor* t : {&p.Wz, &p.Uz, &p.Wr, &p.Ur, &p.W, &p.U})
    nn::init_glorot(*t, rng);
  return p;
}

void BM_GruForward(benchmark::State& state) {
  const int hidden = 128, input = 600;
  const nn::GruParams p = make_gru(hidden, input, 1);
  mlgw::Rng rng(mlgw::mix64(2));
  const VectorXd h_prev = random_vec(hidden, rng);
  const VectorXd x = random_vec(input, rng);
  for (auto _ : state) {
    const nn::GruState st = nn::gru_forward(p, h_prev, x);
    benchmark::DoNotOptimize(st.h.sum());
  }
}
BENCHMARK(BM_GruForward);

void BM_GruBackward(benchmark::State& state) {
  const int hidden = 128, input = 600;
  nn::GruParams p = make_gru(hidden, input, 3);
  mlgw::Rng rng(mlgw::mix64(4));
  const VectorXd h_prev = random_vec(hidden, rng);
  const VectorXd x = random_vec(input, rng);
  const VectorXd gh = random_vec(hidden, rng);
  const nn::GruState st = nn::gru_forward(p, h_prev, x);
  nn::GruParams grads = p.grad_only();
  VectorXd gh_prev = VectorXd::Zero(hidden);
  for (auto _ : state) {
    nn::gru_backward(p, h_prev, x, st, gh, grads, gh_prev);
    benchmark::DoNotOptimize(gh_prev.sum());
  }
}
BENCHMARK(BM_GruBackward);

mlgw::AttributedGraph bench_graph() {
  mlgw::synthetic::SyntheticSpec spec;
  spec.num_nodes = 200;
  spec.num_labels = 3;
  spec.feature_dim = 64;
  spec.labeled_fraction = 0.5;
  spec.intra_degree = 8;
  spec.inter_degree = 2;
  return mlgw::synthetic::generate(spec, 7);
}

// Episode cost as a function of walk length (the argument).
void BM_Episode(benchmark::State& state) {
  const mlgw::AttributedGraph g = bench_graph();
  const nn::ModelParams params = nn::ModelParams::init(
      g.label_names, g.feature_dim(), g.edge_feature_dim(), 32, mlgw::Variant::reg, 11);
  const int T = static_cast<int>(state.range(0));
  std::uint64_t episode = 0;
  for (auto _ : state) {
    mlgw::Rng rng = mlgw::Rng::stream(5, {episode++});
    const walk::Episode ep =
        walk::run_episode(g, params, 0, static_cast<mlgw::NodeId>(episode % 200), T, rng);
    benchmark::DoNotOptimize(ep.p);
  }
}
BENCHMARK(BM_Episode)->Arg(2)->Arg(5)->Arg(10)->Arg(20);

// One full training epoch (all labeled nodes, stock batch size).
void BM_TrainEpoch(benchmark::State& state) {
  const mlgw::AttributedGraph g = bench_graph();
  std::vector<mlgw::NodeId> labeled;
  for (mlgw::NodeId v = 0; v < g.num_nodes(); ++v)
    if (g.labeled[static_cast<std::size_t>(v)]) labeled.push_back(v);

  learn::HyperParams hp;
  hp.hidden_dim = 32;
  hp.walk_length = 5;
  hp.episodes_per_node = 2;
  hp.epochs = 1;
  hp.batch_size = 32;

  std::uint64_t seed = 0;
  for (auto _ : state) {
    learn::TrainOptions opts;
    opts.seed = seed++;
    const learn::TrainResult tr = learn::train(g, labeled, hp, opts);
    benchmark::DoNotOptimize(tr.log.back().mean_reward);
  }
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
