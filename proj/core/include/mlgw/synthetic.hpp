#pragma once

#include <cstdint>

#include "mlgw/graph.hpp"

/* Seeded generator for planted-structure multi-label graphs: every label has
   a prototype feature direction, node features are noisy prototype sums, and
   edges are mostly homophilous (label-sharing) with a uniform-noise floor.
   Used by the test and benchmark suites; useful as a demo dataset too. */

namespace mlgw::synthetic {

enum class LabelModel {
  independent,   // balanced primary label plus an optional random second one
  co_occur_pair  // labels 0 and 1 co-occur on most pair-group nodes; all
                 // other labels appear alone
};

struct SyntheticSpec {
  int num_nodes = 500;
  int num_labels = 4;
  int feature_dim = 300;
  int edge_feature_dim = 0;    // > 0 adds a shared-label fraction + noise dims
  double labeled_fraction = 0.2;
  double feature_noise = 1.0;  // Gaussian stddev around the prototype sum
  int intra_degree = 8;        // outgoing edges to label-sharing nodes
  int inter_degree = 2;        // outgoing edges to uniformly random nodes
  LabelModel label_model = LabelModel::independent;
  double co_rate = 0.8;        // co_occur_pair: both-labels fraction of the pair group
  double multi_rate = 0.25;    // independent: chance of a second label
};

// Deterministic in (spec, seed). The returned graph is symmetrized and
// feature-normalized; only `labeled_fraction` of the nodes expose labels.
AttributedGraph generate(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace mlgw::synthetic
