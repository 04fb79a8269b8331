#pragma once

#include <cstdint>
#include <vector>

#include "mlgw/graph.hpp"

namespace mlgw {

struct FoldAssignment {
  int k = 0;
  std::vector<std::vector<NodeId>> folds;  // disjoint labeled nodes, ascending ids
  std::vector<int> fold_of;                // node -> fold index, -1 for unlabeled

  // Convenience views for the supervision regimes.
  std::vector<NodeId> fold_nodes(int fold) const { return folds[fold]; }
  std::vector<NodeId> complement_nodes(int fold) const;
};

/* Iterative stratification of the labeled nodes into k folds: repeatedly pick
   the label with the fewest remaining unassigned positive examples and deal
   its examples to the fold with the greatest remaining demand for that label;
   ties fall back to the greatest total remaining capacity, then to a seeded
   random draw. Demand/capacity bookkeeping uses exact integer arithmetic. */
FoldAssignment stratified_kfold(const AttributedGraph& g, int k, std::uint64_t seed);

}  // namespace mlgw
