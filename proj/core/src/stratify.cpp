#include "mlgw/stratify.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

#include "mlgw/rng.hpp"

namespace mlgw {

std::vector<NodeId> FoldAssignment::complement_nodes(int fold) const {
  std::vector<NodeId> out;
  for (int f = 0; f < k; ++f) {
    if (f == fold) continue;
    out.insert(out.end(), folds[f].begin(), folds[f].end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

FoldAssignment stratified_kfold(const AttributedGraph& g, int k, std::uint64_t seed) {
  if (k < 2) throw InputError("stratified_kfold: k must be at least 2");

  std::vector<NodeId> items;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (g.labeled[v]) items.push_back(v);
  }
  const auto n = static_cast<std::int64_t>(items.size());
  if (n < k) {
    throw InputError("stratified_kfold: k=" + std::to_string(k) + " exceeds the " +
                     std::to_string(n) + " labeled nodes");
  }

  const int L = g.num_labels();
  // Unassigned positive examples per label, kept in ascending node order.
  std::vector<std::vector<NodeId>> remaining(L);
  for (NodeId v : items) {
    for (int l : g.labels[v]) remaining[l].push_back(v);
  }
  std::vector<std::int64_t> label_total(L, 0);
  for (int l = 0; l < L; ++l) label_total[l] = static_cast<std::int64_t>(remaining[l].size());

  /* Integer bookkeeping: a fold's demand for label l is
       desired - received = total_l/k - received_l,
     compared across folds via total_l - k*received_l (exact, no division).
     Total capacity is compared the same way via n - k*fold_size. */
  std::vector<std::vector<std::int64_t>> received(L, std::vector<std::int64_t>(k, 0));
  std::vector<std::int64_t> fold_size(k, 0);

  FoldAssignment fa;
  fa.k = k;
  fa.folds.resize(k);
  fa.fold_of.assign(g.num_nodes(), -1);

  Rng rng = Rng::stream(seed, {stream_tag::fold});
  std::int64_t assigned = 0;

  while (assigned < n) {
    // Label with the fewest remaining positives (smallest index on ties).
    int pick = -1;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (int l = 0; l < L; ++l) {
      if (!remaining[l].empty() && remaining[l].size() < best) {
        best = remaining[l].size();
        pick = l;
      }
    }
    if (pick < 0) break;  // defensive; labeled nodes always carry >= 1 label

    // Deal this label's examples one at a time, ascending node id.
    const std::vector<NodeId> batch = remaining[pick];
    for (NodeId v : batch) {
      if (fa.fold_of[v] >= 0) continue;  // already placed via an earlier label

      std::vector<int> tied;
      std::int64_t best_demand = std::numeric_limits<std::int64_t>::min();
      for (int f = 0; f < k; ++f) {
        const std::int64_t demand = label_total[pick] - k * received[pick][f];
        if (demand > best_demand) {
          best_demand = demand;
          tied.assign(1, f);
        } else if (demand == best_demand) {
          tied.push_back(f);
        }
      }
      if (tied.size() > 1) {
        std::vector<int> cap_tied;
        std::int64_t best_cap = std::numeric_limits<std::int64_t>::min();
        for (int f : tied) {
          const std::int64_t cap = n - k * fold_size[f];
          if (cap > best_cap) {
            best_cap = cap;
            cap_tied.assign(1, f);
          } else if (cap == best_cap) {
            cap_tied.push_back(f);
          }
        }
        tied = std::move(cap_tied);
      }
      const int fold =
          tied.size() == 1 ? tied[0] : tied[static_cast<std::size_t>(rng.uniform_int(tied.size()))];

      fa.fold_of[v] = fold;
      fa.folds[fold].push_back(v);
      fold_size[fold] += 1;
      assigned += 1;
      for (int l : g.labels[v]) received[l][fold] += 1;
    }

    // Drop everything already assigned from the remaining lists.
    for (int l = 0; l < L; ++l) {
      auto& r = remaining[l];
      r.erase(std::remove_if(r.begin(), r.end(),
                             [&](NodeId v) { return fa.fold_of[v] >= 0; }),
              r.end());
    }
  }

  for (auto& fold : fa.folds) std::sort(fold.begin(), fold.end());
  return fa;
}

}  // namespace mlgw
