#include "mlgw/synthetic.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "mlgw/errors.hpp"
#include "mlgw/rng.hpp"

namespace mlgw::synthetic {

namespace {

// Zero-padded so the sorted label vocabulary preserves numeric order and
// agent index == generated label index.
std::string label_name(int l) {
  std::string num = std::to_string(l);
  return "L" + std::string(num.size() < 2 ? 2 - num.size() : 0, '0') + num;
}

}  // namespace

AttributedGraph generate(const SyntheticSpec& s, std::uint64_t seed) {
  if (s.num_nodes < 2) throw InputError("synthetic: need at least 2 nodes");
  if (s.num_labels < 1 || s.num_labels > 100)
    throw InputError("synthetic: num_labels must lie in [1, 100]");
  if (s.label_model == LabelModel::co_occur_pair && s.num_labels < 3)
    throw InputError("synthetic: the co-occurrence model needs at least 3 labels");
  if (s.feature_dim < 1) throw InputError("synthetic: feature_dim must be >= 1");
  if (s.edge_feature_dim < 0) throw InputError("synthetic: edge_feature_dim must be >= 0");
  if (!(s.labeled_fraction > 0.0) || s.labeled_fraction > 1.0)
    throw InputError("synthetic: labeled_fraction must lie in (0, 1]");
  if (s.feature_noise < 0.0) throw InputError("synthetic: feature_noise must be >= 0");
  if (s.intra_degree < 0 || s.inter_degree < 0)
    throw InputError("synthetic: degrees must be >= 0");
  if (s.co_rate < 0.0 || s.co_rate > 1.0 || s.multi_rate < 0.0 || s.multi_rate > 1.0)
    throw InputError("synthetic: rates must lie in [0, 1]");

  const int n = s.num_nodes;
  const int L = s.num_labels;
  const int F = s.feature_dim;

  Rng proto_rng = Rng::stream(seed, {stream_tag::synthetic, 1});
  Rng label_rng = Rng::stream(seed, {stream_tag::synthetic, 2});
  Rng feat_rng = Rng::stream(seed, {stream_tag::synthetic, 3});
  Rng edge_rng = Rng::stream(seed, {stream_tag::synthetic, 4});
  Rng mask_rng = Rng::stream(seed, {stream_tag::synthetic, 5});

  // Unit prototype direction per label.
  Eigen::MatrixXd proto(F, L);
  for (int l = 0; l < L; ++l) {
    for (int f = 0; f < F; ++f) proto(f, l) = proto_rng.normal();
    proto.col(l).normalize();
  }

  // Ground-truth label sets (sorted) for every node; only a fraction is exposed.
  std::vector<std::vector<int>> truth(static_cast<std::size_t>(n));
  if (s.label_model == LabelModel::independent) {
    for (int i = 0; i < n; ++i) {
      std::vector<int>& t = truth[static_cast<std::size_t>(i)];
      t.push_back(i % L);  // balanced primaries
      if (L > 1 && label_rng.uniform01() < s.multi_rate) {
        const int other =
            static_cast<int>(label_rng.uniform_int(static_cast<std::uint64_t>(L - 1)));
        t.push_back(other >= t[0] ? other + 1 : other);
      }
      std::sort(t.begin(), t.end());
    }
  } else {
    // First half: labels 0/1, co-occurring on ~co_rate of it. Second half:
    // the remaining labels, one each, never co-occurring with anything.
    const int pair_group = n / 2;
    for (int i = 0; i < n; ++i) {
      std::vector<int>& t = truth[static_cast<std::size_t>(i)];
      if (i < pair_group) {
        if (label_rng.uniform01() < s.co_rate)
          t = {0, 1};
        else
          t = {static_cast<int>(label_rng.uniform_int(2))};
      } else {
        t = {2 + (i - pair_group) % (L - 2)};
      }
    }
  }

  // Noisy prototype-sum features.
  Eigen::MatrixXd features(F, n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(F);
    for (int l : truth[static_cast<std::size_t>(i)]) x += proto.col(l);
    for (int f = 0; f < F; ++f) x[f] += s.feature_noise * feat_rng.normal();
    features.col(i) = x;
  }

  // Labeled mask: a seeded sample, then force every label to stay represented
  // so the vocabulary (and with it the agent count) is stable.
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  mask_rng.shuffle(order);
  const int n_labeled =
      std::max(1, static_cast<int>(s.labeled_fraction * static_cast<double>(n) + 0.5));
  std::vector<char> exposed(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n_labeled; ++i) exposed[static_cast<std::size_t>(order[i])] = 1;
  for (int l = 0; l < L; ++l) {
    bool seen = false;
    for (int i = 0; i < n && !seen; ++i)
      seen = exposed[static_cast<std::size_t>(i)] &&
             std::binary_search(truth[static_cast<std::size_t>(i)].begin(),
                                truth[static_cast<std::size_t>(i)].end(), l);
    if (seen) continue;
    for (int i = 0; i < n; ++i) {
      if (std::binary_search(truth[static_cast<std::size_t>(i)].begin(),
                             truth[static_cast<std::size_t>(i)].end(), l)) {
        exposed[static_cast<std::size_t>(i)] = 1;
        break;
      }
    }
  }

  std::vector<NodeRecord> nodes(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    NodeRecord& rec = nodes[static_cast<std::size_t>(i)];
    rec.id = "n" + std::to_string(i);
    rec.features.assign(features.col(i).data(), features.col(i).data() + F);
    if (exposed[static_cast<std::size_t>(i)])
      for (int l : truth[static_cast<std::size_t>(i)]) rec.labels.push_back(label_name(l));
  }

  // Homophilous edges plus a uniform noise floor; undirected de-dup here,
  // direction symmetrized at build time.
  std::vector<std::vector<int>> members(static_cast<std::size_t>(L));
  for (int i = 0; i < n; ++i)
    for (int l : truth[static_cast<std::size_t>(i)])
      members[static_cast<std::size_t>(l)].push_back(i);

  std::set<std::pair<int, int>> used;
  std::vector<EdgeRecord> edges;
  auto try_add = [&](int i, int j) {
    if (i == j) return;
    const std::pair<int, int> key = std::minmax(i, j);
    if (!used.insert(key).second) return;
    EdgeRecord e;
    e.src = nodes[static_cast<std::size_t>(i)].id;
    e.dst = nodes[static_cast<std::size_t>(j)].id;
    if (s.edge_feature_dim > 0) {
      const auto& ti = truth[static_cast<std::size_t>(i)];
      const auto& tj = truth[static_cast<std::size_t>(j)];
      std::vector<int> shared;
      std::set_intersection(ti.begin(), ti.end(), tj.begin(), tj.end(),
                            std::back_inserter(shared));
      const auto denom = static_cast<double>(std::min(ti.size(), tj.size()));
      e.features.assign(static_cast<std::size_t>(s.edge_feature_dim), 0.0);
      e.features[0] = denom > 0.0 ? static_cast<double>(shared.size()) / denom : 0.0;
      for (int f = 1; f < s.edge_feature_dim; ++f)
        e.features[static_cast<std::size_t>(f)] = 0.1 * edge_rng.normal();
    }
    edges.push_back(std::move(e));
  };

  for (int i = 0; i < n; ++i) {
    const auto& ti = truth[static_cast<std::size_t>(i)];
    for (int t = 0; t < s.intra_degree; ++t) {
      const int l = ti[static_cast<std::size_t>(
          edge_rng.uniform_int(static_cast<std::uint64_t>(ti.size())))];
      const auto& pool = members[static_cast<std::size_t>(l)];
      if (pool.size() < 2) continue;
      for (int attempt = 0; attempt < 8; ++attempt) {
        const int j = pool[static_cast<std::size_t>(
            edge_rng.uniform_int(static_cast<std::uint64_t>(pool.size())))];
        if (j != i) {
          try_add(i, j);
          break;
        }
      }
    }
    for (int t = 0; t < s.inter_degree; ++t) {
      const int j =
          static_cast<int>(edge_rng.uniform_int(static_cast<std::uint64_t>(n)));
      try_add(i, j);
    }
  }

  LoadOptions options;
  options.symmetrize = true;
  options.expect_feature_dim = F;
  options.expect_edge_feature_dim = s.edge_feature_dim;
  return build_graph(nodes, edges, options);
}

}  // namespace mlgw::synthetic
