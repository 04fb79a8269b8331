#include "mlgw/config.hpp"

#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mlgw/checkpoint.hpp"
#include "mlgw/errors.hpp"
#include "mlgw/log.hpp"
#include "mlgw/nn.hpp"
#include "mlgw/walk.hpp"

namespace mlgw::config {

namespace {

using nlohmann::json;

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw InputError("expected a boolean (true/false/1/0), got '" + v + "'");
}

int parse_int(const std::string& v) {
  try {
    std::size_t used = 0;
    const long value = std::stol(v, &used);
    if (used != v.size() || value < std::numeric_limits<int>::min() ||
        value > std::numeric_limits<int>::max())
      throw std::invalid_argument(v);
    return static_cast<int>(value);
  } catch (const std::exception&) {
    throw InputError("expected an integer, got '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& v) {
  try {
    std::size_t used = 0;
    const unsigned long long value = std::stoull(v, &used);
    if (used != v.size() || !v.empty() && v[0] == '-') throw std::invalid_argument(v);
    return static_cast<std::uint64_t>(value);
  } catch (const std::exception&) {
    throw InputError("expected an unsigned integer, got '" + v + "'");
  }
}

double parse_double(const std::string& v) {
  try {
    std::size_t used = 0;
    const double value = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return value;
  } catch (const std::exception&) {
    throw InputError("expected a number, got '" + v + "'");
  }
}

struct KeyEntry {
  ConfigKey key;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<json(const RunConfig&)> get;
};

const std::vector<KeyEntry>& key_table() {
  static const std::vector<KeyEntry> table = {
      {{"graph.nodes", "node JSON Lines file"},
       [](RunConfig& c, const std::string& v) { c.nodes_path = v; },
       [](const RunConfig& c) { return json(c.nodes_path); }},
      {{"graph.edges", "edge JSON Lines file"},
       [](RunConfig& c, const std::string& v) { c.edges_path = v; },
       [](const RunConfig& c) { return json(c.edges_path); }},
      {{"graph.symmetrize", "insert the reverse of every edge on load"},
       [](RunConfig& c, const std::string& v) { c.symmetrize = parse_bool(v); },
       [](const RunConfig& c) { return json(c.symmetrize); }},
      {{"graph.normalize_features", "scale node features to unit norm on load"},
       [](RunConfig& c, const std::string& v) { c.normalize_features = parse_bool(v); },
       [](const RunConfig& c) { return json(c.normalize_features); }},
      {{"model.hidden_dim", "GRU hidden state size d"},
       [](RunConfig& c, const std::string& v) { c.hp.hidden_dim = parse_int(v); },
       [](const RunConfig& c) { return json(c.hp.hidden_dim); }},
      {{"model.variant", "walk variant: i, reg or reg+"},
       [](RunConfig& c, const std::string& v) { c.hp.variant = parse_variant(v); },
       [](const RunConfig& c) { return json(to_string(c.hp.variant)); }},
      {{"train.walk_length", "steps per episode T"},
       [](RunConfig& c, const std::string& v) { c.hp.walk_length = parse_int(v); },
       [](const RunConfig& c) { return json(c.hp.walk_length); }},
      {{"train.lr", "learning rate"},
       [](RunConfig& c, const std::string& v) { c.hp.lr = parse_double(v); },
       [](const RunConfig& c) { return json(c.hp.lr); }},
      {{"train.episodes_per_node", "episodes per start node M"},
       [](RunConfig& c, const std::string& v) { c.hp.episodes_per_node = parse_int(v); },
       [](const RunConfig& c) { return json(c.hp.episodes_per_node); }},
      {{"train.gamma", "return discount"},
       [](RunConfig& c, const std::string& v) { c.hp.gamma = parse_double(v); },
       [](const RunConfig& c) { return json(c.hp.gamma); }},
      {{"train.alpha", "shared-policy pull strength"},
       [](RunConfig& c, const std::string& v) { c.hp.alpha = parse_double(v); },
       [](const RunConfig& c) { return json(c.hp.alpha); }},
      {{"train.beta", "entropy pressure"},
       [](RunConfig& c, const std::string& v) { c.hp.beta = parse_double(v); },
       [](const RunConfig& c) { return json(c.hp.beta); }},
      {{"train.epochs", "training epochs"},
       [](RunConfig& c, const std::string& v) { c.hp.epochs = parse_int(v); },
       [](const RunConfig& c) { return json(c.hp.epochs); }},
      {{"train.batch_size", "start nodes per optimizer step"},
       [](RunConfig& c, const std::string& v) { c.hp.batch_size = parse_int(v); },
       [](const RunConfig& c) { return json(c.hp.batch_size); }},
      {{"train.optimizer", "adam or sgd"},
       [](RunConfig& c, const std::string& v) { c.hp.optimizer = nn::parse_optimizer(v); },
       [](const RunConfig& c) { return json(nn::to_string(c.hp.optimizer)); }},
      {{"train.use_baseline", "subtract a moving-average return baseline"},
       [](RunConfig& c, const std::string& v) { c.hp.use_baseline = parse_bool(v); },
       [](const RunConfig& c) { return json(c.hp.use_baseline); }},
      {{"train.checkpoint_every", "epochs between checkpoints (0: final only)"},
       [](RunConfig& c, const std::string& v) { c.hp.checkpoint_every = parse_int(v); },
       [](const RunConfig& c) { return json(c.hp.checkpoint_every); }},
      {{"eval.folds", "stratified fold count k"},
       [](RunConfig& c, const std::string& v) { c.folds = parse_int(v); },
       [](const RunConfig& c) { return json(c.folds); }},
      {{"eval.regime", "supervision regime: tr1 or tr4"},
       [](RunConfig& c, const std::string& v) { c.regime = parse_regime(v); },
       [](const RunConfig& c) { return json(to_string(c.regime)); }},
      {{"eval.mode", "trans or ind"},
       [](RunConfig& c, const std::string& v) { c.mode = parse_mode(v); },
       [](const RunConfig& c) { return json(to_string(c.mode)); }},
      {{"run.seed", "global random seed"},
       [](RunConfig& c, const std::string& v) { c.seed = parse_u64(v); },
       [](const RunConfig& c) { return json(c.seed); }},
      {{"run.workers", "worker threads (affects wall time only)"},
       [](RunConfig& c, const std::string& v) { c.workers = parse_int(v); },
       [](const RunConfig& c) { return json(c.workers); }},
      {{"run.out", "output directory"},
       [](RunConfig& c, const std::string& v) { c.out_dir = v; },
       [](const RunConfig& c) { return json(c.out_dir); }},
  };
  return table;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> out;
    for (const KeyEntry& e : key_table()) out.push_back(e.key);
    return out;
  }();
  return keys;
}

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
  for (const KeyEntry& e : key_table()) {
    if (e.key.name == key) {
      e.set(cfg, value);
      return;
    }
  }
  throw InputError("unknown configuration key '" + key + "'");
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    try {
      if (t.front() == '[') {
        if (t.back() != ']') throw InputError("unterminated section header");
        section = trim(t.substr(1, t.size() - 2));
        if (section.empty()) throw InputError("empty section name");
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos) throw InputError("expected key = value");
      std::string key = trim(t.substr(0, eq));
      const std::string value = trim(t.substr(eq + 1));
      if (key.empty()) throw InputError("empty key");
      if (!section.empty() && key.find('.') == std::string::npos)
        key = section + "." + key;
      apply_key(cfg, key, value);
    } catch (const InputError& e) {
      throw InputError(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

std::string config_to_json(const RunConfig& cfg) {
  json doc = json::object();
  for (const KeyEntry& e : key_table()) doc[e.key.name] = e.get(cfg);
  return doc.dump(1, '\t') + "\n";
}

void write_manifest(const std::string& path, const RunConfig& cfg,
                    const std::string& command) {
  const json doc = {
      {"command", command},
      {"config", json::parse(config_to_json(cfg))},
      {"format_versions",
       {{"parameters", nn::kParameterFormatVersion}, {"trace", walk::kTraceFormatVersion}}},
      {"version", version_string()},
  };
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << doc.dump(1, '\t') << "\n";
  if (!out) throw InputError("failed while writing '" + path + "'");
}

}  // namespace mlgw::config
