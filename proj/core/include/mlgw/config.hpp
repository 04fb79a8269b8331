#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mlgw/learn.hpp"
#include "mlgw/types.hpp"

/* Run configuration: a flat key=value file with cosmetic [section] headers
   (a section prefixes its keys with "section."), every key also settable as
   a --key value command-line flag; flags win over the file. The full
   configuration is echoed into each run's manifest so a run can be
   reproduced bit-exactly from the manifest alone. */

namespace mlgw::config {

struct RunConfig {
  // graph
  std::string nodes_path;
  std::string edges_path;
  bool symmetrize = true;
  bool normalize_features = true;
  // model + training
  learn::HyperParams hp;
  // evaluation protocol
  int folds = 5;
  Regime regime = Regime::tr4;
  Mode mode = Mode::transductive;
  // run
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_dir = ".";
};

struct ConfigKey {
  std::string name;         // canonical dotted name, e.g. "train.lr"
  std::string description;  // one-liner for --help
};

// The full key table, shared by the file parser and the flag layer.
const std::vector<ConfigKey>& config_keys();

// Sets one key; throws InputError for unknown keys or unparsable values.
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value);

// Parses a config file into `cfg` (later keys win inside the file).
// Errors carry "path:line:" prefixes.
void load_config_file(RunConfig& cfg, const std::string& path);

// Canonical JSON echo of every key (stable key order).
std::string config_to_json(const RunConfig& cfg);

// Run manifest: command, config echo, format versions, library version and
// no timestamps, so reruns produce byte-identical manifests.
void write_manifest(const std::string& path, const RunConfig& cfg,
                    const std::string& command);

}  // namespace mlgw::config
