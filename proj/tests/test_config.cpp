#include <doctest.h>

#include <fstream>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "mlgw/checkpoint.hpp"
#include "mlgw/config.hpp"
#include "mlgw/errors.hpp"
#include "mlgw/log.hpp"
#include "mlgw/walk.hpp"
#include "support/oracles.hpp"

using namespace mlgw;

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("defaults mirror the shipped training recipe") {
  const config::RunConfig cfg;
  CHECK(cfg.nodes_path.empty());
  CHECK(cfg.edges_path.empty());
  CHECK(cfg.symmetrize == true);
  CHECK(cfg.normalize_features == true);
  CHECK(cfg.hp.hidden_dim == 128);
  CHECK(cfg.hp.walk_length == 10);
  CHECK(cfg.hp.lr == 1e-2);
  CHECK(cfg.hp.episodes_per_node == 3);
  CHECK(cfg.hp.gamma == 0.9);
  CHECK(cfg.hp.alpha == 1.0);
  CHECK(cfg.hp.beta == 0.1);
  CHECK(cfg.hp.epochs == 20);
  CHECK(cfg.hp.batch_size == 32);
  CHECK(cfg.hp.variant == Variant::reg);
  CHECK(cfg.hp.optimizer == nn::OptimizerKind::adam);
  CHECK(cfg.hp.use_baseline == false);
  CHECK(cfg.hp.checkpoint_every == 0);
  CHECK(cfg.folds == 5);
  CHECK(cfg.regime == Regime::tr4);
  CHECK(cfg.mode == Mode::transductive);
  CHECK(cfg.seed == 0);
  CHECK(cfg.workers == 1);
  CHECK(cfg.out_dir == ".");
}

TEST_CASE("the key table is complete, unique and documented") {
  const auto& keys = config::config_keys();
  CHECK(keys.size() == 23);
  std::set<std::string> names;
  for (const auto& k : keys) {
    CHECK_FALSE(k.description.empty());
    names.insert(k.name);
  }
  CHECK(names.size() == keys.size());
  for (const char* expected :
       {"graph.nodes", "graph.edges", "graph.symmetrize", "graph.normalize_features",
        "model.hidden_dim", "model.variant", "train.walk_length", "train.lr",
        "train.episodes_per_node", "train.gamma", "train.alpha", "train.beta",
        "train.epochs", "train.batch_size", "train.optimizer", "train.use_baseline",
        "train.checkpoint_every", "eval.folds", "eval.regime", "eval.mode", "run.seed",
        "run.workers", "run.out"})
    CHECK(names.count(expected) == 1);
}

TEST_CASE("apply_key parses every value type and rejects garbage") {
  config::RunConfig cfg;
  config::apply_key(cfg, "graph.nodes", "data/nodes.jsonl");
  CHECK(cfg.nodes_path == "data/nodes.jsonl");
  config::apply_key(cfg, "graph.symmetrize", "false");
  CHECK(cfg.symmetrize == false);
  config::apply_key(cfg, "graph.symmetrize", "1");
  CHECK(cfg.symmetrize == true);
  config::apply_key(cfg, "model.hidden_dim", "64");
  CHECK(cfg.hp.hidden_dim == 64);
  config::apply_key(cfg, "model.variant", "reg+");
  CHECK(cfg.hp.variant == Variant::reg_plus);
  config::apply_key(cfg, "model.variant", "I");
  CHECK(cfg.hp.variant == Variant::independent);
  config::apply_key(cfg, "train.lr", "5e-3");
  CHECK(cfg.hp.lr == 5e-3);
  config::apply_key(cfg, "train.optimizer", "sgd");
  CHECK(cfg.hp.optimizer == nn::OptimizerKind::sgd);
  config::apply_key(cfg, "eval.regime", "Tr-1");
  CHECK(cfg.regime == Regime::tr1);
  config::apply_key(cfg, "eval.mode", "ind");
  CHECK(cfg.mode == Mode::inductive);
  config::apply_key(cfg, "run.seed", "18446744073709551615");  // full 64-bit range
  CHECK(cfg.seed == 18446744073709551615ull);
  config::apply_key(cfg, "run.out", "runs/exp1");
  CHECK(cfg.out_dir == "runs/exp1");

  CHECK_THROWS_WITH_AS(config::apply_key(cfg, "train.turbo", "1"),
                       doctest::Contains("train.turbo"), InputError);
  CHECK_THROWS_AS(config::apply_key(cfg, "graph.symmetrize", "maybe"), InputError);
  CHECK_THROWS_AS(config::apply_key(cfg, "model.hidden_dim", "12x"), InputError);
  CHECK_THROWS_AS(config::apply_key(cfg, "model.hidden_dim", "9999999999999"), InputError);
  CHECK_THROWS_AS(config::apply_key(cfg, "train.lr", "fast"), InputError);
  CHECK_THROWS_AS(config::apply_key(cfg, "run.seed", "-3"), InputError);
  CHECK_THROWS_AS(config::apply_key(cfg, "model.variant", "shared"), InputError);
  CHECK_THROWS_AS(config::apply_key(cfg, "eval.regime", "tr2"), InputError);
}

TEST_CASE("config files use sections as prefixes, with later keys winning") {
  testutil::TempDir dir("config_file");
  const std::string path = dir.file("run.cfg");
  write_text(path,
             "# training recipe\n"
             "; alternative comment style\n"
             "\n"
             "[train]\n"
             "lr = 0.05\n"
             "epochs = 3\n"
             "eval.folds = 7\n"  // already-dotted keys pass through untouched
             "\n"
             "[eval]\n"
             "regime = tr1\n"
             "\n"
             "[run]\n"
             "seed = 1234\n"
             "workers = 2\n"
             "\n"
             "[model]\n"
             "variant = reg+\n"
             "hidden_dim = 16\n"
             "hidden_dim = 8\n");
  config::RunConfig cfg;
  config::load_config_file(cfg, path);
  CHECK(cfg.hp.lr == 0.05);
  CHECK(cfg.hp.epochs == 3);
  CHECK(cfg.folds == 7);
  CHECK(cfg.regime == Regime::tr1);
  CHECK(cfg.seed == 1234);
  CHECK(cfg.workers == 2);
  CHECK(cfg.hp.variant == Variant::reg_plus);
  CHECK(cfg.hp.hidden_dim == 8);
  // Untouched keys keep their defaults.
  CHECK(cfg.hp.gamma == 0.9);
  CHECK(cfg.mode == Mode::transductive);
}

TEST_CASE("config file diagnostics carry path and line number") {
  testutil::TempDir dir("config_errors");

  const auto expect_error = [&](const char* name, const std::string& body,
                                const std::string& needle) {
    const std::string path = dir.file(name);
    write_text(path, body);
    config::RunConfig cfg;
    CHECK_THROWS_WITH_AS(config::load_config_file(cfg, path),
                         doctest::Contains(needle.c_str()), InputError);
  };

  expect_error("unknown.cfg", "bogus = 1\n", "unknown.cfg:1");
  expect_error("unknown2.cfg", "# fine\nbogus = 1\n", ":2");
  expect_error("section.cfg", "[train\n", "unterminated");
  expect_error("noeq.cfg", "justaword\n", "expected key = value");
  expect_error("emptykey.cfg", " = 5\n", "empty key");
  expect_error("emptysec.cfg", "[ ]\n", "empty section");
  expect_error("badval.cfg", "[train]\nlr = abc\n", "badval.cfg:2");

  config::RunConfig cfg;
  CHECK_THROWS_WITH_AS(config::load_config_file(cfg, dir.file("missing.cfg")),
                       doctest::Contains("cannot open"), InputError);
}

TEST_CASE("the JSON echo covers every key and tracks mutations") {
  config::RunConfig cfg;
  const auto parse = [](const std::string& s) { return nlohmann::json::parse(s); };

  auto doc = parse(config::config_to_json(cfg));
  CHECK(doc.size() == config::config_keys().size());
  for (const auto& k : config::config_keys()) CHECK(doc.contains(k.name));
  CHECK(doc["train.lr"].get<double>() == 0.01);
  CHECK(doc["model.variant"].get<std::string>() == "reg");
  CHECK(doc["eval.regime"].get<std::string>() == "tr4");
  CHECK(doc["eval.mode"].get<std::string>() == "trans");
  CHECK(doc["train.optimizer"].get<std::string>() == "adam");
  CHECK(doc["graph.symmetrize"].get<bool>() == true);
  CHECK(doc["run.seed"].get<std::uint64_t>() == 0);

  config::apply_key(cfg, "train.lr", "0.25");
  config::apply_key(cfg, "model.variant", "i");
  config::apply_key(cfg, "run.seed", "99");
  doc = parse(config::config_to_json(cfg));
  CHECK(doc["train.lr"].get<double>() == 0.25);
  CHECK(doc["model.variant"].get<std::string>() == "i");
  CHECK(doc["run.seed"].get<std::uint64_t>() == 99);

  // The echo is a pure function of the configuration.
  CHECK(config::config_to_json(cfg) == config::config_to_json(cfg));
}

TEST_CASE("manifests are byte-stable and embed the full configuration") {
  config::RunConfig cfg;
  config::apply_key(cfg, "train.epochs", "2");
  config::apply_key(cfg, "run.seed", "7");

  testutil::TempDir dir("manifest");
  config::write_manifest(dir.file("a.json"), cfg, "mlgw train --config run.cfg");
  config::write_manifest(dir.file("b.json"), cfg, "mlgw train --config run.cfg");
  CHECK(testutil::files_identical(dir.file("a.json"), dir.file("b.json")));

  const auto doc = nlohmann::json::parse(testutil::read_file(dir.file("a.json")));
  CHECK(doc.at("command").get<std::string>() == "mlgw train --config run.cfg");
  CHECK(doc.at("version").get<std::string>() == std::string(version_string()));
  CHECK(doc.at("format_versions").at("parameters").get<int>() ==
        nn::kParameterFormatVersion);
  CHECK(doc.at("format_versions").at("trace").get<int>() == walk::kTraceFormatVersion);
  CHECK(doc.at("config") == nlohmann::json::parse(config::config_to_json(cfg)));
  CHECK(doc.at("config").at("train.epochs").get<int>() == 2);

  CHECK_THROWS_AS(config::write_manifest(dir.file("no/dir/m.json"), cfg, "x"), InputError);
}
