/* mlgw: train, evaluate, trace and analyze collaborative label-agent graph
   walks. Subcommands share one configuration model: defaults, then the
   --config file, then individual --<key> flags (flags win). Every run writes
   a manifest sufficient to reproduce it bit-exactly. */

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mlgw/analysis.hpp"
#include "mlgw/checkpoint.hpp"
#include "mlgw/config.hpp"
#include "mlgw/errors.hpp"
#include "mlgw/graph.hpp"
#include "mlgw/learn.hpp"
#include "mlgw/log.hpp"
#include "mlgw/metrics.hpp"
#include "mlgw/protocol.hpp"
#include "mlgw/rng.hpp"
#include "mlgw/synthetic.hpp"
#include "mlgw/walk.hpp"

namespace {

using mlgw::config::RunConfig;

struct CommandArgs {
  std::string config_path;
  // key/value overrides in command-line order; applied after the file.
  std::vector<std::pair<std::string, std::string>> overrides;
};

// Registers --config, every configuration key as --<key>, and the short
// aliases the scripts use most.
void add_config_options(CLI::App* cmd, CommandArgs& args) {
  cmd->add_option("--config", args.config_path, "configuration file (key = value)");
  for (const mlgw::config::ConfigKey& key : mlgw::config::config_keys()) {
    const std::string name = key.name;
    cmd->add_option_function<std::string>(
        "--" + name,
        [&args, name](const std::string& v) { args.overrides.emplace_back(name, v); },
        key.description);
  }
  const std::vector<std::pair<std::string, std::string>> aliases = {
      {"--seed", "run.seed"},         {"--workers", "run.workers"},
      {"--out", "run.out"},           {"--variant", "model.variant"},
      {"--mode", "eval.mode"},        {"--regime", "eval.regime"},
  };
  for (const auto& [flag, key] : aliases) {
    const std::string target = key;
    cmd->add_option_function<std::string>(
        flag,
        [&args, target](const std::string& v) { args.overrides.emplace_back(target, v); },
        "alias for --" + target);
  }
}

RunConfig resolve_config(const CommandArgs& args) {
  RunConfig cfg;
  if (!args.config_path.empty()) mlgw::config::load_config_file(cfg, args.config_path);
  for (const auto& [key, value] : args.overrides)
    mlgw::config::apply_key(cfg, key, value);
  return cfg;
}

mlgw::AttributedGraph load_from_config(const RunConfig& cfg) {
  if (cfg.nodes_path.empty() || cfg.edges_path.empty())
    throw mlgw::InputError("graph.nodes and graph.edges must be set");
  mlgw::LoadOptions options;
  options.symmetrize = cfg.symmetrize;
  options.normalize_features = cfg.normalize_features;
  return mlgw::load_graph(cfg.nodes_path, cfg.edges_path, options);
}

std::filesystem::path ensure_out_dir(const RunConfig& cfg) {
  const std::filesystem::path dir(cfg.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw mlgw::InputError("cannot create output directory '" + cfg.out_dir +
                           "': " + ec.message());
  return dir;
}

void check_compatible(const mlgw::nn::ModelParams& params, const mlgw::AttributedGraph& g) {
  if (params.labels != g.label_names)
    throw mlgw::ConsistencyError(
        "checkpoint label vocabulary does not match the graph");
  if (params.feature_dim != g.feature_dim() ||
      params.edge_feature_dim != g.edge_feature_dim())
    throw mlgw::ConsistencyError("checkpoint feature dimensions do not match the graph");
}

std::vector<mlgw::NodeId> labeled_nodes(const mlgw::AttributedGraph& g) {
  std::vector<mlgw::NodeId> out;
  for (mlgw::NodeId v = 0; v < g.num_nodes(); ++v)
    if (g.labeled[static_cast<std::size_t>(v)]) out.push_back(v);
  return out;
}

int cmd_train(const CommandArgs& args) {
  const RunConfig cfg = resolve_config(args);
  const auto out_dir = ensure_out_dir(cfg);
  const mlgw::AttributedGraph g = load_from_config(cfg);

  mlgw::learn::TrainOptions opts;
  opts.seed = cfg.seed;
  opts.workers = cfg.workers;
  if (cfg.hp.checkpoint_every > 0) {
    opts.checkpoint_fn = [&out_dir](int epoch, const mlgw::nn::ModelParams& p) {
      mlgw::nn::save_parameters(
          (out_dir / ("parameters_epoch" + std::to_string(epoch) + ".json")).string(), p);
    };
  }

  const mlgw::learn::TrainResult res = mlgw::learn::train(g, labeled_nodes(g), cfg.hp, opts);
  mlgw::nn::save_parameters((out_dir / "parameters.json").string(), res.params);
  mlgw::learn::write_train_log_csv((out_dir / "train_log.csv").string(), res.log);
  mlgw::config::write_manifest((out_dir / "manifest.json").string(), cfg, "train");
  std::cout << "trained " << res.params.num_agents() << " agents for " << cfg.hp.epochs
            << " epochs; wrote " << (out_dir / "parameters.json").string() << "\n";
  return 0;
}

int cmd_evaluate(const CommandArgs& args, const std::string& parameters_path) {
  const RunConfig cfg = resolve_config(args);
  const auto out_dir = ensure_out_dir(cfg);
  const mlgw::AttributedGraph g = load_from_config(cfg);

  if (!parameters_path.empty()) {
    // Evaluate an existing checkpoint on every labeled node.
    const mlgw::nn::ModelParams params = mlgw::nn::load_parameters(parameters_path);
    check_compatible(params, g);
    const std::vector<mlgw::NodeId> nodes = labeled_nodes(g);
    if (nodes.empty()) throw mlgw::InputError("graph has no labeled nodes");
    const auto y_pred = mlgw::protocol::predict_labels(
        g, params, nodes, cfg.hp.walk_length, cfg.hp.episodes_per_node, cfg.seed,
        cfg.workers);
    const auto y_true = mlgw::protocol::true_labels(g, nodes);
    const mlgw::metrics::MetricsReport report =
        mlgw::metrics::compute_metrics(y_true, y_pred, g.label_names);
    mlgw::metrics::write_metrics_json((out_dir / "metrics.json").string(), report);
    mlgw::metrics::write_metrics_csv((out_dir / "metrics.csv").string(), report);
    mlgw::config::write_manifest((out_dir / "manifest.json").string(), cfg, "evaluate");
    std::cout << "micro-F1 " << report.micro_f1 << ", macro-F1 " << report.macro_f1
              << " over " << report.num_examples << " nodes\n";
    return 0;
  }

  // Full k-fold protocol: stratify, train per fold, test per fold.
  const mlgw::protocol::ProtocolResult pr = mlgw::protocol::run_protocol(
      g, cfg.folds, cfg.regime, cfg.mode, cfg.hp, cfg.seed, cfg.workers);
  nlohmann::json fold_summary = nlohmann::json::array();
  for (const mlgw::protocol::FoldResult& fr : pr.folds) {
    const std::string stem = "fold" + std::to_string(fr.fold);
    mlgw::metrics::write_metrics_json((out_dir / (stem + "_metrics.json")).string(),
                                      fr.report);
    mlgw::metrics::write_metrics_csv((out_dir / (stem + "_metrics.csv")).string(),
                                     fr.report);
    mlgw::learn::write_train_log_csv((out_dir / (stem + "_train_log.csv")).string(),
                                     fr.train_log);
    fold_summary.push_back({{"fold", fr.fold},
                            {"train_nodes", fr.train_nodes.size()},
                            {"test_nodes", fr.test_nodes.size()},
                            {"micro_f1", fr.report.micro_f1},
                            {"macro_f1", fr.report.macro_f1}});
  }
  const nlohmann::json summary = {{"folds", fold_summary},
                                  {"mean_micro_f1", pr.mean_micro_f1},
                                  {"mean_macro_f1", pr.mean_macro_f1},
                                  {"regime", to_string(cfg.regime)},
                                  {"mode", to_string(cfg.mode)}};
  std::ofstream out(out_dir / "summary.json");
  if (!out) throw mlgw::InputError("cannot open summary.json for writing");
  out << summary.dump(1, '\t') << "\n";
  mlgw::config::write_manifest((out_dir / "manifest.json").string(), cfg, "evaluate");
  std::cout << "mean micro-F1 " << pr.mean_micro_f1 << ", mean macro-F1 "
            << pr.mean_macro_f1 << " over " << cfg.folds << " folds\n";
  return 0;
}

int cmd_trace(const CommandArgs& args, const std::string& parameters_path,
              const std::vector<std::string>& node_ids) {
  const RunConfig cfg = resolve_config(args);
  const auto out_dir = ensure_out_dir(cfg);
  const mlgw::AttributedGraph g = load_from_config(cfg);
  const mlgw::nn::ModelParams params = mlgw::nn::load_parameters(parameters_path);
  check_compatible(params, g);

  std::vector<mlgw::walk::Episode> episodes;
  for (const std::string& external : node_ids) {
    const mlgw::NodeId v = g.internal_id(external);
    for (int agent = 0; agent < params.num_agents(); ++agent) {
      for (int m = 0; m < cfg.hp.episodes_per_node; ++m) {
        mlgw::Rng rng = mlgw::Rng::stream(
            cfg.seed, {mlgw::stream_tag::trace, static_cast<std::uint64_t>(v),
                       static_cast<std::uint64_t>(agent), static_cast<std::uint64_t>(m)});
        episodes.push_back(
            mlgw::walk::run_episode(g, params, agent, v, cfg.hp.walk_length, rng));
      }
    }
  }
  mlgw::walk::write_trace((out_dir / "trace.jsonl").string(), episodes, g);
  mlgw::config::write_manifest((out_dir / "manifest.json").string(), cfg, "trace");
  std::cout << "wrote " << episodes.size() << " episodes to "
            << (out_dir / "trace.jsonl").string() << "\n";
  return 0;
}

int cmd_analyze(const CommandArgs& args, const std::vector<std::string>& trace_paths) {
  const RunConfig cfg = resolve_config(args);
  const auto out_dir = ensure_out_dir(cfg);
  const mlgw::AttributedGraph g = load_from_config(cfg);

  std::vector<mlgw::walk::Episode> episodes;
  for (const std::string& path : trace_paths) {
    std::vector<mlgw::walk::Episode> part = mlgw::walk::read_trace(path, g);
    episodes.insert(episodes.end(), std::make_move_iterator(part.begin()),
                    std::make_move_iterator(part.end()));
  }
  if (episodes.empty()) throw mlgw::InputError("trace files contain no episodes");

  const mlgw::analysis::VisitHeatmap heatmap = mlgw::analysis::build_heatmap(episodes, g);
  const std::vector<double> stats = mlgw::analysis::labels_per_visited_node(episodes, g);
  mlgw::analysis::write_heatmap_csv((out_dir / "heatmap.csv").string(), heatmap);
  mlgw::analysis::write_stats_csv((out_dir / "stats.csv").string(), stats);
  mlgw::config::write_manifest((out_dir / "manifest.json").string(), cfg, "analyze");
  std::cout << "analyzed " << episodes.size() << " episodes; wrote "
            << (out_dir / "heatmap.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"collaborative multi-label graph walks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(mlgw::version_string()));

  CommandArgs train_args, eval_args, trace_args, analyze_args;
  std::string eval_parameters, trace_parameters;
  std::vector<std::string> trace_nodes, analyze_traces;

  CLI::App* train = app.add_subcommand("train", "train agents on all labeled nodes");
  add_config_options(train, train_args);

  CLI::App* evaluate =
      app.add_subcommand("evaluate", "k-fold protocol or checkpoint evaluation");
  add_config_options(evaluate, eval_args);
  evaluate->add_option("--parameters", eval_parameters,
                       "checkpoint to evaluate (omit to run the k-fold protocol)");

  CLI::App* trace = app.add_subcommand("trace", "export walk episodes as JSON Lines");
  add_config_options(trace, trace_args);
  trace->add_option("--parameters", trace_parameters, "checkpoint to walk with")
      ->required();
  trace->add_option("nodes", trace_nodes, "start node ids")->required();

  CLI::App* analyze =
      app.add_subcommand("analyze", "heatmap + statistics from trace files");
  add_config_options(analyze, analyze_args);
  analyze->add_option("traces", analyze_traces, "trace JSON Lines files")->required();

  try {
    app.parse(argc, argv);
    if (train->parsed()) return cmd_train(train_args);
    if (evaluate->parsed()) return cmd_evaluate(eval_args, eval_parameters);
    if (trace->parsed()) return cmd_trace(trace_args, trace_parameters, trace_nodes);
    if (analyze->parsed()) return cmd_analyze(analyze_args, analyze_traces);
    return 0;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;  // CLI misuse is an input error
  } catch (const mlgw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return mlgw::exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
