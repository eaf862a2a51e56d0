// hetkg: generate / stats / train / eval / gradcheck pipeline driver.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "hetkg/config.hpp"
#include "hetkg/eval.hpp"
#include "hetkg/gradcheck.hpp"
#include "hetkg/manifest.hpp"
#include "hetkg/synth.hpp"
#include "hetkg/threading.hpp"
#include "hetkg/training.hpp"

namespace hetkg {
namespace {

const std::map<std::string, std::vector<std::string>> kKnownKeys = {
    {"graph", {"edges", "attributes"}},
    {"synth",
     {"topics", "articles", "papers", "authors", "institutes", "cites", "has_topic",
      "is_author_of", "is_affiliated_with", "seed", "planted_blocks", "planted_noise",
      "title_vocab_size"}},
    {"features", {"mode", "dim", "token_seed", "reference_date"}},
    {"train",
     {"model", "mode", "epochs", "learning_rate", "dropout_rate", "negatives_per_positive",
      "batch_size", "seed", "holdout_fraction", "head_count", "rwr_restart", "rwr_samples",
      "rwr_walk_length", "rwr_walk_count"}},
    {"split", {"seed", "stratified", "resubstitution"}},
    {"eval", {"use_case", "directions", "dump_ranks"}},
};

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("cannot open " + p.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct CommonArgs {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed_override;
  int threads = 0;
};

Config load_config(const CommonArgs& args) {
  Config cfg = Config::parse_file(args.config_path);
  cfg.check_known(kKnownKeys);
  return cfg;
}

SynthConfig synth_config(const Config& cfg, const CommonArgs& args) {
  SynthConfig s;
  s.topics = static_cast<std::int32_t>(cfg.get_int("synth", "topics", s.topics));
  s.articles = static_cast<std::int32_t>(cfg.get_int("synth", "articles", s.articles));
  s.papers = static_cast<std::int32_t>(cfg.get_int("synth", "papers", s.papers));
  s.authors = static_cast<std::int32_t>(cfg.get_int("synth", "authors", s.authors));
  s.institutes = static_cast<std::int32_t>(cfg.get_int("synth", "institutes", s.institutes));
  s.cites = static_cast<std::int32_t>(cfg.get_int("synth", "cites", s.cites));
  s.has_topic = static_cast<std::int32_t>(cfg.get_int("synth", "has_topic", s.has_topic));
  s.is_author_of = static_cast<std::int32_t>(cfg.get_int("synth", "is_author_of", s.is_author_of));
  s.is_affiliated_with =
      static_cast<std::int32_t>(cfg.get_int("synth", "is_affiliated_with", s.is_affiliated_with));
  s.seed = cfg.get_u64("synth", "seed", s.seed);
  if (args.seed_override) s.seed = *args.seed_override;
  s.planted_blocks =
      static_cast<std::int32_t>(cfg.get_int("synth", "planted_blocks", s.planted_blocks));
  s.planted_noise = cfg.get_double("synth", "planted_noise", s.planted_noise);
  s.title_vocab_size =
      static_cast<std::int32_t>(cfg.get_int("synth", "title_vocab_size", s.title_vocab_size));
  return s;
}

FeatureConfig feature_config(const Config& cfg, ModelKind kind) {
  FeatureConfig f;
  f.mode = kind == ModelKind::rgcn ? FeatureMode::learned_table : FeatureMode::title_text;
  if (auto m = cfg.get("features", "mode")) f.mode = parse_feature_mode(*m);
  f.dim = cfg.get_int("features", "dim", 128);
  f.token_seed = cfg.get_u64("features", "token_seed", f.token_seed);
  if (auto d = cfg.get("features", "reference_date")) f.reference_date = parse_iso_date(*d);
  return f;
}

TrainConfig train_config(const Config& cfg, const CommonArgs& args) {
  TrainConfig t;
  t.model_kind = parse_model_kind(cfg.get_string("train", "model", "rgcn"));
  std::string mode =
      cfg.get_string("train", "mode", t.model_kind == ModelKind::rgcn ? "full-batch" : "mini-batch");
  if (mode == "full-batch") {
    t.mode = TrainMode::full_batch;
  } else if (mode == "mini-batch") {
    t.mode = TrainMode::mini_batch;
  } else {
    throw ConfigError("train.mode must be full-batch or mini-batch, got '" + mode + "'");
  }
  t.dim = cfg.get_int("features", "dim", 128);
  t.epochs = static_cast<std::int32_t>(cfg.get_int("train", "epochs", -1));
  t.learning_rate = cfg.get_double("train", "learning_rate", -1.0);
  t.dropout_rate = cfg.get_double("train", "dropout_rate", -1.0);
  t.negatives_per_positive =
      static_cast<std::int32_t>(cfg.get_int("train", "negatives_per_positive", 10));
  t.batch_size = static_cast<std::int32_t>(cfg.get_int("train", "batch_size", 256));
  t.seed = cfg.get_u64("train", "seed", 42);
  if (args.seed_override) t.seed = *args.seed_override;
  t.holdout_fraction = cfg.get_double("train", "holdout_fraction", 0.0);
  t.head_count = static_cast<std::int32_t>(cfg.get_int("train", "head_count", 4));
  t.hetgnn.rwr_restart = cfg.get_double("train", "rwr_restart", 0.5);
  t.hetgnn.rwr_samples = static_cast<std::int32_t>(cfg.get_int("train", "rwr_samples", 10));
  t.hetgnn.walk_length = static_cast<std::int32_t>(cfg.get_int("train", "rwr_walk_length", 20));
  t.hetgnn.walk_count = static_cast<std::int32_t>(cfg.get_int("train", "rwr_walk_count", 10));
  t.validate();
  return t;
}

TypedGraph load_graph_from(const Config& cfg) {
  auto edges = cfg.get("graph", "edges");
  if (!edges) throw ConfigError("config lacks graph.edges");
  std::optional<std::filesystem::path> attrs;
  if (auto a = cfg.get("graph", "attributes")) attrs = *a;
  return load_graph(*edges, attrs, GraphSchema::news());
}

struct SplitSettings {
  SplitSpec spec;
  bool resubstitution = false;
};

SplitSettings split_settings(const Config& cfg) {
  SplitSettings s;
  s.spec.seed = cfg.get_u64("split", "seed", 7);
  s.spec.stratified = cfg.get_bool("split", "stratified", true);
  s.resubstitution = cfg.get_bool("split", "resubstitution", false);
  return s;
}

int cmd_generate(const CommonArgs& args) {
  auto start = std::chrono::steady_clock::now();
  Config cfg = load_config(args);
  SynthConfig scfg = synth_config(cfg, args);
  TypedGraph g = generate(scfg);

  std::filesystem::create_directories(args.out_dir);
  std::filesystem::path edges = std::filesystem::path(args.out_dir) / "edges.tsv";
  std::filesystem::path attrs = std::filesystem::path(args.out_dir) / "attributes.tsv";
  write_edge_list(g, edges);
  write_attributes(g, attrs);

  RunManifest manifest;
  manifest.command = "generate";
  manifest.config_snapshot = read_file(args.config_path);
  manifest.seed = scfg.seed;
  manifest.add_input(args.config_path);
  manifest.outputs = {edges.string(), attrs.string()};
  manifest.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  manifest.write(std::filesystem::path(args.out_dir) / "manifest.txt");

  std::printf("generated %lld nodes, %lld edges -> %s\n",
              static_cast<long long>(g.total_nodes()), static_cast<long long>(g.total_triples()),
              args.out_dir.c_str());
  return 0;
}

int cmd_stats(const CommonArgs& args) {
  Config cfg = load_config(args);
  TypedGraph g = load_graph_from(cfg);
  const auto& s = g.schema();
  std::printf("nodes.total = %lld\n", static_cast<long long>(g.total_nodes()));
  for (std::int32_t t = 0; t < s.num_node_types(); ++t) {
    std::printf("nodes.%s = %d\n", s.node_types[t].c_str(), g.node_count(t));
  }
  std::printf("edges.total = %lld\n", static_cast<long long>(g.total_triples()));
  for (std::int32_t r = 0; r < s.num_relations(); ++r) {
    std::printf("edges.%s = %lld\n", s.relation_types[r].c_str(),
                static_cast<long long>(g.relation_count(r)));
  }
  if (g.duplicates_dropped() > 0) {
    std::printf("duplicates_dropped = %lld\n", static_cast<long long>(g.duplicates_dropped()));
  }
  for (const auto& e : degree_stats(g).entries) {
    std::printf("degree %s %s %s min=%lld max=%lld mean=%.6f\n",
                s.node_types[e.node_type].c_str(), s.relation_types[e.relation].c_str(),
                e.direction == Direction::forward ? "forward" : "inverse",
                static_cast<long long>(e.min_degree), static_cast<long long>(e.max_degree),
                e.mean_degree);
  }
  return 0;
}

int cmd_train(const CommonArgs& args) {
  auto start = std::chrono::steady_clock::now();
  Config cfg = load_config(args);
  TrainConfig tcfg = train_config(cfg, args);
  FeatureConfig fcfg = feature_config(cfg, tcfg.model_kind);
  TypedGraph full = load_graph_from(cfg);
  SplitSettings split = split_settings(cfg);

  TypedGraph train_graph = split.resubstitution
                               ? full
                               : split_edges(full, split.spec).train;
  TypedGraph augmented = augment_with_inverses(train_graph);
  TrainResult result = train(augmented, tcfg, fcfg);

  std::filesystem::create_directories(args.out_dir);
  std::filesystem::path snap = std::filesystem::path(args.out_dir) / "snapshot";
  save_snapshot(result.store, snap);
  std::filesystem::path trace = std::filesystem::path(args.out_dir) / "trace.csv";
  {
    std::ofstream out(trace, std::ios::trunc);
    out << "epoch,loss,pos_mean,neg_mean\n";
    char buf[128];
    for (const auto& r : result.trace) {
      std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.9g\n", r.epoch, r.loss,
                    r.positive_mean_score, r.negative_mean_score);
      out << buf;
    }
  }

  RunManifest manifest;
  manifest.command = "train";
  manifest.config_snapshot = read_file(args.config_path);
  manifest.seed = tcfg.seed;
  manifest.add_input(args.config_path);
  manifest.add_input(cfg.get("graph", "edges").value());
  if (auto a = cfg.get("graph", "attributes")) manifest.add_input(*a);
  manifest.outputs = {snap.string(), trace.string()};
  manifest.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  manifest.write(std::filesystem::path(args.out_dir) / "manifest.txt");

  double final_loss = result.trace.empty() ? 0.0 : result.trace.back().loss;
  std::printf("trained %s for %zu epochs, final loss %.6f -> %s\n",
              model_kind_name(tcfg.model_kind).c_str(), result.trace.size(), final_loss,
              args.out_dir.c_str());
  return 0;
}

int cmd_eval(const CommonArgs& args, const std::string& snapshot_dir, const std::string& use_case,
             const std::string& directions) {
  auto start = std::chrono::steady_clock::now();
  Config cfg = load_config(args);
  TrainConfig tcfg = train_config(cfg, args);
  FeatureConfig fcfg = feature_config(cfg, tcfg.model_kind);
  TypedGraph full = load_graph_from(cfg);
  SplitSettings split = split_settings(cfg);

  TypedGraph train_graph = full;
  std::vector<Triple> test;
  if (split.resubstitution) {
    test = full.triples();
  } else {
    SplitResult sr = split_edges(full, split.spec);
    train_graph = std::move(sr.train);
    test = std::move(sr.test);
  }

  TypedGraph augmented = augment_with_inverses(train_graph);
  ParameterStore store = load_snapshot(snapshot_dir);
  store.set_rng_seed(tcfg.seed);
  Dense2D emb = encode_inference(augmented, tcfg, fcfg, store);
  const Dense2D& dm = DistMultParams::view(store).relations->value;

  std::string uc = use_case.empty() ? cfg.get_string("eval", "use_case", "both") : use_case;
  std::string dirs = directions.empty() ? cfg.get_string("eval", "directions", "tail") : directions;
  RankDirections rd;
  if (dirs == "tail") {
    rd = RankDirections::tail_only;
  } else if (dirs == "both") {
    rd = RankDirections::both;
  } else {
    throw ConfigError("--directions must be tail or both, got '" + dirs + "'");
  }
  std::vector<UseCase> cases;
  if (uc == "A") {
    cases = {UseCase::A};
  } else if (uc == "B") {
    cases = {UseCase::B};
  } else if (uc == "both") {
    cases = {UseCase::A, UseCase::B};
  } else {
    throw ConfigError("--use-case must be A, B or both, got '" + uc + "'");
  }

  std::filesystem::create_directories(args.out_dir);
  std::vector<MetricsReport> reports;
  for (UseCase c : cases) {
    reports.push_back(evaluate(full, train_graph, test, emb, dm, c, rd,
                               model_kind_name(tcfg.model_kind)));
  }
  std::filesystem::path metrics = std::filesystem::path(args.out_dir) / "metrics.csv";
  write_metrics_csv(reports, metrics);
  std::vector<std::string> outputs = {metrics.string()};
  if (cfg.get_bool("eval", "dump_ranks", false)) {
    for (const auto& r : reports) {
      std::filesystem::path dump = std::filesystem::path(args.out_dir) /
                                   (std::string("ranks_") + (r.use_case == UseCase::A ? "A" : "B") +
                                    ".csv");
      write_rank_dump(r, full, dump);
      outputs.push_back(dump.string());
    }
  }

  RunManifest manifest;
  manifest.command = "eval";
  manifest.config_snapshot = read_file(args.config_path);
  manifest.seed = tcfg.seed;
  manifest.add_input(args.config_path);
  manifest.add_input(cfg.get("graph", "edges").value());
  if (auto a = cfg.get("graph", "attributes")) manifest.add_input(*a);
  manifest.outputs = outputs;
  manifest.duration_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  manifest.write(std::filesystem::path(args.out_dir) / "manifest.txt");

  for (const auto& r : reports) {
    std::printf("use_case %s %s: mrr=%.4f hits@1=%.4f hits@3=%.4f hits@10=%.4f (n=%zu)\n",
                r.use_case == UseCase::A ? "A" : "B", r.model.c_str(), r.mrr, r.hits.at(1),
                r.hits.at(3), r.hits.at(10), r.per_triple.size());
  }
  return 0;
}

int cmd_gradcheck(const std::string& model, Eigen::Index dim, std::uint64_t seed) {
  std::vector<GradCheckKind> kinds;
  if (model == "all") {
    kinds = {GradCheckKind::rgcn, GradCheckKind::hetgnn, GradCheckKind::hgt,
             GradCheckKind::distmult, GradCheckKind::features};
  } else {
    kinds = {parse_gradcheck_kind(model)};
  }
  bool ok = true;
  for (GradCheckKind k : kinds) {
    double err = gradcheck(k, dim, seed);
    bool pass = err < 1e-4;
    ok = ok && pass;
    std::printf("gradcheck %-8s dim=%lld max_rel_err=%.3e %s\n", gradcheck_kind_name(k).c_str(),
                static_cast<long long>(dim), err, pass ? "PASS" : "FAIL");
  }
  return ok ? 0 : 4;
}

}  // namespace
}  // namespace hetkg

int main(int argc, char** argv) {
  CLI::App app{"heterogeneous knowledge-graph embedding and link prediction"};
  app.require_subcommand(1);

  hetkg::CommonArgs args;
  std::string snapshot_dir, use_case, directions;
  std::string gc_model = "all";
  std::int64_t gc_dim = 8;
  std::uint64_t gc_seed = 7;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", args.config_path, "config file");
    if (needs_config) opt->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed_override, "seed override");
    cmd->add_option("--threads", args.threads, "worker thread cap (1 = serial)");
  };

  CLI::App* generate = app.add_subcommand("generate", "emit a synthetic graph");
  add_common(generate, true);
  CLI::App* stats = app.add_subcommand("stats", "print node/edge/degree statistics");
  add_common(stats, true);
  CLI::App* train = app.add_subcommand("train", "train a model on the train split");
  add_common(train, true);
  CLI::App* eval = app.add_subcommand("eval", "rank test triples with a trained snapshot");
  add_common(eval, true);
  eval->add_option("--snapshot", snapshot_dir, "parameter snapshot directory")->required();
  eval->add_option("--use-case", use_case, "A, B or both");
  eval->add_option("--directions", directions, "tail or both");
  CLI::App* gradcheck = app.add_subcommand("gradcheck", "finite-difference gradient check");
  gradcheck->add_option("--model", gc_model, "rgcn|hetgnn|hgt|distmult|features|all");
  gradcheck->add_option("--dim", gc_dim, "embedding width (<= 16)");
  gradcheck->add_option("--seed", gc_seed, "seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (args.threads > 0) hetkg::set_thread_cap(args.threads);
    if (generate->parsed()) return hetkg::cmd_generate(args);
    if (stats->parsed()) return hetkg::cmd_stats(args);
    if (train->parsed()) return hetkg::cmd_train(args);
    if (eval->parsed()) return hetkg::cmd_eval(args, snapshot_dir, use_case, directions);
    if (gradcheck->parsed()) return hetkg::cmd_gradcheck(gc_model, gc_dim, gc_seed);
  } catch (const hetkg::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return hetkg::exit_code(e.kind());
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
