#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "vizrec/common/error.hpp"
#include "vizrec/common/parallel.hpp"
#include "vizrec/features/catalog.hpp"
#include "vizrec/kernels/kernels.hpp"

using namespace vizrec;

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> threads;
  std::optional<std::string> kernels, corpus, out, task, feature_set, dedup, family, hyper;
  std::optional<std::size_t> folds;
  bool no_cv = false;
  bool shuffle = false;
  std::string log_level = "info";
};

cli::RunConfig resolve(const Flags& f) {
  cli::RunConfig cfg;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw UsageError("cannot read config file " + f.config);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
      cfg.merge(cli::Json::parse(ss.str()));
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError("config file " + f.config + " is not valid JSON: " + e.what());
    }
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.threads) cfg.threads = *f.threads;
  if (f.kernels) cfg.kernels = *f.kernels;
  if (f.corpus) cfg.corpus = *f.corpus;
  if (f.out) cfg.out = *f.out;
  if (f.task) cfg.task = *f.task;
  if (f.feature_set) cfg.feature_set = *f.feature_set;
  if (f.dedup) cfg.dedup = *f.dedup;
  if (f.family) cfg.family = *f.family;
  if (f.hyper) {
    try {
      cfg.hyperparameters = cli::Json::parse(*f.hyper);
    } catch (const nlohmann::json::parse_error& e) {
      throw UsageError(std::string("--hyper is not valid JSON: ") + e.what());
    }
  }
  if (f.folds) cfg.folds = *f.folds;
  if (f.no_cv) cfg.cross_validate = false;
  if (f.shuffle) cfg.shuffle_labels = true;

  set_thread_count(cfg.threads);
  if (cfg.kernels != "auto") kernels::set_isa(kernels::parse_isa(cfg.kernels));
  cfg.kernels = std::string(kernels::isa_name(kernels::active_isa()));
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  auto logger = spdlog::stderr_color_mt("vizrec");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");

  CLI::App app{"Visualization design-choice recommender: features, training, evaluation"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config, "JSON config file (flags override it)");
  app.add_option("--seed", f.seed, "Run seed");
  app.add_option("--threads", f.threads, "Worker cap (0 = all cores)");
  app.add_option("--kernels", f.kernels, "auto, scalar or avx2");
  app.add_option("--log-level", f.log_level, "trace, debug, info, warn, error");

  auto corpus_opts = [&](CLI::App* s) {
    s->add_option("--corpus", f.corpus, "Directory of record JSON files");
    s->add_option("--dedup", f.dedup, "none, exact or per_user");
  };
  auto out_opt = [&](CLI::App* s) { s->add_option("--out", f.out, "Output directory"); };
  auto model_opts = [&](CLI::App* s) {
    s->add_option("--task", f.task, "vt2 vt3 vt6 hsa mt2 mt3 mt6 isa xy");
    s->add_option("--features", f.feature_set, "D, D+T, D+T+V or All");
    s->add_option("--model", f.family, "nb, knn, lr, rf or nn");
    s->add_option("--hyper", f.hyper, "JSON object of hyperparameter overrides");
    s->add_option("--folds", f.folds, "Cross-validation folds");
  };

  cli::IngestArgs ingest_args;
  auto* ingest = app.add_subcommand("ingest", "Load, deduplicate and store a corpus");
  ingest->add_option("--source", ingest_args.source_dir, "Directory of record JSON files");
  ingest->add_option("--url", ingest_args.url, "Base URL of a /plots endpoint");
  ingest->add_option("--first-page", ingest_args.first_page, "First page to request");
  ingest->add_option("--max-pages", ingest_args.max_pages, "Page limit");
  ingest->add_option("--rate-limit", ingest_args.rate_limit, "Requests per second (0 = unlimited)");
  ingest->add_option("--dedup", f.dedup, "none, exact or per_user");
  out_opt(ingest);

  std::string feature_format = "csv";
  auto* feats = app.add_subcommand("features", "Extract dataset, column and pair feature matrices");
  corpus_opts(feats);
  out_opt(feats);
  feats->add_option("--format", feature_format, "csv or jsonl");

  auto* chs = app.add_subcommand("choices", "Extract design choices from each record");
  corpus_opts(chs);
  out_opt(chs);

  auto* train = app.add_subcommand("train", "Train one model on a task and write it with its report");
  corpus_opts(train);
  out_opt(train);
  model_opts(train);
  train->add_flag("--no-cv", f.no_cv, "Skip cross-validation");

  auto* cv = app.add_subcommand("cv", "Cross-validate one model on a task");
  corpus_opts(cv);
  out_opt(cv);
  model_opts(cv);
  cv->add_flag("--shuffle-labels", f.shuffle, "Permute labels first (null baseline)");

  cli::ImportanceArgs imp_args;
  auto* imp = app.add_subcommand("importances", "Rank features of a random-forest model by MDI");
  imp->add_option("--model-file", imp_args.model, "Model file")->required();
  imp->add_option("--top", imp_args.top, "How many to list (0 = all)");
  out_opt(imp);

  cli::RecommendArgs rec_args;
  auto* rec = app.add_subcommand("recommend", "Rank chart specifications for a table");
  rec->add_option("--dataset", rec_args.dataset, "CSV table or record JSON")->required();
  rec->add_option("--model-file", rec_args.model, "Visualization-type model file")->required();
  rec->add_option("--axis-model-file", rec_args.axis_model, "Optional xy-task model for axis assignment");
  rec->add_option("--top", rec_args.top, "How many specifications");
  out_opt(rec);

  cli::BenchmarkArgs bench_args;
  auto* bench = app.add_subcommand("benchmark", "Score predictors against crowd votes (CARS)");
  bench->add_option("--votes", bench_args.votes, "Votes CSV: dataset_id,worker_id,choice")->required();
  bench->add_option("--predictions", bench_args.predictions, "name=path of a predictions CSV (repeatable)");
  bench->add_option("--vocabulary", bench_args.vocabulary, "Choice vocabulary (default: choices seen)")->delimiter(',');
  bench->add_option("--replicates", bench_args.replicates, "Bootstrap replicates");
  bench->add_option("--level", bench_args.level, "Confidence level");
  bench->add_option("--leave-one-out", bench_args.leave_one_out, "Predictors scored without their own vote");
  bool no_random = false;
  bench->add_flag("--no-random", no_random, "Skip the random baseline");
  out_opt(bench);

  cli::SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "Generate a corpus with a planted labelling rule");
  synth->add_option("--datasets", synth_args.datasets, "Number of records");
  synth->add_option("--noise", synth_args.noise, "Label noise probability");
  synth->add_option("--rule", synth_args.rule, "string_bar_else_line or string_bar_date_line_else_scatter");
  out_opt(synth);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    spdlog::set_level(spdlog::level::from_str(f.log_level));
    features::verify_catalog();
    const auto cfg = resolve(f);
    if (*ingest) cli::cmd_ingest(cfg, ingest_args);
    else if (*feats) cli::cmd_features(cfg, feature_format);
    else if (*chs) cli::cmd_choices(cfg);
    else if (*train) cli::cmd_train(cfg);
    else if (*cv) cli::cmd_cv(cfg);
    else if (*imp) cli::cmd_importances(cfg, imp_args);
    else if (*rec) cli::cmd_recommend(cfg, rec_args);
    else if (*bench) {
      bench_args.include_random = !no_random;
      cli::cmd_benchmark(cfg, bench_args);
    } else if (*synth) cli::cmd_synth(cfg, synth_args);
    return 0;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return e.exit_code();
  } catch (const std::filesystem::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("internal error: {}", e.what());
    return 3;
  }
}
