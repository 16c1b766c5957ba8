#include "commands.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "vizrec/choices/emit.hpp"
#include "vizrec/choices/extract.hpp"
#include "vizrec/common/encoding.hpp"
#include "vizrec/common/error.hpp"
#include "vizrec/common/rng.hpp"
#include "vizrec/eval/consensus.hpp"
#include "vizrec/eval/cross_validate.hpp"
#include "vizrec/eval/metrics.hpp"
#include "vizrec/eval/synth.hpp"
#include "vizrec/eval/votes_io.hpp"
#include "vizrec/features/catalog.hpp"
#include "vizrec/features/extract.hpp"
#include "vizrec/features/matrix_io.hpp"
#include "vizrec/ingest/corpus.hpp"
#include "vizrec/ingest/csv.hpp"
#include "vizrec/models/random_forest.hpp"
#include "vizrec/models/serialize.hpp"
#include "vizrec/pipeline/dedup.hpp"
#include "vizrec/pipeline/split.hpp"
#include "vizrec/pipeline/task_dataset.hpp"

namespace fs = std::filesystem;

namespace vizrec::cli {

Json RunConfig::to_json() const {
  return Json{{"seed", seed},
              {"threads", threads},
              {"kernels", kernels},
              {"corpus", corpus},
              {"out", out},
              {"task", task},
              {"feature_set", feature_set},
              {"dedup", dedup},
              {"model", Json{{"family", family}, {"hyperparameters", hyperparameters}}},
              {"folds", folds},
              {"cross_validate", cross_validate},
              {"shuffle_labels", shuffle_labels}};
}

void RunConfig::merge(const Json& j) {
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "seed") seed = v.get<std::uint64_t>();
      else if (key == "threads") threads = v.get<std::size_t>();
      else if (key == "kernels") kernels = v.get<std::string>();
      else if (key == "corpus") corpus = v.get<std::string>();
      else if (key == "out") out = v.get<std::string>();
      else if (key == "task") task = v.get<std::string>();
      else if (key == "feature_set") feature_set = v.get<std::string>();
      else if (key == "dedup") dedup = v.get<std::string>();
      else if (key == "folds") folds = v.get<std::size_t>();
      else if (key == "cross_validate") cross_validate = v.get<bool>();
      else if (key == "shuffle_labels") shuffle_labels = v.get<bool>();
      else if (key == "model") {
        if (v.contains("family")) family = v["family"].get<std::string>();
        if (v.contains("hyperparameters")) hyperparameters = v["hyperparameters"];
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("bad config value: ") + e.what());
  }
}

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot write " + p.string());
  out << text;
  if (!out) throw IoError("failed writing " + p.string());
}

void write_json(const fs::path& p, const Json& j) { write_text(p, j.dump(2) + "\n"); }

fs::path need_out(const RunConfig& cfg) {
  if (cfg.out.empty()) throw UsageError("--out is required");
  fs::create_directories(cfg.out);
  return fs::path(cfg.out);
}

void snapshot(const RunConfig& cfg, const fs::path& dir, const std::string& command, const Json& extra = Json::object()) {
  Json j = cfg.to_json();
  j["command"] = command;
  for (const auto& [k, v] : extra.items()) j[k] = v;
  write_json(dir / "config.resolved.json", j);
}

ingest::Corpus load_and_dedup(const RunConfig& cfg) {
  if (cfg.corpus.empty()) throw UsageError("--corpus is required");
  auto corpus = ingest::load_corpus(cfg.corpus);
  if (corpus.records.empty()) throw EmptyInputError("corpus " + cfg.corpus + " has no usable records");
  for (const auto& s : corpus.skipped) spdlog::warn("skipped {}: {}", s.source, s.reason);
  if (cfg.dedup != "none") {
    const auto before = corpus.records.size();
    corpus = pipeline::deduplicate(corpus, pipeline::parse_dedup_mode(cfg.dedup), cfg.seed);
    spdlog::info("dedup ({}): {} -> {} records", cfg.dedup, before, corpus.records.size());
  }
  return corpus;
}

pipeline::TaskDataset task_dataset(const RunConfig& cfg) {
  const auto task = choices::parse_task(cfg.task);
  const auto mask = features::parse_feature_set(cfg.feature_set);
  const auto corpus = load_and_dedup(cfg);
  const auto analyses = pipeline::analyze_corpus(corpus);
  std::size_t skipped = 0;
  for (const auto& a : analyses) {
    if (!a.skip_reason.empty()) {
      ++skipped;
      spdlog::debug("record {} not used: {}", a.fid, a.skip_reason);
    }
  }
  if (skipped) spdlog::warn("{} records had unusable charts or tables", skipped);
  auto d = pipeline::build_task_dataset(analyses, task, mask);
  spdlog::info("task {} ({}): {} rows, {} raw features", cfg.task, cfg.feature_set, d.size(),
               d.features.columns.size());
  return d;
}

models::ModelSpec model_spec(const RunConfig& cfg) {
  models::ModelSpec spec;
  spec.family = models::parse_family(cfg.family);
  spec.seed = cfg.seed;
  spec.apply_overrides(cfg.hyperparameters);
  return spec;
}

Json class_counts_json(const pipeline::TaskDataset& d) {
  Json j = Json::object();
  const auto c = d.class_counts();
  for (std::size_t k = 0; k < c.size(); ++k) j[d.vocabulary[k]] = c[k];
  return j;
}

}  // namespace

void cmd_ingest(const RunConfig& cfg, const IngestArgs& a) {
  const auto out = need_out(cfg);
  ingest::Corpus corpus;
  if (!a.url.empty()) {
    ingest::FetchOptions opt;
    opt.requests_per_second = a.rate_limit;
    ingest::PlotsClient client(a.url, opt);
    corpus = client.fetch_corpus(a.first_page, a.max_pages);
    spdlog::info("fetched {} records in {} requests", corpus.records.size(), client.requests_made());
  } else if (!a.source_dir.empty()) {
    corpus = ingest::load_corpus(a.source_dir);
  } else {
    throw UsageError("ingest needs --source or --url");
  }
  if (corpus.records.empty()) throw EmptyInputError("no usable records were ingested");
  const auto before = corpus.records.size();
  if (cfg.dedup != "none") corpus = pipeline::deduplicate(corpus, pipeline::parse_dedup_mode(cfg.dedup), cfg.seed);
  ingest::save_corpus(corpus, out / "records");
  Json skipped = Json::array();
  for (const auto& s : corpus.skipped) skipped.push_back(Json{{"source", s.source}, {"reason", s.reason}});
  write_json(out / "ingest_report.json", Json{{"provenance", corpus.provenance},
                                             {"records_read", before},
                                             {"records_kept", corpus.records.size()},
                                             {"skipped", skipped}});
  snapshot(cfg, out, "ingest",
           Json{{"source", a.source_dir}, {"url", a.url}, {"first_page", a.first_page}, {"max_pages", a.max_pages},
                {"rate_limit", a.rate_limit}});
}

void cmd_features(const RunConfig& cfg, const std::string& format) {
  if (format != "csv" && format != "jsonl") throw UsageError("--format must be csv or jsonl");
  const auto out = need_out(cfg);
  const auto corpus = load_and_dedup(cfg);
  std::vector<const ingest::Dataset*> ptrs;
  for (const auto& r : corpus.records) ptrs.push_back(&r.data);
  const auto ext = features::extract_features(ptrs);

  features::FeatureMatrix ds, cols, pairs;
  ds.feature_names = features::feature_names(features::Level::dataset);
  cols.feature_names = features::feature_names(features::Level::single_column);
  pairs.feature_names = features::feature_names(features::Level::pairwise);
  for (std::size_t i = 0; i < ext.size(); ++i) {
    const auto& fid = corpus.records[i].fid;
    ds.row_ids.push_back(fid);
    ds.rows.push_back(ext[i].dataset.values);
    for (std::size_t c = 0; c < ext[i].columns.size(); ++c) {
      cols.row_ids.push_back(fid + ":" + std::to_string(c));
      cols.rows.push_back(ext[i].columns[c].values);
    }
    const std::size_t n = ext[i].columns.size();
    std::size_t p = 0;
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b, ++p) {
        pairs.row_ids.push_back(fid + ":" + std::to_string(a) + ":" + std::to_string(b));
        pairs.rows.push_back(ext[i].pairs[p].values);
      }
    }
  }
  auto emit = [&](const features::FeatureMatrix& m, const std::string& stem) {
    std::ostringstream os;
    if (format == "csv") {
      features::write_matrix_csv(os, m);
    } else {
      features::write_matrix_jsonl(os, m);
    }
    write_text(out / (stem + "." + format), os.str());
  };
  emit(ds, "dataset_features");
  emit(cols, "column_features");
  emit(pairs, "pairwise_features");
  write_json(out / "feature_manifest.json", features::catalog_manifest());
  snapshot(cfg, out, "features", Json{{"format", format}, {"records", corpus.records.size()}});
  spdlog::info("features: {} datasets, {} columns, {} pairs", ds.rows.size(), cols.rows.size(), pairs.rows.size());
}

void cmd_choices(const RunConfig& cfg) {
  const auto out = need_out(cfg);
  const auto corpus = load_and_dedup(cfg);
  std::string lines;
  std::size_t bad = 0;
  for (const auto& r : corpus.records) {
    Json j{{"fid", r.fid}};
    try {
      j["choices"] = choices::to_json(choices::extract_record_choices(r), r.data);
    } catch (const DataError& e) {
      j["error"] = e.what();
      ++bad;
    }
    lines += j.dump() + "\n";
  }
  write_text(out / "choices.jsonl", lines);
  snapshot(cfg, out, "choices", Json{{"records", corpus.records.size()}, {"unusable", bad}});
}

void cmd_cv(const RunConfig& cfg) {
  const auto out = need_out(cfg);
  const auto spec = model_spec(cfg);  // flag errors before any data is read
  auto d = task_dataset(cfg);
  if (cfg.shuffle_labels) d = eval::shuffle_labels(d, cfg.seed);
  eval::CvOptions opt;
  opt.folds = cfg.folds;
  const auto rep = eval::cross_validate(spec, d, cfg.seed, opt);
  Json j = rep.to_json();
  j["class_counts"] = class_counts_json(d);
  j["shuffled_labels"] = cfg.shuffle_labels;
  write_json(out / "cv_report.json", j);
  snapshot(cfg, out, "cv");
  spdlog::info("cv {} {}: mean {:.4f} +- {:.4f} (raw {:.4f})", rep.task, rep.family, rep.mean, rep.standard_error,
               rep.raw_mean);
}

void cmd_train(const RunConfig& cfg) {
  const auto out = need_out(cfg);
  const auto spec = model_spec(cfg);
  const auto d = task_dataset(cfg);

  pipeline::SplitPlan plan;
  plan.seed = derive_seed(cfg.seed, "train_split");
  plan.folds = cfg.folds;
  const auto assignment = pipeline::assign_splits(d, plan);
  const auto raw = pipeline::split_rows(d, assignment);
  pipeline::check_class_coverage(d, raw);
  const std::size_t classes = d.vocabulary.size();
  const auto train = pipeline::oversample(raw.train, d.labels, classes, derive_seed(cfg.seed, "oversample", 0));
  const auto val = pipeline::oversample(raw.validation, d.labels, classes, derive_seed(cfg.seed, "oversample", 1));
  const auto test = pipeline::oversample(raw.test, d.labels, classes, derive_seed(cfg.seed, "oversample", 2));

  auto fitted = eval::fit_pipeline(spec, d, train, val);
  auto truth = [&](const std::vector<std::size_t>& rows) {
    std::vector<std::size_t> y;
    for (auto r : rows) y.push_back(d.labels[r]);
    return y;
  };
  const double acc = eval::accuracy(eval::predict_rows(fitted, d, test), truth(test));
  const double raw_acc = eval::accuracy(eval::predict_rows(fitted, d, raw.test), truth(raw.test));

  models::ModelFile mf;
  mf.task = d.task;
  mf.mask = d.mask;
  mf.vocabulary = d.vocabulary;
  mf.preprocessor = fitted.preprocessor;
  mf.spec = spec;
  mf.model = std::move(fitted.model);
  models::write_model_file(out / "model.json", mf);

  std::ostringstream manifest;
  pipeline::write_split_manifest(manifest, d, assignment, pipeline::make_folds(d, cfg.folds, derive_seed(cfg.seed, "cv_folds")));
  write_text(out / "split_manifest.csv", manifest.str());

  Json report{{"task", cfg.task},
              {"family", std::string(models::to_string(spec.family))},
              {"feature_set", cfg.feature_set},
              {"class_counts", class_counts_json(d)},
              {"holdout",
               Json{{"train_rows", raw.train.size()},
                    {"validation_rows", raw.validation.size()},
                    {"test_rows", raw.test.size()},
                    {"accuracy", acc},
                    {"raw_accuracy", raw_acc}}},
              {"training_log", mf.model->log().to_json()}};
  if (cfg.cross_validate) {
    eval::CvOptions opt;
    opt.folds = cfg.folds;
    const auto rep = eval::cross_validate(spec, d, cfg.seed, opt);
    report["cross_validation"] = rep.to_json();
    spdlog::info("cv mean {:.4f} +- {:.4f}", rep.mean, rep.standard_error);
  }
  write_json(out / "train_report.json", report);
  snapshot(cfg, out, "train", Json{{"model_hyperparameters", spec.hyperparameters()}});
  spdlog::info("holdout accuracy {:.4f} (raw {:.4f}); model written to {}", acc, raw_acc, (out / "model.json").string());
}

void cmd_importances(const RunConfig& cfg, const ImportanceArgs& a) {
  const auto mf = models::read_model_file(a.model);
  const auto ranked = models::mdi_importances(*mf.model);
  const auto names = mf.preprocessor.output_names();
  Json list = Json::array();
  for (std::size_t i = 0; i < ranked.size() && (a.top == 0 || i < a.top); ++i) {
    list.push_back(Json{{"rank", i + 1}, {"feature", names.at(ranked[i].first)}, {"importance", ranked[i].second}});
  }
  Json doc{{"model", a.model}, {"task", choices::to_string(mf.task)}, {"importances", list}};
  if (cfg.out.empty()) {
    std::printf("%s\n", doc.dump(2).c_str());
    return;
  }
  const auto out = need_out(cfg);
  write_json(out / "importances.json", doc);
  snapshot(cfg, out, "importances", Json{{"model_file", a.model}, {"top", a.top}});
}

Json recommend(const std::string& dataset_path, const std::string& model_path, const std::string& axis_model_path,
               std::size_t top) {
  const auto mf = models::read_model_file(model_path);
  if (!choices::is_visualization_level(mf.task)) {
    throw UsageError("recommend needs a visualization-type model, got task " + std::string(choices::to_string(mf.task)));
  }
  const auto path = fs::path(dataset_path);
  const auto text = slurp(path);
  const auto format = path.extension() == ".json" ? ingest::TableFormat::corpus_record : ingest::TableFormat::csv;
  const auto data = ingest::parse_table(text, format, path.stem().string());
  if (data.row_count() == 0) throw ValidationError("dataset " + dataset_path + " has no rows");
  const auto ext = features::extract_features(data);

  auto row = pipeline::empty_feature_matrix(mf.task, mf.mask);
  pipeline::append_row(row, ext.dataset, mf.mask);
  const auto x = pipeline::apply_preprocessor(mf.preprocessor, row);
  const auto pred = mf.model->predict(x);
  const auto probs = pred.row(0);

  // optional per-column axis model
  std::optional<std::vector<std::size_t>> xs, ys;
  Json axis_probs = Json::array();
  if (!axis_model_path.empty()) {
    const auto am = models::read_model_file(axis_model_path);
    if (am.task != choices::Task::xy) throw UsageError("the axis model must be trained on the xy task");
    auto cm = pipeline::empty_feature_matrix(am.task, am.mask);
    for (const auto& c : ext.columns) pipeline::append_row(cm, c, am.mask);
    const auto p = am.model->predict(pipeline::apply_preprocessor(am.preprocessor, cm));
    xs.emplace();
    ys.emplace();
    const auto xi = choices::class_index(choices::Task::xy, "x").value();
    for (std::size_t c = 0; c < data.column_count(); ++c) {
      (p.labels[c] == xi ? *xs : *ys).push_back(c);
      axis_probs.push_back(Json{{"column", data.column(c).name()}, {"x", p.row(c)[xi]}});
    }
    // both axes need a column: move the most confident one over
    if (data.column_count() >= 2 && (xs->empty() || ys->empty())) {
      auto& from = xs->empty() ? *ys : *xs;
      auto& to = xs->empty() ? *xs : *ys;
      std::size_t best = 0;
      double best_p = -1;
      for (std::size_t i = 0; i < from.size(); ++i) {
        const double px = p.row(from[i])[xi];
        const double score = xs->empty() ? px : 1.0 - px;
        if (score > best_p) {
          best_p = score;
          best = i;
        }
      }
      to.push_back(from[best]);
      from.erase(from.begin() + static_cast<std::ptrdiff_t>(best));
    }
  }

  std::vector<std::size_t> order(probs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return probs[a] > probs[b]; });

  Json prob_map = Json::object();
  for (std::size_t k = 0; k < probs.size(); ++k) prob_map[mf.vocabulary[k]] = probs[k];
  Json recs = Json::array();
  for (std::size_t i = 0; i < order.size() && i < top; ++i) {
    const auto& type = mf.vocabulary[order[i]];
    choices::DesignChoices dc = xs ? choices::choices_from_axes(type, *xs, *ys) : choices::default_choices(data, type);
    const auto spec = choices::emit_chart_spec(data, dc);
    recs.push_back(Json{{"rank", i + 1},
                        {"visualization_type", type},
                        {"probability", probs[order[i]]},
                        {"choices", choices::to_json(dc, data)},
                        {"specification", spec}});
  }
  Json doc{{"dataset", dataset_path},
           {"model", model_path},
           {"task", choices::to_string(mf.task)},
           {"probabilities", prob_map},
           {"recommendations", recs}};
  if (!axis_model_path.empty()) doc["axis_probabilities"] = axis_probs;
  return doc;
}

void cmd_recommend(const RunConfig& cfg, const RecommendArgs& a) {
  if (a.dataset.empty() || a.model.empty()) throw UsageError("recommend needs --dataset and --model");
  if (a.top == 0) throw UsageError("--top must be at least 1");
  const auto doc = recommend(a.dataset, a.model, a.axis_model, a.top);
  if (cfg.out.empty()) {
    std::printf("%s\n", doc.dump(2).c_str());
    return;
  }
  const auto out = need_out(cfg);
  write_json(out / "recommendations.json", doc);
  snapshot(cfg, out, "recommend",
           Json{{"dataset", a.dataset}, {"model_file", a.model}, {"axis_model", a.axis_model}, {"top", a.top}});
}

void cmd_benchmark(const RunConfig& cfg, const BenchmarkArgs& a) {
  if (a.votes.empty()) throw UsageError("benchmark needs --votes");
  const auto out = need_out(cfg);
  const auto votes = eval::read_votes_csv(a.votes, a.vocabulary);
  std::vector<std::pair<std::string, eval::Predictions>> predictors;
  for (const auto& spec : a.predictions) {
    const auto eq = spec.find('=');
    const std::string name = eq == std::string::npos ? fs::path(spec).stem().string() : spec.substr(0, eq);
    const std::string file = eq == std::string::npos ? spec : spec.substr(eq + 1);
    predictors.emplace_back(name, eval::read_predictions_csv(file));
  }
  if (a.include_random) predictors.emplace_back("random", eval::random_predictions(votes, cfg.seed));

  Json reports = Json::array();
  for (std::size_t i = 0; i < predictors.size(); ++i) {
    const auto& [name, preds] = predictors[i];
    eval::CarsOptions opt;
    opt.leave_one_out = std::find(a.leave_one_out.begin(), a.leave_one_out.end(), name) != a.leave_one_out.end();
    auto rep = eval::cars(name, preds, votes, opt);
    rep.ci = eval::bootstrap_ci(votes, preds, a.replicates, a.level, derive_seed(cfg.seed, "benchmark", i), opt);
    spdlog::info("{}: CARS {:.2f} [{:.2f}, {:.2f}]", name, rep.cars, rep.ci->low, rep.ci->high);
    reports.push_back(rep.to_json());
  }
  write_json(out / "benchmark_report.json",
             Json{{"votes", a.votes},
                  {"datasets", votes.size()},
                  {"vocabulary", votes.front().vocabulary},
                  {"expected_random_cars", eval::expected_random_cars(votes)},
                  {"vote_gini", eval::summarize_gini(votes).to_json()},
                  {"predictors", reports}});
  snapshot(cfg, out, "benchmark",
           Json{{"votes_file", a.votes}, {"predictions", a.predictions}, {"replicates", a.replicates},
                {"level", a.level}, {"include_random", a.include_random}, {"leave_one_out", a.leave_one_out}});
}

void cmd_synth(const RunConfig& cfg, const SynthArgs& a) {
  const auto out = need_out(cfg);
  eval::SynthOptions o;
  o.datasets = a.datasets;
  o.noise = a.noise;
  o.seed = cfg.seed;
  o.rule = eval::parse_synth_rule(a.rule);
  const auto s = eval::generate_synthetic_corpus(o);
  ingest::save_corpus(s.corpus, out / "records");
  std::string labels = ingest::write_csv_row({"fid", "planted", "label"});
  for (std::size_t i = 0; i < s.labels.size(); ++i) {
    labels += ingest::write_csv_row({s.corpus.records[i].fid, s.planted[i], s.labels[i]});
  }
  write_text(out / "labels.csv", labels);
  snapshot(cfg, out, "synth", Json{{"datasets", a.datasets}, {"noise", a.noise}, {"rule", a.rule}});
  spdlog::info("wrote {} synthetic records to {}", s.labels.size(), (out / "records").string());
}

}  // namespace vizrec::cli
