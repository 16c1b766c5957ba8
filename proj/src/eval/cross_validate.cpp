#include "vizrec/eval/cross_validate.hpp"

#include <cmath>

#include "vizrec/common/error.hpp"
#include "vizrec/common/numeric.hpp"
#include "vizrec/common/parallel.hpp"
#include "vizrec/common/rng.hpp"
#include "vizrec/eval/metrics.hpp"

namespace vizrec::eval {

namespace {
std::vector<std::size_t> labels_of(const pipeline::TaskDataset& d, const std::vector<std::size_t>& rows) {
  std::vector<std::size_t> y;
  y.reserve(rows.size());
  for (auto r : rows) y.push_back(d.labels[r]);
  return y;
}
}  // namespace

FittedPipeline fit_pipeline(const models::ModelSpec& spec, const pipeline::TaskDataset& d,
                            const std::vector<std::size_t>& train_rows, const std::vector<std::size_t>& validation_rows,
                            pipeline::FitAudit* audit) {
  FittedPipeline out;
  out.preprocessor = pipeline::fit_preprocessor(d.features, train_rows, audit);
  const auto xt = pipeline::apply_preprocessor(out.preprocessor, d.features, train_rows);
  const auto yt = labels_of(d, train_rows);
  models::TrainingData train{&xt, &yt, d.vocabulary.size()};
  if (validation_rows.empty()) {
    out.model = models::train(spec, train);
    return out;
  }
  const auto xv = pipeline::apply_preprocessor(out.preprocessor, d.features, validation_rows);
  const auto yv = labels_of(d, validation_rows);
  out.model = models::train(spec, train, models::TrainingData{&xv, &yv, d.vocabulary.size()});
  return out;
}

std::vector<std::size_t> predict_rows(const FittedPipeline& p, const pipeline::TaskDataset& d,
                                      const std::vector<std::size_t>& rows) {
  if (rows.empty()) return {};
  const auto x = pipeline::apply_preprocessor(p.preprocessor, d.features, rows);
  return p.model->predict(x).labels;
}

std::pair<double, double> mean_and_standard_error(const std::vector<double>& values) {
  if (values.empty()) return {0.0, 0.0};
  const double m = num::mean(values);
  if (values.size() < 2) return {m, 0.0};
  return {m, num::sample_stddev(values) / std::sqrt(static_cast<double>(values.size()))};
}

CvReport cross_validate(const models::ModelSpec& spec, const pipeline::TaskDataset& d, std::uint64_t seed,
                        const CvOptions& options) {
  const std::size_t k = options.folds;
  if (k < 2) throw UsageError("cross-validation needs at least two folds");
  if (options.validation_share <= 0 || options.validation_share >= 1) {
    throw UsageError("validation share must be in (0, 1)");
  }
  const std::size_t classes = d.vocabulary.size();
  const auto fold_of = pipeline::make_folds(d, k, derive_seed(seed, "cv_folds"));

  CvReport report;
  report.task = std::string(choices::to_string(d.task));
  report.family = std::string(models::to_string(spec.family));
  report.feature_set = std::string(features::to_string(d.mask));
  report.seed = seed;
  report.folds.resize(k);

  parallel_for(k, [&](std::size_t f) {
    std::vector<std::size_t> rest, test;
    for (std::size_t r = 0; r < d.size(); ++r) (fold_of[r] == f ? test : rest).push_back(r);
    pipeline::SplitPlan inner{derive_seed(seed, "cv_inner", f), 1.0 - options.validation_share,
                              options.validation_share, 0.0, k};
    const auto assignment = pipeline::assign_splits(d, inner, rest, "cv_inner");
    pipeline::SplitRows raw;
    for (auto r : rest) (assignment[r] == pipeline::Split::train ? raw.train : raw.validation).push_back(r);
    raw.test = test;
    pipeline::check_class_coverage(d, raw);

    const auto train = pipeline::oversample(raw.train, d.labels, classes, derive_seed(seed, "cv_oversample", 3 * f));
    const auto val = pipeline::oversample(raw.validation, d.labels, classes, derive_seed(seed, "cv_oversample", 3 * f + 1));
    const auto test_bal = pipeline::oversample(raw.test, d.labels, classes, derive_seed(seed, "cv_oversample", 3 * f + 2));

    models::ModelSpec fold_spec = spec;
    fold_spec.seed = derive_seed(seed, "cv_model", f);
    const auto fitted = fit_pipeline(fold_spec, d, train, val);

    FoldResult& res = report.folds[f];
    res.fold = f;
    res.train_rows = raw.train.size();
    res.validation_rows = raw.validation.size();
    res.test_rows = raw.test.size();
    const auto pred_bal = predict_rows(fitted, d, test_bal);
    res.accuracy = accuracy(pred_bal, labels_of(d, test_bal));
    const auto pred_raw = predict_rows(fitted, d, raw.test);
    const auto truth_raw = labels_of(d, raw.test);
    res.raw_accuracy = accuracy(pred_raw, truth_raw);
    res.balanced_accuracy = balanced_accuracy(pred_raw, truth_raw, classes);
    res.iterations = fitted.model->log().iterations;
    res.epochs = fitted.model->log().epochs.size();
    res.converged = fitted.model->log().converged;
  });

  std::vector<double> raw;
  for (const auto& f : report.folds) {
    report.fold_accuracies.push_back(f.accuracy);
    raw.push_back(f.raw_accuracy);
  }
  std::tie(report.mean, report.standard_error) = mean_and_standard_error(report.fold_accuracies);
  std::tie(report.raw_mean, report.raw_standard_error) = mean_and_standard_error(raw);
  return report;
}

pipeline::TaskDataset shuffle_labels(const pipeline::TaskDataset& d, std::uint64_t seed) {
  pipeline::TaskDataset out = d;
  Rng rng(derive_seed(seed, "label_shuffle"));
  rng.shuffle(std::span<std::size_t>(out.labels));
  return out;
}

Json CvReport::to_json() const {
  Json folds_json = Json::array();
  for (const auto& f : folds) {
    folds_json.push_back(Json{{"fold", f.fold},
                              {"train_rows", f.train_rows},
                              {"validation_rows", f.validation_rows},
                              {"test_rows", f.test_rows},
                              {"accuracy", f.accuracy},
                              {"raw_accuracy", f.raw_accuracy},
                              {"balanced_accuracy", f.balanced_accuracy},
                              {"iterations", f.iterations},
                              {"epochs", f.epochs},
                              {"converged", f.converged}});
  }
  return Json{{"task", task},
              {"family", family},
              {"feature_set", feature_set},
              {"seed", seed},
              {"folds", folds.size()},
              {"fold_accuracies", fold_accuracies},
              {"mean", mean},
              {"standard_error", standard_error},
              {"raw_mean", raw_mean},
              {"raw_standard_error", raw_standard_error},
              {"fold_details", folds_json}};
}

}  // namespace vizrec::eval
