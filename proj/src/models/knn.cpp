#include "vizrec/models/knn.hpp"

#include <algorithm>
#include <tuple>

#include "vizrec/common/encoding.hpp"
#include "vizrec/common/error.hpp"
#include "vizrec/common/parallel.hpp"
#include "vizrec/kernels/kernels.hpp"

namespace vizrec::models {

Knn::Knn(std::size_t features, std::size_t classes, std::size_t k_) : Model(features, classes), k(k_) {}

std::unique_ptr<Model> train_knn(const KnnParams& params, const TrainingData& data) {
  if (params.k == 0) throw UsageError("knn needs k >= 1");
  auto m = std::make_unique<Knn>(data.x->cols, data.classes, params.k);
  m->points = data.x->data;
  m->labels = *data.y;
  return m;
}

void Knn::predict_proba(const Matrix& x, std::vector<double>& out) const {
  const std::size_t n = labels.size();
  const std::size_t kk = std::min(k, n);
  parallel_for(x.rows, [&](std::size_t r) {
    struct Cand {
      double dist;
      std::size_t label;
      std::size_t row;
    };
    std::vector<Cand> cands(n);
    const auto q = x.row(r);
    for (std::size_t i = 0; i < n; ++i) {
      cands[i] = {kernels::squared_distance(q, std::span<const double>(points.data() + i * features_, features_)),
                  labels[i], i};
    }
    auto less = [](const Cand& a, const Cand& b) {
      return std::tie(a.dist, a.label, a.row) < std::tie(b.dist, b.label, b.row);
    };
    std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(kk), cands.end(), less);
    double* o = out.data() + r * classes_;
    std::fill(o, o + classes_, 0.0);
    for (std::size_t i = 0; i < kk; ++i) o[cands[i].label] += 1.0;
    for (std::size_t c = 0; c < classes_; ++c) o[c] /= static_cast<double>(kk);
  });
}

Json Knn::parameters() const {
  return Json{{"features", features_},
              {"classes", classes_},
              {"k", k},
              {"points", encode_doubles(points)},
              {"labels", labels}};
}

std::unique_ptr<Knn> Knn::from_parameters(const Json& j) {
  try {
    auto m = std::make_unique<Knn>(j.at("features").get<std::size_t>(), j.at("classes").get<std::size_t>(),
                                   j.at("k").get<std::size_t>());
    m->points = decode_doubles(j.at("points").get<std::string>());
    m->labels = j.at("labels").get<std::vector<std::size_t>>();
    if (m->points.size() != m->labels.size() * m->features_) throw ValidationError("knn parameter blocks disagree");
    for (auto l : m->labels) {
      if (l >= m->classes_) throw ValidationError("knn label out of range");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("bad knn parameters: ") + e.what());
  }
}

}  // namespace vizrec::models
