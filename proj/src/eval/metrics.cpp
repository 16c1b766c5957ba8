#include "vizrec/eval/metrics.hpp"

#include <string>

#include "vizrec/common/error.hpp"

namespace vizrec::eval {

namespace {
void check(const std::vector<std::size_t>& p, const std::vector<std::size_t>& t) {
  if (p.size() != t.size()) {
    throw ValidationError("prediction count " + std::to_string(p.size()) + " differs from label count " +
                          std::to_string(t.size()));
  }
  if (p.empty()) throw ValidationError("accuracy of an empty prediction set");
}
}  // namespace

double accuracy(const std::vector<std::size_t>& predicted, const std::vector<std::size_t>& truth) {
  check(predicted, truth);
  std::size_t hit = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hit += predicted[i] == truth[i];
  return static_cast<double>(hit) / static_cast<double>(truth.size());
}

std::vector<std::vector<std::size_t>> confusion_matrix(const std::vector<std::size_t>& predicted,
                                                       const std::vector<std::size_t>& truth, std::size_t classes) {
  check(predicted, truth);
  std::vector<std::vector<std::size_t>> m(classes, std::vector<std::size_t>(classes, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= classes || predicted[i] >= classes) throw ValidationError("label index out of range");
    ++m[truth[i]][predicted[i]];
  }
  return m;
}

double balanced_accuracy(const std::vector<std::size_t>& predicted, const std::vector<std::size_t>& truth,
                         std::size_t classes) {
  const auto m = confusion_matrix(predicted, truth, classes);
  double sum = 0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    std::size_t row = 0;
    for (auto v : m[c]) row += v;
    if (row == 0) continue;
    sum += static_cast<double>(m[c][c]) / static_cast<double>(row);
    ++present;
  }
  return sum / static_cast<double>(present);
}

}  // namespace vizrec::eval
