#pragma once

#include <cstddef>
#include <vector>

namespace vizrec::eval {

/// Fraction of equal positions. Throws ValidationError on empty or unequal inputs.
double accuracy(const std::vector<std::size_t>& predicted, const std::vector<std::size_t>& truth);

/// Mean recall over the classes present in `truth`.
double balanced_accuracy(const std::vector<std::size_t>& predicted, const std::vector<std::size_t>& truth,
                         std::size_t classes);

/// counts[truth][predicted]
std::vector<std::vector<std::size_t>> confusion_matrix(const std::vector<std::size_t>& predicted,
                                                       const std::vector<std::size_t>& truth, std::size_t classes);

}  // namespace vizrec::eval
