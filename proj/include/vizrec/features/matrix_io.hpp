#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "vizrec/features/feature_vector.hpp"

namespace vizrec::features {

/// Rows of feature values with identifiers; columns follow the catalog order.
struct FeatureMatrix {
  std::vector<std::string> feature_names;
  std::vector<std::string> row_ids;
  std::vector<std::vector<FeatureValue>> rows;
};

/// CSV: header "id,<names...>", missing values as empty cells.
void write_matrix_csv(std::ostream& out, const FeatureMatrix& m);
/// One JSON object per line: {"id": ..., "<name>": value-or-null, ...}.
void write_matrix_jsonl(std::ostream& out, const FeatureMatrix& m);
FeatureMatrix read_matrix_csv(std::string_view text);

}  // namespace vizrec::features
