#pragma once

#include <filesystem>
#include <string_view>

#include "vizrec/eval/consensus.hpp"

namespace vizrec::eval {

/// Votes CSV with header dataset_id,worker_id,choice. Datasets keep first-appearance
/// order. The vocabulary is the given one, or the sorted set of choices seen;
/// a vote outside a given vocabulary is a ValidationError.
std::vector<VoteDistribution> parse_votes_csv(std::string_view text, const std::vector<std::string>& vocabulary = {});
std::vector<VoteDistribution> read_votes_csv(const std::filesystem::path& path,
                                             const std::vector<std::string>& vocabulary = {});

/// Predictions CSV with header dataset_id,choice. Duplicate ids are a ValidationError.
Predictions parse_predictions_csv(std::string_view text);
Predictions read_predictions_csv(const std::filesystem::path& path);

std::string write_predictions_csv(const Predictions& p);

}  // namespace vizrec::eval
