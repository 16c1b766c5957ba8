#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace vizrec::eval {

using Json = nlohmann::ordered_json;

/// Crowd votes for one dataset.
struct VoteDistribution {
  std::string dataset_id;
  std::vector<std::string> vocabulary;
  std::vector<std::size_t> counts;  // aligned with vocabulary

  std::size_t total() const;
  std::vector<double> shares() const;
  /// Index of a choice; throws ValidationError when it is not in the vocabulary.
  std::size_t index_of(const std::string& choice) const;
};

/// Vote share of `choice` over the share of the most voted choice. Throws
/// ValidationError for zero votes or an unknown choice.
double effectiveness(const VoteDistribution& votes, const std::string& choice);

struct BootstrapCi {
  double level = 0.95;
  double low = 0;
  double high = 0;
  std::size_t replicates = 0;
};

struct CarsOptions {
  /// Drop one vote for the predicted choice before scoring, for predictors that
  /// are themselves one of the voters.
  bool leave_one_out = false;
};

struct CarsReport {
  std::string predictor;
  std::vector<std::pair<std::string, double>> effectiveness;  // per dataset, vote order
  double cars = 0;
  std::optional<BootstrapCi> ci;
  bool leave_one_out = false;

  Json to_json() const;
};

using Predictions = std::map<std::string, std::string>;

/// Mean effectiveness times 100. Throws ValidationError listing datasets without a
/// prediction, and for predictions outside the vocabulary.
CarsReport cars(const std::string& predictor, const Predictions& predictions, const std::vector<VoteDistribution>& votes,
                const CarsOptions& options = {});

/// Percentile interval over replicates; each replicate redraws every dataset's N
/// votes from its observed shares and recomputes CARS. Replicates run in parallel
/// with their own derived seeds.
BootstrapCi bootstrap_ci(const std::vector<VoteDistribution>& votes, const Predictions& predictions,
                         std::size_t replicates, double level, std::uint64_t seed, const CarsOptions& options = {});

/// Gini of the vote-share vector: 1/2 for a unanimous two-way vote, 2/3 for
/// three-way, 0 when uniform.
double vote_gini(const VoteDistribution& votes);

/// Uniform random choice per dataset from a seeded stream.
Predictions random_predictions(const std::vector<VoteDistribution>& votes, std::uint64_t seed);
/// Most voted choice per dataset (ties to vocabulary order).
Predictions modal_predictions(const std::vector<VoteDistribution>& votes);
/// CARS a uniform random predictor scores in expectation.
double expected_random_cars(const std::vector<VoteDistribution>& votes);

struct GiniSummary {
  std::size_t count = 0;
  double mean = 0, min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
  Json to_json() const;
};
GiniSummary summarize_gini(const std::vector<VoteDistribution>& votes);

}  // namespace vizrec::eval
