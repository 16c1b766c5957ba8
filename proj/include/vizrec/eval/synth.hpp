#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "vizrec/ingest/corpus.hpp"

namespace vizrec::eval {

/// Planted labelling rules for generated corpora.
enum class SynthRule {
  string_bar_else_line,      // any string column -> bar, otherwise line
  string_bar_date_line_else_scatter,  // string -> bar, else date column -> line, else scatter
};
std::string_view to_string(SynthRule r);
SynthRule parse_synth_rule(std::string_view text);
/// Choices the rule can produce, in label order of the matching task.
std::vector<std::string> rule_vocabulary(SynthRule r);

struct SynthOptions {
  std::size_t datasets = 1000;
  double noise = 0.0;  // probability a label is replaced by a different choice
  std::uint64_t seed = 0;
  SynthRule rule = SynthRule::string_bar_else_line;
  std::size_t min_rows = 20;
  std::size_t max_rows = 60;
  std::size_t min_columns = 2;
  std::size_t max_columns = 5;
};

struct SyntheticCorpus {
  ingest::Corpus corpus;
  std::vector<std::string> planted;  // rule output per record
  std::vector<std::string> labels;   // label actually drawn (after noise)
};

/// Random tables (numeric, string, date columns with assorted distributions) whose
/// chart follows the rule with probability 1 - noise. Same options, same corpus.
SyntheticCorpus generate_synthetic_corpus(const SynthOptions& options);

}  // namespace vizrec::eval
