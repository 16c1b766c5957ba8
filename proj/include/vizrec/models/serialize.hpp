#pragma once

#include <filesystem>

#include "vizrec/choices/tasks.hpp"
#include "vizrec/features/catalog.hpp"
#include "vizrec/models/model.hpp"

namespace vizrec::models {

/// Everything needed to score raw feature rows: the fitted preprocessor, the
/// classifier and the label vocabulary.
struct ModelFile {
  static constexpr int kVersion = 1;
  choices::Task task = choices::Task::vt2;
  features::FeatureSet mask = features::FeatureSet::all;
  std::vector<std::string> vocabulary;
  pipeline::PreprocessorParams preprocessor;
  ModelSpec spec;
  std::shared_ptr<const Model> model;
};

/// Versioned envelope. The catalog hash of the task's feature level and the raw
/// feature manifest hash are stored so a model cannot be applied to features
/// produced by a different catalog.
Json to_json(const ModelFile& f);
/// Throws ValidationError on version, hash or shape mismatches.
ModelFile model_file_from_json(const Json& j);

void write_model_file(const std::filesystem::path& path, const ModelFile& f);
ModelFile read_model_file(const std::filesystem::path& path);

}  // namespace vizrec::models
