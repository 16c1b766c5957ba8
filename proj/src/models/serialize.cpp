#include "vizrec/models/serialize.hpp"

#include <fstream>
#include <sstream>

#include "vizrec/common/encoding.hpp"
#include "vizrec/common/error.hpp"

namespace vizrec::models {

namespace {

features::Level level_of(choices::Task t) {
  return choices::is_visualization_level(t) ? features::Level::dataset : features::Level::single_column;
}

ModelSpec spec_from_json(Family family, const Json& j) {
  ModelSpec s;
  s.family = family;
  s.seed = j.at("seed").get<std::uint64_t>();
  s.apply_overrides(j.at("hyperparameters"));
  return s;
}

}  // namespace

Json to_json(const ModelFile& f) {
  if (!f.model) throw InternalError("model file without a model");
  const auto level = level_of(f.task);
  Json metadata = Json::object();
  if (f.model->family() == Family::naive_bayes) metadata["variant"] = "gaussian";
  if (f.model->family() == Family::random_forest) metadata["tree_count"] = f.spec.forest.trees;
  if (f.model->family() == Family::neural_network) metadata["precision"] = "float32";
  return Json{{"format", "vizrec-model"},
              {"version", ModelFile::kVersion},
              {"family", to_string(f.model->family())},
              {"task", choices::to_string(f.task)},
              {"feature_set", features::to_string(f.mask)},
              {"catalog_hash", hex64(features::manifest_hash(level))},
              {"manifest_hash", hex64(f.preprocessor.manifest_hash)},
              {"vocabulary", f.vocabulary},
              {"seed", f.spec.seed},
              {"hyperparameters", f.spec.hyperparameters()},
              {"metadata", metadata},
              {"preprocessor", pipeline::to_json(f.preprocessor)},
              {"parameters", f.model->parameters()},
              {"training_log", f.model->log().to_json()}};
}

ModelFile model_file_from_json(const Json& j) {
  try {
    if (j.value("format", "") != "vizrec-model") throw ValidationError("not a model file");
    const int version = j.at("version").get<int>();
    if (version != ModelFile::kVersion) {
      throw ValidationError("unsupported model file version " + std::to_string(version));
    }
    ModelFile f;
    f.task = choices::parse_task(j.at("task").get<std::string>());
    f.mask = features::parse_feature_set(j.at("feature_set").get<std::string>());
    const auto catalog = hex64(features::manifest_hash(level_of(f.task)));
    if (j.at("catalog_hash").get<std::string>() != catalog) {
      throw ValidationError("model was trained on a different feature catalog (hash " +
                            j.at("catalog_hash").get<std::string>() + ", this build " + catalog + ")");
    }
    f.vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
    if (f.vocabulary != choices::vocabulary(f.task)) throw ValidationError("model vocabulary does not match its task");
    f.preprocessor = pipeline::preprocessor_from_json(j.at("preprocessor"));
    if (hex64(f.preprocessor.manifest_hash) != j.at("manifest_hash").get<std::string>()) {
      throw ValidationError("model manifest hash does not match its preprocessor");
    }
    const Family family = parse_family(j.at("family").get<std::string>());
    f.spec = spec_from_json(family, j);
    auto model = model_from_parameters(family, j.at("parameters"), f.spec);
    if (model->num_features() != f.preprocessor.output_width()) {
      throw ValidationError("model width " + std::to_string(model->num_features()) +
                            " differs from the preprocessor output width " +
                            std::to_string(f.preprocessor.output_width()));
    }
    if (model->num_classes() != f.vocabulary.size()) throw ValidationError("model class count differs from vocabulary");
    if (j.contains("training_log")) model->log() = TrainingLog::from_json(j["training_log"]);
    f.model = std::move(model);
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  } catch (const UsageError& e) {
    throw ValidationError(std::string("malformed model file: ") + e.what());
  }
}

void write_model_file(const std::filesystem::path& path, const ModelFile& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << to_json(f).dump(1) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

ModelFile read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  Json j;
  try {
    j = Json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return model_file_from_json(j);
}

}  // namespace vizrec::models
