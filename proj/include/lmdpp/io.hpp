#ifndef LMDPP_IO_HPP
#define LMDPP_IO_HPP

// Line-delimited JSON records for ground sets, dataset files and trained models.
//
// Instance record (one JSON object per line):
//   {"n_items": N, "quality_dim": dq, "similarity_dim": ds,
//    "quality_features": [N*dq numbers, row-major],
//    "similarity_features": [N*ds numbers, row-major],
//    "label": [sorted item indices]}           // label may be absent
// Dataset files add "split" ("train" | "holdout" | "test") and
// "noiseless_label" to each record and start with one header line:
//   {"format": "lmdpp-dataset", "version": 1, "seed": s,
//    "config": {...synthetic config...}, "true_theta": [...]}

#include "lmdpp/learning.hpp"
#include "lmdpp/model.hpp"
#include "lmdpp/synth.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace lmdpp {

using Json = nlohmann::ordered_json;

Json instance_to_json(const GroundSetInstance& instance);
GroundSetInstance instance_from_json(const Json& record);

void write_instances(std::ostream& out, const std::vector<GroundSetInstance>& instances);
std::vector<GroundSetInstance> read_instances(std::istream& in, const std::string& origin);

Json synth_config_to_json(const SynthConfig& config);
SynthConfig synth_config_from_json(const Json& j);

void write_dataset(std::ostream& out, const SynthDataset& data, const SynthConfig& config);

/// A dataset file, or a plain instance file (all records land in the train split).
struct LoadedDataset {
  std::optional<SynthConfig> config;
  std::optional<Vector> true_theta;
  std::array<std::vector<GroundSetInstance>, 3> splits;

  const std::vector<GroundSetInstance>& split(Split s) const {
    return splits[static_cast<std::size_t>(s)];
  }
};

LoadedDataset read_dataset(std::istream& in, const std::string& origin);
LoadedDataset read_dataset_file(const std::filesystem::path& path);

Json similarity_to_json(const SimilarityConfig& similarity);
SimilarityConfig similarity_from_json(const Json& j);
Json train_config_to_json(const TrainConfig& config);

/// Final params, similarity model, config echo and the objective trace.
Json train_result_to_json(const TrainResult& result, const SimilarityConfig& similarity,
                          const TrainConfig& config);

struct LoadedModel {
  ModelParams params;
  SimilarityConfig similarity;
};

LoadedModel model_from_json(const Json& j);
LoadedModel read_model_file(const std::filesystem::path& path);

/// Writes `text` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace lmdpp

#endif  // LMDPP_IO_HPP
