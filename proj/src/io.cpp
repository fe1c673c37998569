#include "lmdpp/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace lmdpp {

namespace {

Json flatten_rows(const Matrix& m) {
  Json out = Json::array();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index k = 0; k < m.cols(); ++k) out.push_back(m(i, k));
  return out;
}

Matrix unflatten_rows(const Json& values, Index rows, Index cols, const char* field) {
  if (!values.is_array() || static_cast<Index>(values.size()) != rows * cols)
    throw DataError(std::string("field '") + field + "' must hold " + std::to_string(rows * cols) +
                    " numbers");
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index k = 0; k < cols; ++k) {
      const auto& v = values[static_cast<std::size_t>(i * cols + k)];
      if (!v.is_number()) throw DataError(std::string("field '") + field + "' holds a non-number");
      m(i, k) = v.get<double>();
    }
  return m;
}

Json subset_to_json(const Subset& s) { return Json(std::vector<Index>(s.begin(), s.end())); }

Subset subset_from_json(const Json& j, const char* field) {
  if (!j.is_array()) throw DataError(std::string("field '") + field + "' must be an index list");
  std::vector<Index> indices;
  for (const auto& v : j) {
    if (!v.is_number_integer()) throw DataError(std::string("field '") + field + "' holds a non-integer");
    indices.push_back(v.get<Index>());
  }
  return Subset(std::move(indices));
}

Vector vector_from_json(const Json& j, const char* field) {
  if (!j.is_array()) throw DataError(std::string("field '") + field + "' must be an array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw DataError(std::string("field '") + field + "' holds a non-number");
    v(static_cast<Index>(i)) = j[i].get<double>();
  }
  return v;
}

Json vector_to_json(const Vector& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

template <typename T>
T required(const Json& record, const char* field) {
  if (!record.contains(field)) throw DataError(std::string("record is missing field '") + field + "'");
  try {
    return record.at(field).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DataError(std::string("field '") + field + "' has the wrong type");
  }
}

Json parse_line(const std::string& line, const std::string& origin, int line_no) {
  try {
    return Json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(origin + ":" + std::to_string(line_no) + ": invalid JSON (" + e.what() + ")");
  }
}

}  // namespace

Json instance_to_json(const GroundSetInstance& instance) {
  Json j;
  j["n_items"] = instance.n_items();
  j["quality_dim"] = instance.quality_dim();
  j["similarity_dim"] = instance.similarity_dim();
  j["quality_features"] = flatten_rows(instance.quality_features);
  j["similarity_features"] = flatten_rows(instance.similarity_features);
  if (instance.label) j["label"] = subset_to_json(*instance.label);
  return j;
}

GroundSetInstance instance_from_json(const Json& record) {
  if (!record.is_object()) throw DataError("instance record must be a JSON object");
  const auto n = required<Index>(record, "n_items");
  const auto dq = required<Index>(record, "quality_dim");
  const auto ds = required<Index>(record, "similarity_dim");
  if (n < 1 || dq < 0 || ds < 0) throw DataError("n_items must be positive and dimensions nonnegative");
  if (!record.contains("quality_features") || !record.contains("similarity_features"))
    throw DataError("record is missing feature arrays");
  Matrix quality = unflatten_rows(record["quality_features"], n, dq, "quality_features");
  Matrix similarity = unflatten_rows(record["similarity_features"], n, ds, "similarity_features");
  std::optional<Subset> label;
  if (record.contains("label") && !record["label"].is_null())
    label = subset_from_json(record["label"], "label");
  try {
    return GroundSetInstance(std::move(quality), std::move(similarity), std::move(label));
  } catch (const Error& e) {
    throw DataError(std::string("invalid instance: ") + e.what());
  }
}

void write_instances(std::ostream& out, const std::vector<GroundSetInstance>& instances) {
  for (const auto& instance : instances) out << instance_to_json(instance).dump() << '\n';
}

std::vector<GroundSetInstance> read_instances(std::istream& in, const std::string& origin) {
  const LoadedDataset data = read_dataset(in, origin);
  std::vector<GroundSetInstance> all;
  for (const auto& split : data.splits) all.insert(all.end(), split.begin(), split.end());
  return all;
}

Json synth_config_to_json(const SynthConfig& c) {
  Json j;
  j["n_items"] = c.n_items;
  j["feature_dim"] = c.feature_dim;
  j["noise_prob"] = c.noise_prob;
  j["n_train"] = c.n_train;
  j["n_holdout"] = c.n_holdout;
  j["n_test"] = c.n_test;
  j["seed"] = c.seed;
  return j;
}

SynthConfig synth_config_from_json(const Json& j) {
  SynthConfig c;
  c.n_items = required<int>(j, "n_items");
  c.feature_dim = required<int>(j, "feature_dim");
  c.noise_prob = required<double>(j, "noise_prob");
  c.n_train = required<int>(j, "n_train");
  c.n_holdout = required<int>(j, "n_holdout");
  c.n_test = required<int>(j, "n_test");
  c.seed = required<std::uint64_t>(j, "seed");
  return c;
}

void write_dataset(std::ostream& out, const SynthDataset& data, const SynthConfig& config) {
  Json header;
  header["format"] = "lmdpp-dataset";
  header["version"] = 1;
  header["seed"] = config.seed;
  header["config"] = synth_config_to_json(config);
  header["true_theta"] = vector_to_json(data.true_theta);
  out << header.dump() << '\n';
  for (std::size_t s = 0; s < 3; ++s) {
    for (std::size_t i = 0; i < data.splits[s].size(); ++i) {
      Json record;
      record["split"] = to_string(static_cast<Split>(s));
      const Json instance = instance_to_json(data.splits[s][i]);
      for (auto& [key, value] : instance.items()) record[key] = value;
      record["noiseless_label"] = subset_to_json(data.provenance[s][i]);
      out << record.dump() << '\n';
    }
  }
}

LoadedDataset read_dataset(std::istream& in, const std::string& origin) {
  LoadedDataset data;
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const Json record = parse_line(line, origin, line_no);
    try {
      if (first && record.is_object() && record.contains("format")) {
        if (record["format"] != "lmdpp-dataset")
          throw DataError("unsupported format " + record["format"].dump());
        if (record.contains("config")) data.config = synth_config_from_json(record["config"]);
        if (record.contains("true_theta"))
          data.true_theta = vector_from_json(record["true_theta"], "true_theta");
        first = false;
        continue;
      }
      first = false;
      Split split = Split::train;
      if (record.contains("split")) split = split_from_string(required<std::string>(record, "split"));
      data.splits[static_cast<std::size_t>(split)].push_back(instance_from_json(record));
    } catch (const DataError& e) {
      throw DataError(origin + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return data;
}

LoadedDataset read_dataset_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read data file '" + path.string() + "'");
  return read_dataset(in, path.string());
}

Json similarity_to_json(const SimilarityConfig& similarity) {
  Json j;
  j["bandwidths"] = similarity.bandwidths;
  j["include_linear"] = similarity.include_linear;
  return j;
}

SimilarityConfig similarity_from_json(const Json& j) {
  SimilarityConfig s;
  s.bandwidths = required<std::vector<double>>(j, "bandwidths");
  s.include_linear = required<bool>(j, "include_linear");
  return s;
}

Json train_config_to_json(const TrainConfig& c) {
  Json j;
  j["lambda"] = c.lambda;
  j["omega"] = c.omega.omega;
  j["max_outer_iterations"] = c.max_outer_iterations;
  j["step_size"] = c.step_size;
  j["step_decay"] = to_string(c.step_decay);
  j["rel_tolerance"] = c.rel_tolerance;
  j["seed"] = c.seed;
  j["alternation_block"] = c.alternation_block;
  j["theta_l2"] = c.theta_l2;
  j["max_update_norm"] = c.max_update_norm;
  j["learn_theta"] = c.learn_theta;
  j["learn_kernel_weights"] = c.learn_kernel_weights;
  return j;
}

Json train_result_to_json(const TrainResult& result, const SimilarityConfig& similarity,
                          const TrainConfig& config) {
  Json j;
  j["format"] = "lmdpp-model";
  j["version"] = 1;
  j["params"] = {{"theta", vector_to_json(result.params.theta)},
                 {"kernel_weights", vector_to_json(result.params.kernel_weights)}};
  j["similarity"] = similarity_to_json(similarity);
  j["config"] = train_config_to_json(config);
  j["initial_objective"] = result.initial_objective;
  j["final_objective"] = result.final_objective;
  j["converged"] = result.converged;
  j["iterations_used"] = result.iterations_used;
  j["degenerate_labels"] = result.degenerate_labels;
  Json trace = Json::array();
  for (std::size_t t = 0; t < result.objective_trace.size(); ++t)
    trace.push_back({{"iteration", t + 1}, {"objective", result.objective_trace[t]}});
  j["objective_trace"] = std::move(trace);
  return j;
}

LoadedModel model_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("params") || !j.contains("similarity"))
    throw DataError("model file must contain 'params' and 'similarity'");
  LoadedModel model;
  model.params.theta = vector_from_json(j["params"].value("theta", Json()), "theta");
  model.params.kernel_weights =
      vector_from_json(j["params"].value("kernel_weights", Json()), "kernel_weights");
  model.similarity = similarity_from_json(j["similarity"]);
  if (model.params.kernel_weights.size() != model.similarity.num_weights())
    throw DataError("model kernel weights do not match its similarity configuration");
  return model;
}

LoadedModel read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read model file '" + path.string() + "'");
  try {
    return model_from_json(Json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path.string() + ": invalid model file (" + e.what() + ")");
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << text;
}

}  // namespace lmdpp
