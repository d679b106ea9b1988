// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "emoxling/model_io.hpp"

#include <algorithm>

#include <json.hpp>

#include "emoxling/error.hpp"
#include "emoxling/fingerprint.hpp"
#include "emoxling/version.hpp"

namespace emoxling {

namespace {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const Json& rows) {
  const auto n_rows = static_cast<Index>(rows.size());
  const auto n_cols = n_rows == 0 ? 0 : static_cast<Index>(rows.at(0).size());
  Eigen::MatrixXd m(n_rows, n_cols);
  for (Index r = 0; r < n_rows; ++r) {
    const Json& row = rows.at(static_cast<std::size_t>(r));
    if (static_cast<Index>(row.size()) != n_cols) {
      throw Error(Errc::malformed_line, "ragged matrix in model file");
    }
    for (Index c = 0; c < n_cols; ++c) m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return m;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Eigen::VectorXd vector_from_json(const Json& values) {
  Eigen::VectorXd v(static_cast<Index>(values.size()));
  for (Index i = 0; i < v.size(); ++i) v[i] = values.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

Json normalization_to_json(const NormalizationConfig& norm) {
  Json j;
  j["lowercase"] = norm.lowercase;
  j["url_token"] = norm.url_token;
  j["user_token"] = norm.user_token;
  j["strip_control"] = norm.strip_control;
  return j;
}

NormalizationConfig normalization_from_json(const Json& j) {
  NormalizationConfig norm;
  norm.lowercase = j.value("lowercase", norm.lowercase);
  norm.url_token = j.value("url_token", norm.url_token);
  norm.user_token = j.value("user_token", norm.user_token);
  norm.strip_control = j.value("strip_control", norm.strip_control);
  return norm;
}

Json ngram_to_json(const NgramConfig& config) {
  Json j;
  j["unit"] = config.unit == NgramConfig::Unit::word ? "word" : "character";
  j["n_min"] = config.n_min;
  j["n_max"] = config.n_max;
  j["min_df"] = config.min_df;
  return j;
}

NgramConfig ngram_from_json(const Json& j) {
  NgramConfig config;
  const std::string unit = j.value("unit", "character");
  if (unit == "word") {
    config.unit = NgramConfig::Unit::word;
  } else if (unit == "character") {
    config.unit = NgramConfig::Unit::character;
  } else {
    throw Error(Errc::config_invalid, "unknown n-gram unit '" + unit + "'");
  }
  config.n_min = j.value("n_min", config.n_min);
  config.n_max = j.value("n_max", config.n_max);
  config.min_df = j.value("min_df", config.min_df);
  return config;
}

Json pipeline_to_json(const FeaturePipeline& pipeline) {
  Json j;
  j["normalization"] = normalization_to_json(pipeline.normalization);
  Json blocks = Json::array();
  for (const FittedBlock& block : pipeline.blocks) {
    Json b;
    b["kind"] = feature_kind_name(block.kind);
    if (block.kind == FeatureKind::word_unigram || block.kind == FeatureKind::char_ngram) {
      b["ngram"] = ngram_to_json(block.tfidf.config);
      b["n_documents"] = block.tfidf.n_documents;
      b["terms"] = block.tfidf.terms;
      b["document_frequency"] = block.tfidf.document_frequency;
    } else {
      b["path"] = block.embedding_path;
      b["fingerprint"] = block.embedding_fingerprint;
      b["dimension"] = block.table.dimension;
    }
    blocks.push_back(std::move(b));
  }
  j["blocks"] = std::move(blocks);
  return j;
}

FeaturePipeline pipeline_from_json(const Json& j) {
  FeaturePipeline pipeline;
  pipeline.normalization = normalization_from_json(j.at("normalization"));
  for (const Json& b : j.at("blocks")) {
    FittedBlock block;
    block.kind = feature_kind_from_name(b.at("kind").get<std::string>());
    if (block.kind == FeatureKind::word_unigram || block.kind == FeatureKind::char_ngram) {
      block.tfidf.config = ngram_from_json(b.at("ngram"));
      block.tfidf.norm = pipeline.normalization;
      block.tfidf.n_documents = b.at("n_documents").get<int>();
      block.tfidf.terms = b.at("terms").get<std::vector<std::string>>();
      block.tfidf.document_frequency = b.at("document_frequency").get<std::vector<int>>();
      if (block.tfidf.terms.size() != block.tfidf.document_frequency.size()) {
        throw Error(Errc::malformed_line, "terms/document_frequency size mismatch in model file");
      }
      for (std::size_t i = 0; i < block.tfidf.terms.size(); ++i) {
        block.tfidf.vocabulary.emplace(block.tfidf.terms[i], static_cast<Index>(i));
      }
    } else {
      block.embedding_path = b.at("path").get<std::string>();
      block.embedding_fingerprint = b.at("fingerprint").get<std::string>();
      const std::string actual = fingerprint_file(block.embedding_path);
      if (actual != block.embedding_fingerprint) {
        throw Error(Errc::io_error, "embedding file " + block.embedding_path +
                                        " changed since the model was saved (fingerprint " +
                                        actual + ", expected " + block.embedding_fingerprint +
                                        ")");
      }
      block.table = load_embedding_table(block.embedding_path);
      const auto expected = b.at("dimension").get<Index>();
      if (block.table.dimension != expected) {
        throw Error(Errc::dimension_mismatch, "embedding dimension changed for " +
                                                  block.embedding_path);
      }
    }
    pipeline.blocks.push_back(std::move(block));
  }
  return pipeline;
}

}  // namespace

std::string serialize_model(const ModelArtifact& artifact) {
  if ((artifact.model_type == "svm") != artifact.svm.has_value() ||
      (artifact.model_type == "mlp") != artifact.mlp.has_value()) {
    throw Error(Errc::config_invalid, "model artifact type/parameters disagree");
  }
  Json doc;
  doc["format"] = "emoxling-model";
  doc["version"] = kVersion;
  doc["labels"] = label_names();
  doc["model_type"] = artifact.model_type;
  doc["pipeline"] = pipeline_to_json(artifact.pipeline);
  if (artifact.svm.has_value()) {
    Json svm;
    svm["feature_dimension"] = artifact.svm->feature_dimension;
    svm["sigmoid_scale"] = artifact.svm->sigmoid_scale;
    svm["weights"] = matrix_to_json(artifact.svm->weights);
    svm["biases"] = vector_to_json(artifact.svm->biases);
    doc["svm"] = std::move(svm);
  }
  if (artifact.mlp.has_value()) {
    const MlpModel& model = *artifact.mlp;
    Json mlp;
    Json config;
    config["input_dim"] = model.config.input_dim;
    config["hidden_dims"] = model.config.hidden_dims;
    config["learning_rate"] = model.config.learning_rate;
    config["batch_size"] = model.config.batch_size;
    config["max_epochs"] = model.config.max_epochs;
    config["patience"] = model.config.patience;
    config["seed"] = model.config.seed;
    mlp["config"] = std::move(config);
    Json weights = Json::array();
    Json biases = Json::array();
    for (std::size_t l = 0; l < model.n_layers(); ++l) {
      weights.push_back(matrix_to_json(model.weights[l]));
      biases.push_back(vector_to_json(model.biases[l]));
    }
    mlp["weights"] = std::move(weights);
    mlp["biases"] = std::move(biases);
    mlp["best_epoch"] = model.best_epoch;
    Json history = Json::array();
    for (const EpochLosses& losses : model.history) {
      history.push_back({{"train", losses.train}, {"validation", losses.validation}});
    }
    mlp["history"] = std::move(history);
    doc["mlp"] = std::move(mlp);
  }
  return doc.dump(2) + "\n";
}

ModelArtifact parse_model(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::malformed_line, std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (doc.value("format", "") != "emoxling-model") {
      throw Error(Errc::config_invalid, "not a model file (missing format marker)");
    }
    const auto labels = doc.at("labels").get<std::vector<std::string>>();
    const auto& expected = label_names();
    if (labels.size() != expected.size() ||
        !std::equal(labels.begin(), labels.end(), expected.begin())) {
      throw Error(Errc::unknown_label, "model file label order does not match this build");
    }

    ModelArtifact artifact;
    artifact.model_type = doc.at("model_type").get<std::string>();
    artifact.pipeline = pipeline_from_json(doc.at("pipeline"));
    if (artifact.model_type == "svm") {
      const Json& svm = doc.at("svm");
      MultiLabelLinearModel model;
      model.feature_dimension = svm.at("feature_dimension").get<Index>();
      model.sigmoid_scale = svm.at("sigmoid_scale").get<double>();
      model.weights = matrix_from_json(svm.at("weights"));
      model.biases = vector_from_json(svm.at("biases"));
      if (model.weights.rows() != static_cast<Index>(kNumLabels) ||
          model.weights.cols() != model.feature_dimension ||
          model.biases.size() != static_cast<Index>(kNumLabels)) {
        throw Error(Errc::dimension_mismatch, "svm parameter shapes are inconsistent");
      }
      artifact.svm = std::move(model);
    } else if (artifact.model_type == "mlp") {
      const Json& mlp = doc.at("mlp");
      MlpModel model;
      const Json& config = mlp.at("config");
      model.config.input_dim = config.at("input_dim").get<Index>();
      model.config.hidden_dims = config.at("hidden_dims").get<std::vector<Index>>();
      model.config.learning_rate = config.at("learning_rate").get<double>();
      model.config.batch_size = config.at("batch_size").get<int>();
      model.config.max_epochs = config.at("max_epochs").get<int>();
      model.config.patience = config.at("patience").get<int>();
      model.config.seed = config.at("seed").get<std::uint64_t>();
      for (const Json& w : mlp.at("weights")) model.weights.push_back(matrix_from_json(w));
      for (const Json& b : mlp.at("biases")) model.biases.push_back(vector_from_json(b));
      if (model.weights.size() != model.biases.size() || model.weights.empty()) {
        throw Error(Errc::dimension_mismatch, "mlp parameter shapes are inconsistent");
      }
      model.best_epoch = mlp.value("best_epoch", 0);
      if (mlp.contains("history")) {
        for (const Json& h : mlp.at("history")) {
          model.history.push_back(
              EpochLosses{h.at("train").get<double>(), h.at("validation").get<double>()});
        }
      }
      artifact.mlp = std::move(model);
    } else {
      throw Error(Errc::config_invalid, "unknown model_type '" + artifact.model_type + "'");
    }
    return artifact;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::malformed_line, std::string("model file is incomplete: ") + e.what());
  }
}

void save_model(const ModelArtifact& artifact, const std::string& path) {
  write_text_file(path, serialize_model(artifact));
}

ModelArtifact load_model(const std::string& path) { return parse_model(read_text_file(path)); }

PredictionMatrix predict_with_artifact(const ModelArtifact& artifact,
                                       const std::vector<Example>& examples) {
  std::vector<std::string> ids;
  ids.reserve(examples.size());
  for (const Example& example : examples) ids.push_back(example.id);
  const std::vector<FeatureVector> X = artifact.pipeline.transform_all(examples);
  if (artifact.svm.has_value()) {
    return predict(*artifact.svm, X, ids);
  }
  if (artifact.mlp.has_value()) {
    if (artifact.pipeline.dimension() != artifact.mlp->config.input_dim) {
      throw Error(Errc::dimension_mismatch, "pipeline dimension does not match mlp input_dim");
    }
    Eigen::MatrixXd dense(static_cast<Index>(X.size()), artifact.mlp->config.input_dim);
    for (std::size_t i = 0; i < X.size(); ++i) {
      dense.row(static_cast<Index>(i)) = to_dense(X[i]).transpose();
    }
    return predict_mlp(*artifact.mlp, dense, ids);
  }
  throw Error(Errc::config_invalid, "model artifact holds no parameters");
}

}  // namespace emoxling
