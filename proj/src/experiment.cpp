// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "emoxling/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "emoxling/error.hpp"
#include "emoxling/fingerprint.hpp"
#include "emoxling/numfmt.hpp"
#include "emoxling/version.hpp"

namespace emoxling {

namespace {

using Json = nlohmann::ordered_json;

void validate(const ExperimentConfig& config, bool require_test) {
  if (config.model != "svm" && config.model != "mlp") {
    throw Error(Errc::config_invalid, "model must be 'svm' or 'mlp', got '" + config.model + "'");
  }
  if (config.pipeline.blocks.empty()) {
    throw Error(Errc::config_invalid, "features: at least one block is required");
  }
  if (require_test && config.data.test.empty()) {
    throw Error(Errc::config_invalid, "data.test is required");
  }
  std::set<Approach> seen;
  for (Approach approach : config.approaches) {
    if (!seen.insert(approach).second) {
      throw Error(Errc::config_invalid,
                  std::string("approach ") + approach_name(approach) + " listed twice");
    }
  }
  if (config.approaches.empty() && config.data.train.empty()) {
    throw Error(Errc::config_invalid,
                "no training data: set data.train or at least one approach");
  }
  if (config.combined_with_target && config.data.train.empty()) {
    throw Error(Errc::config_invalid, "combined_with_target requires data.train");
  }

  const bool pure_sentence_embed =
      config.pipeline.blocks.size() == 1 &&
      config.pipeline.blocks.front().kind == FeatureKind::sentence_embed;
  if (seen.count(Approach::M) != 0) {
    if (config.data.source_train.empty()) {
      throw Error(Errc::config_invalid, "approach M requires data.source_train");
    }
    if (!pure_sentence_embed) {
      throw Error(Errc::config_invalid,
                  "approach M trains across languages, so features must be exactly one "
                  "sentence_embed block");
    }
  }
  if (seen.count(Approach::T) != 0 && config.data.translated_train.empty()) {
    throw Error(Errc::config_invalid, "approach T requires data.translated_train");
  }
  if (seen.count(Approach::P) != 0 &&
      (config.data.parallel.empty() || config.data.source_predictions.empty())) {
    throw Error(Errc::config_invalid,
                "approach P requires data.parallel and data.source_predictions");
  }
  if (config.model == "mlp") {
    if (!pure_sentence_embed) {
      throw Error(Errc::config_invalid,
                  "the mlp takes dense input: features must be exactly one sentence_embed block");
    }
    if (config.data.dev.empty()) {
      throw Error(Errc::config_invalid, "the mlp needs data.dev for early stopping");
    }
  }
}

Json feature_block_to_json(const FeatureBlockSpec& block) {
  Json j;
  j["kind"] = feature_kind_name(block.kind);
  if (block.kind == FeatureKind::word_unigram || block.kind == FeatureKind::char_ngram) {
    j["n_min"] = block.ngram.n_min;
    j["n_max"] = block.ngram.n_max;
    j["min_df"] = block.ngram.min_df;
  } else {
    j["path"] = block.embedding_path;
  }
  return j;
}

FeatureBlockSpec feature_block_from_json(const Json& j) {
  FeatureBlockSpec block;
  block.kind = feature_kind_from_name(j.at("kind").get<std::string>());
  if (block.kind == FeatureKind::word_unigram || block.kind == FeatureKind::char_ngram) {
    block.ngram = block.kind == FeatureKind::word_unigram ? word_unigram_config()
                                                          : char_ngram_config();
    block.ngram.n_min = j.value("n_min", block.ngram.n_min);
    block.ngram.n_max = j.value("n_max", block.ngram.n_max);
    block.ngram.min_df = j.value("min_df", block.ngram.min_df);
  } else {
    block.embedding_path = j.value("path", "");
  }
  return block;
}

std::string approaches_csv(const std::vector<Approach>& approaches) {
  std::string out;
  for (Approach approach : approaches) {
    if (!out.empty()) out += ',';
    out += approach_name(approach);
  }
  return out;
}

void add_file_entry(Manifest& manifest, const std::string& key, const std::string& path) {
  manifest.emplace_back("file." + key + ".path", path);
  manifest.emplace_back("file." + key + ".fnv1a64", fingerprint_file(path));
}

std::string out_file(const std::string& out_dir, const char* name) {
  return (std::filesystem::path(out_dir) / name).string();
}

// Everything the manifest needs to describe the training half of a run.
struct TrainOutcome {
  ModelArtifact artifact;
  std::vector<std::string> training_order;
  std::size_t n_train = 0;
  Manifest model_lines;
  Manifest file_lines;
};

TrainOutcome assemble_and_train(const ExperimentConfig& config, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto has_approach = [&](Approach approach) {
    return std::find(config.approaches.begin(), config.approaches.end(), approach) !=
           config.approaches.end();
  };

  TrainOutcome outcome;
  std::vector<Example> train_examples;
  const auto append_segment = [&](const char* name, const Dataset& dataset) {
    train_examples.insert(train_examples.end(), dataset.examples.begin(),
                          dataset.examples.end());
    outcome.training_order.push_back(name);
  };

  if (has_approach(Approach::M)) {
    append_segment("source_train", parse_dataset(config.data.source_train, true));
  }
  if (has_approach(Approach::T)) {
    append_segment("translated_train", parse_dataset(config.data.translated_train, true));
  }
  if (has_approach(Approach::P)) {
    const std::vector<ParallelPair> pairs = parse_parallel(config.data.parallel);
    const PredictionMatrix source_preds = parse_predictions(config.data.source_predictions);
    FilterReport report;
    const Dataset projected =
        project_labels(pairs, source_preds, config.projection, config.language, &report);
    if (projected.examples.empty()) {
      throw Error(Errc::empty_training_set,
                  "projection retained no pairs; relax the min_emotions filter");
    }
    write_dataset(projected, out_file(out_dir, "projected.tsv"));
    write_text_file(out_file(out_dir, "filter_report.txt"),
                    render_filter_report(report, config.projection));
    append_segment("projected", projected);
    outcome.model_lines.emplace_back("projection.min_emotions",
                                     std::to_string(config.projection.min_emotions));
    outcome.model_lines.emplace_back("projection.comparison",
                                     comparison_name(config.projection.comparison));
    outcome.model_lines.emplace_back("projection.source_threshold",
                                     fmt_g17(config.projection.source_threshold));
    outcome.model_lines.emplace_back("projection.pairs", std::to_string(report.total));
    outcome.model_lines.emplace_back("projection.retained", std::to_string(report.retained));
  }
  if (config.combined_with_target || config.approaches.empty()) {
    append_segment("target_train", parse_dataset(config.data.train, true));
  }
  if (train_examples.empty()) {
    throw Error(Errc::empty_training_set, "the assembled training set is empty");
  }
  outcome.n_train = train_examples.size();

  const bool uses_sentence_embed =
      std::any_of(config.pipeline.blocks.begin(), config.pipeline.blocks.end(),
                  [](const FeatureBlockSpec& b) { return b.kind == FeatureKind::sentence_embed; });
  if (uses_sentence_embed) {
    std::unordered_set<std::string> ids;
    for (const Example& example : train_examples) {
      if (!ids.insert(example.id).second) {
        throw Error(Errc::config_invalid,
                    "training segments share id '" + example.id +
                        "', which is ambiguous with id-keyed sentence embeddings");
      }
    }
  }

  const FeaturePipeline pipeline = fit_pipeline(config.pipeline, train_examples);
  std::vector<LabelVector> Y;
  Y.reserve(train_examples.size());
  for (const Example& example : train_examples) Y.push_back(*example.labels);

  outcome.artifact.pipeline = pipeline;
  Manifest& lines = outcome.model_lines;
  if (config.model == "svm") {
    SvmConfig svm_config = config.svm;
    svm_config.seed = config.seed;
    SvmTrainLog log;
    const std::vector<FeatureVector> X = pipeline.transform_all(train_examples);
    outcome.artifact.model_type = "svm";
    outcome.artifact.svm = train_svm_ovr(X, Y, svm_config, &log);
    lines.emplace_back("svm.C", fmt_g17(svm_config.C));
    lines.emplace_back("svm.tolerance", fmt_g17(svm_config.tolerance));
    lines.emplace_back("svm.max_sweeps", std::to_string(svm_config.max_sweeps));
    lines.emplace_back("svm.shuffle_each_sweep", svm_config.shuffle_each_sweep ? "true" : "false");
    lines.emplace_back("svm.positive_weight", fmt_g17(svm_config.positive_weight));
    lines.emplace_back("svm.sigmoid_scale", fmt_g17(svm_config.sigmoid_scale));
    std::string sweeps;
    for (const SvmLabelLog& label_log : log.labels) {
      if (!sweeps.empty()) sweeps += ',';
      sweeps += std::to_string(label_log.sweeps);
    }
    lines.emplace_back("svm.sweeps_per_label", sweeps);
  } else {
    MlpConfig mlp_config = config.mlp;
    mlp_config.input_dim = pipeline.dimension();
    mlp_config.seed = config.seed;
    const Dataset dev = parse_dataset(config.data.dev, true);
    if (dev.examples.empty()) {
      throw Error(Errc::config_invalid, "data.dev is empty; early stopping needs examples");
    }
    std::vector<LabelVector> dev_Y;
    dev_Y.reserve(dev.size());
    for (const Example& example : dev.examples) dev_Y.push_back(*example.labels);

    const auto to_dense_matrix = [&](const std::vector<Example>& examples) {
      Eigen::MatrixXd dense(static_cast<Index>(examples.size()), pipeline.dimension());
      for (std::size_t i = 0; i < examples.size(); ++i) {
        dense.row(static_cast<Index>(i)) =
            to_dense(pipeline.transform(examples[i].id, examples[i].text)).transpose();
      }
      return dense;
    };
    outcome.artifact.model_type = "mlp";
    outcome.artifact.mlp = train_mlp(to_dense_matrix(train_examples), Y,
                                     to_dense_matrix(dev.examples), dev_Y, mlp_config);
    lines.emplace_back("mlp.input_dim", std::to_string(mlp_config.input_dim));
    std::string hidden;
    for (Index d : mlp_config.hidden_dims) {
      if (!hidden.empty()) hidden += ',';
      hidden += std::to_string(d);
    }
    lines.emplace_back("mlp.hidden_dims", hidden);
    lines.emplace_back("mlp.learning_rate", fmt_g17(mlp_config.learning_rate));
    lines.emplace_back("mlp.batch_size", std::to_string(mlp_config.batch_size));
    lines.emplace_back("mlp.max_epochs", std::to_string(mlp_config.max_epochs));
    lines.emplace_back("mlp.patience", std::to_string(mlp_config.patience));
    lines.emplace_back("mlp.epochs_run", std::to_string(outcome.artifact.mlp->history.size()));
    lines.emplace_back("mlp.best_epoch", std::to_string(outcome.artifact.mlp->best_epoch));
  }

  Manifest& files = outcome.file_lines;
  if (!config.data.train.empty()) add_file_entry(files, "train", config.data.train);
  if (!config.data.dev.empty()) add_file_entry(files, "dev", config.data.dev);
  if (has_approach(Approach::M)) {
    add_file_entry(files, "source_train", config.data.source_train);
  }
  if (has_approach(Approach::T)) {
    add_file_entry(files, "translated_train", config.data.translated_train);
  }
  if (has_approach(Approach::P)) {
    add_file_entry(files, "parallel", config.data.parallel);
    add_file_entry(files, "source_predictions", config.data.source_predictions);
  }
  for (const FeatureBlockSpec& block : config.pipeline.blocks) {
    if (block.kind == FeatureKind::word_embed || block.kind == FeatureKind::sentence_embed) {
      add_file_entry(files, feature_kind_name(block.kind), block.embedding_path);
    }
  }
  return outcome;
}

Manifest manifest_header(const ExperimentConfig& config, const TrainOutcome& outcome) {
  Manifest manifest;
  manifest.emplace_back("toolkit_version", kVersion);
  manifest.emplace_back("run_name", config.run_name);
  manifest.emplace_back("language", config.language);
  manifest.emplace_back("seed", std::to_string(config.seed));
  manifest.emplace_back("model", config.model);
  manifest.emplace_back("approaches",
                        config.approaches.empty() ? "-" : approaches_csv(config.approaches));
  manifest.emplace_back("combined_with_target", config.combined_with_target ? "true" : "false");
  std::string order_csv;
  for (const std::string& segment : outcome.training_order) {
    if (!order_csv.empty()) order_csv += ',';
    order_csv += segment;
  }
  manifest.emplace_back("training_order", order_csv);
  manifest.emplace_back("n_train", std::to_string(outcome.n_train));
  manifest.emplace_back("features", describe_pipeline(config.pipeline));
  manifest.emplace_back("feature_dimension",
                        std::to_string(outcome.artifact.pipeline.dimension()));
  for (const auto& line : outcome.model_lines) manifest.push_back(line);
  return manifest;
}

void finish_manifest(Manifest& manifest, const std::chrono::steady_clock::time_point& t0) {
  const double wall_clock =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  char wall[32];
  std::snprintf(wall, sizeof(wall), "%.3f", wall_clock);
  manifest.emplace_back("wall_clock_seconds", wall);
}

}  // namespace

const char* approach_name(Approach approach) {
  switch (approach) {
    case Approach::M: return "M";
    case Approach::T: return "T";
    case Approach::P: return "P";
  }
  return "?";
}

Approach approach_from_name(const std::string& name) {
  if (name == "M") return Approach::M;
  if (name == "T") return Approach::T;
  if (name == "P") return Approach::P;
  throw Error(Errc::config_invalid, "unknown approach '" + name + "' (expected M, T or P)");
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  Json doc;
  try {
    doc = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::config_invalid, std::string("config is not valid JSON: ") + e.what());
  }

  ExperimentConfig config;
  try {
    config.run_name = doc.value("run_name", config.run_name);
    config.language = doc.value("language", config.language);
    config.seed = doc.value("seed", config.seed);
    config.model = doc.value("model", config.model);

    if (doc.contains("svm")) {
      const Json& svm = doc.at("svm");
      config.svm.C = svm.value("C", config.svm.C);
      config.svm.tolerance = svm.value("tolerance", config.svm.tolerance);
      config.svm.max_sweeps = svm.value("max_sweeps", config.svm.max_sweeps);
      config.svm.shuffle_each_sweep =
          svm.value("shuffle_each_sweep", config.svm.shuffle_each_sweep);
      config.svm.positive_weight = svm.value("positive_weight", config.svm.positive_weight);
      config.svm.sigmoid_scale = svm.value("sigmoid_scale", config.svm.sigmoid_scale);
    }
    if (doc.contains("mlp")) {
      const Json& mlp = doc.at("mlp");
      config.mlp.hidden_dims = mlp.value("hidden_dims", config.mlp.hidden_dims);
      config.mlp.learning_rate = mlp.value("learning_rate", config.mlp.learning_rate);
      config.mlp.batch_size = mlp.value("batch_size", config.mlp.batch_size);
      config.mlp.max_epochs = mlp.value("max_epochs", config.mlp.max_epochs);
      config.mlp.patience = mlp.value("patience", config.mlp.patience);
    }
    if (doc.contains("normalization")) {
      const Json& norm = doc.at("normalization");
      config.pipeline.normalization.lowercase =
          norm.value("lowercase", config.pipeline.normalization.lowercase);
      config.pipeline.normalization.url_token =
          norm.value("url_token", config.pipeline.normalization.url_token);
      config.pipeline.normalization.user_token =
          norm.value("user_token", config.pipeline.normalization.user_token);
      config.pipeline.normalization.strip_control =
          norm.value("strip_control", config.pipeline.normalization.strip_control);
    }
    if (doc.contains("features")) {
      for (const Json& block : doc.at("features")) {
        config.pipeline.blocks.push_back(feature_block_from_json(block));
      }
    }
    if (doc.contains("approaches")) {
      for (const Json& name : doc.at("approaches")) {
        config.approaches.push_back(approach_from_name(name.get<std::string>()));
      }
    }
    config.combined_with_target = doc.value("combined_with_target", config.combined_with_target);
    if (doc.contains("data")) {
      const Json& data = doc.at("data");
      config.data.train = data.value("train", "");
      config.data.dev = data.value("dev", "");
      config.data.test = data.value("test", "");
      config.data.source_train = data.value("source_train", "");
      config.data.translated_train = data.value("translated_train", "");
      config.data.parallel = data.value("parallel", "");
      config.data.source_predictions = data.value("source_predictions", "");
    }
    if (doc.contains("projection")) {
      const Json& projection = doc.at("projection");
      config.projection.min_emotions =
          projection.value("min_emotions", config.projection.min_emotions);
      if (projection.contains("comparison")) {
        config.projection.comparison =
            comparison_from_name(projection.at("comparison").get<std::string>());
      }
      config.projection.source_threshold =
          projection.value("source_threshold", config.projection.source_threshold);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::config_invalid, std::string("config field has the wrong type: ") + e.what());
  }

  validate(config, false);
  return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  return parse_experiment_config(read_text_file(path));
}

std::string serialize_experiment_config(const ExperimentConfig& config) {
  Json doc;
  doc["run_name"] = config.run_name;
  doc["language"] = config.language;
  doc["seed"] = config.seed;
  doc["model"] = config.model;
  doc["svm"] = {{"C", config.svm.C},
                {"tolerance", config.svm.tolerance},
                {"max_sweeps", config.svm.max_sweeps},
                {"shuffle_each_sweep", config.svm.shuffle_each_sweep},
                {"positive_weight", config.svm.positive_weight},
                {"sigmoid_scale", config.svm.sigmoid_scale}};
  doc["mlp"] = {{"hidden_dims", config.mlp.hidden_dims},
                {"learning_rate", config.mlp.learning_rate},
                {"batch_size", config.mlp.batch_size},
                {"max_epochs", config.mlp.max_epochs},
                {"patience", config.mlp.patience}};
  doc["normalization"] = {{"lowercase", config.pipeline.normalization.lowercase},
                          {"url_token", config.pipeline.normalization.url_token},
                          {"user_token", config.pipeline.normalization.user_token},
                          {"strip_control", config.pipeline.normalization.strip_control}};
  Json features = Json::array();
  for (const FeatureBlockSpec& block : config.pipeline.blocks) {
    features.push_back(feature_block_to_json(block));
  }
  doc["features"] = std::move(features);
  Json approaches = Json::array();
  for (Approach approach : config.approaches) approaches.push_back(approach_name(approach));
  doc["approaches"] = std::move(approaches);
  doc["combined_with_target"] = config.combined_with_target;
  Json data;
  data["train"] = config.data.train;
  data["dev"] = config.data.dev;
  data["test"] = config.data.test;
  data["source_train"] = config.data.source_train;
  data["translated_train"] = config.data.translated_train;
  data["parallel"] = config.data.parallel;
  data["source_predictions"] = config.data.source_predictions;
  doc["data"] = std::move(data);
  doc["projection"] = {{"min_emotions", config.projection.min_emotions},
                       {"comparison", comparison_name(config.projection.comparison)},
                       {"source_threshold", config.projection.source_threshold}};
  return doc.dump(2) + "\n";
}

std::string render_manifest(const Manifest& manifest) {
  std::string out;
  for (const auto& [key, value] : manifest) {
    out += key;
    out += '=';
    out += value;
    out += '\n';
  }
  return out;
}

ModelArtifact train_model(const ExperimentConfig& config, const std::string& out_dir,
                          Manifest* manifest) {
  validate(config, false);
  const auto t0 = std::chrono::steady_clock::now();
  TrainOutcome outcome = assemble_and_train(config, out_dir);

  Manifest lines = manifest_header(config, outcome);
  for (const auto& line : outcome.file_lines) lines.push_back(line);
  finish_manifest(lines, t0);

  write_text_file(out_file(out_dir, "manifest.kv"), render_manifest(lines));
  write_text_file(out_file(out_dir, "resolved_config.json"),
                  serialize_experiment_config(config));
  save_model(outcome.artifact, out_file(out_dir, "model.json"));
  if (manifest != nullptr) *manifest = std::move(lines);
  return std::move(outcome.artifact);
}

RunResult run_experiment(const ExperimentConfig& config, const std::string& out_dir) {
  validate(config, true);
  const auto t0 = std::chrono::steady_clock::now();
  TrainOutcome outcome = assemble_and_train(config, out_dir);

  const Dataset test = parse_dataset(config.data.test, true);
  const PredictionMatrix predictions = predict_with_artifact(outcome.artifact, test.examples);
  const EvalReport report = evaluate(predictions, test);

  RunResult result;
  result.report = report;
  result.n_train = outcome.n_train;

  Manifest& manifest = result.manifest;
  manifest = manifest_header(config, outcome);
  manifest.emplace_back("n_test", std::to_string(test.size()));
  if (config.model == "svm" && !config.data.dev.empty()) {
    const Dataset dev = parse_dataset(config.data.dev, true);
    const EvalReport dev_report =
        evaluate(predict_with_artifact(outcome.artifact, dev.examples), dev);
    manifest.emplace_back("dev_jaccard", fmt_g17(dev_report.jaccard));
  }
  for (const auto& line : outcome.file_lines) manifest.push_back(line);
  add_file_entry(manifest, "test", config.data.test);
  finish_manifest(manifest, t0);

  write_predictions(predictions, out_file(out_dir, "predictions.tsv"));
  write_text_file(out_file(out_dir, "report.txt"), render_report_text(report, config.run_name));
  write_text_file(out_file(out_dir, "report.kv"), render_report_kv(report));
  write_text_file(out_file(out_dir, "manifest.kv"), render_manifest(manifest));
  write_text_file(out_file(out_dir, "resolved_config.json"),
                  serialize_experiment_config(config));
  save_model(outcome.artifact, out_file(out_dir, "model.json"));
  return result;
}

std::string emit_result_table(const std::vector<std::pair<std::string, EvalReport>>& rows) {
  if (rows.empty()) throw Error(Errc::config_invalid, "result table needs at least one row");
  std::size_t label_width = 5;
  for (const auto& [label, report] : rows) label_width = std::max(label_width, label.size());

  const auto column = [](const EvalReport& report, int c) {
    return c == 0 ? report.jaccard : c == 1 ? report.macro_f1 : report.avg_accuracy;
  };
  // Best-of-column at the displayed precision, so rows that print the same
  // value are starred together.
  std::array<double, 3> best{};
  for (int c = 0; c < 3; ++c) {
    double top = -1.0;
    for (const auto& [label, report] : rows) {
      top = std::max(top, std::stod(fmt_pct1(column(report, c))));
    }
    best[static_cast<std::size_t>(c)] = top;
  }

  std::string out(label_width, ' ');
  out += "       J       F       A\n";
  for (const auto& [label, report] : rows) {
    out += label;
    out.append(label_width - label.size(), ' ');
    for (int c = 0; c < 3; ++c) {
      const std::string cell = fmt_pct1(column(report, c));
      char buffer[16];
      std::snprintf(buffer, sizeof(buffer), "%7s%c", cell.c_str(),
                    std::stod(cell) == best[static_cast<std::size_t>(c)] ? '*' : ' ');
      out += buffer;
    }
    out += '\n';
  }
  return out;
}

}  // namespace emoxling
