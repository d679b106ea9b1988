// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "emoxling/error.hpp"
#include "emoxling/experiment.hpp"
#include "emoxling/explain.hpp"
#include "emoxling/model_io.hpp"
#include "emoxling/projection.hpp"
#include "emoxling/version.hpp"

namespace {

using namespace emoxling;

// Shared flags that override (or stand in for) an experiment config file.
struct ConfigFlags {
  std::string config_path;
  std::string run_name;
  std::string language;
  std::string model;
  std::vector<std::string> features;
  std::string word_embeddings;
  std::string sentence_embeddings;
  std::vector<std::string> approaches;
  bool combined_with_target = false;
  std::string train, dev, test;
  std::string source_train, translated_train, parallel, source_predictions;
  std::uint64_t seed = 0;
  bool seed_set = false;
  double svm_c = 0.0;
  bool svm_c_set = false;
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
  cmd->add_option("--config", flags.config_path, "experiment config (JSON)");
  cmd->add_option("--run-name", flags.run_name, "label for reports");
  cmd->add_option("--language", flags.language, "target language tag");
  cmd->add_option("--model", flags.model, "svm or mlp");
  cmd->add_option("--features", flags.features,
                  "feature kinds: word_unigram, char_ngram, word_embed, sentence_embed")
      ->delimiter(',');
  cmd->add_option("--word-embeddings", flags.word_embeddings, "word embedding table");
  cmd->add_option("--sentence-embeddings", flags.sentence_embeddings,
                  "sentence embedding table keyed by example id");
  cmd->add_option("--approach", flags.approaches, "cross-lingual approaches: M, T, P")
      ->delimiter(',');
  cmd->add_flag("--combined-with-target", flags.combined_with_target,
                "also train on the target-language training set");
  cmd->add_option("--train", flags.train, "target-language training TSV");
  cmd->add_option("--dev", flags.dev, "development TSV");
  cmd->add_option("--test", flags.test, "test TSV");
  cmd->add_option("--source-train", flags.source_train, "source-language training TSV (M)");
  cmd->add_option("--translated-train", flags.translated_train, "translated training TSV (T)");
  cmd->add_option("--parallel", flags.parallel, "parallel corpus TSV (P)");
  cmd->add_option("--source-predictions", flags.source_predictions,
                  "source-side prediction TSV (P)");
  cmd->add_option("--seed", flags.seed, "random seed")->each([&](const std::string&) {
    flags.seed_set = true;
  });
  cmd->add_option("--svm-c", flags.svm_c, "svm regularization C")->each([&](const std::string&) {
    flags.svm_c_set = true;
  });
}

ExperimentConfig resolve_config(const ConfigFlags& flags) {
  ExperimentConfig config;
  bool have_config = false;
  if (!flags.config_path.empty()) {
    config = load_experiment_config(flags.config_path);
    have_config = true;
  }
  if (!flags.run_name.empty()) config.run_name = flags.run_name;
  if (!flags.language.empty()) config.language = flags.language;
  if (!flags.model.empty()) config.model = flags.model;
  if (flags.seed_set) config.seed = flags.seed;
  if (flags.svm_c_set) config.svm.C = flags.svm_c;
  if (!flags.features.empty()) {
    config.pipeline.blocks.clear();
    for (const std::string& name : flags.features) {
      FeatureBlockSpec block;
      block.kind = feature_kind_from_name(name);
      switch (block.kind) {
        case FeatureKind::word_unigram: block.ngram = word_unigram_config(); break;
        case FeatureKind::char_ngram: block.ngram = char_ngram_config(); break;
        case FeatureKind::word_embed: block.embedding_path = flags.word_embeddings; break;
        case FeatureKind::sentence_embed: block.embedding_path = flags.sentence_embeddings; break;
      }
      config.pipeline.blocks.push_back(std::move(block));
    }
  } else if (!have_config) {
    FeatureBlockSpec block;
    block.kind = FeatureKind::char_ngram;
    block.ngram = char_ngram_config();
    config.pipeline.blocks.push_back(std::move(block));
  }
  if (!flags.approaches.empty()) {
    config.approaches.clear();
    for (const std::string& name : flags.approaches) {
      config.approaches.push_back(approach_from_name(name));
    }
  }
  if (flags.combined_with_target) config.combined_with_target = true;
  if (!flags.train.empty()) config.data.train = flags.train;
  if (!flags.dev.empty()) config.data.dev = flags.dev;
  if (!flags.test.empty()) config.data.test = flags.test;
  if (!flags.source_train.empty()) config.data.source_train = flags.source_train;
  if (!flags.translated_train.empty()) config.data.translated_train = flags.translated_train;
  if (!flags.parallel.empty()) config.data.parallel = flags.parallel;
  if (!flags.source_predictions.empty()) {
    config.data.source_predictions = flags.source_predictions;
  }
  return config;
}

Predictor predictor_from_artifact(const ModelArtifact& artifact) {
  if (artifact.pipeline.has_sentence_embed()) {
    throw Error(Errc::config_invalid,
                "this model reads precomputed sentence embeddings by example id, so it cannot "
                "score perturbed variants; explain needs a text-featurized model");
  }
  return [&artifact](const std::string& text) {
    const std::vector<Example> one{Example{"variant", text, std::nullopt}};
    const PredictionMatrix preds = predict_with_artifact(artifact, one);
    std::array<double, kNumLabels> probs{};
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      probs[k] = preds.probabilities(0, static_cast<Index>(k));
    }
    return probs;
  };
}

std::string join_path(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cross-lingual multi-label emotion toolkit"};
  app.set_version_flag("--version", std::string("emoxling ") + kVersion);
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "train, evaluate and write a full run directory");
  ConfigFlags run_flags;
  std::string run_out = "run_out";
  add_config_flags(run_cmd, run_flags);
  run_cmd->add_option("--out", run_out, "output directory");

  // train
  auto* train_cmd = app.add_subcommand("train", "train a model and save the artifact");
  ConfigFlags train_flags;
  std::string train_out = "train_out";
  add_config_flags(train_cmd, train_flags);
  train_cmd->add_option("--out", train_out, "output directory");

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "apply a saved model to a dataset");
  std::string predict_model, predict_input, predict_out = "predictions.tsv";
  double predict_threshold = 0.5;
  bool predict_labeled = false;
  predict_cmd->add_option("--model", predict_model, "model.json from train/run")->required();
  predict_cmd->add_option("--input", predict_input, "dataset TSV (labels optional)")->required();
  predict_cmd->add_option("--out", predict_out, "prediction TSV to write");
  predict_cmd->add_option("--threshold", predict_threshold, "decision threshold on probability");
  predict_cmd->add_flag("--labeled", predict_labeled, "input carries label columns");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "score a prediction file against gold labels");
  std::string eval_pred, eval_gold, eval_out = ".", eval_name = "run";
  eval_cmd->add_option("--pred", eval_pred, "prediction TSV")->required();
  eval_cmd->add_option("--gold", eval_gold, "gold dataset TSV")->required();
  eval_cmd->add_option("--out", eval_out, "directory for report.txt/report.kv");
  eval_cmd->add_option("--name", eval_name, "row label in the text report");

  // project
  auto* project_cmd =
      app.add_subcommand("project", "transfer predicted labels across a parallel corpus");
  std::string project_parallel, project_preds, project_out = "projection_out";
  std::string project_language = "target", project_comparison = "at_least";
  int project_min = 3;
  double project_threshold = 0.5;
  project_cmd->add_option("--parallel", project_parallel, "parallel corpus TSV")->required();
  project_cmd->add_option("--predictions", project_preds, "source-side prediction TSV")
      ->required();
  project_cmd->add_option("--min-emotions", project_min, "emotion-count filter value");
  project_cmd->add_option("--comparison", project_comparison, "at_least or more_than");
  project_cmd->add_option("--threshold", project_threshold, "source decision threshold");
  project_cmd->add_option("--language", project_language, "language tag for the output");
  project_cmd->add_option("--out", project_out, "output directory");

  // explain
  auto* explain_cmd = app.add_subcommand("explain", "word attribution for one input text");
  std::string explain_model, explain_text, explain_out;
  ExplainConfig explain_config;
  std::size_t explain_top = 5;
  explain_cmd->add_option("--model", explain_model, "model.json from train/run")->required();
  explain_cmd->add_option("--text", explain_text, "text to explain")->required();
  explain_cmd->add_option("--n-variants", explain_config.n_variants, "sampled variants");
  explain_cmd->add_option("--keep-probability", explain_config.keep_probability,
                          "per-word keep chance");
  explain_cmd->add_option("--exhaustive-max-words", explain_config.exhaustive_max_words,
                          "exhaustive enumeration up to this many words");
  explain_cmd->add_option("--seed", explain_config.seed, "random seed");
  explain_cmd->add_option("--top", explain_top, "words listed per label");
  explain_cmd->add_option("--out", explain_out, "also write the report to this file");

  // compare
  auto* compare_cmd =
      app.add_subcommand("compare", "side-by-side explanations on the biggest disagreements");
  std::string compare_a, compare_b, compare_gold, compare_out = "compare_out";
  std::string compare_name_a = "model_a", compare_name_b = "model_b";
  std::size_t compare_k = 10, compare_top = 5;
  ExplainConfig compare_config;
  compare_cmd->add_option("--model-a", compare_a, "first model.json")->required();
  compare_cmd->add_option("--model-b", compare_b, "second model.json")->required();
  compare_cmd->add_option("--gold", compare_gold, "labeled dataset TSV")->required();
  compare_cmd->add_option("--name-a", compare_name_a, "label for the first model");
  compare_cmd->add_option("--name-b", compare_name_b, "label for the second model");
  compare_cmd->add_option("--k", compare_k, "examples to explain");
  compare_cmd->add_option("--top", compare_top, "words listed per label");
  compare_cmd->add_option("--n-variants", compare_config.n_variants, "sampled variants");
  compare_cmd->add_option("--seed", compare_config.seed, "random seed");
  compare_cmd->add_option("--out", compare_out, "output directory");

  // table
  auto* table_cmd = app.add_subcommand("table", "aligned J/F/A table from report.kv files");
  std::vector<std::string> table_rows;
  std::string table_out;
  table_cmd->add_option("--row", table_rows, "LABEL=path/to/report.kv (repeatable)")->required();
  table_cmd->add_option("--out", table_out, "also write the table to this file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const ExperimentConfig config = resolve_config(run_flags);
      const RunResult result = run_experiment(config, run_out);
      std::fputs(render_report_text(result.report, config.run_name).c_str(), stdout);
      std::printf("run directory: %s (trained on %zu examples)\n", run_out.c_str(),
                  result.n_train);
    } else if (*train_cmd) {
      const ExperimentConfig config = resolve_config(train_flags);
      train_model(config, train_out);
      std::printf("model written to %s\n", join_path(train_out, "model.json").c_str());
    } else if (*predict_cmd) {
      const ModelArtifact artifact = load_model(predict_model);
      const Dataset input = parse_dataset(predict_input, predict_labeled);
      PredictionMatrix preds = predict_with_artifact(artifact, input.examples);
      if (predict_threshold != 0.5) {
        preds = make_prediction_matrix(preds.example_ids, preds.probabilities, predict_threshold);
      }
      write_predictions(preds, predict_out);
      std::printf("%zu predictions written to %s\n", preds.size(), predict_out.c_str());
    } else if (*eval_cmd) {
      const PredictionMatrix preds = parse_predictions(eval_pred);
      const Dataset gold = parse_dataset(eval_gold, true);
      const EvalReport report = evaluate(preds, gold);
      std::filesystem::create_directories(eval_out);
      write_text_file(join_path(eval_out, "report.txt"), render_report_text(report, eval_name));
      write_text_file(join_path(eval_out, "report.kv"), render_report_kv(report));
      std::fputs(render_report_text(report, eval_name).c_str(), stdout);
    } else if (*project_cmd) {
      ProjectionConfig config;
      config.min_emotions = project_min;
      config.comparison = comparison_from_name(project_comparison);
      config.source_threshold = project_threshold;
      const std::vector<ParallelPair> pairs = parse_parallel(project_parallel);
      const PredictionMatrix preds = parse_predictions(project_preds);
      FilterReport report;
      const Dataset projected = project_labels(pairs, preds, config, project_language, &report);
      std::filesystem::create_directories(project_out);
      write_dataset(projected, join_path(project_out, "projected.tsv"));
      write_text_file(join_path(project_out, "filter_report.txt"),
                      render_filter_report(report, config));
      std::fputs(render_filter_report(report, config).c_str(), stdout);
    } else if (*explain_cmd) {
      const ModelArtifact artifact = load_model(explain_model);
      const Attribution attribution =
          explain(predictor_from_artifact(artifact), explain_text, explain_config);
      const std::string rendered = render_attribution_text(attribution, explain_top);
      if (!explain_out.empty()) write_text_file(explain_out, rendered);
      std::fputs(rendered.c_str(), stdout);
    } else if (*compare_cmd) {
      const ModelArtifact artifact_a = load_model(compare_a);
      const ModelArtifact artifact_b = load_model(compare_b);
      const Dataset gold = parse_dataset(compare_gold, true);
      const PredictionMatrix preds_a = predict_with_artifact(artifact_a, gold.examples);
      const PredictionMatrix preds_b = predict_with_artifact(artifact_b, gold.examples);
      const ComparisonReport report = compare_models(
          preds_a, preds_b, gold, predictor_from_artifact(artifact_a),
          predictor_from_artifact(artifact_b), compare_name_a, compare_name_b,
          std::min(compare_k, gold.size()), compare_config);
      std::filesystem::create_directories(compare_out);
      write_text_file(join_path(compare_out, "comparison.txt"),
                      render_comparison_text(report, compare_top));
      write_text_file(join_path(compare_out, "comparison.json"),
                      render_comparison_json(report, compare_top));
      std::fputs(render_comparison_text(report, compare_top).c_str(), stdout);
    } else if (*table_cmd) {
      std::vector<std::pair<std::string, EvalReport>> rows;
      for (const std::string& row : table_rows) {
        const std::size_t eq = row.find('=');
        if (eq == std::string::npos) {
          throw Error(Errc::config_invalid, "--row wants LABEL=path, got '" + row + "'");
        }
        rows.emplace_back(row.substr(0, eq), parse_report_kv(read_text_file(row.substr(eq + 1))));
      }
      const std::string table = emit_result_table(rows);
      if (!table_out.empty()) write_text_file(table_out, table);
      std::fputs(table.c_str(), stdout);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "error [%s]: %s\n", errc_name(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
