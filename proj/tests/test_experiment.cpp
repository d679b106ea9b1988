// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include <algorithm>
#include <doctest.h>
#include <filesystem>
#include <string>

#include "emoxling/error.hpp"
#include "emoxling/experiment.hpp"
#include "emoxling/fingerprint.hpp"
#include "test_util.hpp"

using namespace emoxling;
using testutil::BilingualFixture;
using testutil::TempDir;

namespace {

std::string manifest_value(const Manifest& manifest, const std::string& key) {
  for (const auto& [k, v] : manifest) {
    if (k == key) return v;
  }
  FAIL("manifest key not found: " << key);
  return {};
}

bool manifest_has(const Manifest& manifest, const std::string& key) {
  return std::any_of(manifest.begin(), manifest.end(),
                     [&](const auto& line) { return line.first == key; });
}

/// svm on word unigrams over the target-language files.
ExperimentConfig base_config(const BilingualFixture& fx) {
  ExperimentConfig config;
  config.run_name = "base";
  config.language = "target";
  config.seed = 3;
  config.svm.C = 10.0;
  FeatureBlockSpec block;
  block.kind = FeatureKind::word_unigram;
  block.ngram = word_unigram_config();
  config.pipeline.blocks.push_back(block);
  config.data.train = fx.train;
  config.data.dev = fx.dev;
  config.data.test = fx.test;
  return config;
}

/// A single id-keyed sentence-embedding block, as the cross-lingual runs use.
ExperimentConfig embed_config(const BilingualFixture& fx) {
  ExperimentConfig config = base_config(fx);
  config.run_name = "embed";
  config.pipeline.blocks.clear();
  FeatureBlockSpec block;
  block.kind = FeatureKind::sentence_embed;
  block.embedding_path = fx.sentence_embeddings;
  config.pipeline.blocks.push_back(block);
  return config;
}

Errc config_error(const std::string& json_text) {
  try {
    parse_experiment_config(json_text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected the config to be rejected: " << json_text);
  return Errc::io_error;
}

EvalReport make_report(double jaccard, double macro_f1, double avg_accuracy) {
  EvalReport report;
  report.jaccard = jaccard;
  report.macro_f1 = macro_f1;
  report.avg_accuracy = avg_accuracy;
  report.n_examples = 1;
  return report;
}

}  // namespace

TEST_CASE("experiment config parses fields and round-trips through JSON") {
  const std::string text = R"({
    "run_name": "arabic-mt",
    "language": "arabic",
    "seed": 17,
    "model": "svm",
    "svm": {"C": 2.5, "tolerance": 0.0001, "positive_weight": 3.0},
    "features": [
      {"kind": "word_unigram", "min_df": 2},
      {"kind": "char_ngram", "n_min": 2, "n_max": 4}
    ],
    "approaches": ["T", "P"],
    "combined_with_target": true,
    "data": {
      "train": "train.tsv", "dev": "dev.tsv", "test": "test.tsv",
      "translated_train": "mt.tsv",
      "parallel": "pairs.tsv", "source_predictions": "tagger.tsv"
    },
    "projection": {"min_emotions": 2, "comparison": "more_than", "source_threshold": 0.6}
  })";
  ExperimentConfig config = parse_experiment_config(text);
  CHECK(config.run_name == "arabic-mt");
  CHECK(config.language == "arabic");
  CHECK(config.seed == 17);
  CHECK(config.svm.C == 2.5);
  CHECK(config.svm.positive_weight == 3.0);
  REQUIRE(config.pipeline.blocks.size() == 2);
  CHECK(config.pipeline.blocks[0].kind == FeatureKind::word_unigram);
  CHECK(config.pipeline.blocks[0].ngram.min_df == 2);
  CHECK(config.pipeline.blocks[1].ngram.n_min == 2);
  CHECK(config.pipeline.blocks[1].ngram.n_max == 4);
  REQUIRE(config.approaches.size() == 2);
  CHECK(config.approaches[0] == Approach::T);
  CHECK(config.approaches[1] == Approach::P);
  CHECK(config.combined_with_target);
  CHECK(config.data.translated_train == "mt.tsv");
  CHECK(config.projection.min_emotions == 2);
  CHECK(config.projection.comparison == ProjectionConfig::Comparison::more_than);
  CHECK(config.projection.source_threshold == 0.6);

  ExperimentConfig reparsed = parse_experiment_config(serialize_experiment_config(config));
  CHECK(reparsed.run_name == config.run_name);
  CHECK(reparsed.seed == config.seed);
  CHECK(reparsed.svm.C == config.svm.C);
  CHECK(reparsed.approaches == config.approaches);
  CHECK(reparsed.data.parallel == config.data.parallel);
  CHECK(reparsed.projection.min_emotions == config.projection.min_emotions);
  CHECK(reparsed.projection.comparison == config.projection.comparison);
  CHECK(reparsed.pipeline.blocks.size() == config.pipeline.blocks.size());
}

TEST_CASE("experiment config rejects inconsistent requests") {
  const std::string features = R"("features": [{"kind": "word_unigram"}])";
  const std::string embed_features =
      R"("features": [{"kind": "sentence_embed", "path": "s.vec"}])";

  CHECK(config_error("{not json") == Errc::config_invalid);
  CHECK(config_error(R"({"model": "tree", )" + features +
                     R"(, "data": {"train": "t.tsv"}})") == Errc::config_invalid);
  CHECK(config_error(R"({"data": {"train": "t.tsv"}})") == Errc::config_invalid);
  CHECK(config_error(R"({)" + features + R"(})") == Errc::config_invalid);
  CHECK(config_error(R"({)" + features +
                     R"(, "approaches": ["T", "T"], "data": {"translated_train": "mt.tsv"}})") ==
        Errc::config_invalid);
  CHECK(config_error(R"({)" + features + R"(, "approaches": ["Q"]})") == Errc::config_invalid);

  // M without source data, then M with lexical features.
  CHECK(config_error(R"({)" + embed_features + R"(, "approaches": ["M"]})") ==
        Errc::config_invalid);
  CHECK(config_error(R"({)" + features +
                     R"(, "approaches": ["M"], "data": {"source_train": "s.tsv"}})") ==
        Errc::config_invalid);

  CHECK(config_error(R"({)" + features + R"(, "approaches": ["T"]})") == Errc::config_invalid);
  CHECK(config_error(R"({)" + features +
                     R"(, "approaches": ["P"], "data": {"parallel": "p.tsv"}})") ==
        Errc::config_invalid);

  CHECK(config_error(R"({"model": "mlp", )" + features +
                     R"(, "data": {"train": "t.tsv", "dev": "d.tsv"}})") == Errc::config_invalid);
  CHECK(config_error(R"({"model": "mlp", )" + embed_features +
                     R"(, "data": {"train": "t.tsv"}})") == Errc::config_invalid);

  CHECK(config_error(R"({)" + features +
                     R"(, "combined_with_target": true, "approaches": ["T"],
                         "data": {"translated_train": "mt.tsv"}})") == Errc::config_invalid);
}

TEST_CASE("a test set is required to run but not to train") {
  TempDir tmp;
  BilingualFixture fx = testutil::make_bilingual_fixture(tmp);
  ExperimentConfig config = base_config(fx);
  config.data.test.clear();

  try {
    run_experiment(config, tmp.file("run-no-test"));
    FAIL("expected ConfigInvalid");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::config_invalid);
  }

  const std::string out = tmp.file("train-only");
  Manifest manifest;
  ModelArtifact artifact = train_model(config, out, &manifest);
  CHECK(artifact.model_type == "svm");
  CHECK(artifact.svm.has_value());
  CHECK(std::filesystem::exists(out + "/model.json"));
  CHECK(std::filesystem::exists(out + "/manifest.kv"));
  CHECK(std::filesystem::exists(out + "/resolved_config.json"));
  CHECK_FALSE(std::filesystem::exists(out + "/report.kv"));
  CHECK_FALSE(std::filesystem::exists(out + "/predictions.tsv"));
  CHECK(manifest_value(manifest, "n_train") == "120");
}

TEST_CASE("the baseline svm run writes every artifact and a faithful report") {
  TempDir tmp;
  BilingualFixture fx = testutil::make_bilingual_fixture(tmp);
  const std::string out = tmp.file("run-base");
  RunResult result = run_experiment(base_config(fx), out);

  // The fixture's texts name their labels, so the baseline should be strong.
  CHECK(result.report.jaccard > 0.9);
  CHECK(result.n_train == 120);
  CHECK(result.report.n_examples == 60);

  for (const char* name : {"predictions.tsv", "report.txt", "report.kv", "manifest.kv",
                           "resolved_config.json", "model.json"}) {
    CHECK(std::filesystem::exists(out + "/" + name));
  }

  EvalReport reloaded = parse_report_kv(read_text_file(out + "/report.kv"));
  CHECK(reloaded.jaccard == result.report.jaccard);
  CHECK(reloaded.macro_f1 == result.report.macro_f1);
  CHECK(reloaded.n_examples == result.report.n_examples);

  PredictionMatrix predictions = parse_predictions(out + "/predictions.tsv");
  REQUIRE(predictions.example_ids.size() == fx.test_data.size());
  for (std::size_t i = 0; i < predictions.example_ids.size(); ++i) {
    CHECK(predictions.example_ids[i] == fx.test_data.examples[i].id);
  }

  const Manifest& manifest = result.manifest;
  CHECK(manifest_value(manifest, "run_name") == "base");
  CHECK(manifest_value(manifest, "model") == "svm");
  CHECK(manifest_value(manifest, "seed") == "3");
  CHECK(manifest_value(manifest, "approaches") == "-");
  CHECK(manifest_value(manifest, "training_order") == "target_train");
  CHECK(manifest_value(manifest, "n_train") == "120");
  CHECK(manifest_value(manifest, "n_test") == "60");
  CHECK(manifest_has(manifest, "feature_dimension"));
  CHECK(manifest_has(manifest, "svm.C"));
  CHECK(manifest_has(manifest, "svm.sweeps_per_label"));
  CHECK(manifest_has(manifest, "dev_jaccard"));
  CHECK(manifest_has(manifest, "wall_clock_seconds"));
  CHECK(manifest_value(manifest, "file.train.path") == fx.train);
  CHECK(manifest_value(manifest, "file.train.fnv1a64") == fingerprint_file(fx.train));
  CHECK(manifest_has(manifest, "file.test.fnv1a64"));
  CHECK(render_manifest(manifest) == read_text_file(out + "/manifest.kv"));
}

TEST_CASE("re-running, or running from the resolved config, is byte-identical") {
  TempDir tmp;
  BilingualFixture fx = testutil::make_bilingual_fixture(tmp);
  ExperimentConfig config = base_config(fx);

  const std::string out_a = tmp.file("rep-a");
  const std::string out_b = tmp.file("rep-b");
  run_experiment(config, out_a);
  run_experiment(config, out_b);
  CHECK(read_text_file(out_a + "/report.kv") == read_text_file(out_b + "/report.kv"));
  CHECK(read_text_file(out_a + "/predictions.tsv") == read_text_file(out_b + "/predictions.tsv"));
  CHECK(read_text_file(out_a + "/model.json") == read_text_file(out_b + "/model.json"));

  ExperimentConfig resolved = load_experiment_config(out_a + "/resolved_config.json");
  const std::string out_c = tmp.file("rep-c");
  run_experiment(resolved, out_c);
  CHECK(read_text_file(out_a + "/report.kv") == read_text_file(out_c + "/report.kv"));
  CHECK(read_text_file(out_a + "/predictions.tsv") == read_text_file(out_c + "/predictions.tsv"));
}

TEST_CASE("the svm seed is resolved from the run seed") {
  TempDir tmp;
  BilingualFixture fx = testutil::make_bilingual_fixture(tmp);
  ExperimentConfig config_a = base_config(fx);
  config_a.svm.seed = 111;
  ExperimentConfig config_b = base_config(fx);
  config_b.svm.seed = 999;

  const std::string out_a = tmp.file("seed-a");
  const std::string out_b = tmp.file("seed-b");
  run_experiment(config_a, out_a);
  run_experiment(config_b, out_b);
  CHECK(read_text_file(out_a + "/predictions.tsv") == read_text_file(out_b + "/predictions.tsv"));
}

TEST_CASE("approach T combined with the target set concatenates both files") {
  TempDir tmp;
  BilingualFixture fx = testutil::make_bilingual_fixture(tmp);
  ExperimentConfig config = base_config(fx);
  config.run_name = "t-combined";
  config.approaches = {Approach::T};
  config.data.translated_train = fx.translated_train;
  config.combined_with_target = true;

  RunResult result = run_experiment(config, tmp.file("run-t"));
  CHECK(result.n_train == fx.translated_train_data.size() + fx.train_data.size());
  CHECK(manifest_value(result.manifest, "training_order") == "translated_train,target_train");
  CHECK(manifest_value(result.manifest, "approaches") == "T");
  CHECK(manifest_has(result.manifest, "file.translated_train.fnv1a64"));
  CHECK(result.report.jaccard > 0.9);

  // Without the target set, only the translated file trains the model.
  config.combined_with_target = false;
  config.run_name = "t-alone";
  RunResult alone = run_experiment(config, tmp.file("run-t-alone"));
  CHECK(alone.n_train == fx.translated_train_data.size());
  CHECK(manifest_value(alone.manifest, "training_order") == "translated_train");
}

TEST_CASE("approach M trains on source data through sentence embeddings") {
  TempDir tmp;
  BilingualFixture fx = testutil::make_bilingual_fixture(tmp);
  ExperimentConfig config = embed_config(fx);
  config.run_name = "m-run";
  config.approaches = {Approach::M};
  config.data.source_train = fx.source_train;
  config.svm.C = 1.0;

  RunResult result = run_experiment(config, tmp.file("run-m"));
  CHECK(result.n_train == fx.source_train_data.size());
  CHECK(manifest_value(result.manifest, "training_order") == "source_train");
  CHECK(manifest_has(result.manifest, "file.source_train.fnv1a64"));
  CHECK(manifest_has(result.manifest, "file.sentence_embed.fnv1a64"));
  CHECK(result.report.jaccard > 0.8);
}

TEST_CASE("id-keyed embeddings reject training segments that share ids") {
  TempDir tmp;
  BilingualFixture fx = testutil::make_bilingual_fixture(tmp);
  ExperimentConfig config = embed_config(fx);
  config.approaches = {Approach::M};
  config.data.source_train = fx.source_train;
  config.combined_with_target = true;
  config.data.train = fx.source_train;  // same ids twice

  try {
    run_experiment(config, tmp.file("run-dup"));
    FAIL("expected ConfigInvalid");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::config_invalid);
    CHECK(std::string(e.what()).find("id") != std::string::npos);
  }
}

TEST_CASE("approach P projects labels and trains on the retained pairs") {
  TempDir tmp;
  BilingualFixture fx = testutil::make_bilingual_fixture(tmp);
  ExperimentConfig config = base_config(fx);
  config.run_name = "p-run";
  config.approaches = {Approach::P};
  config.data.parallel = fx.parallel;
  config.data.source_predictions = fx.source_predictions;
  config.combined_with_target = false;
  config.data.train.clear();
  config.data.dev.clear();

  std::size_t expected_retained = 0;
  for (const auto& labels : fx.pair_labels) {
    if (labels.count() >= 3) ++expected_retained;
  }
  REQUIRE(expected_retained > 0);

  const std::string out = tmp.file("run-p");
  RunResult result = run_experiment(config, out);
  CHECK(result.n_train == expected_retained);
  CHECK(manifest_value(result.manifest, "training_order") == "projected");
  CHECK(manifest_value(result.manifest, "projection.retained") ==
        std::to_string(expected_retained));
  CHECK(manifest_has(result.manifest, "file.parallel.fnv1a64"));
  CHECK(manifest_has(result.manifest, "file.source_predictions.fnv1a64"));

  CHECK(std::filesystem::exists(out + "/projected.tsv"));
  CHECK(std::filesystem::exists(out + "/filter_report.txt"));
  Dataset projected = parse_dataset(out + "/projected.tsv", true);
  REQUIRE(projected.size() == expected_retained);
  std::size_t row = 0;
  for (std::size_t i = 0; i < fx.pairs.size(); ++i) {
    if (fx.pair_labels[i].count() < 3) continue;
    CHECK(projected.examples[row].id == fx.pairs[i].pair_id);
    CHECK(projected.examples[row].text == fx.pairs[i].target_text);
    CHECK(*projected.examples[row].labels == fx.pair_labels[i]);
    ++row;
  }
  CHECK(result.report.jaccard > 0.5);
}

TEST_CASE("a projection that retains nothing stops the run") {
  TempDir tmp;
  BilingualFixture fx = testutil::make_bilingual_fixture(tmp);
  ExperimentConfig config = base_config(fx);
  config.approaches = {Approach::P};
  config.data.parallel = fx.parallel;
  config.data.source_predictions = fx.source_predictions;
  config.data.train.clear();
  config.projection.min_emotions = 11;
  config.projection.comparison = ProjectionConfig::Comparison::more_than;

  try {
    run_experiment(config, tmp.file("run-p-empty"));
    FAIL("expected EmptyTrainingSet");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_training_set);
  }
}

TEST_CASE("a reloaded model artifact reproduces the run's predictions bitwise") {
  TempDir tmp;
  BilingualFixture fx = testutil::make_bilingual_fixture(tmp);
  const std::string out = tmp.file("run-reload");
  run_experiment(base_config(fx), out);

  ModelArtifact reloaded = load_model(out + "/model.json");
  CHECK(reloaded.model_type == "svm");
  PredictionMatrix again = predict_with_artifact(reloaded, fx.test_data.examples);
  PredictionMatrix original = parse_predictions(out + "/predictions.tsv");
  REQUIRE(again.example_ids == original.example_ids);
  CHECK(again.probabilities == original.probabilities);  // bitwise via fmt_exact round-trip
  for (std::size_t i = 0; i < again.decisions.size(); ++i) {
    CHECK(again.decisions[i] == original.decisions[i]);
  }
}

TEST_CASE("the mlp path trains end to end on sentence embeddings") {
  TempDir tmp;
  BilingualFixture fx = testutil::make_bilingual_fixture(tmp);
  ExperimentConfig config = embed_config(fx);
  config.run_name = "mlp-run";
  config.model = "mlp";
  config.mlp.hidden_dims = {32};
  config.mlp.learning_rate = 0.01;
  config.mlp.batch_size = 16;
  config.mlp.max_epochs = 40;
  config.mlp.patience = 10;

  const std::string out = tmp.file("run-mlp");
  RunResult result = run_experiment(config, out);
  CHECK(result.report.jaccard > 0.8);
  CHECK(manifest_value(result.manifest, "model") == "mlp");
  CHECK(manifest_value(result.manifest, "mlp.input_dim") == "16");
  CHECK(manifest_has(result.manifest, "mlp.best_epoch"));
  CHECK(manifest_has(result.manifest, "mlp.epochs_run"));
  CHECK_FALSE(manifest_has(result.manifest, "dev_jaccard"));

  ModelArtifact reloaded = load_model(out + "/model.json");
  CHECK(reloaded.model_type == "mlp");
  PredictionMatrix again = predict_with_artifact(reloaded, fx.test_data.examples);
  PredictionMatrix original = parse_predictions(out + "/predictions.tsv");
  CHECK(again.probabilities == original.probabilities);
}

TEST_CASE("the result table stars the best value per column at display precision") {
  std::vector<std::pair<std::string, EvalReport>> rows;
  rows.emplace_back("alpha", make_report(0.5004, 0.40, 0.60));
  rows.emplace_back("beta", make_report(0.5001, 0.40, 0.59));
  rows.emplace_back("gamma", make_report(0.30, 0.35, 0.40));

  std::string table = emit_result_table(rows);
  CHECK(table.find("J") != std::string::npos);

  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < table.size()) {
    std::size_t end = table.find('\n', start);
    if (end == std::string::npos) end = table.size();
    lines.push_back(table.substr(start, end - start));
    start = end + 1;
  }
  REQUIRE(lines.size() == 4);
  // 0.5004 and 0.5001 both display as 50.0, so both rows are starred in J.
  CHECK(lines[1].find("50.0*") != std::string::npos);
  CHECK(lines[2].find("50.0*") != std::string::npos);
  CHECK(lines[3].find("30.0*") == std::string::npos);
  // F ties exactly; gamma's lower F is unstarred.
  CHECK(lines[1].find("40.0*") != std::string::npos);
  CHECK(lines[2].find("40.0*") != std::string::npos);
  CHECK(lines[3].find("35.0*") == std::string::npos);
  // A: only alpha wins.
  CHECK(lines[1].find("60.0*") != std::string::npos);
  CHECK(lines[2].find("59.0*") == std::string::npos);
  CHECK(lines[3].find("40.0 ") != std::string::npos);

  CHECK_THROWS_AS(emit_result_table({}), Error);
}
