// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include <doctest.h>
#include <set>

#include "emoxling/error.hpp"
#include "emoxling/projection.hpp"
#include "test_util.hpp"

using namespace emoxling;

namespace {

/// Twelve pairs where pair i carries exactly i predicted emotions.
struct CountFixture {
  std::vector<ParallelPair> pairs;
  PredictionMatrix preds;
};

CountFixture make_count_fixture() {
  CountFixture fx;
  std::vector<std::string> ids;
  Eigen::MatrixXd probs(12, static_cast<Eigen::Index>(kNumLabels));
  for (int count = 0; count <= 11; ++count) {
    const std::string id = "c" + std::to_string(count);
    ids.push_back(id);
    fx.pairs.push_back({id, "source " + id, "target " + id});
    for (Eigen::Index k = 0; k < probs.cols(); ++k) {
      probs(count, k) = k < count ? 0.9 : 0.1;
    }
  }
  fx.preds = make_prediction_matrix(ids, probs);
  return fx;
}

std::set<std::string> retained_ids(const Dataset& projected) {
  std::set<std::string> ids;
  for (const auto& example : projected.examples) ids.insert(example.id);
  return ids;
}

}  // namespace

TEST_CASE("retention follows the predicate exactly on the 0..11 count fixture") {
  CountFixture fx = make_count_fixture();

  ProjectionConfig at_least;
  at_least.min_emotions = 3;
  at_least.comparison = ProjectionConfig::Comparison::at_least;
  FilterReport report_al;
  Dataset kept_al = project_labels(fx.pairs, fx.preds, at_least, "target", &report_al);
  CHECK(kept_al.size() == 9);  // counts 3..11
  CHECK(report_al.retained == 9);
  CHECK(report_al.total == 12);
  for (const auto& example : kept_al.examples) {
    CHECK(example.labels->count() >= 3);
  }
  CHECK(retained_ids(kept_al).count("c2") == 0);
  CHECK(retained_ids(kept_al).count("c3") == 1);

  ProjectionConfig more_than = at_least;
  more_than.comparison = ProjectionConfig::Comparison::more_than;
  FilterReport report_mt;
  Dataset kept_mt = project_labels(fx.pairs, fx.preds, more_than, "target", &report_mt);
  CHECK(kept_mt.size() == 8);  // counts 4..11
  CHECK(retained_ids(kept_mt).count("c3") == 0);
  CHECK(retained_ids(kept_mt).count("c4") == 1);

  for (std::size_t k = 0; k <= kNumLabels; ++k) {
    CHECK(report_al.histogram[k] == 1);
  }
}

TEST_CASE("more_than m equals at_least m+1 and is a subset of at_least m") {
  testutil::TempDir tmp;
  auto fx = testutil::make_bilingual_fixture(tmp);
  PredictionMatrix preds = parse_predictions(fx.source_predictions);

  for (int m = 0; m <= 10; ++m) {
    ProjectionConfig a;
    a.min_emotions = m;
    a.comparison = ProjectionConfig::Comparison::at_least;
    ProjectionConfig strict = a;
    strict.comparison = ProjectionConfig::Comparison::more_than;
    ProjectionConfig next = a;
    next.min_emotions = m + 1;

    Dataset wide = project_labels(fx.pairs, preds, a, "target");
    Dataset narrow = project_labels(fx.pairs, preds, strict, "target");
    Dataset shifted = project_labels(fx.pairs, preds, next, "target");

    std::set<std::string> wide_ids = retained_ids(wide);
    std::set<std::string> narrow_ids = retained_ids(narrow);
    CHECK(narrow_ids == retained_ids(shifted));
    for (const auto& id : narrow_ids) CHECK(wide_ids.count(id) == 1);
  }
}

TEST_CASE("retention is monotone in min_emotions") {
  testutil::TempDir tmp;
  auto fx = testutil::make_bilingual_fixture(tmp);
  PredictionMatrix preds = parse_predictions(fx.source_predictions);

  for (auto comparison :
       {ProjectionConfig::Comparison::at_least, ProjectionConfig::Comparison::more_than}) {
    std::size_t previous = fx.pairs.size() + 1;
    for (int m = 0; m <= 11; ++m) {
      ProjectionConfig config;
      config.min_emotions = m;
      config.comparison = comparison;
      FilterReport report = filter_report(fx.pairs, preds, config);
      CHECK(report.retained <= previous);
      CHECK(report.total == fx.pairs.size());
      previous = report.retained;
    }
  }
}

TEST_CASE("histogram accounts for every pair and explains the retention") {
  testutil::TempDir tmp;
  auto fx = testutil::make_bilingual_fixture(tmp);
  PredictionMatrix preds = parse_predictions(fx.source_predictions);

  ProjectionConfig config;
  config.min_emotions = 2;
  FilterReport report = filter_report(fx.pairs, preds, config);

  std::size_t histogram_total = 0, expected_retained = 0;
  for (std::size_t c = 0; c <= kNumLabels; ++c) {
    histogram_total += report.histogram[c];
    if (static_cast<int>(c) >= config.min_emotions) expected_retained += report.histogram[c];
  }
  CHECK(histogram_total == report.total);
  CHECK(expected_retained == report.retained);
  CHECK(report.retention() == doctest::Approx(static_cast<double>(report.retained) /
                                              static_cast<double>(report.total)));
}

TEST_CASE("projection copies target text verbatim and preserves pair order") {
  testutil::TempDir tmp;
  auto fx = testutil::make_bilingual_fixture(tmp);
  PredictionMatrix preds = parse_predictions(fx.source_predictions);

  ProjectionConfig config;
  config.min_emotions = 0;  // keep everything
  Dataset projected = project_labels(fx.pairs, preds, config, "arabic");

  REQUIRE(projected.size() == fx.pairs.size());
  CHECK(projected.language == "arabic");
  CHECK(projected.split == Split::projected);
  for (std::size_t i = 0; i < fx.pairs.size(); ++i) {
    CHECK(projected.examples[i].id == fx.pairs[i].pair_id);
    CHECK(projected.examples[i].text == fx.pairs[i].target_text);
    CHECK(projected.examples[i].text.find("s") != 0);  // never the source side
    CHECK(*projected.examples[i].labels == fx.pair_labels[i]);
  }
}

TEST_CASE("decisions are recomputed at the configured source threshold") {
  std::vector<ParallelPair> pairs = {{"p1", "src", "tgt"}};
  Eigen::MatrixXd probs(1, static_cast<Eigen::Index>(kNumLabels));
  probs.setConstant(0.55);
  PredictionMatrix preds = make_prediction_matrix({"p1"}, probs);  // stored threshold 0.5
  CHECK(preds.decisions[0].count() == kNumLabels);

  ProjectionConfig strict;
  strict.min_emotions = 0;
  strict.source_threshold = 0.6;
  Dataset projected = project_labels(pairs, preds, strict, "target");
  REQUIRE(projected.size() == 1);
  CHECK(projected.examples[0].labels->count() == 0);  // 0.55 fails the 0.6 cut

  ProjectionConfig loose = strict;
  loose.source_threshold = 0.5;
  CHECK(project_labels(pairs, preds, loose, "target").examples[0].labels->count() == kNumLabels);
}

TEST_CASE("a pair without a prediction row is an id mismatch") {
  testutil::TempDir tmp;
  auto fx = testutil::make_bilingual_fixture(tmp);
  PredictionMatrix preds = parse_predictions(fx.source_predictions);

  std::vector<ParallelPair> with_orphan = fx.pairs;
  with_orphan.push_back({"orphan", "src", "tgt"});
  ProjectionConfig config;
  try {
    project_labels(with_orphan, preds, config, "target");
    FAIL("expected IdMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::id_mismatch);
  }

  // Extra prediction rows are harmless; the pair list drives the output.
  std::vector<ParallelPair> fewer(fx.pairs.begin(), fx.pairs.begin() + 10);
  ProjectionConfig keep_all;
  keep_all.min_emotions = 0;
  CHECK(project_labels(fewer, preds, keep_all, "target").size() == 10);
}

TEST_CASE("projection config validation") {
  CountFixture fx = make_count_fixture();
  ProjectionConfig config;

  config.min_emotions = -1;
  CHECK_THROWS_AS(project_labels(fx.pairs, fx.preds, config, "t"), Error);
  config.min_emotions = 12;
  CHECK_THROWS_AS(project_labels(fx.pairs, fx.preds, config, "t"), Error);
  config.min_emotions = 3;
  config.source_threshold = 1.5;
  CHECK_THROWS_AS(project_labels(fx.pairs, fx.preds, config, "t"), Error);
}

TEST_CASE("comparison names round-trip and accept hyphens") {
  CHECK(comparison_from_name("at_least") == ProjectionConfig::Comparison::at_least);
  CHECK(comparison_from_name("at-least") == ProjectionConfig::Comparison::at_least);
  CHECK(comparison_from_name("more-than") == ProjectionConfig::Comparison::more_than);
  CHECK(std::string(comparison_name(ProjectionConfig::Comparison::more_than)) == "more_than");
  CHECK_THROWS_AS(comparison_from_name("beyond"), Error);
}

TEST_CASE("filter report rendering names the filter and the histogram") {
  CountFixture fx = make_count_fixture();
  ProjectionConfig config;
  config.min_emotions = 3;
  FilterReport report = filter_report(fx.pairs, fx.preds, config);
  std::string text = render_filter_report(report, config);
  CHECK(text.find("pairs           12") != std::string::npos);
  CHECK(text.find("retained        9") != std::string::npos);
  CHECK(text.find("at_least 3") != std::string::npos);
  CHECK(text.find("labels  pairs") != std::string::npos);
}
