// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include <cmath>
#include <doctest.h>

#include "emoxling/error.hpp"
#include "emoxling/feature_vector.hpp"
#include "emoxling/rng.hpp"
#include "emoxling/svm.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace emoxling;

namespace {

std::vector<Eigen::VectorXd> dense_rows(const Eigen::MatrixXd& matrix) {
  std::vector<Eigen::VectorXd> rows;
  rows.reserve(static_cast<std::size_t>(matrix.rows()));
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) rows.push_back(matrix.row(i).transpose());
  return rows;
}

std::vector<double> signs_for_label(const std::vector<LabelVector>& Y, std::size_t k) {
  std::vector<double> y(Y.size());
  for (std::size_t i = 0; i < Y.size(); ++i) y[i] = Y[i].get(k) ? 1.0 : -1.0;
  return y;
}

}  // namespace

TEST_CASE("svm separates a separable multi-label problem") {
  auto problem = testutil::make_separable(200, 20, 101);
  SvmConfig config;
  config.C = 10.0;
  config.tolerance = 1e-4;
  config.max_sweeps = 20000;
  config.seed = 5;

  SvmTrainLog log;
  MultiLabelLinearModel model = train_svm_ovr(problem.X, problem.Y, config, &log);
  Eigen::MatrixXd margins = decision_margins(model, problem.X);

  for (std::size_t k = 0; k < kNumLabels; ++k) {
    std::size_t correct = 0;
    for (std::size_t i = 0; i < problem.Y.size(); ++i) {
      const bool predicted = margins(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) > 0.0;
      if (predicted == problem.Y[i].get(k)) ++correct;
    }
    const double accuracy = static_cast<double>(correct) / static_cast<double>(problem.Y.size());
    CHECK(accuracy >= 0.99);
    CHECK(log.labels[k].converged);
  }
}

TEST_CASE("dual objective never decreases across sweeps") {
  auto problem = testutil::make_separable(120, 12, 7);
  SvmConfig config;
  config.C = 1.0;
  config.tolerance = 1e-6;
  config.max_sweeps = 2000;
  config.seed = 3;

  SvmTrainLog log;
  train_svm_ovr(problem.X, problem.Y, config, &log);
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    const auto& dual = log.labels[k].dual_objective;
    REQUIRE(dual.size() >= 1);
    for (std::size_t s = 1; s < dual.size(); ++s) {
      CHECK(dual[s] >= dual[s - 1] - 1e-9);
    }
  }
}

TEST_CASE("KKT conditions hold at convergence") {
  auto problem = testutil::make_separable(80, 10, 19);
  SvmConfig config;
  config.C = 2.0;
  config.tolerance = 1e-8;
  config.max_sweeps = 20000;
  config.seed = 11;

  SvmTrainLog log;
  MultiLabelLinearModel model = train_svm_ovr(problem.X, problem.Y, config, &log);
  Eigen::MatrixXd margins = decision_margins(model, problem.X);

  const double slack = 1e-4;
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    REQUIRE(log.labels[k].converged);
    const auto& alpha = log.labels[k].alpha;
    REQUIRE(alpha.size() == problem.X.size());
    const std::vector<double> y = signs_for_label(problem.Y, k);
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      const double functional =
          y[i] * margins(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k));
      CHECK(alpha[i] >= -1e-15);
      CHECK(alpha[i] <= config.C + 1e-15);
      if (alpha[i] <= 1e-10) {
        CHECK(functional >= 1.0 - slack);
      } else if (alpha[i] >= config.C - 1e-10) {
        CHECK(functional <= 1.0 + slack);
      } else {
        CHECK(functional == doctest::Approx(1.0).epsilon(slack));
      }
    }
  }
}

TEST_CASE("trained weights beat a perturbation search and close the duality gap") {
  auto problem = testutil::make_separable(40, 4, 31);
  SvmConfig config;
  config.C = 1.0;
  config.tolerance = 1e-10;
  config.max_sweeps = 50000;
  config.seed = 2;

  SvmTrainLog log;
  MultiLabelLinearModel model = train_svm_ovr(problem.X, problem.Y, config, &log);
  std::vector<Eigen::VectorXd> rows = dense_rows(problem.dense);

  SplitMix64 rng(55);
  for (std::size_t k = 0; k < kNumLabels; ++k) {
    const std::vector<double> y = signs_for_label(problem.Y, k);
    const Eigen::VectorXd w = model.weights.row(static_cast<Eigen::Index>(k)).transpose();
    const double b = model.biases[static_cast<Eigen::Index>(k)];
    const double primal = oracles::svm_primal(w, b, rows, y, config.C, config.C);
    const double dual = log.labels[k].dual_objective.back();

    CHECK(dual <= primal + 1e-9);       // weak duality
    CHECK(primal - dual <= 1e-6);       // gap closes at this tolerance

    for (int trial = 0; trial < 100; ++trial) {
      const double scale = trial % 2 == 0 ? 1e-3 : 0.3;
      Eigen::VectorXd dw(w.size());
      for (Eigen::Index j = 0; j < dw.size(); ++j) dw[j] = scale * rng.next_gaussian();
      const double db = scale * rng.next_gaussian();
      const double perturbed = oracles::svm_primal(w + dw, b + db, rows, y, config.C, config.C);
      CHECK(perturbed >= primal - 1e-12);
    }
  }
}

TEST_CASE("two-point problem matches the grid oracle and the closed form") {
  // (1, 0) positive for the first label, (-1, 0) negative; other labels have
  // no positive example at all.
  std::vector<FeatureVector> X = {from_dense(Eigen::Vector2d(1.0, 0.0)),
                                  from_dense(Eigen::Vector2d(-1.0, 0.0))};
  LabelVector first_only;
  first_only.set(std::size_t{0}, true);
  std::vector<LabelVector> Y = {first_only, LabelVector{}};

  SvmConfig config;
  config.C = 1.0;
  config.tolerance = 1e-10;
  config.max_sweeps = 10000;
  config.seed = 1;

  SvmTrainLog log;
  MultiLabelLinearModel model = train_svm_ovr(X, Y, config, &log);

  // Closed form for this instance: w = (1, 0), regularized bias 0, objective
  // 0.5, both dual variables at 0.5.
  CHECK(model.weights(0, 0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(model.weights(0, 1)) <= 1e-12);
  CHECK(std::abs(model.biases[0]) <= 1e-9);
  CHECK(log.labels[0].dual_objective.back() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(log.labels[0].alpha[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(log.labels[0].alpha[1] == doctest::Approx(0.5).epsilon(1e-9));

  // Grid search over (w0, b) with w1 pinned to 0: any w1 != 0 only adds norm,
  // so the plane restriction contains the optimum.
  std::vector<Eigen::VectorXd> rows = {Eigen::Vector2d(1.0, 0.0), Eigen::Vector2d(-1.0, 0.0)};
  std::vector<double> y = {1.0, -1.0};
  double best = std::numeric_limits<double>::infinity();
  double best_w0 = 0.0, best_b = 0.0;
  for (double w0 = -2.0; w0 <= 2.0; w0 += 0.005) {
    for (double b = -2.0; b <= 2.0; b += 0.005) {
      const double value =
          oracles::svm_primal(Eigen::Vector2d(w0, 0.0), b, rows, y, config.C, config.C);
      if (value < best) {
        best = value;
        best_w0 = w0;
        best_b = b;
      }
    }
  }
  const double trained_primal = oracles::svm_primal(
      model.weights.row(0).transpose(), model.biases[0], rows, y, config.C, config.C);
  CHECK(trained_primal <= best + 1e-9);  // the solver is at least as good as the grid
  CHECK(best_w0 == doctest::Approx(1.0).epsilon(0.01));
  CHECK(std::abs(best_b) <= 0.01);

  // Margin +1 on the positive, -1 on the negative: 100% training accuracy.
  Eigen::MatrixXd margins = decision_margins(model, X);
  CHECK(margins(0, 0) > 0.0);
  CHECK(margins(1, 0) < 0.0);
}

TEST_CASE("an all-negative label trains clean and predicts negative") {
  auto problem = testutil::make_separable(60, 6, 43);
  for (auto& labels : problem.Y) labels.set(EmotionLabel::trust, false);

  SvmConfig config;
  config.tolerance = 1e-6;
  config.seed = 4;
  MultiLabelLinearModel model = train_svm_ovr(problem.X, problem.Y, config);
  PredictionMatrix preds = predict(model, problem.X);
  for (const auto& decision : preds.decisions) {
    CHECK_FALSE(decision.get(EmotionLabel::trust));
  }
}

TEST_CASE("a vanishing C pins the weights near zero") {
  auto problem = testutil::make_separable(50, 8, 59);
  SvmConfig config;
  config.C = 1e-9;
  config.seed = 6;
  MultiLabelLinearModel model = train_svm_ovr(problem.X, problem.Y, config);

  double max_feature = 0.0;
  for (const auto& x : problem.X) {
    for (const auto& [index, value] : x.entries) max_feature = std::max(max_feature, std::abs(value));
  }
  const double bound =
      static_cast<double>(problem.X.size()) * config.C * std::max(max_feature, 1.0);
  CHECK(model.weights.cwiseAbs().maxCoeff() <= bound + 1e-15);
  CHECK(model.biases.cwiseAbs().maxCoeff() <= bound + 1e-15);
}

TEST_CASE("label k's classifier ignores the other label columns") {
  auto problem = testutil::make_separable(70, 9, 67);
  const std::size_t kept = 3;

  // Scramble every column except `kept`.
  SplitMix64 rng(8);
  std::vector<LabelVector> scrambled = problem.Y;
  for (auto& labels : scrambled) {
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      if (k != kept) labels.set(k, rng.next_double() < 0.5);
    }
  }

  SvmConfig config;
  config.seed = 21;
  config.tolerance = 1e-6;
  MultiLabelLinearModel base = train_svm_ovr(problem.X, problem.Y, config);
  MultiLabelLinearModel other = train_svm_ovr(problem.X, scrambled, config);

  for (Eigen::Index j = 0; j < base.weights.cols(); ++j) {
    CHECK(base.weights(static_cast<Eigen::Index>(kept), j) ==
          other.weights(static_cast<Eigen::Index>(kept), j));  // bitwise
  }
  CHECK(base.biases[static_cast<Eigen::Index>(kept)] ==
        other.biases[static_cast<Eigen::Index>(kept)]);
}

TEST_CASE("training is a deterministic function of data, config, and seed") {
  auto problem = testutil::make_separable(60, 7, 73);
  SvmConfig config;
  config.seed = 1234;
  MultiLabelLinearModel a = train_svm_ovr(problem.X, problem.Y, config);
  MultiLabelLinearModel b = train_svm_ovr(problem.X, problem.Y, config);
  CHECK(a.weights == b.weights);  // bitwise
  CHECK(a.biases == b.biases);
}

TEST_CASE("zero model predicts 0.5 everywhere and decides nothing") {
  MultiLabelLinearModel model;
  model.feature_dimension = 5;
  model.weights.setZero(kNumLabels, 5);
  model.biases.setZero(kNumLabels);

  std::vector<FeatureVector> X = {from_dense(Eigen::VectorXd::Ones(5)),
                                  from_dense(Eigen::VectorXd::Zero(5))};
  PredictionMatrix preds = predict(model, X);
  for (Eigen::Index i = 0; i < preds.probabilities.rows(); ++i) {
    for (Eigen::Index k = 0; k < preds.probabilities.cols(); ++k) {
      CHECK(preds.probabilities(i, k) == 0.5);
    }
    CHECK_FALSE(preds.decisions[static_cast<std::size_t>(i)].any());
  }
}

TEST_CASE("decisions coincide with the sign of the margin") {
  auto problem = testutil::make_separable(50, 6, 83);
  SvmConfig config;
  config.seed = 9;
  MultiLabelLinearModel model = train_svm_ovr(problem.X, problem.Y, config);
  Eigen::MatrixXd margins = decision_margins(model, problem.X);
  PredictionMatrix preds = predict(model, problem.X);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      const bool positive =
          margins(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) > 0.0;
      CHECK(preds.decisions[i].get(k) == positive);
    }
  }
}

TEST_CASE("svm input validation") {
  auto problem = testutil::make_separable(10, 3, 97);
  SvmConfig config;

  CHECK_THROWS_AS(train_svm_ovr({}, {}, config), Error);
  try {
    train_svm_ovr({}, {}, config);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_training_set);
  }

  std::vector<LabelVector> short_y(problem.Y.begin(), problem.Y.end() - 1);
  CHECK_THROWS_AS(train_svm_ovr(problem.X, short_y, config), Error);

  auto ragged = problem.X;
  ragged[2] = from_dense(Eigen::VectorXd::Zero(7));
  CHECK_THROWS_AS(train_svm_ovr(ragged, problem.Y, config), Error);

  SvmConfig bad = config;
  bad.C = 0.0;
  CHECK_THROWS_AS(train_svm_ovr(problem.X, problem.Y, bad), Error);

  MultiLabelLinearModel model = train_svm_ovr(problem.X, problem.Y, config);
  CHECK_THROWS_AS(predict(model, problem.X, {"just-one"}), Error);
}
