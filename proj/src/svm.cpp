// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "emoxling/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "emoxling/error.hpp"
#include "emoxling/rng.hpp"

namespace emoxling {

namespace {

void check_inputs(const std::vector<FeatureVector>& X, Index dimension) {
  for (const FeatureVector& x : X) {
    if (x.dimension != dimension) {
      throw Error(Errc::dimension_mismatch,
                  "feature vector has dimension " + std::to_string(x.dimension) + ", expected " +
                      std::to_string(dimension));
    }
  }
}

double sparse_dot(const FeatureVector& x, const Eigen::VectorXd& w) {
  double s = 0.0;
  for (const auto& [index, value] : x.entries) s += value * w[index];
  return s;
}

// Solves min_w 0.5 ||w||^2 + sum_i C_i max(0, 1 - y_i w.x_i) in the dual:
// alpha_i in [0, C_i], w = sum_i alpha_i y_i x_i, one coordinate at a time.
// x_i carries an appended constant-1 feature so the bias is part of w.
void train_one_label(const std::vector<FeatureVector>& X, const std::vector<double>& y,
                     const std::vector<double>& qd, const SvmConfig& config, SplitMix64& rng,
                     Eigen::VectorXd& w, SvmLabelLog* log) {
  const std::size_t n = X.size();
  const Index bias_index = w.size() - 1;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> cap(n);
  for (std::size_t i = 0; i < n; ++i) {
    cap[i] = y[i] > 0 ? config.C * config.positive_weight : config.C;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  w.setZero();
  double violation = 0.0;
  int sweep = 0;
  for (; sweep < config.max_sweeps; ++sweep) {
    if (config.shuffle_each_sweep) rng.shuffle(order);
    violation = 0.0;
    for (std::size_t i : order) {
      const FeatureVector& x = X[i];
      const double margin = sparse_dot(x, w) + w[bias_index];
      const double g = y[i] * margin - 1.0;

      double pg = g;
      if (alpha[i] <= 0.0 && g > 0.0) {
        pg = 0.0;
      } else if (alpha[i] >= cap[i] && g < 0.0) {
        pg = 0.0;
      }
      violation = std::max(violation, std::abs(pg));
      if (std::abs(pg) < 1e-12) continue;

      const double updated = std::clamp(alpha[i] - g / qd[i], 0.0, cap[i]);
      const double delta = (updated - alpha[i]) * y[i];
      alpha[i] = updated;
      for (const auto& [index, value] : x.entries) w[index] += delta * value;
      w[bias_index] += delta;
    }
    if (log != nullptr) {
      const double dual =
          std::accumulate(alpha.begin(), alpha.end(), 0.0) - 0.5 * w.squaredNorm();
      log->dual_objective.push_back(dual);
    }
    if (violation <= config.tolerance) {
      ++sweep;
      break;
    }
  }
  if (log != nullptr) {
    log->alpha = alpha;
    log->sweeps = sweep;
    log->final_violation = violation;
    log->converged = violation <= config.tolerance;
  }
}

}  // namespace

MultiLabelLinearModel train_svm_ovr(const std::vector<FeatureVector>& X,
                                    const std::vector<LabelVector>& Y, const SvmConfig& config,
                                    SvmTrainLog* log) {
  if (X.empty()) throw Error(Errc::empty_training_set, "no training examples");
  if (X.size() != Y.size()) {
    throw Error(Errc::dimension_mismatch, "feature/label count mismatch: " +
                                              std::to_string(X.size()) + " vs " +
                                              std::to_string(Y.size()));
  }
  if (config.C <= 0.0 || config.tolerance <= 0.0 || config.max_sweeps < 1 ||
      config.positive_weight <= 0.0 || config.sigmoid_scale <= 0.0) {
    throw Error(Errc::config_invalid, "svm config requires positive C, tolerance, max_sweeps, "
                                      "positive_weight and sigmoid_scale");
  }
  const Index dimension = X.front().dimension;
  check_inputs(X, dimension);

  const std::size_t n = X.size();
  std::vector<double> qd(n);
  for (std::size_t i = 0; i < n; ++i) {
    double sq = 0.0;
    for (const auto& [index, value] : X[i].entries) sq += value * value;
    qd[i] = sq + 1.0;  // appended bias feature
  }

  MultiLabelLinearModel model;
  model.feature_dimension = dimension;
  model.weights.setZero(kNumLabels, dimension);
  model.biases.setZero(kNumLabels);
  model.sigmoid_scale = config.sigmoid_scale;

  std::vector<double> y(n);
  Eigen::VectorXd w(dimension + 1);
  for (Index k = 0; k < static_cast<Index>(kNumLabels); ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = Y[i].get(static_cast<std::size_t>(k)) ? 1.0 : -1.0;
    }
    SplitMix64 rng(config.seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(k + 1));
    train_one_label(X, y, qd, config, rng, w, log != nullptr ? &log->labels[k] : nullptr);
    model.weights.row(k) = w.head(dimension).transpose();
    model.biases[k] = w[dimension];
  }
  return model;
}

Eigen::MatrixXd decision_margins(const MultiLabelLinearModel& model,
                                 const std::vector<FeatureVector>& X) {
  check_inputs(X, model.feature_dimension);
  Eigen::MatrixXd margins(static_cast<Index>(X.size()), kNumLabels);
  Eigen::VectorXd wk(model.feature_dimension);
  for (Index k = 0; k < static_cast<Index>(kNumLabels); ++k) {
    wk = model.weights.row(k).transpose();
    for (std::size_t i = 0; i < X.size(); ++i) {
      margins(static_cast<Index>(i), k) = sparse_dot(X[i], wk) + model.biases[k];
    }
  }
  return margins;
}

PredictionMatrix predict(const MultiLabelLinearModel& model, const std::vector<FeatureVector>& X,
                         const std::vector<std::string>& ids) {
  if (ids.size() != X.size()) {
    throw Error(Errc::dimension_mismatch, "id/input count mismatch");
  }
  const Eigen::MatrixXd margins = decision_margins(model, X);
  Eigen::MatrixXd probabilities =
      (1.0 + (-model.sigmoid_scale * margins.array()).exp()).inverse().matrix();
  return make_prediction_matrix(ids, probabilities, 0.5);
}

PredictionMatrix predict(const MultiLabelLinearModel& model, const std::vector<FeatureVector>& X) {
  std::vector<std::string> ids(X.size());
  for (std::size_t i = 0; i < X.size(); ++i) ids[i] = std::to_string(i);
  return predict(model, X, ids);
}

}  // namespace emoxling
