// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
// Independent reference implementations the tests check the library against.
// Deliberately written with different data layouts and loop structures than
// the code under test.
#ifndef EMOXLING_TESTS_ORACLES_HPP
#define EMOXLING_TESTS_ORACLES_HPP

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace oracles {

constexpr std::size_t kLabels = 11;

using BoolRow = std::array<bool, kLabels>;

struct NaiveScores {
  double jaccard = 0.0;
  double macro_f1 = 0.0;
  double avg_accuracy = 0.0;
  double exact_match = 0.0;
};

inline NaiveScores naive_scores(const std::vector<BoolRow>& pred,
                                const std::vector<BoolRow>& gold) {
  const std::size_t n = pred.size();
  NaiveScores scores;

  for (std::size_t i = 0; i < n; ++i) {
    int inter = 0;
    int uni = 0;
    bool exact = true;
    for (std::size_t k = 0; k < kLabels; ++k) {
      if (pred[i][k] && gold[i][k]) ++inter;
      if (pred[i][k] || gold[i][k]) ++uni;
      if (pred[i][k] != gold[i][k]) exact = false;
    }
    scores.jaccard += uni == 0 ? 1.0 : static_cast<double>(inter) / uni;
    if (exact) scores.exact_match += 1.0;
  }
  scores.jaccard /= static_cast<double>(n);
  scores.exact_match /= static_cast<double>(n);

  for (std::size_t k = 0; k < kLabels; ++k) {
    int tp = 0;
    int fp = 0;
    int fn = 0;
    int correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (pred[i][k] && gold[i][k]) ++tp;
      if (pred[i][k] && !gold[i][k]) ++fp;
      if (!pred[i][k] && gold[i][k]) ++fn;
      if (pred[i][k] == gold[i][k]) ++correct;
    }
    const int denom = 2 * tp + fp + fn;
    scores.macro_f1 += denom == 0 ? 0.0 : 2.0 * tp / denom;
    scores.avg_accuracy += static_cast<double>(correct) / static_cast<double>(n);
  }
  scores.macro_f1 /= static_cast<double>(kLabels);
  scores.avg_accuracy /= static_cast<double>(kLabels);
  return scores;
}

/// Exhaustive perturbation attribution, recomputed word-by-word: for word w
/// and label k, the mean over every non-empty subset containing w of
/// (|subset|/n) * p_k(subset text).
inline Eigen::MatrixXd brute_force_attribution(
    const std::function<std::array<double, kLabels>(const std::string&)>& predict,
    const std::vector<std::string>& words) {
  const std::size_t n = words.size();
  Eigen::MatrixXd scores(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(kLabels));
  for (std::size_t w = 0; w < n; ++w) {
    std::array<double, kLabels> sum{};
    std::size_t count = 0;
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
      if ((mask >> w & 1u) == 0) continue;
      std::string text;
      std::size_t kept = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if ((mask >> i & 1u) == 0) continue;
        if (kept > 0) text += ' ';
        text += words[i];
        ++kept;
      }
      const double weight = static_cast<double>(kept) / static_cast<double>(n);
      const std::array<double, kLabels> probs = predict(text);
      for (std::size_t k = 0; k < kLabels; ++k) sum[k] += weight * probs[k];
      ++count;
    }
    for (std::size_t k = 0; k < kLabels; ++k) {
      scores(static_cast<Eigen::Index>(w), static_cast<Eigen::Index>(k)) =
          sum[k] / static_cast<double>(count);
    }
  }
  return scores;
}

/// Primal objective of the regularized-bias hinge-loss SVM the solver's dual
/// corresponds to: 0.5 (||w||^2 + b^2) + sum_i C_i max(0, 1 - y_i (w.x_i + b)).
inline double svm_primal(const Eigen::VectorXd& w, double b,
                         const std::vector<Eigen::VectorXd>& X, const std::vector<double>& y,
                         double c_negative, double c_positive) {
  double objective = 0.5 * (w.squaredNorm() + b * b);
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double margin = y[i] * (w.dot(X[i]) + b);
    const double cost = y[i] > 0 ? c_positive : c_negative;
    objective += cost * std::max(0.0, 1.0 - margin);
  }
  return objective;
}

/// Central finite difference d(loss)/d(parameter) via a setter callback.
inline double central_fd(const std::function<void(double)>& set_param, double base_value,
                         const std::function<double()>& loss, double epsilon) {
  set_param(base_value + epsilon);
  const double above = loss();
  set_param(base_value - epsilon);
  const double below = loss();
  set_param(base_value);
  return (above - below) / (2.0 * epsilon);
}

}  // namespace oracles

#endif  // EMOXLING_TESTS_ORACLES_HPP
