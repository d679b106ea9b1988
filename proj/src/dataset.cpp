// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "emoxling/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "emoxling/error.hpp"
#include "emoxling/numfmt.hpp"

namespace emoxling {

namespace {

std::string to_lower_ascii(const std::string& s) {
  std::string out(s.size(), '\0');
  std::transform(s.begin(), s.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      cells.push_back(line.substr(start));
      break;
    }
    cells.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cells;
}

/// Splits into lines, dropping \r and a leading UTF-8 BOM. Empty lines are
/// skipped (a trailing newline would otherwise yield a phantom last row).
std::vector<std::string> split_lines(const std::string& content) {
  std::string text = content;
  if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
      static_cast<unsigned char>(text[1]) == 0xBB && static_cast<unsigned char>(text[2]) == 0xBF) {
    text = text.substr(3);
  }
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t pos = text.find('\n', start);
    std::string line =
        pos == std::string::npos ? text.substr(start) : text.substr(start, pos - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return lines;
}

/// Maps 11 header cells onto emotion labels. The columns may come in any
/// order but each label must appear exactly once.
std::array<EmotionLabel, kNumLabels> resolve_label_columns(const std::vector<std::string>& cells,
                                                           std::size_t first) {
  if (cells.size() != first + kNumLabels) {
    throw Error(Errc::missing_column, "expected " + std::to_string(first + kNumLabels) +
                                          " header columns, found " + std::to_string(cells.size()));
  }
  std::array<EmotionLabel, kNumLabels> order{};
  std::array<bool, kNumLabels> seen{};
  for (std::size_t i = 0; i < kNumLabels; ++i) {
    EmotionLabel label = label_from_name(cells[first + i]);  // throws UnknownLabel
    if (seen[static_cast<std::size_t>(label)]) {
      throw Error(Errc::missing_column, "emotion column '" + to_string(label) + "' repeated");
    }
    seen[static_cast<std::size_t>(label)] = true;
    order[i] = label;
  }
  return order;
}

std::string sanitize_cell(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  }
  return out;
}

}  // namespace

const char* split_name(Split split) {
  switch (split) {
    case Split::train: return "train";
    case Split::dev: return "dev";
    case Split::test: return "test";
    case Split::projected: return "projected";
    case Split::translated: return "translated";
  }
  return "train";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io_error, "cannot write '" + path + "'");
  out << content;
  if (!out) throw Error(Errc::io_error, "short write to '" + path + "'");
}

Dataset parse_dataset(const std::string& path, bool expect_labels) {
  return parse_dataset_text(read_text_file(path), expect_labels);
}

Dataset parse_dataset_text(const std::string& content, bool expect_labels) {
  std::vector<std::string> lines = split_lines(content);
  if (lines.empty()) throw Error(Errc::missing_column, "empty file, header row expected");

  std::vector<std::string> header = split_tabs(lines[0]);
  if (header.size() < 2 || to_lower_ascii(header[0]) != "id" ||
      to_lower_ascii(header[1]) != "tweet") {
    throw Error(Errc::missing_column, "header must start with ID<TAB>Tweet");
  }

  std::array<EmotionLabel, kNumLabels> column_labels{};
  if (expect_labels) {
    column_labels = resolve_label_columns(header, 2);
  } else if (header.size() != 2) {
    throw Error(Errc::missing_column,
                "unlabeled dataset header must be exactly ID<TAB>Tweet, found " +
                    std::to_string(header.size()) + " columns");
  }
  const std::size_t width = header.size();

  Dataset dataset;
  std::unordered_set<std::string> ids;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    std::vector<std::string> cells = split_tabs(lines[row]);
    if (cells.size() != width) {
      throw Error(Errc::missing_column, "row " + std::to_string(row + 1) + " has " +
                                            std::to_string(cells.size()) + " cells, expected " +
                                            std::to_string(width));
    }
    Example example;
    example.id = cells[0];
    example.text = cells[1];
    if (trim(example.text).empty()) {
      throw Error(Errc::empty_text, "row " + std::to_string(row + 1) + " (id '" + example.id +
                                        "') has empty text");
    }
    if (!ids.insert(example.id).second) {
      throw Error(Errc::duplicate_id, "id '" + example.id + "' appears more than once");
    }
    if (expect_labels) {
      LabelVector labels;
      for (std::size_t k = 0; k < kNumLabels; ++k) {
        const std::string& cell = cells[2 + k];
        if (cell == "1") {
          labels.set(column_labels[k]);
        } else if (cell != "0") {
          throw Error(Errc::malformed_label, "row " + std::to_string(row + 1) + ", column '" +
                                                 to_string(column_labels[k]) + "': cell '" + cell +
                                                 "' is not 0 or 1");
        }
      }
      example.labels = labels;
    }
    dataset.examples.push_back(std::move(example));
  }
  return dataset;
}

std::string serialize_dataset(const Dataset& dataset) {
  std::ostringstream out;
  const bool labeled = dataset.labeled();
  out << "ID\tTweet";
  if (labeled) {
    for (const auto& name : label_names()) out << '\t' << name;
  }
  out << '\n';
  for (const auto& example : dataset.examples) {
    out << sanitize_cell(example.id) << '\t' << sanitize_cell(example.text);
    if (labeled) {
      for (std::size_t k = 0; k < kNumLabels; ++k) out << '\t' << (example.labels->get(k) ? 1 : 0);
    }
    out << '\n';
  }
  return out.str();
}

void write_dataset(const Dataset& dataset, const std::string& path) {
  write_text_file(path, serialize_dataset(dataset));
}

std::vector<ParallelPair> parse_parallel(const std::string& path) {
  return parse_parallel_text(read_text_file(path));
}

std::vector<ParallelPair> parse_parallel_text(const std::string& content) {
  std::vector<std::string> lines = split_lines(content);
  if (lines.empty()) throw Error(Errc::missing_column, "empty file, header row expected");
  std::vector<std::string> header = split_tabs(lines[0]);
  if (header.size() != 3 || to_lower_ascii(header[0]) != "pair_id" ||
      to_lower_ascii(header[1]) != "source_text" || to_lower_ascii(header[2]) != "target_text") {
    throw Error(Errc::missing_column, "header must be pair_id<TAB>source_text<TAB>target_text");
  }
  std::vector<ParallelPair> pairs;
  std::unordered_set<std::string> ids;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    std::vector<std::string> cells = split_tabs(lines[row]);
    if (cells.size() != 3) {
      throw Error(Errc::missing_column, "row " + std::to_string(row + 1) + " has " +
                                            std::to_string(cells.size()) + " cells, expected 3");
    }
    if (trim(cells[1]).empty() || trim(cells[2]).empty()) {
      throw Error(Errc::empty_side,
                  "row " + std::to_string(row + 1) + " (pair '" + cells[0] + "') has an empty side");
    }
    if (!ids.insert(cells[0]).second) {
      throw Error(Errc::duplicate_id, "pair_id '" + cells[0] + "' appears more than once");
    }
    pairs.push_back({cells[0], cells[1], cells[2]});
  }
  return pairs;
}

std::string serialize_parallel(const std::vector<ParallelPair>& pairs) {
  std::ostringstream out;
  out << "pair_id\tsource_text\ttarget_text\n";
  for (const auto& pair : pairs) {
    out << sanitize_cell(pair.pair_id) << '\t' << sanitize_cell(pair.source_text) << '\t'
        << sanitize_cell(pair.target_text) << '\n';
  }
  return out.str();
}

PredictionMatrix make_prediction_matrix(std::vector<std::string> ids, Eigen::MatrixXd probabilities,
                                        double threshold) {
  if (probabilities.cols() != static_cast<Eigen::Index>(kNumLabels)) {
    throw Error(Errc::dimension_mismatch, "prediction matrix must have 11 columns, has " +
                                              std::to_string(probabilities.cols()));
  }
  if (probabilities.rows() != static_cast<Eigen::Index>(ids.size())) {
    throw Error(Errc::dimension_mismatch, "row count " + std::to_string(probabilities.rows()) +
                                              " does not match id count " +
                                              std::to_string(ids.size()));
  }
  PredictionMatrix matrix;
  matrix.threshold = threshold;
  matrix.decisions.resize(ids.size());
  for (Eigen::Index i = 0; i < probabilities.rows(); ++i) {
    for (Eigen::Index k = 0; k < probabilities.cols(); ++k) {
      double p = probabilities(i, k);
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(Errc::probability_out_of_range,
                    "probability " + fmt_g17(p) + " at row " + std::to_string(i) + ", label '" +
                        label_names()[static_cast<std::size_t>(k)] + "'");
      }
      matrix.decisions[static_cast<std::size_t>(i)].set(static_cast<std::size_t>(k),
                                                        p > threshold);
    }
  }
  matrix.example_ids = std::move(ids);
  matrix.probabilities = std::move(probabilities);
  return matrix;
}

PredictionMatrix parse_predictions(const std::string& path) {
  return parse_predictions_text(read_text_file(path));
}

PredictionMatrix parse_predictions_text(const std::string& content) {
  std::vector<std::string> lines = split_lines(content);
  if (lines.empty()) throw Error(Errc::missing_column, "empty file, header row expected");

  double threshold = 0.5;
  std::size_t first = 0;
  if (lines[0].rfind("#", 0) == 0) {
    const std::string prefix = "# threshold=";
    if (lines[0].rfind(prefix, 0) != 0) {
      throw Error(Errc::malformed_line, "unrecognized comment line: " + lines[0]);
    }
    const char* begin = lines[0].c_str() + prefix.size();
    char* end = nullptr;
    threshold = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
      throw Error(Errc::malformed_line, "bad threshold in: " + lines[0]);
    }
    first = 1;
  }
  if (lines.size() <= first) throw Error(Errc::missing_column, "header row expected");

  std::vector<std::string> header = split_tabs(lines[first]);
  if (header.empty() || to_lower_ascii(header[0]) != "id") {
    throw Error(Errc::missing_column, "prediction header must start with ID");
  }
  std::array<EmotionLabel, kNumLabels> column_labels = resolve_label_columns(header, 1);

  std::vector<std::string> ids;
  std::vector<double> values;
  std::unordered_set<std::string> seen;
  for (std::size_t row = first + 1; row < lines.size(); ++row) {
    std::vector<std::string> cells = split_tabs(lines[row]);
    if (cells.size() != 1 + kNumLabels) {
      throw Error(Errc::row_width_mismatch, "row " + std::to_string(row + 1) + " has " +
                                                std::to_string(cells.size()) +
                                                " cells, expected 12");
    }
    if (!seen.insert(cells[0]).second) {
      throw Error(Errc::duplicate_id, "id '" + cells[0] + "' appears more than once");
    }
    ids.push_back(cells[0]);
    std::array<double, kNumLabels> by_label{};
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      const std::string& cell = cells[1 + k];
      char* end = nullptr;
      double p = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw Error(Errc::malformed_line,
                    "row " + std::to_string(row + 1) + ": cell '" + cell + "' is not a real");
      }
      by_label[static_cast<std::size_t>(column_labels[k])] = p;
    }
    values.insert(values.end(), by_label.begin(), by_label.end());
  }

  Eigen::MatrixXd probabilities(static_cast<Eigen::Index>(ids.size()),
                                static_cast<Eigen::Index>(kNumLabels));
  for (std::size_t i = 0; i < ids.size(); ++i) {
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      probabilities(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          values[i * kNumLabels + k];
    }
  }
  return make_prediction_matrix(std::move(ids), std::move(probabilities), threshold);
}

std::string serialize_predictions(const PredictionMatrix& matrix) {
  std::ostringstream out;
  out << "# threshold=" << fmt_g17(matrix.threshold) << '\n';
  out << "ID";
  for (const auto& name : label_names()) out << '\t' << name;
  out << '\n';
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out << sanitize_cell(matrix.example_ids[i]);
    for (std::size_t k = 0; k < kNumLabels; ++k) {
      out << '\t' << fmt_exact(matrix.probabilities(static_cast<Eigen::Index>(i),
                                                    static_cast<Eigen::Index>(k)));
    }
    out << '\n';
  }
  return out.str();
}

void write_predictions(const PredictionMatrix& matrix, const std::string& path) {
  write_text_file(path, serialize_predictions(matrix));
}

}  // namespace emoxling
