// Copyright the emoxling authors. Licensed under the terms of the Apache 2.0 license. See LICENSE in the project root.
#include "emoxling/embeddings.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "emoxling/dataset.hpp"
#include "emoxling/error.hpp"

namespace emoxling {

const Eigen::VectorXd* EmbeddingTable::find(const std::string& term) const {
  auto it = vectors.find(term);
  return it == vectors.end() ? nullptr : &it->second;
}

EmbeddingTable load_embedding_table(const std::string& path) {
  return parse_embedding_table(read_text_file(path));
}

EmbeddingTable parse_embedding_table(const std::string& content) {
  std::istringstream in(content);
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::malformed_line, "missing `<count> <dim>` header");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  long declared_count = 0, dim = 0;
  {
    std::istringstream header(line);
    if (!(header >> declared_count >> dim) || dim <= 0) {
      throw Error(Errc::malformed_line, "bad header line: '" + line + "'");
    }
    std::string rest;
    if (header >> rest) throw Error(Errc::malformed_line, "bad header line: '" + line + "'");
  }

  EmbeddingTable table;
  table.dimension = static_cast<Index>(dim);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::istringstream row(line);
    std::string term;
    if (!(row >> term)) {
      throw Error(Errc::malformed_line, "line " + std::to_string(line_no) + ": no term");
    }
    Eigen::VectorXd vec(dim);
    long got = 0;
    std::string cell;
    while (row >> cell) {
      if (got >= dim) {
        throw Error(Errc::dimension_mismatch, "line " + std::to_string(line_no) + " ('" + term +
                                                  "'): more than " + std::to_string(dim) +
                                                  " values");
      }
      char* end = nullptr;
      double value = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0') {
        throw Error(Errc::malformed_line,
                    "line " + std::to_string(line_no) + ": '" + cell + "' is not a real");
      }
      vec[got++] = value;
    }
    if (got != dim) {
      throw Error(Errc::dimension_mismatch, "line " + std::to_string(line_no) + " ('" + term +
                                                "'): " + std::to_string(got) + " values, expected " +
                                                std::to_string(dim));
    }
    auto [it, inserted] = table.vectors.insert_or_assign(term, std::move(vec));
    if (!inserted) {
      std::cerr << "warning: duplicate embedding term '" << term << "', keeping the last row\n";
    }
  }
  return table;
}

FeatureVector embed_average(const std::vector<std::string>& tokens, const EmbeddingTable& table) {
  // Accumulation runs in sorted token order so the result is bit-identical
  // under any permutation of the input (FP addition is not associative).
  std::vector<std::string> sorted = tokens;
  std::sort(sorted.begin(), sorted.end());
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(table.dimension);
  int hits = 0;
  for (const std::string& token : sorted) {
    if (const Eigen::VectorXd* vec = table.find(token)) {
      sum += *vec;
      ++hits;
    }
  }
  if (hits > 0) sum /= static_cast<double>(hits);
  return from_dense(sum);
}

}  // namespace emoxling
