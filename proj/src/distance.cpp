#include "oclust/distance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace oclust {

int levenshtein(const std::vector<std::string>& s, const std::vector<std::string>& t) {
  const std::size_t m = s.size(), n = t.size();
  std::vector<int> prev(n + 1), cur(n + 1);
  for (std::size_t j = 0; j <= n; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= m; ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= n; ++j) {
      const int subst = prev[j - 1] + (s[i - 1] == t[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

double euclidean(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw Error("euclidean distance requires equal lengths (" + std::to_string(x.size()) +
                " vs " + std::to_string(y.size()) + ")");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(sum);
}

namespace {

void check_weights(const DistanceWeights& w) {
  if (w.trace < 0.0 || w.numeric < 0.0 || w.categorical < 0.0) {
    throw Error("distance weights must be non-negative");
  }
  if (w.trace + w.numeric + w.categorical <= 0.0) {
    throw Error("distance weights must not all be zero");
  }
}

}  // namespace

double profile_distance(const FeatureTable& table, std::size_t row_a, std::size_t row_b,
                        const DistanceWeights& weights) {
  check_weights(weights);
  if (row_a >= table.rows() || row_b >= table.rows()) {
    throw Error("profile row out of range");
  }

  const auto& ta = table.traces[row_a];
  const auto& tb = table.traces[row_b];
  const double longest = static_cast<double>(std::max({ta.size(), tb.size(), std::size_t{1}}));
  const double trace_part = static_cast<double>(levenshtein(ta, tb)) / longest;

  const std::size_t dim = table.numeric_columns.size();
  double numeric_part = 0.0;
  if (dim > 0) {
    numeric_part = euclidean(table.numeric[row_a], table.numeric[row_b]) /
                   std::sqrt(static_cast<double>(dim));
  }

  double categorical_part = 0.0;
  if (!table.categorical_columns.empty()) {
    int mismatches = 0;
    for (std::size_t c = 0; c < table.categorical_columns.size(); ++c) {
      mismatches += string_boolean(table.categorical[row_a][c], table.categorical[row_b][c]);
    }
    categorical_part =
        static_cast<double>(mismatches) / static_cast<double>(table.categorical_columns.size());
  }

  return (weights.trace * trace_part + weights.numeric * numeric_part +
          weights.categorical * categorical_part) /
         (weights.trace + weights.numeric + weights.categorical);
}

DistanceMatrix distance_matrix(const FeatureTable& table, const DistanceWeights& weights) {
  check_weights(weights);
  const std::size_t n = table.rows();
  if (n < 2) throw Error("distance matrix requires at least 2 profiles");
  DistanceMatrix m;
  m.ids = table.ids;
  m.values.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = profile_distance(table, i, j, weights);
      m.values[i][j] = d;
      m.values[j][i] = d;
    }
  }
  return m;
}

void write_matrix_csv(const DistanceMatrix& matrix, std::ostream& out) {
  out << "id";
  for (const std::string& id : matrix.ids) out << ',' << id;
  out << '\n';
  char buf[40];
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    out << matrix.ids[i];
    for (std::size_t j = 0; j < matrix.size(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.12g", matrix.values[i][j]);
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace oclust
