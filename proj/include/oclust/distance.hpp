#pragma once

// Mixed-type dissimilarity between object profiles: Levenshtein on traces,
// Euclidean on normalized numeric columns, string-boolean on categoricals,
// combined into a weighted [0,1] distance and a pairwise matrix.

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "oclust/profiles.hpp"

namespace oclust {

// Minimal number of single-activity substitutions, insertions and deletions
// transforming s into t.
int levenshtein(const std::vector<std::string>& s, const std::vector<std::string>& t);

double euclidean(const std::vector<double>& x, const std::vector<double>& y);

inline int string_boolean(const std::string& a, const std::string& b) {
  return a == b ? 0 : 1;
}

struct DistanceWeights {
  double trace = 1.0;
  double numeric = 1.0;
  double categorical = 1.0;
};

// Weighted mix of the three component distances, each normalized into [0,1]:
// Levenshtein divided by the longer trace length, Euclidean over normalized
// numeric cells divided by sqrt(dim), and the mean of the categorical
// mismatches. Scaling all weights by a positive constant changes nothing.
double profile_distance(const FeatureTable& table, std::size_t row_a, std::size_t row_b,
                        const DistanceWeights& weights = {});

struct DistanceMatrix {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> values;  // symmetric, zero diagonal

  std::size_t size() const { return ids.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i][j]; }
};

DistanceMatrix distance_matrix(const FeatureTable& table, const DistanceWeights& weights = {});

// Audit dump: header row of ids, then one row per object.
void write_matrix_csv(const DistanceMatrix& matrix, std::ostream& out);

}  // namespace oclust
