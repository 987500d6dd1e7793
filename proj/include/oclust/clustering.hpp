#pragma once

// Partitioning of objects into k clusters (K-means on a vectorized
// embedding, agglomerative and k-medoids on the mixed distance matrix) and
// Calinski-Harabasz scoring of candidate cluster counts.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "oclust/distance.hpp"
#include "oclust/profiles.hpp"

namespace oclust {

enum class Algorithm { KMeans, Agglomerative, KMedoids };
enum class Linkage { Average, Single, Complete };

std::string_view algorithm_name(Algorithm a);
std::string_view linkage_name(Linkage l);
Algorithm parse_algorithm(const std::string& name);
Linkage parse_linkage(const std::string& name);

// Partition of the clustered objects. Clusters are non-empty, pairwise
// disjoint, sorted internally and ordered by their smallest member id.
struct Clustering {
  std::string otype;
  std::string method;
  int k = 0;
  std::uint64_t seed = 0;
  std::string linkage;  // agglomerative only
  std::vector<std::vector<std::string>> clusters;
  std::map<std::string, std::size_t> assignment;  // object id -> cluster index
};

nlohmann::json clustering_to_json(const Clustering& c);
Clustering clustering_from_json(const nlohmann::json& doc);

// Numeric embedding used by K-means and the Calinski-Harabasz index: traces
// as per-activity frequency shares, categoricals one-hot, numeric columns as
// stored (already normalized). Dimension order is deterministic.
std::vector<std::vector<double>> vectorize(const FeatureTable& table);

// Lloyd iterations to an assignment fixpoint (at most 300), greedy
// farthest-point seeding from the seeded RNG's first pick, empty clusters
// reseeded with the point farthest from its centroid. `wcss_history`, when
// given, receives the within-cluster sum of squares after every iteration.
Clustering kmeans(const FeatureTable& table, int k, std::uint64_t seed,
                  std::vector<double>* wcss_history = nullptr);

// One dendrogram step: the two merged clusters named by their smallest
// original row index.
struct Merge {
  std::size_t a = 0;  // surviving cluster (smaller representative)
  std::size_t b = 0;
  double distance = 0.0;
};

// Full merge sequence from singletons to one cluster. Ties broken by the
// lexicographically smallest representative pair.
std::vector<Merge> dendrogram(const DistanceMatrix& matrix, Linkage linkage);

Clustering agglomerative(const DistanceMatrix& matrix, int k,
                         Linkage linkage = Linkage::Average);

// K-means-style partitioning under the exact mixed distance.
Clustering kmedoids(const DistanceMatrix& matrix, int k, std::uint64_t seed);

// (between-cluster dispersion / (k-1)) / (within-cluster dispersion / (n-k))
// on the vectorized embedding; +infinity when the within dispersion is zero.
// Requires 2 <= k < n.
double calinski_harabasz(const FeatureTable& table, const Clustering& clustering);

struct SweepEntry {
  int k = 0;
  double score = 0.0;
  Clustering clustering;
  bool best = false;
};

// Runs the chosen method for every k in [k_min, k_max] and scores each with
// the Calinski-Harabasz index; the highest score (smallest k on ties) is
// flagged. The matrix is only consulted by the matrix-based methods.
std::vector<SweepEntry> sweep_k(const FeatureTable& table, const DistanceMatrix& matrix,
                                int k_min, int k_max, Algorithm algorithm, std::uint64_t seed,
                                Linkage linkage = Linkage::Average);

}  // namespace oclust
