#include "oclust/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace oclust {

using nlohmann::json;

std::string_view algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::KMeans: return "kmeans";
    case Algorithm::Agglomerative: return "agglomerative";
    case Algorithm::KMedoids: return "kmedoids";
  }
  return "kmeans";
}

std::string_view linkage_name(Linkage l) {
  switch (l) {
    case Linkage::Average: return "average";
    case Linkage::Single: return "single";
    case Linkage::Complete: return "complete";
  }
  return "average";
}

Algorithm parse_algorithm(const std::string& name) {
  if (name == "kmeans") return Algorithm::KMeans;
  if (name == "agglomerative") return Algorithm::Agglomerative;
  if (name == "kmedoids") return Algorithm::KMedoids;
  throw Error("unknown algorithm \"" + name + "\"; expected kmeans, agglomerative or kmedoids");
}

Linkage parse_linkage(const std::string& name) {
  if (name == "average") return Linkage::Average;
  if (name == "single") return Linkage::Single;
  if (name == "complete") return Linkage::Complete;
  throw Error("unknown linkage \"" + name + "\"; expected average, single or complete");
}

namespace {

constexpr int kMaxIterations = 300;

// Deterministic clustering from row assignments: clusters sorted internally,
// ordered by smallest member id.
Clustering make_clustering(const std::vector<std::string>& ids,
                           const std::vector<std::size_t>& assign, std::size_t k) {
  std::vector<std::vector<std::string>> groups(k);
  for (std::size_t row = 0; row < ids.size(); ++row) groups[assign[row]].push_back(ids[row]);
  for (auto& g : groups) std::sort(g.begin(), g.end());
  groups.erase(std::remove_if(groups.begin(), groups.end(),
                              [](const auto& g) { return g.empty(); }),
               groups.end());
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  Clustering c;
  c.clusters = std::move(groups);
  c.k = static_cast<int>(c.clusters.size());
  for (std::size_t i = 0; i < c.clusters.size(); ++i) {
    for (const std::string& id : c.clusters[i]) c.assignment.emplace(id, i);
  }
  return c;
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - b[i]) * (a[i] - b[i]);
  return sum;
}

// Greedy farthest-point seeding over an abstract squared-distance callback;
// the first pick comes from the seeded RNG, ties go to the lowest index.
template <typename Dist2>
std::vector<std::size_t> farthest_point_seeds(std::size_t n, std::size_t k, std::uint64_t seed,
                                              Dist2 dist2) {
  std::vector<std::size_t> chosen;
  std::vector<bool> taken(n, false);
  std::mt19937_64 rng(seed);
  const std::size_t first = static_cast<std::size_t>(rng() % n);
  chosen.push_back(first);
  taken[first] = true;
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  while (chosen.size() < k) {
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], dist2(i, chosen.back()));
    }
    std::size_t next = n;
    double best = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!taken[i] && nearest[i] > best) {
        best = nearest[i];
        next = i;
      }
    }
    chosen.push_back(next);
    taken[next] = true;
  }
  return chosen;
}

}  // namespace

std::vector<std::vector<double>> vectorize(const FeatureTable& table) {
  const std::size_t n = table.rows();

  std::set<std::string> alphabet;
  for (const auto& trace : table.traces) alphabet.insert(trace.begin(), trace.end());
  std::vector<std::string> activities(alphabet.begin(), alphabet.end());

  std::vector<std::vector<std::string>> cat_values(table.categorical_columns.size());
  for (std::size_t c = 0; c < table.categorical_columns.size(); ++c) {
    std::set<std::string> values;
    for (std::size_t row = 0; row < n; ++row) values.insert(table.categorical[row][c]);
    cat_values[c].assign(values.begin(), values.end());
  }

  std::size_t dims = activities.size() + table.numeric_columns.size();
  for (const auto& values : cat_values) dims += values.size();

  std::vector<std::vector<double>> points(n, std::vector<double>(dims, 0.0));
  for (std::size_t row = 0; row < n; ++row) {
    std::size_t d = 0;
    const auto& trace = table.traces[row];
    if (!trace.empty()) {
      std::map<std::string, int> counts;
      for (const std::string& a : trace) ++counts[a];
      for (const std::string& a : activities) {
        auto it = counts.find(a);
        points[row][d++] =
            it == counts.end() ? 0.0
                               : static_cast<double>(it->second) / static_cast<double>(trace.size());
      }
    } else {
      d += activities.size();
    }
    for (std::size_t c = 0; c < cat_values.size(); ++c) {
      for (const std::string& value : cat_values[c]) {
        points[row][d++] = table.categorical[row][c] == value ? 1.0 : 0.0;
      }
    }
    for (std::size_t c = 0; c < table.numeric_columns.size(); ++c) {
      points[row][d++] = table.numeric[row][c];
    }
  }
  return points;
}

Clustering kmeans(const FeatureTable& table, int k, std::uint64_t seed,
                  std::vector<double>* wcss_history) {
  const std::size_t n = table.rows();
  if (n == 0) throw Error("k-means requires a non-empty table");
  if (k < 1) throw Error("k must be at least 1");
  if (static_cast<std::size_t>(k) > n) {
    throw Error("k=" + std::to_string(k) + " exceeds the number of objects (" +
                std::to_string(n) + ")");
  }
  const std::vector<std::vector<double>> points = vectorize(table);
  const std::size_t dims = points.front().size();
  if (dims == 0) throw Error("k-means requires at least one feature dimension");
  const std::size_t kk = static_cast<std::size_t>(k);

  std::vector<std::vector<double>> centroids;
  for (std::size_t i : farthest_point_seeds(n, kk, seed, [&](std::size_t a, std::size_t b) {
         return squared_distance(points[a], points[b]);
       })) {
    centroids.push_back(points[i]);
  }

  std::vector<std::size_t> assign(n, 0), previous;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < kk; ++c) {
        const double d = squared_distance(points[i], centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      assign[i] = best;
    }

    // reseed empty clusters with the point farthest from its centroid,
    // never breaking up a singleton
    std::vector<std::size_t> sizes(kk, 0);
    for (std::size_t a : assign) ++sizes[a];
    for (std::size_t c = 0; c < kk; ++c) {
      if (sizes[c] > 0) continue;
      std::size_t farthest = n;
      double worst = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[assign[i]] <= 1) continue;
        const double d = squared_distance(points[i], centroids[assign[i]]);
        if (d > worst) {
          worst = d;
          farthest = i;
        }
      }
      if (farthest == n) break;
      --sizes[assign[farthest]];
      assign[farthest] = c;
      sizes[c] = 1;
    }

    if (assign == previous) break;
    previous = assign;

    centroids.assign(kk, std::vector<double>(dims, 0.0));
    std::vector<double> counts(kk, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      counts[assign[i]] += 1.0;
      for (std::size_t d = 0; d < dims; ++d) centroids[assign[i]][d] += points[i][d];
    }
    for (std::size_t c = 0; c < kk; ++c) {
      for (std::size_t d = 0; d < dims; ++d) centroids[c][d] /= counts[c];
    }

    if (wcss_history) {
      double wcss = 0.0;
      for (std::size_t i = 0; i < n; ++i) wcss += squared_distance(points[i], centroids[assign[i]]);
      wcss_history->push_back(wcss);
    }
  }

  Clustering c = make_clustering(table.ids, assign, kk);
  c.otype = table.otype;
  c.method = std::string(algorithm_name(Algorithm::KMeans));
  c.seed = seed;
  return c;
}

std::vector<Merge> dendrogram(const DistanceMatrix& matrix, Linkage linkage) {
  const std::size_t n = matrix.size();
  if (n == 0) throw Error("dendrogram requires a non-empty matrix");

  // cluster slots are their smallest original row index
  std::vector<bool> alive(n, true);
  std::vector<double> sizes(n, 1.0);
  std::vector<std::vector<double>> dist = matrix.values;

  std::vector<Merge> merges;
  merges.reserve(n - 1);
  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t best_i = n, best_j = n;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!alive[i]) continue;
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!alive[j]) continue;
        if (dist[i][j] < best) {
          best = dist[i][j];
          best_i = i;
          best_j = j;
        }
      }
    }
    merges.push_back({best_i, best_j, best});
    // Lance-Williams update of the surviving slot
    for (std::size_t c = 0; c < n; ++c) {
      if (!alive[c] || c == best_i || c == best_j) continue;
      double updated = 0.0;
      switch (linkage) {
        case Linkage::Average:
          updated = (sizes[best_i] * dist[best_i][c] + sizes[best_j] * dist[best_j][c]) /
                    (sizes[best_i] + sizes[best_j]);
          break;
        case Linkage::Single:
          updated = std::min(dist[best_i][c], dist[best_j][c]);
          break;
        case Linkage::Complete:
          updated = std::max(dist[best_i][c], dist[best_j][c]);
          break;
      }
      dist[best_i][c] = updated;
      dist[c][best_i] = updated;
    }
    sizes[best_i] += sizes[best_j];
    alive[best_j] = false;
  }
  return merges;
}

Clustering agglomerative(const DistanceMatrix& matrix, int k, Linkage linkage) {
  const std::size_t n = matrix.size();
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw Error("k=" + std::to_string(k) + " outside the valid range [1, " + std::to_string(n) +
                "]");
  }
  const std::vector<Merge> merges = dendrogram(matrix, linkage);

  std::vector<std::size_t> slot(n);
  for (std::size_t i = 0; i < n; ++i) slot[i] = i;
  for (std::size_t step = 0; step < n - static_cast<std::size_t>(k); ++step) {
    const Merge& m = merges[step];
    for (std::size_t i = 0; i < n; ++i) {
      if (slot[i] == m.b) slot[i] = m.a;
    }
  }

  // compact slot ids into consecutive cluster indices
  std::map<std::size_t, std::size_t> remap;
  std::vector<std::size_t> assign(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, inserted] = remap.emplace(slot[i], remap.size());
    assign[i] = it->second;
  }

  Clustering c = make_clustering(matrix.ids, assign, remap.size());
  c.method = std::string(algorithm_name(Algorithm::Agglomerative));
  c.linkage = std::string(linkage_name(linkage));
  return c;
}

Clustering kmedoids(const DistanceMatrix& matrix, int k, std::uint64_t seed) {
  const std::size_t n = matrix.size();
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw Error("k=" + std::to_string(k) + " outside the valid range [1, " + std::to_string(n) +
                "]");
  }
  const std::size_t kk = static_cast<std::size_t>(k);
  std::vector<std::size_t> medoids =
      farthest_point_seeds(n, kk, seed, [&](std::size_t a, std::size_t b) {
        const double d = matrix.at(a, b);
        return d * d;
      });

  std::vector<std::size_t> assign(n, 0), previous;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < kk; ++c) {
        const double d = matrix.at(i, medoids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      assign[i] = best;
    }
    if (assign == previous) break;
    previous = assign;

    for (std::size_t c = 0; c < kk; ++c) {
      std::vector<std::size_t> members;
      for (std::size_t i = 0; i < n; ++i) {
        if (assign[i] == c) members.push_back(i);
      }
      if (members.empty()) continue;  // keeps the old medoid; reassignment refills it
      std::size_t best_m = members.front();
      double best_total = std::numeric_limits<double>::infinity();
      for (std::size_t candidate : members) {
        double total = 0.0;
        for (std::size_t other : members) total += matrix.at(candidate, other);
        if (total < best_total) {
          best_total = total;
          best_m = candidate;
        }
      }
      medoids[c] = best_m;
    }
  }

  Clustering c = make_clustering(matrix.ids, assign, kk);
  c.method = std::string(algorithm_name(Algorithm::KMedoids));
  c.seed = seed;
  return c;
}

double calinski_harabasz(const FeatureTable& table, const Clustering& clustering) {
  const std::size_t n = table.rows();
  const std::size_t k = clustering.clusters.size();
  if (k < 2 || k >= n) {
    throw Error("Calinski-Harabasz requires 2 <= k < n (k=" + std::to_string(k) +
                ", n=" + std::to_string(n) + ")");
  }
  std::map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < n; ++i) row_of.emplace(table.ids[i], i);

  const std::vector<std::vector<double>> points = vectorize(table);
  const std::size_t dims = points.front().size();

  std::vector<double> overall(dims, 0.0);
  for (const auto& p : points) {
    for (std::size_t d = 0; d < dims; ++d) overall[d] += p[d];
  }
  for (double& v : overall) v /= static_cast<double>(n);

  double between = 0.0, within = 0.0;
  for (const auto& cluster : clustering.clusters) {
    std::vector<double> mean(dims, 0.0);
    for (const std::string& id : cluster) {
      auto it = row_of.find(id);
      if (it == row_of.end()) throw Error("clustered object \"" + id + "\" not in the table");
      for (std::size_t d = 0; d < dims; ++d) mean[d] += points[it->second][d];
    }
    for (double& v : mean) v /= static_cast<double>(cluster.size());
    between += static_cast<double>(cluster.size()) * squared_distance(mean, overall);
    for (const std::string& id : cluster) {
      within += squared_distance(points[row_of.at(id)], mean);
    }
  }
  if (within == 0.0) return std::numeric_limits<double>::infinity();
  return (between / static_cast<double>(k - 1)) /
         (within / static_cast<double>(n - k));
}

std::vector<SweepEntry> sweep_k(const FeatureTable& table, const DistanceMatrix& matrix,
                                int k_min, int k_max, Algorithm algorithm, std::uint64_t seed,
                                Linkage linkage) {
  if (k_min < 1 || k_min > k_max) {
    throw Error("invalid k range [" + std::to_string(k_min) + ", " + std::to_string(k_max) + "]");
  }
  std::vector<SweepEntry> entries;
  for (int k = k_min; k <= k_max; ++k) {
    SweepEntry entry;
    entry.k = k;
    switch (algorithm) {
      case Algorithm::KMeans: entry.clustering = kmeans(table, k, seed); break;
      case Algorithm::Agglomerative: entry.clustering = agglomerative(matrix, k, linkage); break;
      case Algorithm::KMedoids: entry.clustering = kmedoids(matrix, k, seed); break;
    }
    entry.clustering.otype = table.otype;
    entry.score = calinski_harabasz(table, entry.clustering);
    entries.push_back(std::move(entry));
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < entries.size(); ++i) {
    if (entries[i].score > entries[best].score) best = i;
  }
  entries[best].best = true;
  return entries;
}

json clustering_to_json(const Clustering& c) {
  json doc = {{"otype", c.otype},
              {"method", c.method},
              {"k", c.k},
              {"seed", c.seed},
              {"clusters", c.clusters}};
  if (!c.linkage.empty()) doc["linkage"] = c.linkage;
  return doc;
}

Clustering clustering_from_json(const json& doc) {
  Clustering c;
  try {
    c.otype = doc.at("otype").get<std::string>();
    c.method = doc.at("method").get<std::string>();
    c.k = doc.at("k").get<int>();
    c.seed = doc.at("seed").get<std::uint64_t>();
    c.clusters = doc.at("clusters").get<std::vector<std::vector<std::string>>>();
    if (doc.contains("linkage")) c.linkage = doc.at("linkage").get<std::string>();
  } catch (const json::exception& e) {
    throw Error(std::string("invalid clustering: ") + e.what());
  }
  for (std::size_t i = 0; i < c.clusters.size(); ++i) {
    if (c.clusters[i].empty()) throw Error("invalid clustering: empty cluster");
    for (const std::string& id : c.clusters[i]) {
      if (!c.assignment.emplace(id, i).second) {
        throw Error("invalid clustering: object \"" + id + "\" in two clusters");
      }
    }
  }
  return c;
}

}  // namespace oclust
