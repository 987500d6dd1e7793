#include "oclust/trace_graph.hpp"

#include <cmath>
#include <limits>
#include <queue>

namespace oclust {

TraceGraph build_trace_graph(const std::vector<std::string>& activities) {
  TraceGraph g;
  for (const std::string& a : activities) g.nodes.insert(a);
  for (std::size_t i = 0; i + 1 < activities.size(); ++i) {
    if (activities[i] == activities[i + 1]) continue;  // edges join distinct vertices
    ++g.freq[{activities[i], activities[i + 1]}];
  }
  return g;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct IndexedGraph {
  std::vector<std::string> names;                         // sorted node names
  std::map<std::string, int> index;
  std::vector<std::vector<std::pair<int, double>>> adj;   // (target, weight)

  IndexedGraph(const TraceGraph& g, EdgeWeight weight) {
    names.assign(g.nodes.begin(), g.nodes.end());
    for (int i = 0; i < static_cast<int>(names.size()); ++i) index.emplace(names[i], i);
    adj.resize(names.size());
    for (const auto& [edge, freq] : g.freq) {
      const double w = weight == EdgeWeight::Frequency ? static_cast<double>(freq) : 1.0;
      adj[index.at(edge.first)].push_back({index.at(edge.second), w});
    }
  }

  // Dijkstra; all weights are >= 1.
  std::vector<double> distances_from(int source) const {
    std::vector<double> dist(names.size(), kInf);
    dist[source] = 0.0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    queue.push({0.0, source});
    while (!queue.empty()) {
      auto [d, v] = queue.top();
      queue.pop();
      if (d > dist[v]) continue;
      for (const auto& [to, w] : adj[v]) {
        if (d + w < dist[to]) {
          dist[to] = d + w;
          queue.push({dist[to], to});
        }
      }
    }
    return dist;
  }
};

}  // namespace

std::optional<double> shortest_path_cost(const TraceGraph& g, const std::string& source,
                                         const std::string& target, EdgeWeight weight) {
  for (const std::string* node : {&source, &target}) {
    if (!g.nodes.count(*node)) throw Error("node \"" + *node + "\" not in graph");
  }
  if (source == target) return 0.0;
  const IndexedGraph ig(g, weight);
  const double d = ig.distances_from(ig.index.at(source))[ig.index.at(target)];
  if (d == kInf) return std::nullopt;
  return d;
}

FeatureStats aggregate(const std::vector<double>& values) {
  FeatureStats stats;
  if (values.empty()) return stats;
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  stats.mean = sum / n;
  if (values.size() < 2) return stats;  // a lone value has no spread
  double sq = 0.0;
  for (double v : values) sq += (v - stats.mean) * (v - stats.mean);
  stats.variance = sq / (n - 1.0);
  stats.stddev = std::sqrt(stats.variance);
  return stats;
}

const std::vector<std::string>& centrality_feature_names() {
  static const std::vector<std::string> names = {
      "closeness_centrality_mean",  "closeness_centrality_std",  "closeness_centrality_var",
      "harmonic_centrality_mean",   "harmonic_centrality_std",   "harmonic_centrality_var",
      "in_degree_centrality_mean",  "in_degree_centrality_std",  "in_degree_centrality_var",
      "out_degree_centrality_mean", "out_degree_centrality_std", "out_degree_centrality_var",
  };
  return names;
}

std::map<std::string, double> CentralityFeatures::as_map() const {
  return {
      {"closeness_centrality_mean", closeness.mean},
      {"closeness_centrality_std", closeness.stddev},
      {"closeness_centrality_var", closeness.variance},
      {"harmonic_centrality_mean", harmonic.mean},
      {"harmonic_centrality_std", harmonic.stddev},
      {"harmonic_centrality_var", harmonic.variance},
      {"in_degree_centrality_mean", in_degree.mean},
      {"in_degree_centrality_std", in_degree.stddev},
      {"in_degree_centrality_var", in_degree.variance},
      {"out_degree_centrality_mean", out_degree.mean},
      {"out_degree_centrality_std", out_degree.stddev},
      {"out_degree_centrality_var", out_degree.variance},
  };
}

CentralityFeatures centrality_features(const TraceGraph& g, EdgeWeight weight) {
  CentralityFeatures features;
  const std::size_t n = g.nodes.size();
  if (n == 0) return features;

  const IndexedGraph ig(g, weight);
  std::vector<double> deg_in(n, 0.0), deg_out(n, 0.0);
  for (const auto& [edge, freq] : g.freq) {
    deg_out[static_cast<std::size_t>(ig.index.at(edge.first))] += 1.0;
    deg_in[static_cast<std::size_t>(ig.index.at(edge.second))] += 1.0;
  }

  std::vector<double> closeness(n, 0.0), harmonic(n, 0.0);
  for (std::size_t v = 0; v < n; ++v) {
    const std::vector<double> dist = ig.distances_from(static_cast<int>(v));
    double sum = 0.0;
    double reciprocal = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      if (y == v || dist[y] == kInf) continue;  // unreachable targets contribute nothing
      sum += dist[y];
      reciprocal += static_cast<double>(n - 1) / dist[y];
    }
    closeness[v] = sum > 0.0 ? static_cast<double>(n - 1) / sum : 0.0;
    harmonic[v] = reciprocal;
  }

  features.in_degree = aggregate(deg_in);
  features.out_degree = aggregate(deg_out);
  features.closeness = aggregate(closeness);
  features.harmonic = aggregate(harmonic);
  return features;
}

}  // namespace oclust
