#pragma once

// Directed weighted graph of a trace and the four centrality measures
// (in-degree, out-degree, closeness, harmonic) with their aggregates.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "oclust/ocel.hpp"

namespace oclust {

// Nodes are the distinct activities of a trace; edges the distinct adjacent
// pairs (x, y) with x != y, weighted by how often the pair occurs.
struct TraceGraph {
  std::set<std::string> nodes;
  std::map<std::pair<std::string, std::string>, int> freq;

  std::size_t edge_count() const { return freq.size(); }
};

TraceGraph build_trace_graph(const std::vector<std::string>& activities);
inline TraceGraph build_trace_graph(const Trace& trace) {
  return build_trace_graph(trace.activities);
}

// Shortest paths on trace graphs use the edge frequencies as weights by
// default; Hops treats every edge as weight 1.
enum class EdgeWeight { Frequency, Hops };

// Minimal total weight over all paths, 0 for source == target, nullopt when
// the target is unreachable. Throws if either node is absent.
std::optional<double> shortest_path_cost(const TraceGraph& g, const std::string& source,
                                         const std::string& target,
                                         EdgeWeight weight = EdgeWeight::Frequency);

struct FeatureStats {
  double mean = 0.0;
  double variance = 0.0;  // sample variance (n-1 divisor); 0 below two values
  double stddev = 0.0;
};

FeatureStats aggregate(const std::vector<double>& values);

struct CentralityFeatures {
  FeatureStats in_degree;
  FeatureStats out_degree;
  FeatureStats closeness;
  FeatureStats harmonic;

  // The 12 aggregates under their canonical feature names.
  std::map<std::string, double> as_map() const;
};

// Derived feature names, ascending; reserved in feature tables.
const std::vector<std::string>& centrality_feature_names();

// Per-node centrality vectors aggregated to mean/variance/stddev each.
// Degree centralities are raw edge counts. Closeness of v is
// (|V|-1) / sum of shortest-path costs to the reachable targets (0 when v
// reaches nothing); harmonic is the sum of (|V|-1)/SP(v,y) over reachable
// y != v. An empty graph yields all zeros.
CentralityFeatures centrality_features(const TraceGraph& g,
                                       EdgeWeight weight = EdgeWeight::Frequency);

}  // namespace oclust
