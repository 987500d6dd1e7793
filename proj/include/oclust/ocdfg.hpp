#pragma once

// Object-centric directly-follows graphs: discovery from (sub-)OCELs,
// size/density complexity metrics, improvement ratios against cluster
// bundles, an edge-coverage fitness proxy and DOT export.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "oclust/ocel.hpp"

namespace oclust {

// Artificial start/end markers; not activities and not counted in |A|.
inline const std::string kStartNode = "▷";
inline const std::string kEndNode = "□";

// (source, target, object type); source may be the start marker, target the
// end marker.
using TypedEdge = std::tuple<std::string, std::string, std::string>;

struct OcDfg {
  std::set<std::string> activities;
  std::set<std::string> object_types;
  std::map<TypedEdge, std::int64_t> edge_freq;
  std::map<std::string, std::int64_t> node_freq;  // events per activity

  std::size_t edge_count() const { return edge_freq.size(); }
};

// Per object type, every object's consecutive activity pairs contribute
// typed edges, plus one start and one end marker edge per object with a
// non-empty trace.
OcDfg discover_ocdfg(const Ocel& log);

// |A| x |F|, typed edges including marker edges.
std::int64_t model_size(const OcDfg& m);

// |F| / |A|; denser graphs are more complex. Throws on an empty model.
double model_density(const OcDfg& m);

struct WeightedModel {
  std::int64_t object_count = 0;
  const OcDfg* model = nullptr;
};

// size(main) / object-count-weighted mean of the cluster model sizes.
// Values above 1 mean the clusters yielded simpler models.
double size_improvement(const OcDfg& main, std::span<const WeightedModel> clusters);
double density_improvement(const OcDfg& main, std::span<const WeightedModel> clusters);

// Fraction of the log's per-object consecutive activity pairs whose typed
// edge exists in the model; 1.0 for a model discovered from the log itself.
// Stands in for replay fitness, which is out of scope here.
double fitness_proxy(const OcDfg& m, const Ocel& log);

// Deterministic DOT rendering: one color per object type, edge labels carry
// frequencies, marker nodes drawn distinctly.
std::string export_dot(const OcDfg& m, const std::string& comment = "");

struct ModelStats {
  std::string label;
  std::int64_t object_count = 0;  // 0 for the main model
  std::size_t n_nodes = 0;
  std::size_t n_edges = 0;
  double fitness = 0.0;
  std::int64_t size = 0;
  double density = 0.0;
};

ModelStats model_stats(const OcDfg& m, const Ocel& source_log, std::string label,
                       std::int64_t object_count = 0);

// CsI/CdI are absent when undefined: CsI when every cluster model is empty
// (zero weighted size), CdI when no cluster model has a density.
struct ComplexityReport {
  ModelStats main;
  std::vector<ModelStats> clusters;
  double avg_fitness = 0.0;  // object-count-weighted
  std::optional<double> csi;
  std::optional<double> cdi;
};

nlohmann::json report_to_json(const ComplexityReport& report);

// Aligned plain-text table; floating-point cells rendered to 2 decimals.
std::string render_report_table(const ComplexityReport& report);

}  // namespace oclust
