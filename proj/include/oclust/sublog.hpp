#pragma once

// Assignment of events to clusters under the existence and all semantics,
// materializing one sub-OCEL per cluster.

#include <set>
#include <string>
#include <vector>

#include "oclust/clustering.hpp"
#include "oclust/ocel.hpp"

namespace oclust {

enum class Approach { Existence, All };

std::string_view approach_name(Approach a);
Approach parse_approach(const std::string& name);

// Events referencing at least one cluster object. The same event may land in
// several clusters' sub-logs.
Ocel existence_sublog(const Ocel& log, const std::set<std::string>& cluster);

// Events whose objects of `otype` are all in the cluster (and at least one
// is present). Events split across clusters are assigned to none.
Ocel all_sublog(const Ocel& log, const std::set<std::string>& cluster,
                const std::string& otype);

struct SubLogBundle {
  Approach approach = Approach::Existence;
  std::string otype;
  std::vector<Ocel> sublogs;                 // aligned with clustering.clusters
  std::vector<std::string> orphan_events;    // all-approach: events in no cluster
};

// Validates the clustering (non-empty disjoint clusters of `otype` objects)
// and extracts one sub-OCEL per cluster.
SubLogBundle build_bundle(const Ocel& log, const Clustering& clustering, Approach approach);

}  // namespace oclust
