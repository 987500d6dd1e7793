#include "oclust/sublog.hpp"

#include <algorithm>

namespace oclust {

std::string_view approach_name(Approach a) {
  return a == Approach::Existence ? "existence" : "all";
}

Approach parse_approach(const std::string& name) {
  if (name == "existence") return Approach::Existence;
  if (name == "all") return Approach::All;
  throw Error("unknown approach \"" + name + "\"; expected existence or all");
}

namespace {

// Sub-OCELs keep full omaps and vmaps; the object store shrinks to the
// objects the kept events reference, and the attribute schema to the names
// the kept content uses, so every sub-log is a valid OCEL in its own right.
Ocel project(const Ocel& log, std::vector<Event> events) {
  Ocel sub;
  for (const Event& e : events) {
    for (const auto& [name, value] : e.vmap) {
      sub.attribute_types.emplace(name, log.attribute_types.at(name));
    }
    for (const std::string& oid : e.omap) {
      auto [it, inserted] = sub.objects.emplace(oid, log.objects.at(oid));
      if (inserted) {
        sub.object_types.insert(it->second.otype);
        for (const auto& [name, value] : it->second.ovmap) {
          sub.attribute_types.emplace(name, log.attribute_types.at(name));
        }
      }
    }
  }
  sub.events = std::move(events);
  return sub;
}

}  // namespace

Ocel existence_sublog(const Ocel& log, const std::set<std::string>& cluster) {
  if (cluster.empty()) throw Error("existence extraction over an empty cluster");
  std::vector<Event> kept;
  for (const Event& e : log.events) {
    const bool hit = std::any_of(e.omap.begin(), e.omap.end(), [&](const std::string& oid) {
      return cluster.count(oid) > 0;
    });
    if (hit) kept.push_back(e);
  }
  return project(log, std::move(kept));
}

Ocel all_sublog(const Ocel& log, const std::set<std::string>& cluster,
                const std::string& otype) {
  if (cluster.empty()) throw Error("all extraction over an empty cluster");
  std::vector<Event> kept;
  for (const Event& e : log.events) {
    bool any_of_type = false;
    bool all_in_cluster = true;
    for (const std::string& oid : e.omap) {
      if (log.objects.at(oid).otype != otype) continue;
      any_of_type = true;
      if (!cluster.count(oid)) {
        all_in_cluster = false;
        break;
      }
    }
    if (any_of_type && all_in_cluster) kept.push_back(e);
  }
  return project(log, std::move(kept));
}

SubLogBundle build_bundle(const Ocel& log, const Clustering& clustering, Approach approach) {
  if (clustering.clusters.empty()) throw Error("clustering has no clusters");
  std::set<std::string> seen;
  for (const auto& cluster : clustering.clusters) {
    if (cluster.empty()) throw Error("clustering contains an empty cluster");
    for (const std::string& oid : cluster) {
      auto it = log.objects.find(oid);
      if (it == log.objects.end()) {
        throw Error("clustered object \"" + oid + "\" not in the log");
      }
      if (it->second.otype != clustering.otype) {
        throw Error("clustered object \"" + oid + "\" has type \"" + it->second.otype +
                    "\", expected \"" + clustering.otype + "\"");
      }
      if (!seen.insert(oid).second) {
        throw Error("object \"" + oid + "\" appears in two clusters");
      }
    }
  }

  SubLogBundle bundle;
  bundle.approach = approach;
  bundle.otype = clustering.otype;
  std::set<std::string> covered;
  for (const auto& cluster : clustering.clusters) {
    const std::set<std::string> members(cluster.begin(), cluster.end());
    Ocel sub = approach == Approach::Existence ? existence_sublog(log, members)
                                               : all_sublog(log, members, clustering.otype);
    for (const Event& e : sub.events) covered.insert(e.id);
    bundle.sublogs.push_back(std::move(sub));
  }
  if (approach == Approach::All) {
    for (const Event& e : flatten(log, clustering.otype).events) {
      if (!covered.count(e.id)) bundle.orphan_events.push_back(e.id);
    }
  }
  return bundle;
}

}  // namespace oclust
