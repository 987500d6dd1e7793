#include "oclust/ocdfg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace oclust {

using nlohmann::json;

namespace {

// Per-object activity sequences of one flattened log, ascending object id.
std::map<std::string, std::vector<std::string>> traces_by_object(const FlattenedLog& fl) {
  std::map<std::string, std::vector<std::string>> traces;
  for (const Event& e : fl.events) {
    for (const std::string& oid : fl.case_map.at(e.id)) {
      traces[oid].push_back(e.activity);
    }
  }
  return traces;
}

}  // namespace

OcDfg discover_ocdfg(const Ocel& log) {
  OcDfg m;
  m.object_types = log.object_types;
  for (const Event& e : log.events) {
    m.activities.insert(e.activity);
    ++m.node_freq[e.activity];
  }
  for (const std::string& otype : log.object_types) {
    for (const auto& [oid, trace] : traces_by_object(flatten(log, otype))) {
      ++m.edge_freq[{kStartNode, trace.front(), otype}];
      for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
        ++m.edge_freq[{trace[i], trace[i + 1], otype}];
      }
      ++m.edge_freq[{trace.back(), kEndNode, otype}];
    }
  }
  return m;
}

std::int64_t model_size(const OcDfg& m) {
  return static_cast<std::int64_t>(m.activities.size()) *
         static_cast<std::int64_t>(m.edge_freq.size());
}

double model_density(const OcDfg& m) {
  if (m.activities.empty()) throw Error("density of an empty model is undefined");
  return static_cast<double>(m.edge_freq.size()) / static_cast<double>(m.activities.size());
}

namespace {

double weighted_mean(std::span<const WeightedModel> clusters, double (*metric)(const OcDfg&)) {
  if (clusters.empty()) throw Error("improvement requires at least one cluster model");
  double weighted = 0.0, total = 0.0;
  for (const WeightedModel& c : clusters) {
    if (c.object_count <= 0) throw Error("cluster object counts must be positive");
    weighted += static_cast<double>(c.object_count) * metric(*c.model);
    total += static_cast<double>(c.object_count);
  }
  const double mean = weighted / total;
  if (mean == 0.0) throw Error("improvement undefined: all cluster models are empty");
  return mean;
}

double size_metric(const OcDfg& m) { return static_cast<double>(model_size(m)); }

}  // namespace

double size_improvement(const OcDfg& main, std::span<const WeightedModel> clusters) {
  return static_cast<double>(model_size(main)) / weighted_mean(clusters, size_metric);
}

double density_improvement(const OcDfg& main, std::span<const WeightedModel> clusters) {
  return model_density(main) / weighted_mean(clusters, model_density);
}

double fitness_proxy(const OcDfg& m, const Ocel& log) {
  std::int64_t total = 0, covered = 0;
  for (const std::string& otype : log.object_types) {
    for (const auto& [oid, trace] : traces_by_object(flatten(log, otype))) {
      for (std::size_t i = 0; i + 1 < trace.size(); ++i) {
        ++total;
        if (m.edge_freq.count({trace[i], trace[i + 1], otype})) ++covered;
      }
    }
  }
  if (total == 0) return 1.0;
  return static_cast<double>(covered) / static_cast<double>(total);
}

namespace {

std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out += c;
  }
  out += '"';
  return out;
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

std::string export_dot(const OcDfg& m, const std::string& comment) {
  std::ostringstream out;
  out << "digraph ocdfg {\n";
  if (!comment.empty()) out << "  // " << comment << "\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=box, style=rounded];\n";

  std::map<std::string, const char*> colors;
  std::size_t idx = 0;
  for (const std::string& otype : m.object_types) {
    colors.emplace(otype, kPalette[idx % (sizeof(kPalette) / sizeof(kPalette[0]))]);
    out << "  // object type " << dot_quote(otype) << " -> " << colors.at(otype) << "\n";
    ++idx;
  }

  if (!m.edge_freq.empty()) {
    out << "  " << dot_quote(kStartNode)
        << " [label=\"start\", shape=circle, style=filled, fillcolor=\"#d9d9d9\"];\n";
    out << "  " << dot_quote(kEndNode)
        << " [label=\"end\", shape=doublecircle, style=filled, fillcolor=\"#d9d9d9\"];\n";
  }
  for (const std::string& a : m.activities) {
    std::string label = a;
    if (auto it = m.node_freq.find(a); it != m.node_freq.end()) {
      label += "\n" + std::to_string(it->second);
    }
    out << "  " << dot_quote(a) << " [label=" << dot_quote(label) << "];\n";
  }
  for (const auto& [edge, freq] : m.edge_freq) {
    const auto& [src, dst, otype] = edge;
    const char* color = colors.count(otype) ? colors.at(otype) : "#000000";
    out << "  " << dot_quote(src) << " -> " << dot_quote(dst) << " [label=\""
        << freq << "\", color=\"" << color << "\", fontcolor=\"" << color << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

ModelStats model_stats(const OcDfg& m, const Ocel& source_log, std::string label,
                       std::int64_t object_count) {
  ModelStats stats;
  stats.label = std::move(label);
  stats.object_count = object_count;
  stats.n_nodes = m.activities.size();
  stats.n_edges = m.edge_freq.size();
  stats.fitness = fitness_proxy(m, source_log);
  stats.size = model_size(m);
  // an event-less cluster has no model; its row reports density 0
  stats.density = m.activities.empty() ? 0.0 : model_density(m);
  return stats;
}

namespace {

json stats_to_json(const ModelStats& s) {
  json doc = {{"label", s.label},   {"n_nodes", s.n_nodes}, {"n_edges", s.n_edges},
              {"fitness", s.fitness}, {"size", s.size},     {"density", s.density}};
  if (s.object_count > 0) doc["object_count"] = s.object_count;
  return doc;
}

std::string two_decimals(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

json report_to_json(const ComplexityReport& report) {
  json clusters = json::array();
  for (const ModelStats& s : report.clusters) clusters.push_back(stats_to_json(s));
  return {{"main", stats_to_json(report.main)},
          {"clusters", std::move(clusters)},
          {"avg_fitness", report.avg_fitness},
          {"csi", report.csi ? json(*report.csi) : json()},
          {"cdi", report.cdi ? json(*report.cdi) : json()}};
}

std::string render_report_table(const ComplexityReport& report) {
  const std::vector<std::string> header = {"Model",   "No. of Nodes", "No. of Edges",
                                           "Fitness", "Size",         "Density",
                                           "Avg. Fitness", "CsI",     "CdI"};
  std::vector<std::vector<std::string>> rows;
  auto stat_row = [](const ModelStats& s) {
    return std::vector<std::string>{s.label,
                                    std::to_string(s.n_nodes),
                                    std::to_string(s.n_edges),
                                    two_decimals(s.fitness),
                                    std::to_string(s.size),
                                    two_decimals(s.density),
                                    "",
                                    "",
                                    ""};
  };
  rows.push_back(stat_row(report.main));
  for (std::size_t i = 0; i < report.clusters.size(); ++i) {
    std::vector<std::string> row = stat_row(report.clusters[i]);
    if (i == 0) {
      row[6] = two_decimals(report.avg_fitness);
      row[7] = report.csi ? two_decimals(*report.csi) : "-";
      row[8] = report.cdi ? two_decimals(*report.cdi) : "-";
    }
    rows.push_back(std::move(row));
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }

  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c];
      if (c + 1 < row.size()) out << std::string(width[c] - row[c].size() + 2, ' ');
    }
    out << "\n";
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  out << "fitness = fraction of directly-follows pairs the model covers\n";
  return out.str();
}

}  // namespace oclust
