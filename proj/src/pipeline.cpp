#include "oclust/pipeline.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace oclust {

using nlohmann::json;

namespace {

bool verbose() {
  const char* env = std::getenv("OCLUST_VERBOSE");
  return env != nullptr && *env != '\0' && std::string(env) != "0";
}

void note(const std::string& message) {
  if (verbose()) std::fprintf(stderr, "oclust: %s\n", message.c_str());
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

std::string format_weight(double w) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write \"" + path + "\"");
  out << content;
}

template <typename Fn>
auto stage(const std::string& name, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  if (input_path.empty()) throw Error("missing input path");
  if (otype.empty()) throw Error("missing object type");
  if (out_dir.empty()) throw Error("missing output directory");
  if (k == 0) {
    if (k_min < 1 || k_min > k_max) {
      throw Error("invalid k range [" + std::to_string(k_min) + ", " + std::to_string(k_max) +
                  "]");
    }
  } else if (k < 1) {
    throw Error("k must be at least 1");
  }
  if (weights.trace < 0.0 || weights.numeric < 0.0 || weights.categorical < 0.0 ||
      weights.trace + weights.numeric + weights.categorical <= 0.0) {
    throw Error("distance weights must be non-negative and not all zero");
  }
}

std::string config_digest(const RunConfig& cfg) {
  std::ostringstream canon;
  canon << "input=" << cfg.input_path << ";otype=" << cfg.otype
        << ";algorithm=" << algorithm_name(cfg.algorithm) << ";k=" << cfg.k << ";k_range="
        << cfg.k_min << ":" << cfg.k_max << ";seed=" << cfg.seed
        << ";linkage=" << linkage_name(cfg.linkage)
        << ";approach=" << approach_name(cfg.approach) << ";weights="
        << format_weight(cfg.weights.trace) << "," << format_weight(cfg.weights.numeric) << ","
        << format_weight(cfg.weights.categorical);
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canon.str())));
  return buf;
}

ComplexityReport build_report(const Ocel& log, const Clustering& clustering,
                              const SubLogBundle& bundle) {
  if (bundle.sublogs.empty()) throw Error("report requires at least one cluster");
  if (bundle.sublogs.size() != clustering.clusters.size()) {
    throw Error("bundle does not match the clustering");
  }

  ComplexityReport report;
  const OcDfg main_model = discover_ocdfg(log);
  report.main = model_stats(main_model, log, "main");

  std::vector<OcDfg> models;
  models.reserve(bundle.sublogs.size());
  for (const Ocel& sub : bundle.sublogs) models.push_back(discover_ocdfg(sub));

  // empty cluster models count as size 0 toward CsI but cannot contribute a
  // density, so CdI averages over the non-empty models only; the ratios are
  // left undefined when nothing remains to average
  std::vector<WeightedModel> by_size, by_density;
  bool any_size = false;
  double fitness_sum = 0.0, weight_sum = 0.0;
  for (std::size_t i = 0; i < models.size(); ++i) {
    const auto count = static_cast<std::int64_t>(clustering.clusters[i].size());
    report.clusters.push_back(model_stats(models[i], bundle.sublogs[i],
                                          "cluster " + std::to_string(i), count));
    by_size.push_back({count, &models[i]});
    if (!models[i].activities.empty()) by_density.push_back({count, &models[i]});
    any_size = any_size || model_size(models[i]) > 0;
    fitness_sum += static_cast<double>(count) * report.clusters.back().fitness;
    weight_sum += static_cast<double>(count);
  }
  report.avg_fitness = fitness_sum / weight_sum;
  if (any_size) report.csi = size_improvement(main_model, by_size);
  if (!by_density.empty()) report.cdi = density_improvement(main_model, by_density);
  return report;
}

void run_pipeline(const RunConfig& cfg) {
  stage("config", [&] { cfg.validate(); });
  const std::string digest = config_digest(cfg);

  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw StageError("config", "cannot create \"" + cfg.out_dir + "\": " + ec.message());
  const auto path = [&](const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
  };
  const auto write_json = [&](const std::string& name, json doc) {
    doc["config_digest"] = digest;
    write_text_file(path(name), doc.dump(2) + "\n");
  };

  const Ocel log = stage("parse", [&] { return parse_ocel_file(cfg.input_path); });
  note("parsed " + std::to_string(log.events.size()) + " events, " +
       std::to_string(log.objects.size()) + " objects");

  const auto [profiles, table] = stage("profile", [&] {
    std::vector<ObjectProfile> p = build_profiles(log, cfg.otype);
    FeatureTable t = encode(p, cfg.otype);
    return std::make_pair(std::move(p), std::move(t));
  });
  {
    std::ostringstream csv;
    write_profiles_csv(profiles, csv, "config_digest=" + digest);
    write_text_file(path("profiles.csv"), csv.str());
    write_json("features.json", feature_table_to_json(table));
  }
  note("profiled " + std::to_string(profiles.size()) + " objects of type " + cfg.otype);

  const Clustering clustering = stage("clustering", [&] {
    DistanceMatrix matrix;
    if (cfg.algorithm != Algorithm::KMeans) {
      if (table.rows() >= 2) {
        matrix = distance_matrix(table, cfg.weights);
      } else {
        matrix.ids = table.ids;  // a lone object: nothing to measure
        matrix.values.assign(1, std::vector<double>(1, 0.0));
      }
    }
    if (cfg.algorithm == Algorithm::Agglomerative) {
      write_json("dendrogram.json", [&] {
        json merges = json::array();
        for (const Merge& m : dendrogram(matrix, cfg.linkage)) {
          merges.push_back({{"a", m.a}, {"b", m.b}, {"distance", m.distance}});
        }
        return json{{"linkage", linkage_name(cfg.linkage)}, {"merges", std::move(merges)}};
      }());
    }
    Clustering result;
    if (cfg.k > 0) {
      switch (cfg.algorithm) {
        case Algorithm::KMeans: result = kmeans(table, cfg.k, cfg.seed); break;
        case Algorithm::Agglomerative:
          result = agglomerative(matrix, cfg.k, cfg.linkage);
          break;
        case Algorithm::KMedoids: result = kmedoids(matrix, cfg.k, cfg.seed); break;
      }
      result.otype = cfg.otype;
    } else {
      std::vector<SweepEntry> entries =
          sweep_k(table, matrix, cfg.k_min, cfg.k_max, cfg.algorithm, cfg.seed, cfg.linkage);
      json sweep = json::array();
      for (SweepEntry& entry : entries) {
        sweep.push_back({{"k", entry.k}, {"score", entry.score}, {"best", entry.best}});
        if (entry.best) result = std::move(entry.clustering);
      }
      write_json("sweep.json", json{{"entries", std::move(sweep)}});
    }
    return result;
  });
  write_json("clustering.json", clustering_to_json(clustering));
  note("clustered into k=" + std::to_string(clustering.k) + " using " + clustering.method);

  const SubLogBundle bundle =
      stage("split", [&] { return build_bundle(log, clustering, cfg.approach); });
  for (std::size_t i = 0; i < bundle.sublogs.size(); ++i) {
    write_text_file(path("cluster_" + std::to_string(i) + ".jsonocel"),
                    to_jsonocel(bundle.sublogs[i], {{"oclust:config-digest", digest}}));
  }
  if (cfg.approach == Approach::All) {
    write_json("orphans.json", json{{"orphan_events", bundle.orphan_events}});
  }

  stage("discover", [&] {
    write_text_file(path("main.dot"),
                    export_dot(discover_ocdfg(log), "config_digest=" + digest));
    for (std::size_t i = 0; i < bundle.sublogs.size(); ++i) {
      write_text_file(path("cluster_" + std::to_string(i) + ".dot"),
                      export_dot(discover_ocdfg(bundle.sublogs[i]),
                                 "config_digest=" + digest));
    }
    return 0;
  });

  const ComplexityReport report =
      stage("report", [&] { return build_report(log, clustering, bundle); });
  write_json("report.json", report_to_json(report));
  write_text_file(path("report.txt"),
                  "# config_digest=" + digest + "\n" + render_report_table(report));
  note("report written to " + cfg.out_dir);
}

}  // namespace oclust
