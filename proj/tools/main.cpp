// Command-line front end: profile, cluster, split, discover and run
// subcommands over JSON-OCEL files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "oclust/pipeline.hpp"

namespace {

using nlohmann::json;
using namespace oclust;

json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open \"" + path + "\"");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error("invalid JSON in \"" + path + "\": " + e.what());
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write \"" + path + "\"");
  out << content;
}

std::string out_path(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

DistanceWeights parse_weights(const std::string& text) {
  DistanceWeights w;
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf", &w.trace, &w.numeric, &w.categorical) != 3) {
    throw Error("expected --weights trace,num,cat (e.g. 1,1,1)");
  }
  return w;
}

std::pair<int, int> parse_k_range(const std::string& text) {
  int lo = 0, hi = 0;
  if (std::sscanf(text.c_str(), "%d:%d", &lo, &hi) != 2 || lo < 1 || lo > hi) {
    throw Error("expected --k-range MIN:MAX with 1 <= MIN <= MAX");
  }
  return {lo, hi};
}

struct Options {
  std::string input, features, clustering, object_type, out = ".";
  std::string algorithm = "kmeans", linkage = "average", approach = "existence";
  std::string weights = "1,1,1", k_range;
  int k = 0;
  std::uint64_t seed = 0;
  std::string label = "model";
  bool dump_matrix = false;
};

int cmd_profile(const Options& opt) {
  const Ocel log = parse_ocel_file(opt.input);
  const std::vector<ObjectProfile> profiles = build_profiles(log, opt.object_type);
  const FeatureTable table = encode(profiles, opt.object_type);
  std::ostringstream csv;
  write_profiles_csv(profiles, csv);
  write_file(out_path(opt.out, "profiles.csv"), csv.str());
  write_file(out_path(opt.out, "features.json"), feature_table_to_json(table).dump(2) + "\n");
  std::cout << "wrote profiles.csv and features.json for " << profiles.size() << " objects\n";
  return 0;
}

int cmd_cluster(const Options& opt) {
  const FeatureTable table = feature_table_from_json(load_json(opt.features));
  const Algorithm algorithm = parse_algorithm(opt.algorithm);
  const Linkage linkage = parse_linkage(opt.linkage);
  const DistanceWeights weights = parse_weights(opt.weights);

  DistanceMatrix matrix;
  if (algorithm != Algorithm::KMeans || opt.dump_matrix) {
    if (table.rows() >= 2) {
      matrix = distance_matrix(table, weights);
    } else {
      matrix.ids = table.ids;
      matrix.values.assign(1, std::vector<double>(1, 0.0));
    }
  }
  if (opt.dump_matrix && matrix.size() > 0) {
    std::ostringstream csv;
    write_matrix_csv(matrix, csv);
    write_file(out_path(opt.out, "matrix.csv"), csv.str());
  }
  if (algorithm == Algorithm::Agglomerative) {
    json merges = json::array();
    for (const Merge& m : dendrogram(matrix, linkage)) {
      merges.push_back({{"a", m.a}, {"b", m.b}, {"distance", m.distance}});
    }
    write_file(out_path(opt.out, "dendrogram.json"),
               json{{"linkage", opt.linkage}, {"merges", std::move(merges)}}.dump(2) + "\n");
  }

  Clustering result;
  if (!opt.k_range.empty()) {
    const auto [lo, hi] = parse_k_range(opt.k_range);
    std::vector<SweepEntry> entries = sweep_k(table, matrix, lo, hi, algorithm, opt.seed, linkage);
    json sweep = json::array();
    for (SweepEntry& entry : entries) {
      sweep.push_back({{"k", entry.k}, {"score", entry.score}, {"best", entry.best}});
      if (entry.best) result = std::move(entry.clustering);
    }
    write_file(out_path(opt.out, "sweep.json"), json{{"entries", std::move(sweep)}}.dump(2) + "\n");
  } else {
    if (opt.k < 1) throw Error("one of --k or --k-range is required");
    switch (algorithm) {
      case Algorithm::KMeans: result = kmeans(table, opt.k, opt.seed); break;
      case Algorithm::Agglomerative: result = agglomerative(matrix, opt.k, linkage); break;
      case Algorithm::KMedoids: result = kmedoids(matrix, opt.k, opt.seed); break;
    }
    result.otype = table.otype;
  }
  write_file(out_path(opt.out, "clustering.json"), clustering_to_json(result).dump(2) + "\n");
  std::cout << "wrote clustering.json with k=" << result.k << "\n";
  return 0;
}

int cmd_split(const Options& opt) {
  const Ocel log = parse_ocel_file(opt.input);
  const Clustering clustering = clustering_from_json(load_json(opt.clustering));
  const SubLogBundle bundle = build_bundle(log, clustering, parse_approach(opt.approach));
  for (std::size_t i = 0; i < bundle.sublogs.size(); ++i) {
    write_ocel_file(bundle.sublogs[i],
                    out_path(opt.out, "cluster_" + std::to_string(i) + ".jsonocel"));
  }
  if (bundle.approach == Approach::All) {
    write_file(out_path(opt.out, "orphans.json"),
               json{{"orphan_events", bundle.orphan_events}}.dump(2) + "\n");
  }
  std::cout << "wrote " << bundle.sublogs.size() << " sub-logs\n";
  return 0;
}

int cmd_discover(const Options& opt) {
  const Ocel log = parse_ocel_file(opt.input);
  const OcDfg model = discover_ocdfg(log);
  write_file(out_path(opt.out, opt.label + ".dot"), export_dot(model));
  const ModelStats stats = model_stats(model, log, opt.label);
  write_file(out_path(opt.out, opt.label + ".json"),
             json{{"label", stats.label},
                  {"n_nodes", stats.n_nodes},
                  {"n_edges", stats.n_edges},
                  {"fitness", stats.fitness},
                  {"size", stats.size},
                  {"density", stats.density}}
                     .dump(2) +
                 "\n");
  std::cout << "wrote " << opt.label << ".dot (" << stats.n_nodes << " nodes, "
            << stats.n_edges << " edges)\n";
  return 0;
}

int cmd_run(const Options& opt) {
  RunConfig cfg;
  cfg.input_path = opt.input;
  cfg.otype = opt.object_type;
  cfg.algorithm = parse_algorithm(opt.algorithm);
  cfg.seed = opt.seed;
  cfg.linkage = parse_linkage(opt.linkage);
  cfg.approach = parse_approach(opt.approach);
  cfg.weights = parse_weights(opt.weights);
  cfg.out_dir = opt.out;
  if (!opt.k_range.empty()) {
    std::tie(cfg.k_min, cfg.k_max) = parse_k_range(opt.k_range);
  } else {
    cfg.k = opt.k;
  }
  run_pipeline(cfg);
  std::cout << "pipeline finished; artifacts in " << cfg.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Object-centric event log clustering toolkit"};
  app.require_subcommand(1);
  Options opt;

  auto add_common_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", opt.out, "Output directory")->capture_default_str();
  };

  CLI::App* profile = app.add_subcommand("profile", "Extract object profiles from a log");
  profile->add_option("--input", opt.input, "JSON-OCEL input file")->required();
  profile->add_option("--object-type", opt.object_type, "Object type to profile")->required();
  add_common_out(profile);

  CLI::App* cluster = app.add_subcommand("cluster", "Cluster profiled objects");
  cluster->add_option("--features", opt.features, "features.json from the profile stage")
      ->required();
  cluster->add_option("--algorithm", opt.algorithm, "kmeans|agglomerative|kmedoids")
      ->capture_default_str();
  cluster->add_option("--k", opt.k, "Fixed number of clusters");
  cluster->add_option("--k-range", opt.k_range, "Sweep range MIN:MAX scored by Calinski-Harabasz");
  cluster->add_option("--seed", opt.seed, "RNG seed")->capture_default_str();
  cluster->add_option("--linkage", opt.linkage, "average|single|complete")->capture_default_str();
  cluster->add_option("--weights", opt.weights, "Distance weights trace,num,cat")
      ->capture_default_str();
  cluster->add_flag("--dump-matrix", opt.dump_matrix,
                    "Also write the pairwise distance matrix as matrix.csv");
  add_common_out(cluster);

  CLI::App* split = app.add_subcommand("split", "Materialize per-cluster sub-logs");
  split->add_option("--input", opt.input, "JSON-OCEL input file")->required();
  split->add_option("--clustering", opt.clustering, "clustering.json from the cluster stage")
      ->required();
  split->add_option("--approach", opt.approach, "existence|all")->capture_default_str();
  add_common_out(split);

  CLI::App* discover = app.add_subcommand("discover", "Discover an OC-DFG from a log");
  discover->add_option("--input", opt.input, "JSON-OCEL input file")->required();
  discover->add_option("--label", opt.label, "Output file stem")->capture_default_str();
  add_common_out(discover);

  CLI::App* run = app.add_subcommand("run", "Full pipeline: profile, cluster, split, report");
  run->add_option("--input", opt.input, "JSON-OCEL input file")->required();
  run->add_option("--object-type", opt.object_type, "Object type to cluster")->required();
  run->add_option("--algorithm", opt.algorithm, "kmeans|agglomerative|kmedoids")
      ->capture_default_str();
  run->add_option("--k", opt.k, "Fixed number of clusters");
  run->add_option("--k-range", opt.k_range, "Sweep range MIN:MAX scored by Calinski-Harabasz");
  run->add_option("--seed", opt.seed, "RNG seed")->capture_default_str();
  run->add_option("--linkage", opt.linkage, "average|single|complete")->capture_default_str();
  run->add_option("--approach", opt.approach, "existence|all")->capture_default_str();
  run->add_option("--weights", opt.weights, "Distance weights trace,num,cat")
      ->capture_default_str();
  add_common_out(run);

  CLI11_PARSE(app, argc, argv);

  try {
    if (profile->parsed()) return cmd_profile(opt);
    if (cluster->parsed()) return cmd_cluster(opt);
    if (split->parsed()) return cmd_split(opt);
    if (discover->parsed()) return cmd_discover(opt);
    if (run->parsed()) return cmd_run(opt);
  } catch (const StageError& e) {
    std::cerr << "error in " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
