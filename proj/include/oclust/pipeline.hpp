#pragma once

// End-to-end orchestration: parse -> profile -> cluster -> split ->
// discover -> report, with deterministic artifacts on disk.

#include <cstdint>
#include <string>

#include "oclust/clustering.hpp"
#include "oclust/distance.hpp"
#include "oclust/ocdfg.hpp"
#include "oclust/sublog.hpp"

namespace oclust {

struct RunConfig {
  std::string input_path;
  std::string otype;
  Algorithm algorithm = Algorithm::KMeans;
  int k = 0;                       // fixed cluster count; 0 means sweep
  int k_min = 0;
  int k_max = 0;                   // sweep range, used when k == 0
  std::uint64_t seed = 0;
  Linkage linkage = Linkage::Average;
  Approach approach = Approach::Existence;
  DistanceWeights weights;
  std::string out_dir;

  void validate() const;  // throws on contradictory or missing settings
};

// Module errors surface with the name of the pipeline stage that failed.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message)
      : Error("stage " + stage + ": " + message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Stable digest identifying the run settings (output directory excluded, so
// re-runs into different directories produce identical artifacts).
std::string config_digest(const RunConfig& cfg);

// Runs the full pipeline and writes all artifacts into cfg.out_dir:
// profiles.csv, features.json, clustering.json (plus sweep.json and
// dendrogram.json where applicable), cluster_<i>.jsonocel, orphans.json for
// the all approach, main.dot, cluster_<i>.dot, report.json and report.txt.
// Every artifact embeds the config digest.
void run_pipeline(const RunConfig& cfg);

// Report assembly shared by run_pipeline and the CLI: main model vs every
// cluster model, weighted by cluster object counts.
ComplexityReport build_report(const Ocel& log, const Clustering& clustering,
                              const SubLogBundle& bundle);

}  // namespace oclust
