// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion carries its runtime budget.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oclust/pipeline.hpp"
#include "support/log_builder.hpp"
#include "support/oracles.hpp"
#include "support/random_log.hpp"

using namespace oclust;
namespace fs = std::filesystem;
namespace support = oclust::testing;

namespace {

struct Criterion {
  int number;
  std::string title;
  double budget_seconds;
  bool (*run)(std::string& detail);
};

bool nearly(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string fixture_path() {
  return std::string(OCLUST_FIXTURE_DIR) + "/b2b_sample.jsonocel";
}

// ---------------------------------------------------------------------------
// 1. Formula fidelity: size and density reproduce the published values on
//    models built with the same node/edge counts.
// ---------------------------------------------------------------------------

OcDfg model_with_counts(std::size_t n_nodes, std::size_t n_edges) {
  OcDfg m;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "a%02u", static_cast<unsigned>(i));
    names.push_back(buf);
    m.activities.insert(buf);
    m.node_freq[buf] = 1;
  }
  std::size_t added = 0;
  for (std::size_t t = 0; added < n_edges; ++t) {
    const std::string otype = "t" + std::to_string(t);
    m.object_types.insert(otype);
    for (std::size_t i = 0; i < n_nodes && added < n_edges; ++i) {
      for (std::size_t j = 0; j < n_nodes && added < n_edges; ++j) {
        m.edge_freq[{names[i], names[j], otype}] = 1;
        ++added;
      }
    }
  }
  return m;
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }

bool criterion_formulas(std::string& detail) {
  const std::int64_t size = model_size(model_with_counts(25, 118));
  if (size != 2950) {
    detail = "size(25,118) = " + std::to_string(size) + ", expected 2950";
    return false;
  }
  const std::array<std::array<double, 3>, 3> density_cases = {{
      {24.0, 106.0, 4.42}, {12.0, 34.0, 2.83}, {10.0, 20.0, 2.00}
  }};
  for (const auto& [nodes, edges, expected] : density_cases) {
    const double d = model_density(model_with_counts(
        static_cast<std::size_t>(nodes), static_cast<std::size_t>(edges)));
    if (!nearly(round2(d), expected, 0.005)) {
      detail = "density(" + std::to_string(static_cast<int>(nodes)) + "," +
               std::to_string(static_cast<int>(edges)) + ") = " + std::to_string(d) +
               ", expected " + std::to_string(expected);
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 2. Worked-example fidelity: the running trace's graph, its in-degree
//    aggregates, and the weighted shortest-path example.
// ---------------------------------------------------------------------------

bool criterion_worked_examples(std::string& detail) {
  const TraceGraph g = build_trace_graph({"a", "b", "c", "d", "a", "b", "d"});
  const std::map<std::pair<std::string, std::string>, int> expected_edges = {
      {{"a", "b"}, 2}, {{"b", "c"}, 1}, {{"c", "d"}, 1}, {{"d", "a"}, 1}, {{"b", "d"}, 1}};
  if (g.nodes != std::set<std::string>{"a", "b", "c", "d"} || g.freq != expected_edges) {
    detail = "trace graph structure differs from the worked example";
    return false;
  }
  const CentralityFeatures f = centrality_features(g);
  if (f.in_degree.mean != 1.25 || f.in_degree.variance != 0.25 || f.in_degree.stddev != 0.5) {
    char buf[120];
    std::snprintf(buf, sizeof(buf), "in-degree aggregates (%.6g, %.6g, %.6g) != (1.25, 0.25, 0.5)",
                  f.in_degree.mean, f.in_degree.variance, f.in_degree.stddev);
    detail = buf;
    return false;
  }

  TraceGraph weighted;
  weighted.nodes = {"a", "b", "c", "d", "e"};
  weighted.freq[{"a", "b"}] = 4;
  weighted.freq[{"a", "d"}] = 2;
  weighted.freq[{"b", "c"}] = 5;
  weighted.freq[{"b", "d"}] = 5;
  weighted.freq[{"d", "e"}] = 2;
  weighted.freq[{"e", "c"}] = 3;
  const auto cost = shortest_path_cost(weighted, "a", "c");
  if (!cost || *cost != 7.0) {
    detail = "shortest path a->c = " + (cost ? std::to_string(*cost) : std::string("unreachable")) +
             ", expected 7";
    return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// 3. Semantics suite: existence covers, all is disjoint, on 200 random logs
//    against a per-event membership oracle.
// ---------------------------------------------------------------------------

Clustering random_partition(std::mt19937_64& rng, const Ocel& log, const std::string& otype) {
  std::vector<std::string> ids;
  for (const auto& [id, rec] : log.objects) {
    if (rec.otype == otype) ids.push_back(id);
  }
  Clustering c;
  c.otype = otype;
  c.method = "manual";
  const std::size_t k = 1 + rng() % std::min<std::size_t>(4, ids.size());
  c.clusters.resize(k);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    c.clusters[i < k ? i : rng() % k].push_back(ids[i]);
  }
  c.k = static_cast<int>(k);
  for (std::size_t i = 0; i < c.clusters.size(); ++i) {
    std::sort(c.clusters[i].begin(), c.clusters[i].end());
    for (const std::string& id : c.clusters[i]) c.assignment.emplace(id, i);
  }
  return c;
}

std::set<std::string> ids_of(const Ocel& log) {
  std::set<std::string> ids;
  for (const Event& e : log.events) ids.insert(e.id);
  return ids;
}

// Shared with criterion 8: the logs, clusterings and bundles of criterion 3.
struct SemanticsRun {
  std::vector<Ocel> logs;
  bool ran = false;
};
SemanticsRun g_semantics;

bool criterion_semantics(std::string& detail) {
  std::mt19937_64 rng(20260808);
  for (int round = 0; round < 200; ++round) {
    const Ocel log = support::random_ocel(rng);
    g_semantics.logs.push_back(log);
    std::vector<std::string> candidates;
    for (const std::string& t : log.object_types) {
      for (const auto& [id, rec] : log.objects) {
        if (rec.otype == t) {
          candidates.push_back(t);
          break;
        }
      }
    }
    const std::string otype = candidates[rng() % candidates.size()];
    const Clustering clustering = random_partition(rng, log, otype);
    const FlattenedLog fl = flatten(log, otype);

    for (Approach approach : {Approach::Existence, Approach::All}) {
      const SubLogBundle bundle = build_bundle(log, clustering, approach);
      std::vector<std::set<std::string>> got;
      for (const Ocel& sub : bundle.sublogs) got.push_back(ids_of(sub));

      std::set<std::string> covered;
      for (const Event& e : log.events) {
        std::set<std::string> type_objects;
        for (const std::string& oid : e.omap) {
          if (log.objects.at(oid).otype == otype) type_objects.insert(oid);
        }
        for (std::size_t i = 0; i < clustering.clusters.size(); ++i) {
          const std::set<std::string> members(clustering.clusters[i].begin(),
                                              clustering.clusters[i].end());
          bool expect;
          if (approach == Approach::Existence) {
            expect = std::any_of(e.omap.begin(), e.omap.end(),
                                 [&](const std::string& o) { return members.count(o) > 0; });
          } else {
            expect = !type_objects.empty() &&
                     std::includes(members.begin(), members.end(), type_objects.begin(),
                                   type_objects.end());
          }
          if (got[i].count(e.id) != (expect ? 1u : 0u)) {
            detail = "round " + std::to_string(round) + ": event " + e.id +
                     " membership disagrees with the oracle";
            return false;
          }
          if (expect) covered.insert(e.id);
        }
      }

      if (approach == Approach::Existence) {
        for (const Event& e : fl.events) {
          if (!covered.count(e.id)) {
            detail = "round " + std::to_string(round) + ": event " + e.id + " not covered";
            return false;
          }
        }
      } else {
        for (std::size_t i = 0; i < got.size(); ++i) {
          for (std::size_t j = i + 1; j < got.size(); ++j) {
            for (const std::string& id : got[i]) {
              if (got[j].count(id)) {
                detail = "round " + std::to_string(round) + ": event " + id +
                         " in two all-approach sub-logs";
                return false;
              }
            }
          }
        }
      }
    }
  }
  g_semantics.ran = true;
  return true;
}

// ---------------------------------------------------------------------------
// 4. Identity bundle: one cluster holding every object of the type.
// ---------------------------------------------------------------------------

bool criterion_identity(std::string& detail) {
  std::vector<Ocel> logs;
  logs.push_back(parse_ocel_file(fixture_path()));
  std::mt19937_64 rng(99);
  support::RandomLogOptions opt;
  opt.cover_first_type = true;  // every event references an object of t0
  for (int i = 0; i < 5; ++i) logs.push_back(support::random_ocel(rng, opt));

  for (std::size_t i = 0; i < logs.size(); ++i) {
    const Ocel& log = logs[i];
    const std::string otype = i == 0 ? "order" : "t0";

    Clustering identity;
    identity.otype = otype;
    identity.method = "manual";
    identity.k = 1;
    identity.clusters.resize(1);
    for (const auto& [id, rec] : log.objects) {
      if (rec.otype == otype) {
        identity.clusters[0].push_back(id);
        identity.assignment.emplace(id, 0);
      }
    }

    const SubLogBundle all = build_bundle(log, identity, Approach::All);
    const SubLogBundle existence = build_bundle(log, identity, Approach::Existence);
    if (ids_of(all.sublogs[0]) != ids_of(existence.sublogs[0])) {
      detail = "existence and all event sets differ on log " + std::to_string(i);
      return false;
    }
    const ComplexityReport report = build_report(log, identity, all);
    if (!report.csi || !report.cdi || !nearly(*report.csi, 1.0, 1e-9) ||
        !nearly(*report.cdi, 1.0, 1e-9)) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "log %zu: CsI %.12f CdI %.12f", i,
                    report.csi.value_or(-1.0), report.cdi.value_or(-1.0));
      detail = buf;
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 5. Metric and centrality oracles.
// ---------------------------------------------------------------------------

std::vector<std::string> random_sequence(std::mt19937_64& rng, int max_len) {
  const int len = static_cast<int>(rng() % static_cast<unsigned>(max_len + 1));
  std::vector<std::string> seq;
  for (int i = 0; i < len; ++i) seq.push_back(std::string(1, 'a' + rng() % 4));
  return seq;
}

bool criterion_oracles(std::string& detail) {
  std::mt19937_64 rng(4242);

  // Levenshtein metric axioms on 1000 random triples
  for (int round = 0; round < 1000; ++round) {
    const auto x = random_sequence(rng, 7);
    const auto y = random_sequence(rng, 7);
    const auto z = random_sequence(rng, 7);
    const int xy = levenshtein(x, y);
    if (levenshtein(x, x) != 0 || (xy == 0) != (x == y) || xy != levenshtein(y, x) ||
        levenshtein(x, z) > xy + levenshtein(y, z)) {
      detail = "levenshtein metric axiom violated at round " + std::to_string(round);
      return false;
    }
  }

  // centralities against the per-definition recomputation on 100 graphs
  for (int round = 0; round < 100; ++round) {
    const int len = 1 + static_cast<int>(rng() % 12);
    std::vector<std::string> trace;
    for (int i = 0; i < len; ++i) trace.push_back(std::string(1, 'a' + rng() % 6));
    const TraceGraph g = build_trace_graph(trace);
    const CentralityFeatures fast = centrality_features(g);
    const support::NaiveCentralities naive = support::naive_centralities(g);
    const std::array<std::pair<FeatureStats, FeatureStats>, 4> pairs = {{
        {fast.in_degree, support::naive_aggregate(naive.in_degree)},
        {fast.out_degree, support::naive_aggregate(naive.out_degree)},
        {fast.closeness, support::naive_aggregate(naive.closeness)},
        {fast.harmonic, support::naive_aggregate(naive.harmonic)},
    }};
    for (const auto& [got, want] : pairs) {
      if (!nearly(got.mean, want.mean, 1e-12) || !nearly(got.variance, want.variance, 1e-12) ||
          !nearly(got.stddev, want.stddev, 1e-12)) {
        detail = "centrality aggregate differs from the naive recomputation (round " +
                 std::to_string(round) + ")";
        return false;
      }
    }
  }

  // profile_distance against its formula oracle
  for (int round = 0; round < 20; ++round) {
    std::vector<ObjectProfile> profiles;
    const std::size_t n = 4 + rng() % 6;
    for (std::size_t i = 0; i < n; ++i) {
      ObjectProfile p;
      p.object_id = "p" + std::to_string(i);
      p.trace = random_sequence(rng, 6);
      p.categorical["shade"] = rng() % 2 ? "dark" : "light";
      if (rng() % 3) p.categorical["shape"] = rng() % 2 ? "round" : "flat";
      p.numeric["mass"] = static_cast<double>(rng() % 10000) / 13.0;
      if (rng() % 2) p.numeric["span"] = static_cast<double>(rng() % 997) / 7.0;
      profiles.push_back(std::move(p));
    }
    const FeatureTable table = encode(profiles);
    const DistanceWeights w{static_cast<double>(1 + rng() % 4),
                            static_cast<double>(1 + rng() % 4),
                            static_cast<double>(1 + rng() % 4)};
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double got = profile_distance(table, i, j, w);
        const double want = support::formula_profile_distance(table, i, j, w);
        if (!nearly(got, want, 1e-12)) {
          detail = "profile_distance differs from the formula oracle";
          return false;
        }
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 6. Clustering sanity on a three-blob profile set.
// ---------------------------------------------------------------------------

bool criterion_clustering(std::string& detail) {
  std::mt19937_64 rng(606);
  std::vector<ObjectProfile> profiles;
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  // near-equilateral so min-max normalization keeps the blobs isotropic
  const std::array<std::pair<double, double>, 3> centers = {{{0, 0}, {50, 87}, {100, 0}}};
  std::vector<std::set<std::string>> truth(3);
  for (int blob = 0; blob < 3; ++blob) {
    for (int i = 0; i < 10; ++i) {
      ObjectProfile p;
      char id[16];
      std::snprintf(id, sizeof(id), "p%d%02d", blob, i);
      p.object_id = id;
      p.numeric["x"] = centers[blob].first + jitter(rng);
      p.numeric["y"] = centers[blob].second + jitter(rng);
      profiles.push_back(std::move(p));
      truth[blob].insert(id);
    }
  }
  const FeatureTable table = encode(profiles, "point");
  const DistanceMatrix matrix = distance_matrix(table);

  const Clustering km = kmeans(table, 3, 13);
  std::set<std::set<std::string>> got;
  for (const auto& cluster : km.clusters) got.insert({cluster.begin(), cluster.end()});
  if (got != std::set<std::set<std::string>>(truth.begin(), truth.end())) {
    detail = "k-means did not recover the three blobs";
    return false;
  }

  const std::vector<SweepEntry> entries = sweep_k(table, matrix, 2, 6, Algorithm::KMeans, 13);
  int best_k = 0;
  for (const SweepEntry& e : entries) {
    if (e.best) best_k = e.k;
  }
  if (best_k != 3) {
    detail = "Calinski-Harabasz sweep peaked at k=" + std::to_string(best_k);
    return false;
  }

  // nesting along the full merge sequence
  const std::size_t n = matrix.size();
  for (std::size_t k = n; k >= 2; --k) {
    const Clustering fine = agglomerative(matrix, static_cast<int>(k));
    const Clustering coarse = agglomerative(matrix, static_cast<int>(k) - 1);
    if (fine.clusters.size() != k || coarse.clusters.size() != k - 1) {
      detail = "agglomerative produced the wrong cluster count at k=" + std::to_string(k);
      return false;
    }
    for (const auto& cluster : fine.clusters) {
      const std::set<std::string> small(cluster.begin(), cluster.end());
      const bool contained = std::any_of(
          coarse.clusters.begin(), coarse.clusters.end(), [&](const auto& big_vec) {
            const std::set<std::string> big(big_vec.begin(), big_vec.end());
            return std::includes(big.begin(), big.end(), small.begin(), small.end());
          });
      if (!contained) {
        detail = "nesting property violated between k=" + std::to_string(k) + " and k-1";
        return false;
      }
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 7. End-to-end determinism on the fixture, plus per-cluster fitness 1.0.
// ---------------------------------------------------------------------------

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool criterion_determinism(std::string& detail) {
  const fs::path base = fs::temp_directory_path() / "oclust_acceptance";
  fs::remove_all(base);
  RunConfig cfg;
  cfg.input_path = fixture_path();
  cfg.otype = "batch";
  cfg.algorithm = Algorithm::KMeans;
  cfg.k = 2;
  cfg.seed = 11;
  cfg.approach = Approach::All;

  for (const char* sub : {"a", "b"}) {
    cfg.out_dir = (base / sub).string();
    run_pipeline(cfg);
  }
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(base / "a")) {
    const auto name = entry.path().filename();
    if (read_file(entry.path()) != read_file(base / "b" / name)) {
      detail = "artifact " + name.string() + " differs between runs";
      return false;
    }
    ++compared;
  }
  if (compared < 8) {
    detail = "only " + std::to_string(compared) + " artifacts were produced";
    return false;
  }

  // every discovered per-cluster model fits its own sub-log perfectly
  for (const auto& entry : fs::directory_iterator(base / "a")) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("cluster_", 0) != 0 || entry.path().extension() != ".jsonocel") continue;
    const Ocel sub = parse_ocel_file(entry.path().string());
    const double fitness = fitness_proxy(discover_ocdfg(sub), sub);
    if (fitness != 1.0) {
      detail = name + ": fitness " + std::to_string(fitness) + " != 1.0";
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// 8. Conservation on the criterion-3 logs.
// ---------------------------------------------------------------------------

bool criterion_conservation(std::string& detail) {
  if (!g_semantics.ran) {
    detail = "criterion 3 did not run";
    return false;
  }
  for (std::size_t i = 0; i < g_semantics.logs.size(); ++i) {
    const Ocel& log = g_semantics.logs[i];
    const OcDfg m = discover_ocdfg(log);

    std::int64_t node_total = 0;
    for (const auto& [activity, freq] : m.node_freq) node_total += freq;
    if (node_total != static_cast<std::int64_t>(log.events.size())) {
      detail = "log " + std::to_string(i) + ": node frequencies sum to " +
               std::to_string(node_total) + ", expected " + std::to_string(log.events.size());
      return false;
    }

    for (const std::string& otype : log.object_types) {
      const FlattenedLog fl = flatten(log, otype);
      std::int64_t expected = 0;
      for (const std::string& oid : case_objects(fl)) {
        expected += static_cast<std::int64_t>(extract_trace(fl, oid).activities.size()) + 1;
      }
      std::int64_t actual = 0;
      for (const auto& [edge, freq] : m.edge_freq) {
        if (std::get<2>(edge) == otype) actual += freq;
      }
      if (actual != expected) {
        detail = "log " + std::to_string(i) + ", type " + otype + ": edge frequencies sum to " +
                 std::to_string(actual) + ", expected " + std::to_string(expected);
        return false;
      }
    }
  }
  return true;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "formula fidelity (size, density)", 1.0, criterion_formulas},
      {2, "worked-example fidelity (trace graph, shortest path)", 1.0,
       criterion_worked_examples},
      {3, "existence/all semantics vs brute-force oracle on 200 random logs", 30.0,
       criterion_semantics},
      {4, "identity bundle: CsI = CdI = 1.0, existence == all", 1.0, criterion_identity},
      {5, "metric and centrality oracles", 30.0, criterion_oracles},
      {6, "clustering sanity: blobs, CH sweep, nesting", 10.0, criterion_clustering},
      {7, "end-to-end determinism and per-cluster fitness", 5.0, criterion_determinism},
      {8, "frequency conservation", 30.0, criterion_conservation},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > criterion.budget_seconds) {
      ok = false;
      detail = "runtime " + std::to_string(elapsed) + "s over the " +
               std::to_string(criterion.budget_seconds) + "s budget" +
               (detail.empty() ? "" : "; " + detail);
    }
    std::printf("[%s] criterion %d: %s (%.2fs)%s%s\n", ok ? "PASS" : "FAIL", criterion.number,
                criterion.title.c_str(), elapsed, detail.empty() ? "" : " -- ",
                detail.c_str());
    if (!ok) ++failures;
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
