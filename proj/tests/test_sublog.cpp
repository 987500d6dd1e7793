#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "oclust/sublog.hpp"
#include "support/log_builder.hpp"
#include "support/random_log.hpp"

using namespace oclust;
using oclust::testing::LogBuilder;
using oclust::testing::minutes_after_base;
using oclust::testing::random_ocel;

namespace {

const std::string kFixture = std::string(OCLUST_FIXTURE_DIR) + "/b2b_sample.jsonocel";

std::set<std::string> event_ids(const Ocel& log) {
  std::set<std::string> ids;
  for (const Event& e : log.events) ids.insert(e.id);
  return ids;
}

Clustering make_clustering(const std::string& otype,
                           std::vector<std::vector<std::string>> clusters) {
  Clustering c;
  c.otype = otype;
  c.method = "manual";
  c.k = static_cast<int>(clusters.size());
  c.clusters = std::move(clusters);
  for (std::size_t i = 0; i < c.clusters.size(); ++i) {
    for (const std::string& id : c.clusters[i]) c.assignment.emplace(id, i);
  }
  return c;
}

// Random partition of the otype objects into 1..4 clusters.
Clustering random_partition(std::mt19937_64& rng, const Ocel& log, const std::string& otype) {
  std::vector<std::string> ids;
  for (const auto& [id, rec] : log.objects) {
    if (rec.otype == otype) ids.push_back(id);
  }
  const std::size_t k = 1 + rng() % std::min<std::size_t>(4, ids.size());
  std::vector<std::vector<std::string>> clusters(k);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    clusters[i < k ? i : rng() % k].push_back(ids[i]);
  }
  return make_clustering(otype, std::move(clusters));
}

}  // namespace

TEST_CASE("events split across clusters duplicate under existence") {
  // e3 carries both b1 and b3; with b1 and b3 in different clusters the
  // event lands in both sub-logs
  const Ocel log = parse_ocel_file(kFixture);
  const Ocel left = existence_sublog(log, {"b1", "b2"});
  const Ocel right = existence_sublog(log, {"b3"});
  CHECK(event_ids(left).count("e3") == 1);
  CHECK(event_ids(right).count("e3") == 1);
  CHECK(event_ids(left) == std::set<std::string>{"e2", "e3"});
  CHECK(event_ids(right) == std::set<std::string>{"e3"});
}

TEST_CASE("events split across clusters are orphaned under all") {
  const Ocel log = parse_ocel_file(kFixture);
  const Clustering clustering = make_clustering("batch", {{"b1", "b2"}, {"b3"}});
  const SubLogBundle bundle = build_bundle(log, clustering, Approach::All);
  REQUIRE(bundle.sublogs.size() == 2);
  CHECK(event_ids(bundle.sublogs[0]).count("e3") == 0);
  CHECK(event_ids(bundle.sublogs[1]).count("e3") == 0);
  CHECK(bundle.orphan_events == std::vector<std::string>{"e3"});

  // e2's batches are exactly {b1, b2}, so cluster {b1, b2} keeps it
  CHECK(event_ids(bundle.sublogs[0]) == std::set<std::string>{"e2"});
}

TEST_CASE("all-approach example on the fixture omap column") {
  const Ocel log = parse_ocel_file(kFixture);
  const Ocel sub = all_sublog(log, {"b1", "b2"}, "batch");
  CHECK(event_ids(sub) == std::set<std::string>{"e2"});  // e3 carries b3 as well
}

TEST_CASE("cluster of every object reproduces the flattened events") {
  const Ocel log = parse_ocel_file(kFixture);
  const std::set<std::string> all_batches = {"b1", "b2", "b3"};
  const Ocel sub = existence_sublog(log, all_batches);
  std::set<std::string> flattened;
  for (const Event& e : flatten(log, "batch").events) flattened.insert(e.id);
  CHECK(event_ids(sub) == flattened);

  // and the two semantics agree on a single all-covering cluster
  CHECK(event_ids(all_sublog(log, all_batches, "batch")) == flattened);
}

TEST_CASE("objects without events contribute nothing") {
  LogBuilder builder;
  builder.object("m1", "machine").object("m2", "machine");
  builder.event("e1", "run", minutes_after_base(0), {"m1"});
  const Ocel log = builder.build();
  const Ocel sub = existence_sublog(log, {"m2"});
  CHECK(sub.events.empty());
  CHECK(sub.objects.empty());
}

TEST_CASE("empty clusters are rejected") {
  const Ocel log = parse_ocel_file(kFixture);
  CHECK_THROWS_AS(existence_sublog(log, {}), Error);
  CHECK_THROWS_AS(all_sublog(log, {}, "batch"), Error);
}

TEST_CASE("bundle validation") {
  const Ocel log = parse_ocel_file(kFixture);
  SUBCASE("wrong object type") {
    const Clustering c = make_clustering("batch", {{"b1", "o1"}});
    CHECK_THROWS_WITH_AS(build_bundle(log, c, Approach::Existence),
                         "clustered object \"o1\" has type \"order\", expected \"batch\"",
                         Error);
  }
  SUBCASE("unknown object") {
    const Clustering c = make_clustering("batch", {{"b1", "b9"}});
    CHECK_THROWS_AS(build_bundle(log, c, Approach::Existence), Error);
  }
  SUBCASE("duplicated object") {
    const Clustering c = make_clustering("batch", {{"b1"}, {"b1", "b2"}});
    CHECK_THROWS_AS(build_bundle(log, c, Approach::Existence), Error);
  }
  SUBCASE("no clusters") {
    const Clustering c = make_clustering("batch", {});
    CHECK_THROWS_AS(build_bundle(log, c, Approach::Existence), Error);
  }
}

TEST_CASE("sub-OCELs keep other object types and stay valid logs") {
  const Ocel log = parse_ocel_file(kFixture);
  const Ocel sub = all_sublog(log, {"b1", "b2"}, "batch");
  REQUIRE(event_ids(sub) == std::set<std::string>{"e2"});

  // e2 still references its order and customer
  const Event& e2 = sub.events.front();
  CHECK(e2.omap == std::set<std::string>{"b1", "b2", "o1", "c1"});
  for (const std::string& oid : e2.omap) {
    REQUIRE(sub.objects.count(oid) == 1);
    CHECK(sub.object_types.count(sub.objects.at(oid).otype) == 1);
  }
  // vmaps survive untouched
  CHECK(std::get<double>(e2.vmap.at("net price")) == doctest::Approx(285.8));

  // a valid OCEL serializes and re-parses cleanly
  CHECK(parse_ocel(to_jsonocel(sub)) == sub);
}

TEST_CASE("a singleton-per-object clustering orphans multi-object events") {
  LogBuilder builder;
  builder.object("m1", "machine").object("m2", "machine");
  builder.event("e1", "run", minutes_after_base(0), {"m1", "m2"});
  builder.event("e2", "stop", minutes_after_base(1), {"m1"});
  const Ocel log = builder.build();
  const Clustering c = make_clustering("machine", {{"m1"}, {"m2"}});
  const SubLogBundle bundle = build_bundle(log, c, Approach::All);
  CHECK(bundle.orphan_events == std::vector<std::string>{"e1"});
  CHECK(event_ids(bundle.sublogs[0]) == std::set<std::string>{"e2"});
  CHECK(bundle.sublogs[1].events.empty());
}

TEST_CASE("semantics verified against a per-event membership oracle") {
  std::mt19937_64 rng(61);
  for (int round = 0; round < 60; ++round) {
    const Ocel log = random_ocel(rng);
    // pick an object type that actually has objects
    std::vector<std::string> candidates;
    for (const std::string& t : log.object_types) {
      if (std::any_of(log.objects.begin(), log.objects.end(),
                      [&](const auto& kv) { return kv.second.otype == t; })) {
        candidates.push_back(t);
      }
    }
    if (candidates.empty()) continue;
    const std::string otype = candidates[rng() % candidates.size()];
    const Clustering clustering = random_partition(rng, log, otype);
    const FlattenedLog fl = flatten(log, otype);

    for (Approach approach : {Approach::Existence, Approach::All}) {
      const SubLogBundle bundle = build_bundle(log, clustering, approach);
      std::vector<std::set<std::string>> got;
      for (const Ocel& sub : bundle.sublogs) got.push_back(event_ids(sub));

      // brute-force membership per event and cluster
      std::set<std::string> covered;
      for (const Event& e : log.events) {
        std::set<std::string> type_objects;
        for (const std::string& oid : e.omap) {
          if (log.objects.at(oid).otype == otype) type_objects.insert(oid);
        }
        for (std::size_t i = 0; i < clustering.clusters.size(); ++i) {
          const std::set<std::string> members(clustering.clusters[i].begin(),
                                              clustering.clusters[i].end());
          bool expect = false;
          if (approach == Approach::Existence) {
            expect = std::any_of(e.omap.begin(), e.omap.end(), [&](const std::string& oid) {
              return members.count(oid) > 0;
            });
          } else {
            expect = !type_objects.empty() &&
                     std::includes(members.begin(), members.end(), type_objects.begin(),
                                   type_objects.end());
          }
          CHECK(got[i].count(e.id) == (expect ? 1u : 0u));
          if (expect) covered.insert(e.id);
        }
      }

      if (approach == Approach::Existence) {
        // every flattened event appears in at least one sub-log
        for (const Event& e : fl.events) CHECK(covered.count(e.id) == 1);
      } else {
        // disjointness and the orphan accounting
        for (std::size_t i = 0; i < got.size(); ++i) {
          for (std::size_t j = i + 1; j < got.size(); ++j) {
            std::vector<std::string> overlap;
            std::set_intersection(got[i].begin(), got[i].end(), got[j].begin(), got[j].end(),
                                  std::back_inserter(overlap));
            CHECK(overlap.empty());
          }
        }
        std::set<std::string> unioned;
        for (const auto& ids : got) unioned.insert(ids.begin(), ids.end());
        for (const std::string& orphan : bundle.orphan_events) unioned.insert(orphan);
        std::set<std::string> flattened;
        for (const Event& e : fl.events) flattened.insert(e.id);
        CHECK(unioned == flattened);
      }

      // every sub-log must itself be a consistent OCEL
      for (const Ocel& sub : bundle.sublogs) {
        for (const Event& e : sub.events) {
          for (const std::string& oid : e.omap) {
            REQUIRE(sub.objects.count(oid) == 1);
          }
        }
        CHECK(parse_ocel(to_jsonocel(sub)) == sub);
      }
    }
  }
}

TEST_CASE("existence duplication count equals the touched clusters") {
  std::mt19937_64 rng(67);
  for (int round = 0; round < 20; ++round) {
    const Ocel log = random_ocel(rng);
    const std::string otype = "t0";
    const Clustering clustering = random_partition(rng, log, otype);
    const SubLogBundle bundle = build_bundle(log, clustering, Approach::Existence);

    for (const Event& e : log.events) {
      std::set<std::size_t> touched;
      for (const std::string& oid : e.omap) {
        if (log.objects.at(oid).otype != otype) continue;
        touched.insert(clustering.assignment.at(oid));
      }
      std::size_t copies = 0;
      for (const Ocel& sub : bundle.sublogs) {
        copies += std::any_of(sub.events.begin(), sub.events.end(),
                              [&](const Event& se) { return se.id == e.id; })
                      ? 1
                      : 0;
      }
      // duplication counts clusters reached through otype objects; other
      // types pull the event into their objects' clusters too, but the
      // clustering only covers otype objects here
      CHECK(copies == touched.size());
    }
  }
}
