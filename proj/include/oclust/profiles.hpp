#pragma once

// Per-object profiles (trace + raw attributes + centrality aggregates) and
// their encoding into a feature table for distance computation and
// clustering.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "oclust/ocel.hpp"
#include "oclust/trace_graph.hpp"

namespace oclust {

// Categorical cell value standing in for an absent attribute. Distance 1 to
// everything except another missing value.
inline const std::string kMissingCategory = "⊥missing";

struct ObjectProfile {
  std::string object_id;
  std::vector<std::string> trace;
  std::map<std::string, std::string> categorical;  // own attributes only
  std::map<std::string, double> numeric;           // own attributes only
  CentralityFeatures graph_features;
};

// One profile per object of `otype` occurring in at least one event,
// ascending object id. Attributes split by the log's declared types:
// float -> numeric, string/boolean -> categorical.
std::vector<ObjectProfile> build_profiles(const Ocel& log, const std::string& otype);

struct NumericColumnMeta {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  double impute_mean = 0.0;  // raw value substituted for missing cells
  bool any_imputed = false;

  bool operator==(const NumericColumnMeta&) const = default;
};

// Row-aligned encoding of a profile list. Numeric cells are min-max scaled
// to [0,1] (constant columns map to 0); the metadata reproduces raw values.
struct FeatureTable {
  std::string otype;
  std::vector<std::string> ids;                        // row order
  std::vector<std::vector<std::string>> traces;
  std::vector<std::string> categorical_columns;        // ascending names
  std::vector<std::vector<std::string>> categorical;   // row-major cells
  std::vector<NumericColumnMeta> numeric_columns;      // ascending names
  std::vector<std::vector<double>> numeric;            // normalized cells

  std::size_t rows() const { return ids.size(); }
  // Raw value behind a normalized cell.
  double raw_numeric(std::size_t row, std::size_t col) const;
};

// Missing categorical cells become kMissingCategory; missing numeric cells
// are imputed with the column mean and flagged in the metadata. The twelve
// centrality aggregates join the numeric columns. Throws on NaN/infinite
// raw values and on attribute names that collide with the derived features.
FeatureTable encode(const std::vector<ObjectProfile>& profiles, std::string otype = "");

// Table-3-style CSV: object_id, trace (";"-joined), categorical columns,
// numeric columns, raw values. Missing numeric cells stay empty.
void write_profiles_csv(const std::vector<ObjectProfile>& profiles, std::ostream& out,
                        const std::string& comment = "");

nlohmann::json feature_table_to_json(const FeatureTable& table);
FeatureTable feature_table_from_json(const nlohmann::json& doc);

}  // namespace oclust
