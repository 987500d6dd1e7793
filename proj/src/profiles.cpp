#include "oclust/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>

namespace oclust {

using nlohmann::json;

std::vector<ObjectProfile> build_profiles(const Ocel& log, const std::string& otype) {
  const FlattenedLog fl = flatten(log, otype);
  std::vector<ObjectProfile> profiles;
  for (const std::string& oid : case_objects(fl)) {
    ObjectProfile p;
    p.object_id = oid;
    p.trace = extract_trace(fl, oid).activities;
    p.graph_features = centrality_features(build_trace_graph(p.trace));
    for (const auto& [name, value] : log.objects.at(oid).ovmap) {
      switch (log.attribute_types.at(name)) {
        case AttrType::Float:
          p.numeric.emplace(name, std::get<double>(value));
          break;
        case AttrType::Boolean:
          p.categorical.emplace(name, std::get<bool>(value) ? "true" : "false");
          break;
        case AttrType::String:
          p.categorical.emplace(name, std::get<std::string>(value));
          break;
      }
    }
    profiles.push_back(std::move(p));
  }
  return profiles;
}

double FeatureTable::raw_numeric(std::size_t row, std::size_t col) const {
  const NumericColumnMeta& meta = numeric_columns[col];
  return meta.min + numeric[row][col] * (meta.max - meta.min);
}

FeatureTable encode(const std::vector<ObjectProfile>& profiles, std::string otype) {
  if (profiles.empty()) throw Error("cannot encode an empty profile list");

  std::set<std::string> cat_names, num_names;
  for (const ObjectProfile& p : profiles) {
    for (const auto& [name, value] : p.categorical) cat_names.insert(name);
    for (const auto& [name, value] : p.numeric) num_names.insert(name);
  }
  for (const std::string& derived : centrality_feature_names()) {
    if (cat_names.count(derived) || num_names.count(derived)) {
      throw Error("attribute name \"" + derived + "\" collides with a derived feature");
    }
    num_names.insert(derived);
  }

  FeatureTable table;
  table.otype = std::move(otype);
  table.categorical_columns.assign(cat_names.begin(), cat_names.end());
  for (const std::string& name : num_names) {
    NumericColumnMeta meta;
    meta.name = name;
    table.numeric_columns.push_back(std::move(meta));
  }

  const std::size_t n = profiles.size();
  const std::size_t num_cols = table.numeric_columns.size();
  std::vector<std::vector<double>> raw(n, std::vector<double>(num_cols, 0.0));
  std::vector<std::vector<bool>> present(n, std::vector<bool>(num_cols, false));

  for (std::size_t row = 0; row < n; ++row) {
    const ObjectProfile& p = profiles[row];
    table.ids.push_back(p.object_id);
    table.traces.push_back(p.trace);

    std::vector<std::string> cat_row;
    for (const std::string& name : table.categorical_columns) {
      auto it = p.categorical.find(name);
      cat_row.push_back(it == p.categorical.end() ? kMissingCategory : it->second);
    }
    table.categorical.push_back(std::move(cat_row));

    const std::map<std::string, double> derived = p.graph_features.as_map();
    for (std::size_t col = 0; col < num_cols; ++col) {
      const std::string& name = table.numeric_columns[col].name;
      double value = 0.0;
      bool has = false;
      if (auto it = p.numeric.find(name); it != p.numeric.end()) {
        value = it->second;
        has = true;
      } else if (auto dt = derived.find(name); dt != derived.end()) {
        value = dt->second;
        has = true;
      }
      if (has && !std::isfinite(value)) {
        throw Error("object \"" + p.object_id + "\": non-finite value in column \"" + name +
                    "\"");
      }
      raw[row][col] = value;
      present[row][col] = has;
    }
  }

  // column mean imputation, then min-max normalization
  table.numeric.assign(n, std::vector<double>(num_cols, 0.0));
  for (std::size_t col = 0; col < num_cols; ++col) {
    NumericColumnMeta& meta = table.numeric_columns[col];
    double sum = 0.0;
    std::size_t count = 0;
    for (std::size_t row = 0; row < n; ++row) {
      if (present[row][col]) {
        sum += raw[row][col];
        ++count;
      }
    }
    meta.impute_mean = count > 0 ? sum / static_cast<double>(count) : 0.0;
    meta.any_imputed = count < n;
    double lo = meta.impute_mean, hi = meta.impute_mean;
    for (std::size_t row = 0; row < n; ++row) {
      if (!present[row][col]) raw[row][col] = meta.impute_mean;
      lo = std::min(lo, raw[row][col]);
      hi = std::max(hi, raw[row][col]);
    }
    meta.min = lo;
    meta.max = hi;
    const double range = hi - lo;
    for (std::size_t row = 0; row < n; ++row) {
      table.numeric[row][col] = range > 0.0 ? (raw[row][col] - lo) / range : 0.0;
    }
  }
  return table;
}

namespace {

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char c : field) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace

void write_profiles_csv(const std::vector<ObjectProfile>& profiles, std::ostream& out,
                        const std::string& comment) {
  std::set<std::string> cat_names, num_names;
  for (const ObjectProfile& p : profiles) {
    for (const auto& [name, value] : p.categorical) cat_names.insert(name);
    for (const auto& [name, value] : p.numeric) num_names.insert(name);
  }
  for (const std::string& derived : centrality_feature_names()) num_names.insert(derived);

  if (!comment.empty()) out << "# " << comment << "\n";
  out << "object_id,trace";
  for (const std::string& name : cat_names) out << ',' << csv_escape(name);
  for (const std::string& name : num_names) out << ',' << csv_escape(name);
  out << '\n';

  for (const ObjectProfile& p : profiles) {
    out << csv_escape(p.object_id) << ',';
    std::string joined;
    for (const std::string& a : p.trace) {
      if (!joined.empty()) joined += ';';
      joined += a;
    }
    out << csv_escape(joined);
    for (const std::string& name : cat_names) {
      auto it = p.categorical.find(name);
      out << ',' << csv_escape(it == p.categorical.end() ? kMissingCategory : it->second);
    }
    const std::map<std::string, double> derived = p.graph_features.as_map();
    for (const std::string& name : num_names) {
      out << ',';
      if (auto it = p.numeric.find(name); it != p.numeric.end()) {
        out << format_number(it->second);
      } else if (auto dt = derived.find(name); dt != derived.end()) {
        out << format_number(dt->second);
      }
    }
    out << '\n';
  }
}

json feature_table_to_json(const FeatureTable& table) {
  json cols = json::array();
  for (const NumericColumnMeta& meta : table.numeric_columns) {
    cols.push_back({{"name", meta.name},
                    {"min", meta.min},
                    {"max", meta.max},
                    {"impute_mean", meta.impute_mean},
                    {"any_imputed", meta.any_imputed}});
  }
  return {{"otype", table.otype},
          {"ids", table.ids},
          {"traces", table.traces},
          {"categorical_columns", table.categorical_columns},
          {"categorical", table.categorical},
          {"numeric_columns", std::move(cols)},
          {"numeric", table.numeric}};
}

FeatureTable feature_table_from_json(const json& doc) {
  FeatureTable table;
  try {
    table.otype = doc.at("otype").get<std::string>();
    table.ids = doc.at("ids").get<std::vector<std::string>>();
    table.traces = doc.at("traces").get<std::vector<std::vector<std::string>>>();
    table.categorical_columns = doc.at("categorical_columns").get<std::vector<std::string>>();
    table.categorical = doc.at("categorical").get<std::vector<std::vector<std::string>>>();
    for (const json& col : doc.at("numeric_columns")) {
      NumericColumnMeta meta;
      meta.name = col.at("name").get<std::string>();
      meta.min = col.at("min").get<double>();
      meta.max = col.at("max").get<double>();
      meta.impute_mean = col.at("impute_mean").get<double>();
      meta.any_imputed = col.at("any_imputed").get<bool>();
      table.numeric_columns.push_back(std::move(meta));
    }
    table.numeric = doc.at("numeric").get<std::vector<std::vector<double>>>();
  } catch (const json::exception& e) {
    throw Error(std::string("invalid feature table: ") + e.what());
  }
  const std::size_t n = table.ids.size();
  if (table.traces.size() != n || table.categorical.size() != n || table.numeric.size() != n) {
    throw Error("invalid feature table: row counts disagree");
  }
  return table;
}

}  // namespace oclust
