#include "oclust/ocel.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

namespace oclust {

using nlohmann::json;

AttrType type_of(const AttrValue& v) {
  switch (v.index()) {
    case 1: return AttrType::Float;
    case 2: return AttrType::Boolean;
    default: return AttrType::String;
  }
}

std::string_view attr_type_name(AttrType t) {
  switch (t) {
    case AttrType::Float: return "float";
    case AttrType::Boolean: return "boolean";
    default: return "string";
  }
}

// ---------------------------------------------------------------------------
// Timestamps
// ---------------------------------------------------------------------------

namespace {

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
  y = static_cast<int>(yy + (m <= 2));
}

int days_in_month(int y, int m) {
  static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (m == 2) {
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    return leap ? 29 : 28;
  }
  return lengths[m - 1];
}

bool read_digits(const std::string& s, std::size_t& pos, int count, int& out) {
  int value = 0;
  for (int i = 0; i < count; ++i) {
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) return false;
    value = value * 10 + (s[pos] - '0');
    ++pos;
  }
  out = value;
  return true;
}

[[noreturn]] void bad_timestamp(const std::string& text) {
  throw Error("unparseable timestamp \"" + text + "\"");
}

}  // namespace

Timestamp parse_timestamp(const std::string& text) {
  std::size_t pos = 0;
  int year, month, day, hour, minute, second;
  if (!read_digits(text, pos, 4, year)) bad_timestamp(text);
  if (pos >= text.size() || text[pos] != '-') bad_timestamp(text);
  ++pos;
  if (!read_digits(text, pos, 2, month)) bad_timestamp(text);
  if (pos >= text.size() || text[pos] != '-') bad_timestamp(text);
  ++pos;
  if (!read_digits(text, pos, 2, day)) bad_timestamp(text);
  if (pos >= text.size() || (text[pos] != 'T' && text[pos] != ' ')) bad_timestamp(text);
  ++pos;
  if (!read_digits(text, pos, 2, hour)) bad_timestamp(text);
  if (pos >= text.size() || text[pos] != ':') bad_timestamp(text);
  ++pos;
  if (!read_digits(text, pos, 2, minute)) bad_timestamp(text);
  if (pos >= text.size() || text[pos] != ':') bad_timestamp(text);
  ++pos;
  if (!read_digits(text, pos, 2, second)) bad_timestamp(text);

  int millis = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int digits = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      if (digits < 3) millis = millis * 10 + (text[pos] - '0');
      ++digits;
      ++pos;
    }
    if (digits == 0 || digits > 9) bad_timestamp(text);
    while (digits < 3) {
      millis *= 10;
      ++digits;
    }
  }

  int offset_min = 0;
  if (pos < text.size()) {
    const char c = text[pos];
    if (c == 'Z' || c == 'z') {
      ++pos;
    } else if (c == '+' || c == '-') {
      ++pos;
      int oh, om;
      if (!read_digits(text, pos, 2, oh)) bad_timestamp(text);
      if (pos < text.size() && text[pos] == ':') ++pos;
      if (!read_digits(text, pos, 2, om)) bad_timestamp(text);
      if (oh > 14 || om > 59) bad_timestamp(text);
      offset_min = oh * 60 + om;
      if (c == '-') offset_min = -offset_min;
    }
  }
  if (pos != text.size()) bad_timestamp(text);

  if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month) ||
      hour > 23 || minute > 59 || second > 59) {
    bad_timestamp(text);
  }

  const std::int64_t days = days_from_civil(year, month, day);
  const std::int64_t local_ms =
      (((days * 24 + hour) * 60 + minute) * 60 + second) * 1000 + millis;
  return Timestamp{local_ms - static_cast<std::int64_t>(offset_min) * 60000, offset_min};
}

std::string format_timestamp(const Timestamp& ts) {
  const std::int64_t local_ms = ts.epoch_ms + static_cast<std::int64_t>(ts.offset_min) * 60000;
  std::int64_t days = local_ms / 86400000;
  std::int64_t rem = local_ms % 86400000;
  if (rem < 0) {
    rem += 86400000;
    --days;
  }
  int y, m, d;
  civil_from_days(days, y, m, d);
  const int ms = static_cast<int>(rem % 1000);
  const int sec = static_cast<int>(rem / 1000 % 60);
  const int min = static_cast<int>(rem / 60000 % 60);
  const int hour = static_cast<int>(rem / 3600000);
  const int off = ts.offset_min < 0 ? -ts.offset_min : ts.offset_min;
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03d%c%02d:%02d", y, m, d,
                hour, min, sec, ms, ts.offset_min < 0 ? '-' : '+', off / 60, off % 60);
  return buf;
}

// ---------------------------------------------------------------------------
// JSON-OCEL ingestion
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kGlobalLog = "ocel:global-log";
constexpr const char* kEvents = "ocel:events";
constexpr const char* kObjects = "ocel:objects";
constexpr const char* kActivity = "ocel:activity";
constexpr const char* kTimestamp = "ocel:timestamp";
constexpr const char* kOmap = "ocel:omap";
constexpr const char* kVmap = "ocel:vmap";
constexpr const char* kType = "ocel:type";
constexpr const char* kOvmap = "ocel:ovmap";

AttrValue attr_from_json(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.get<double>();
  if (v.is_boolean()) return v.get<bool>();
  throw Error(where + ": unsupported attribute value type " + std::string(v.type_name()));
}

// Attribute names keep the type of their first observed value; a later value
// of a different type is a conformance error.
void record_attr_type(std::map<std::string, AttrType>& types, const std::string& name,
                      const AttrValue& value, const std::string& where) {
  const AttrType t = type_of(value);
  auto [it, inserted] = types.emplace(name, t);
  if (!inserted && it->second != t) {
    throw Error(where + ": attribute \"" + name + "\" has type " +
                std::string(attr_type_name(t)) + " but was declared " +
                std::string(attr_type_name(it->second)));
  }
}

std::map<std::string, AttrValue> parse_value_map(const json& node, const std::string& where,
                                                 std::map<std::string, AttrType>& types) {
  std::map<std::string, AttrValue> out;
  if (!node.is_object()) throw Error(where + ": expected an object");
  for (const auto& [name, value] : node.items()) {
    AttrValue v = attr_from_json(value, where + "/\"" + name + "\"");
    record_attr_type(types, name, v, where);
    out.emplace(name, std::move(v));
  }
  return out;
}

// nlohmann's DOM silently keeps the last of two identically keyed members, so
// duplicate event/object ids are caught with a parser callback that watches
// the keys of the two id maps.
struct DuplicateWatch {
  std::string section;         // last key seen at depth 1
  std::set<std::string> event_ids;
  std::set<std::string> object_ids;
  std::string duplicate_kind;  // "event" or "object" once found
  std::string duplicate_id;

  bool on_key(int depth, const std::string& key) {
    if (depth == 1) {
      section = key;
    } else if (depth == 2 && duplicate_kind.empty()) {
      if (section == kEvents && !event_ids.insert(key).second) {
        duplicate_kind = "event";
        duplicate_id = key;
      } else if (section == kObjects && !object_ids.insert(key).second) {
        duplicate_kind = "object";
        duplicate_id = key;
      }
    }
    return true;
  }
};

Ocel build_ocel(const json& doc, const DuplicateWatch& watch) {
  if (!watch.duplicate_kind.empty()) {
    throw Error("duplicate " + watch.duplicate_kind + " id \"" + watch.duplicate_id + "\"");
  }
  if (!doc.is_object()) throw Error("JSON-OCEL root must be an object");
  for (const char* key : {kGlobalLog, kEvents, kObjects}) {
    if (!doc.contains(key)) throw Error(std::string("missing section \"") + key + "\"");
  }

  Ocel log;

  // objects first so event omaps can be checked against them
  for (const auto& [id, body] : doc.at(kObjects).items()) {
    const std::string where = "object \"" + id + "\"";
    if (!body.is_object()) throw Error(where + ": expected an object");
    if (!body.contains(kType) || !body.at(kType).is_string()) {
      throw Error(where + ": missing key \"" + kType + "\"");
    }
    ObjectRecord rec;
    rec.id = id;
    rec.otype = body.at(kType).get<std::string>();
    if (rec.otype.empty()) throw Error(where + ": empty \"" + kType + "\"");
    if (body.contains(kOvmap)) {
      rec.ovmap = parse_value_map(body.at(kOvmap), where + "/\"" + kOvmap + "\"",
                                  log.attribute_types);
    }
    log.object_types.insert(rec.otype);
    log.objects.emplace(id, std::move(rec));
  }

  for (const auto& [id, body] : doc.at(kEvents).items()) {
    const std::string where = "event \"" + id + "\"";
    if (!body.is_object()) throw Error(where + ": expected an object");
    for (const char* key : {kActivity, kTimestamp, kOmap}) {
      if (!body.contains(key)) throw Error(where + ": missing key \"" + key + "\"");
    }
    Event ev;
    ev.id = id;
    if (!body.at(kActivity).is_string() || body.at(kActivity).get<std::string>().empty()) {
      throw Error(where + ": \"" + kActivity + "\" must be a non-empty string");
    }
    ev.activity = body.at(kActivity).get<std::string>();
    if (!body.at(kTimestamp).is_string()) {
      throw Error(where + ": \"" + kTimestamp + "\" must be a string");
    }
    try {
      ev.timestamp = parse_timestamp(body.at(kTimestamp).get<std::string>());
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
    if (!body.at(kOmap).is_array()) {
      throw Error(where + ": \"" + kOmap + "\" must be an array");
    }
    for (const auto& oid : body.at(kOmap)) {
      if (!oid.is_string()) throw Error(where + ": \"" + kOmap + "\" entries must be strings");
      const std::string object_id = oid.get<std::string>();
      if (!log.objects.count(object_id)) {
        throw Error(where + ": \"" + kOmap + "\" references undeclared object \"" +
                    object_id + "\"");
      }
      ev.omap.insert(object_id);
    }
    if (body.contains(kVmap)) {
      ev.vmap = parse_value_map(body.at(kVmap), where + "/\"" + kVmap + "\"",
                                log.attribute_types);
    }
    log.events.push_back(std::move(ev));
  }

  // declared names and types from the global section; unused names default
  // to string so the type map stays total
  const json& global = doc.at(kGlobalLog);
  if (global.is_object()) {
    if (global.contains("ocel:object-types") && global.at("ocel:object-types").is_array()) {
      for (const auto& t : global.at("ocel:object-types")) {
        if (t.is_string()) log.object_types.insert(t.get<std::string>());
      }
    }
    if (global.contains("ocel:attribute-names") &&
        global.at("ocel:attribute-names").is_array()) {
      for (const auto& n : global.at("ocel:attribute-names")) {
        if (n.is_string()) log.attribute_types.emplace(n.get<std::string>(), AttrType::String);
      }
    }
  }

  std::sort(log.events.begin(), log.events.end(), [](const Event& a, const Event& b) {
    if (a.timestamp.epoch_ms != b.timestamp.epoch_ms) {
      return a.timestamp.epoch_ms < b.timestamp.epoch_ms;
    }
    return a.id < b.id;
  });
  return log;
}

Ocel parse_ocel_json(const std::string& text) {
  DuplicateWatch watch;
  json doc;
  try {
    doc = json::parse(text, [&watch](int depth, json::parse_event_t event, json& parsed) {
      if (event == json::parse_event_t::key) {
        watch.on_key(depth, parsed.get<std::string>());
      }
      return true;
    });
  } catch (const json::exception& e) {
    throw Error(std::string("invalid JSON-OCEL: ") + e.what());
  }
  return build_ocel(doc, watch);
}

}  // namespace

Ocel parse_ocel(std::istream& source) {
  std::ostringstream buf;
  buf << source.rdbuf();
  return parse_ocel_json(buf.str());
}

Ocel parse_ocel(const std::string& text) { return parse_ocel_json(text); }

Ocel parse_ocel_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open \"" + path + "\"");
  return parse_ocel(in);
}

const Event* Ocel::find_event(const std::string& event_id) const {
  for (const Event& e : events) {
    if (e.id == event_id) return &e;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

json attr_to_json(const AttrValue& v) {
  switch (v.index()) {
    case 1: return std::get<double>(v);
    case 2: return std::get<bool>(v);
    default: return std::get<std::string>(v);
  }
}

json value_map_to_json(const std::map<std::string, AttrValue>& m) {
  json out = json::object();
  for (const auto& [name, value] : m) out[name] = attr_to_json(value);
  return out;
}

}  // namespace

std::string to_jsonocel(const Ocel& log, const std::map<std::string, std::string>& extra_global) {
  json global = json::object();
  global["ocel:version"] = "1.0";
  global["ocel:ordering"] = "timestamp";
  global["ocel:object-types"] = json(log.object_types);
  json names = json::array();
  for (const auto& [name, type] : log.attribute_types) names.push_back(name);
  global["ocel:attribute-names"] = std::move(names);
  for (const auto& [key, value] : extra_global) global[key] = value;

  json events = json::object();
  for (const Event& e : log.events) {
    json body = json::object();
    body[kActivity] = e.activity;
    body[kTimestamp] = format_timestamp(e.timestamp);
    body[kOmap] = json(e.omap);
    body[kVmap] = value_map_to_json(e.vmap);
    events[e.id] = std::move(body);
  }

  json objects = json::object();
  for (const auto& [id, rec] : log.objects) {
    json body = json::object();
    body[kType] = rec.otype;
    body[kOvmap] = value_map_to_json(rec.ovmap);
    objects[id] = std::move(body);
  }

  json doc = json::object();
  doc[kGlobalLog] = std::move(global);
  doc["ocel:global-event"] = json::object({{kActivity, "__INVALID__"}});
  doc["ocel:global-object"] = json::object({{kType, "__INVALID__"}});
  doc[kEvents] = std::move(events);
  doc[kObjects] = std::move(objects);
  return doc.dump(2) + "\n";
}

void write_ocel_file(const Ocel& log, const std::string& path,
                     const std::map<std::string, std::string>& extra_global) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write \"" + path + "\"");
  out << to_jsonocel(log, extra_global);
}

// ---------------------------------------------------------------------------
// Flattening and traces
// ---------------------------------------------------------------------------

FlattenedLog flatten(const Ocel& log, const std::string& otype) {
  if (!log.object_types.count(otype)) {
    std::string known;
    for (const auto& t : log.object_types) {
      if (!known.empty()) known += ", ";
      known += t;
    }
    throw Error("unknown object type \"" + otype + "\"; known types: " +
                (known.empty() ? "(none)" : known));
  }
  FlattenedLog fl;
  fl.otype = otype;
  for (const Event& e : log.events) {
    std::set<std::string> cases;
    for (const std::string& oid : e.omap) {
      if (log.objects.at(oid).otype == otype) cases.insert(oid);
    }
    if (!cases.empty()) {
      fl.events.push_back(e);
      fl.case_map.emplace(e.id, std::move(cases));
    }
  }
  return fl;
}

Trace extract_trace(const FlattenedLog& fl, const std::string& object_id) {
  Trace trace;
  trace.object_id = object_id;
  for (const Event& e : fl.events) {
    if (fl.case_map.at(e.id).count(object_id)) trace.activities.push_back(e.activity);
  }
  if (trace.activities.empty()) {
    throw Error("object \"" + object_id + "\" does not occur in the " + fl.otype +
                "-flattened log");
  }
  return trace;
}

std::vector<std::string> case_objects(const FlattenedLog& fl) {
  std::set<std::string> ids;
  for (const auto& [event_id, cases] : fl.case_map) ids.insert(cases.begin(), cases.end());
  return {ids.begin(), ids.end()};
}

}  // namespace oclust
