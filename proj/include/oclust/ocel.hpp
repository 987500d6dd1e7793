#pragma once

// In-memory object-centric event log (OCEL): data model, JSON-OCEL
// ingestion/serialization, flattening onto one object type, and trace
// extraction.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "oclust/error.hpp"

namespace oclust {

// Attribute values as they appear in event vmaps and object ovmaps.
using AttrValue = std::variant<std::string, double, bool>;

enum class AttrType { String, Float, Boolean };

AttrType type_of(const AttrValue& v);
std::string_view attr_type_name(AttrType t);

// Wall-clock instant at millisecond precision plus the UTC offset the value
// was written with. Ordering of events uses the instant only; the offset is
// kept so serialization round-trips.
struct Timestamp {
  std::int64_t epoch_ms = 0;    // UTC milliseconds since 1970-01-01T00:00:00Z
  std::int32_t offset_min = 0;  // minutes east of UTC

  bool operator==(const Timestamp&) const = default;
};

// Accepts "YYYY-MM-DD HH:MM:SS.fff+HH:MM" and the ISO 'T' variant; the
// fraction (up to 9 digits, truncated to ms) and the zone (Z, +HH:MM, +HHMM)
// are optional. Throws Error on anything else.
Timestamp parse_timestamp(const std::string& text);
std::string format_timestamp(const Timestamp& ts);

struct Event {
  std::string id;
  std::string activity;
  Timestamp timestamp;
  std::set<std::string> omap;  // related object ids
  std::map<std::string, AttrValue> vmap;

  bool operator==(const Event&) const = default;
};

struct ObjectRecord {
  std::string id;
  std::string otype;
  std::map<std::string, AttrValue> ovmap;

  bool operator==(const ObjectRecord&) const = default;
};

// Full event/object store. `events` carries the total order: ascending
// timestamp, ties broken by lexicographic event id. Immutable after parsing.
struct Ocel {
  std::vector<Event> events;
  std::map<std::string, ObjectRecord> objects;
  std::set<std::string> object_types;
  std::map<std::string, AttrType> attribute_types;

  bool operator==(const Ocel&) const = default;

  const Event* find_event(const std::string& event_id) const;
};

// Projection of an OCEL onto one object type. Keeps exactly the events that
// reference at least one object of that type, in the OCEL order.
struct FlattenedLog {
  std::string otype;
  std::vector<Event> events;
  // event id -> the (non-empty) objects of `otype` in that event's omap
  std::map<std::string, std::set<std::string>> case_map;
};

struct Trace {
  std::string object_id;
  std::vector<std::string> activities;
};

// JSON-OCEL ingestion. Validates the structural invariants and reports
// missing keys, dangling object references, bad timestamps, duplicate event
// ids and attribute type conflicts with the offending id and key path.
Ocel parse_ocel(std::istream& source);
Ocel parse_ocel(const std::string& text);
Ocel parse_ocel_file(const std::string& path);

// Serialization back to JSON-OCEL. `extra_global` entries are merged into
// the "ocel:global-log" section (used to embed run metadata).
std::string to_jsonocel(const Ocel& log,
                        const std::map<std::string, std::string>& extra_global = {});
void write_ocel_file(const Ocel& log, const std::string& path,
                     const std::map<std::string, std::string>& extra_global = {});

FlattenedLog flatten(const Ocel& log, const std::string& otype);

// Activities of one object's events in the flattened-log order.
Trace extract_trace(const FlattenedLog& fl, const std::string& object_id);

// Distinct object ids across all case sets, ascending.
std::vector<std::string> case_objects(const FlattenedLog& fl);

}  // namespace oclust
