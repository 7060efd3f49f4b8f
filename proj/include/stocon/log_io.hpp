#pragma once

// Stochastic log JSON documents and XES import.

#include <sstream>
#include <string>
#include <string_view>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <nlohmann/json.hpp>

#include "stocon/error.hpp"
#include "stocon/log.hpp"

namespace stocon {

/// Parses a stochastic log document and validates every distribution.
inline StochasticLog parse_log(std::string_view bytes) {
  using ojson = nlohmann::ordered_json;
  ojson doc;
  try {
    doc = ojson::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("cases") || !doc["cases"].is_array())
    throw ParseError("log document: expected an object with a \"cases\" array");

  StochasticLog log;
  const auto& cases = doc["cases"];
  for (std::size_t c = 0; c < cases.size(); ++c) {
    const std::string where = "cases[" + std::to_string(c) + "]";
    const auto& jc = cases[c];
    if (!jc.is_object()) throw ParseError(where + ": expected an object");
    StochasticTrace trace;
    auto id = jc.find("case_id");
    if (id == jc.end() || !id->is_string()) throw ParseError(where + ".case_id: expected a string");
    trace.case_id = id->get<std::string>();
    auto events = jc.find("events");
    if (events == jc.end() || !events->is_array()) throw ParseError(where + ".events: expected an array");
    for (std::size_t i = 0; i < events->size(); ++i) {
      const std::string ew = where + ".events[" + std::to_string(i) + "]";
      const auto& je = (*events)[i];
      if (!je.is_object()) throw ParseError(ew + ": expected an object");
      StochasticEvent e;
      if (auto eid = je.find("event_id"); eid != je.end()) {
        if (!eid->is_string()) throw ParseError(ew + ".event_id: expected a string");
        e.event_id = eid->get<std::string>();
      }
      if (auto ts = je.find("timestamp"); ts != je.end() && !ts->is_null()) {
        if (!ts->is_string()) throw ParseError(ew + ".timestamp: expected a string");
        e.timestamp = ts->get<std::string>();
      }
      auto acts = je.find("activities");
      if (acts == je.end() || !acts->is_object()) throw ParseError(ew + ".activities: expected an object");
      for (const auto& [label, p] : acts->items()) {
        if (!p.is_number()) throw ParseError(ew + ".activities." + label + ": expected a number");
        e.distribution.push_back({label, p.get<double>()});
      }
      trace.events.push_back(std::move(e));
    }
    log.traces.push_back(std::move(trace));
  }
  validate_log(log);
  return log;
}

inline std::string serialize_log(const StochasticLog& log) {
  using ojson = nlohmann::ordered_json;
  ojson cases = ojson::array();
  for (const auto& t : log.traces) {
    ojson events = ojson::array();
    for (const auto& e : t.events) {
      ojson je = ojson::object();
      je["event_id"] = e.event_id;
      if (e.timestamp) je["timestamp"] = *e.timestamp;
      ojson acts = ojson::object();
      for (const auto& a : e.distribution) acts[a.activity] = a.probability;
      je["activities"] = std::move(acts);
      events.push_back(std::move(je));
    }
    ojson jc = ojson::object();
    jc["case_id"] = t.case_id;
    jc["events"] = std::move(events);
    cases.push_back(std::move(jc));
  }
  ojson doc = ojson::object();
  doc["cases"] = std::move(cases);
  return doc.dump(2) + "\n";
}

struct XesImport {
  StochasticLog log;
  std::size_t skipped_events = 0;  // events without concept:name
};

/// Reads trace boundaries and concept:name from an XES document. Each event
/// becomes a probability-1 distribution; all other attributes are ignored
/// except time:timestamp, which is carried.
inline XesImport import_xes(std::string_view bytes) {
  namespace pt = boost::property_tree;
  pt::ptree doc;
  try {
    std::istringstream in{std::string(bytes)};
    pt::read_xml(in, doc, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(std::string("malformed XES: ") + e.what());
  }
  auto root = doc.get_child_optional("log");
  if (!root) throw ParseError("XES document without <log> root");

  auto keyed = [](const pt::ptree& node, const char* tag, const char* key) -> std::optional<std::string> {
    for (const auto& [t, child] : node) {
      if (t != tag) continue;
      if (child.get<std::string>("<xmlattr>.key", "") == key)
        return child.get<std::string>("<xmlattr>.value", "");
    }
    return std::nullopt;
  };

  XesImport result;
  std::size_t trace_index = 0;
  for (const auto& [tag, trace] : *root) {
    if (tag != "trace") continue;
    ++trace_index;
    StochasticTrace st;
    st.case_id = keyed(trace, "string", "concept:name").value_or(std::to_string(trace_index));
    for (const auto& [etag, event] : trace) {
      if (etag != "event") continue;
      auto name = keyed(event, "string", "concept:name");
      if (!name || name->empty()) {
        ++result.skipped_events;
        continue;
      }
      StochasticEvent e;
      e.event_id = "e" + std::to_string(st.events.size() + 1);
      e.timestamp = keyed(event, "date", "time:timestamp");
      e.distribution.push_back({*name, 1.0});
      st.events.push_back(std::move(e));
    }
    result.log.traces.push_back(std::move(st));
  }
  validate_log(result.log);
  return result;
}

}  // namespace stocon
