#pragma once

// Net file I/O: the JSON net document and a minimal PNML importer.

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <nlohmann/json.hpp>

#include "stocon/error.hpp"
#include "stocon/net.hpp"

namespace stocon {

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson parse_json_document(std::string_view bytes) {
  try {
    return ojson::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

inline const ojson& require(const ojson& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(where + ": missing field \"" + key + "\"");
  return *it;
}

inline std::string require_string(const ojson& v, const std::string& where) {
  if (!v.is_string()) throw ParseError(where + ": expected a string");
  return v.get<std::string>();
}

inline Marking parse_marking(const ojson& v, const std::string& where) {
  if (!v.is_object()) throw ParseError(where + ": expected an object of place -> count");
  Marking m;
  for (const auto& [place, count] : v.items()) {
    if (!count.is_number_integer() || count.get<std::int64_t>() <= 0 ||
        count.get<std::int64_t>() > std::numeric_limits<std::uint32_t>::max())
      throw ParseError(where + "." + place + ": token count must be a positive integer");
    m.add(place, static_cast<std::uint32_t>(count.get<std::int64_t>()));
  }
  return m;
}

inline ojson marking_to_json(const Marking& m) {
  ojson out = ojson::object();
  for (const auto& [p, n] : m.entries()) out[p] = n;
  return out;
}

inline void throw_if_invalid(const SystemNet& net, const std::string& what) {
  auto report = validate_net(net);
  if (report.empty()) return;
  std::string msg = what + ": " + report.front();
  if (report.size() > 1) msg += " (and " + std::to_string(report.size() - 1) + " more)";
  throw ParseError(msg);
}

}  // namespace detail

/// Parses a JSON net document. Structural violations are parse errors that
/// name the offending element.
inline SystemNet parse_net(std::string_view bytes) {
  using detail::ojson;
  const ojson doc = detail::parse_json_document(bytes);
  if (!doc.is_object()) throw ParseError("net document: top level must be an object");

  SystemNet net;
  const auto& places = detail::require(doc, "places", "net");
  if (!places.is_array()) throw ParseError("places: expected an array");
  for (std::size_t i = 0; i < places.size(); ++i)
    net.places.push_back(detail::require_string(places[i], "places[" + std::to_string(i) + "]"));

  const auto& transitions = detail::require(doc, "transitions", "net");
  if (!transitions.is_array()) throw ParseError("transitions: expected an array");
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    const std::string where = "transitions[" + std::to_string(i) + "]";
    const auto& t = transitions[i];
    if (!t.is_object()) throw ParseError(where + ": expected an object");
    Transition tr;
    tr.id = detail::require_string(detail::require(t, "id", where), where + ".id");
    if (auto lbl = t.find("label"); lbl != t.end() && !lbl->is_null())
      tr.label = ActivityLabel(detail::require_string(*lbl, where + ".label"));
    if (auto w = t.find("weight"); w != t.end() && !w->is_null()) {
      if (!w->is_number()) throw ParseError(where + ".weight: expected a number");
      tr.weight = w->get<double>();
    }
    net.transitions.push_back(std::move(tr));
  }

  const auto& arcs = detail::require(doc, "arcs", "net");
  if (!arcs.is_array()) throw ParseError("arcs: expected an array");
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const std::string where = "arcs[" + std::to_string(i) + "]";
    const auto& a = arcs[i];
    if (!a.is_array() || a.size() != 2) throw ParseError(where + ": expected [source, target]");
    net.arcs.push_back(Arc{detail::require_string(a[0], where + "[0]"),
                           detail::require_string(a[1], where + "[1]")});
  }

  net.initial_marking =
      detail::parse_marking(detail::require(doc, "initial_marking", "net"), "initial_marking");
  net.final_marking =
      detail::parse_marking(detail::require(doc, "final_marking", "net"), "final_marking");

  detail::throw_if_invalid(net, "invalid net");
  return net;
}

namespace detail {

inline ojson net_to_json(const SystemNet& net) {
  ojson doc = ojson::object();
  doc["places"] = net.places;
  ojson ts = ojson::array();
  for (const auto& t : net.transitions) {
    ojson jt = ojson::object();
    jt["id"] = t.id;
    jt["label"] = t.label.is_tau() ? ojson(nullptr) : ojson(t.label.text());
    if (t.weight) jt["weight"] = *t.weight;
    ts.push_back(std::move(jt));
  }
  doc["transitions"] = std::move(ts);
  ojson as = ojson::array();
  for (const auto& a : net.arcs) as.push_back(ojson::array({a.source, a.target}));
  doc["arcs"] = std::move(as);
  doc["initial_marking"] = marking_to_json(net.initial_marking);
  doc["final_marking"] = marking_to_json(net.final_marking);
  return doc;
}

}  // namespace detail

inline std::string serialize_net(const SystemNet& net) { return detail::net_to_json(net).dump(2) + "\n"; }

/// Imports the PNML subset: places (with initialMarking), transitions (name or
/// the ProM invisible marker), arcs with inscription 1, and pm4py-style
/// finalmarkings. `final_marking` overrides/supplies the final marking.
inline SystemNet import_pnml(std::string_view bytes, std::optional<Marking> final_marking = std::nullopt) {
  namespace pt = boost::property_tree;
  pt::ptree doc;
  try {
    std::istringstream in{std::string(bytes)};
    pt::read_xml(in, doc, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw ParseError(std::string("malformed PNML: ") + e.what());
  }

  auto text_of = [](const pt::ptree& node) -> std::optional<std::string> {
    if (auto t = node.get_child_optional("text")) return t->get_value<std::string>();
    return std::nullopt;
  };
  auto attr = [](const pt::ptree& node, const char* name) -> std::optional<std::string> {
    if (auto a = node.get_child_optional(std::string("<xmlattr>.") + name)) return a->get_value<std::string>();
    return std::nullopt;
  };
  auto unsupported = [](const std::string& what) {
    throw UnsupportedFeatureError("unsupported PNML feature: " + what);
  };

  SystemNet net;
  std::optional<Marking> file_final;

  auto parse_place = [&](const pt::ptree& node) {
    auto id = attr(node, "id");
    if (!id) throw ParseError("PNML place without id");
    net.places.push_back(*id);
    for (const auto& [tag, child] : node) {
      if (tag == "<xmlattr>" || tag == "name" || tag == "graphics") continue;
      if (tag == "initialMarking") {
        auto txt = text_of(child);
        if (!txt) throw ParseError("PNML place " + *id + ": initialMarking without text");
        long n = 0;
        try {
          n = std::stol(*txt);
        } catch (const std::exception&) {
          throw ParseError("PNML place " + *id + ": bad initialMarking '" + *txt + "'");
        }
        if (n < 0) throw ParseError("PNML place " + *id + ": negative initialMarking");
        net.initial_marking.add(*id, static_cast<std::uint32_t>(n));
        continue;
      }
      unsupported("<" + tag + "> in place " + *id);
    }
  };

  auto parse_transition = [&](const pt::ptree& node) {
    auto id = attr(node, "id");
    if (!id) throw ParseError("PNML transition without id");
    Transition t{*id, ActivityLabel::tau(), std::nullopt};
    bool invisible = false;
    std::optional<std::string> name;
    for (const auto& [tag, child] : node) {
      if (tag == "<xmlattr>" || tag == "graphics") continue;
      if (tag == "name") {
        name = text_of(child);
        continue;
      }
      if (tag == "toolspecific") {
        auto activity = attr(child, "activity");
        if (activity && *activity == "$invisible$") {
          invisible = true;
          continue;
        }
        if (child.size() <= 1 && activity) continue;  // ProM visible-activity marker
      }
      unsupported("<" + tag + "> in transition " + *id);
    }
    if (!invisible && name && !name->empty()) t.label = ActivityLabel(*name);
    net.transitions.push_back(std::move(t));
  };

  auto parse_arc = [&](const pt::ptree& node) {
    auto src = attr(node, "source");
    auto dst = attr(node, "target");
    if (!src || !dst) throw ParseError("PNML arc without source/target");
    for (const auto& [tag, child] : node) {
      if (tag == "<xmlattr>" || tag == "graphics" || tag == "name") continue;
      if (tag == "inscription") {
        auto txt = text_of(child);
        if (txt && *txt != "1") unsupported("arc inscription '" + *txt + "' (multiplicity must be 1)");
        continue;
      }
      unsupported("<" + tag + "> in arc " + *src + "->" + *dst);
    }
    net.arcs.push_back(Arc{*src, *dst});
  };

  auto parse_final_markings = [&](const pt::ptree& node) {
    for (const auto& [tag, marking] : node) {
      if (tag != "marking") unsupported("<" + tag + "> in finalmarkings");
      if (file_final) unsupported("more than one final marking");
      Marking m;
      for (const auto& [ptag, place] : marking) {
        if (ptag != "place") unsupported("<" + ptag + "> in final marking");
        auto idref = attr(place, "idref");
        auto txt = text_of(place);
        if (!idref || !txt) throw ParseError("PNML final marking place without idref/text");
        m.add(*idref, static_cast<std::uint32_t>(std::stoul(*txt)));
      }
      file_final = std::move(m);
    }
  };

  std::function<void(const pt::ptree&)> parse_container = [&](const pt::ptree& node) {
    for (const auto& [tag, child] : node) {
      if (tag == "<xmlattr>" || tag == "name" || tag == "graphics" || tag == "<xmlcomment>") continue;
      if (tag == "page") parse_container(child);
      else if (tag == "place") parse_place(child);
      else if (tag == "transition") parse_transition(child);
      else if (tag == "arc") parse_arc(child);
      else if (tag == "finalmarkings") parse_final_markings(child);
      else unsupported("<" + tag + ">");
    }
  };

  auto root = doc.get_child_optional("pnml");
  if (!root) throw ParseError("PNML document without <pnml> root");
  std::size_t nets = 0;
  for (const auto& [tag, child] : *root) {
    if (tag == "<xmlattr>" || tag == "<xmlcomment>") continue;
    if (tag != "net") unsupported("<" + tag + "> under <pnml>");
    if (++nets > 1) unsupported("more than one <net>");
    parse_container(child);
  }
  if (nets == 0) throw ParseError("PNML document without <net>");

  if (final_marking) net.final_marking = *final_marking;
  else if (file_final) net.final_marking = *file_final;
  else throw ParseError("PNML document has no final marking; supply one explicitly");

  detail::throw_if_invalid(net, "invalid PNML net");
  return net;
}

/// Parses "p1:1,p2:2" (count defaults to 1 when ":n" is omitted).
inline Marking parse_marking_spec(std::string_view spec) {
  Marking m;
  std::string item;
  std::istringstream in{std::string(spec)};
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    auto colon = item.rfind(':');
    std::uint32_t n = 1;
    std::string place = item;
    if (colon != std::string::npos) {
      place = item.substr(0, colon);
      try {
        n = static_cast<std::uint32_t>(std::stoul(item.substr(colon + 1)));
      } catch (const std::exception&) {
        throw ParseError("bad marking entry '" + item + "'");
      }
    }
    if (place.empty() || n == 0) throw ParseError("bad marking entry '" + item + "'");
    m.add(place, n);
  }
  return m;
}

}  // namespace stocon
