#pragma once

// Stochastic synchronous product of a process model and a stochastic trace net.

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "stocon/net.hpp"
#include "stocon/net_io.hpp"
#include "stocon/trace_net.hpp"

namespace stocon {

enum class MoveKind { Sync, LogMove, ModelMove };

inline const char* to_string(MoveKind k) {
  switch (k) {
    case MoveKind::Sync: return "sync";
    case MoveKind::LogMove: return "log";
    case MoveKind::ModelMove: return "model";
  }
  return "?";
}

/// Label of one side of a move; nullopt is the gap ">>".
using SideLabel = std::optional<ActivityLabel>;

inline std::string display(const SideLabel& l) { return l ? l->display() : std::string(">>"); }

struct ProductTransition {
  std::string id;
  MoveKind kind = MoveKind::ModelMove;
  std::optional<std::string> model_transition;
  std::optional<std::string> trace_transition;
  SideLabel model_label;
  SideLabel trace_label;
  std::optional<double> weight;            // sync moves only
  std::optional<std::size_t> trace_position;  // 0-based event index, log and sync moves

  friend bool operator==(const ProductTransition&, const ProductTransition&) = default;
};

/// The product net plus one annotation per transition (same order).
struct SyncProductNet {
  SystemNet net;
  std::vector<ProductTransition> moves;
  std::vector<std::string> trace_places;  // namespaced boundary places, in trace order

  std::size_t trace_length() const { return trace_places.empty() ? 0 : trace_places.size() - 1; }
};

inline std::string model_ns(const std::string& id) { return "m:" + id; }
inline std::string trace_ns(const std::string& id) { return "l:" + id; }
inline std::string sync_id(const std::string& model_t, const std::string& trace_t) {
  return "s:(" + model_t + "," + trace_t + ")";
}

/// Builds the product: every model transition as a model move, every trace
/// transition as a log move, and every label-matching pair as a sync move
/// weighted by its trace transition. TAU never matches.
inline SyncProductNet build_sync_product(const SystemNet& model, const SystemNet& tracenet) {
  if (auto report = validate_net(model); !report.empty()) throw DomainError("invalid model: " + report.front());
  if (auto report = validate_net(tracenet); !report.empty())
    throw DomainError("invalid trace net: " + report.front());
  const TraceNetLayout layout = trace_net_layout(tracenet);

  std::unordered_map<std::string, std::size_t> position_of;
  for (std::size_t i = 0; i < layout.positions.size(); ++i)
    for (const auto& t : layout.positions[i]) position_of.emplace(t, i);

  SyncProductNet product;
  SystemNet& net = product.net;
  for (const auto& p : model.places) net.places.push_back(model_ns(p));
  for (const auto& p : tracenet.places) net.places.push_back(trace_ns(p));
  for (const auto& p : layout.places) product.trace_places.push_back(trace_ns(p));
  {
    std::unordered_map<std::string, int> seen;
    for (const auto& p : net.places)
      if (seen[p]++) throw DomainError("place id collision in product: " + p);
  }

  std::unordered_map<std::string, std::vector<std::string>> model_pre, model_post, trace_pre, trace_post;
  for (const auto& a : model.arcs) {
    if (model.find_transition(a.target)) model_pre[a.target].push_back(a.source);
    else model_post[a.source].push_back(a.target);
  }
  for (const auto& a : tracenet.arcs) {
    if (tracenet.find_transition(a.target)) trace_pre[a.target].push_back(a.source);
    else trace_post[a.source].push_back(a.target);
  }

  auto add = [&](ProductTransition move, const Transition* mt, const Transition* tt) {
    Transition t{move.id, ActivityLabel::tau(), move.weight};
    if (mt && tt) t.label = mt->label;
    else if (mt) t.label = mt->label;
    else t.label = tt->label;
    net.transitions.push_back(t);
    if (mt) {
      for (const auto& p : model_pre[mt->id]) net.arcs.push_back({model_ns(p), move.id});
      for (const auto& p : model_post[mt->id]) net.arcs.push_back({move.id, model_ns(p)});
    }
    if (tt) {
      for (const auto& p : trace_pre[tt->id]) net.arcs.push_back({trace_ns(p), move.id});
      for (const auto& p : trace_post[tt->id]) net.arcs.push_back({move.id, trace_ns(p)});
    }
    product.moves.push_back(std::move(move));
  };

  for (const auto& mt : model.transitions) {
    ProductTransition m;
    m.id = model_ns(mt.id);
    m.kind = MoveKind::ModelMove;
    m.model_transition = mt.id;
    m.model_label = mt.label;
    add(std::move(m), &mt, nullptr);
  }
  for (const auto& tt : tracenet.transitions) {
    ProductTransition m;
    m.id = trace_ns(tt.id);
    m.kind = MoveKind::LogMove;
    m.trace_transition = tt.id;
    m.trace_label = tt.label;
    m.trace_position = position_of.at(tt.id);
    add(std::move(m), nullptr, &tt);
  }
  for (const auto& mt : model.transitions) {
    if (mt.label.is_tau()) continue;
    for (const auto& tt : tracenet.transitions) {
      if (tt.label != mt.label) continue;
      ProductTransition m;
      m.id = sync_id(mt.id, tt.id);
      m.kind = MoveKind::Sync;
      m.model_transition = mt.id;
      m.trace_transition = tt.id;
      m.model_label = mt.label;
      m.trace_label = tt.label;
      m.weight = tt.weight.value_or(1.0);
      m.trace_position = position_of.at(tt.id);
      add(std::move(m), &mt, &tt);
    }
  }

  for (const auto& [p, n] : model.initial_marking.entries()) net.initial_marking.add(model_ns(p), n);
  for (const auto& [p, n] : tracenet.initial_marking.entries()) net.initial_marking.add(trace_ns(p), n);
  for (const auto& [p, n] : model.final_marking.entries()) net.final_marking.add(model_ns(p), n);
  for (const auto& [p, n] : tracenet.final_marking.entries()) net.final_marking.add(trace_ns(p), n);
  return product;
}

/// Net document plus a "moves" side table, for debugging.
inline std::string serialize_product(const SyncProductNet& product) {
  using ojson = nlohmann::ordered_json;
  ojson doc = detail::net_to_json(product.net);
  ojson moves = ojson::array();
  for (const auto& m : product.moves) {
    ojson jm = ojson::object();
    jm["id"] = m.id;
    jm["kind"] = to_string(m.kind);
    jm["model_transition"] = m.model_transition ? ojson(*m.model_transition) : ojson(nullptr);
    jm["trace_transition"] = m.trace_transition ? ojson(*m.trace_transition) : ojson(nullptr);
    jm["labels"] = ojson::array({display(m.model_label), display(m.trace_label)});
    jm["weight"] = m.weight ? ojson(*m.weight) : ojson(nullptr);
    moves.push_back(std::move(jm));
  }
  doc["moves"] = std::move(moves);
  return doc.dump(2) + "\n";
}

}  // namespace stocon
