#pragma once

// Reference alignment by exhaustion: every realization of the trace is
// aligned as a deterministic trace, and the cheapest result wins.
//
// Deliberately shares no code with the product-net search. The model's
// reachability graph is built explicitly, and each realization is aligned by a
// layered dynamic program (layer = events consumed) with Bellman-Ford
// relaxation of model moves inside each layer.

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "stocon/cost.hpp"
#include "stocon/error.hpp"
#include "stocon/log.hpp"
#include "stocon/net.hpp"
#include "stocon/search.hpp"
#include "stocon/sync_product.hpp"
#include "stocon/trace_net.hpp"

namespace stocon {

struct ReachabilityGraph {
  struct Edge {
    std::size_t transition;
    std::size_t target;
  };
  std::vector<Marking> states;
  std::vector<std::vector<Edge>> edges;
  std::size_t initial = 0;
  std::optional<std::size_t> final_state;
};

/// Breadth-first enumeration of the model's reachable markings.
inline ReachabilityGraph build_reachability_graph(const SystemNet& net, std::size_t state_cap) {
  ReachabilityGraph rg;
  std::map<std::map<std::string, std::uint32_t>, std::size_t> seen;
  std::map<std::string, std::size_t> tindex;
  for (std::size_t i = 0; i < net.transitions.size(); ++i) tindex[net.transitions[i].id] = i;

  rg.states.push_back(net.initial_marking);
  rg.edges.emplace_back();
  seen.emplace(net.initial_marking.entries(), 0);
  for (std::size_t s = 0; s < rg.states.size(); ++s) {
    if (rg.states[s] == net.final_marking) rg.final_state = s;
    for (const auto& id : enabled_transitions(net, rg.states[s])) {
      Marking m = fire(net, rg.states[s], id);
      auto [it, inserted] = seen.emplace(m.entries(), rg.states.size());
      if (inserted) {
        if (rg.states.size() >= state_cap)
          throw CapacityError("model reachability graph exceeds " + std::to_string(state_cap) + " markings");
        rg.states.push_back(std::move(m));
        rg.edges.emplace_back();
      }
      rg.edges[s].push_back({tindex.at(id), it->second});
    }
  }
  return rg;
}

namespace detail {

struct OracleStep {
  MoveKind kind;
  std::size_t model_transition;  // valid for Sync / ModelMove
  std::size_t prev_layer;
  std::size_t prev_state;
  double cost;
};

}  // namespace detail

/// Cheapest alignment over all realizations of `trace`; must agree with
/// optimal_alignment on the product of the same inputs.
inline Alignment brute_force_alignment(const SystemNet& model, const StochasticTrace& trace,
                                       const CostProfile& profile, std::uint64_t cap,
                                       std::size_t state_cap = 100'000) {
  profile.validate();
  validate_trace(trace);
  const auto realizations = enumerate_realizations(trace, cap);
  const ReachabilityGraph rg = build_reachability_graph(model, state_cap);
  if (!rg.final_state) throw NoAlignmentError("model final marking is unreachable");

  const std::size_t L = trace.events.size();
  const std::size_t S = rg.states.size();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  auto model_move_cost = [&](std::size_t t) {
    return model.transitions[t].label.is_tau() ? profile.tau_model_move_cost : profile.nonsync_cost;
  };

  Alignment best;
  best.total_cost = kInf;
  for (const auto& r : realizations) {
    std::vector<std::vector<double>> dist(L + 1, std::vector<double>(S, kInf));
    std::vector<std::vector<std::optional<detail::OracleStep>>> step(
        L + 1, std::vector<std::optional<detail::OracleStep>>(S));
    dist[0][rg.initial] = 0.0;

    for (std::size_t layer = 0; layer <= L; ++layer) {
      // model moves: relax to a fixpoint (nonnegative costs)
      for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t s = 0; s < S; ++s) {
          if (dist[layer][s] == kInf) continue;
          for (const auto& e : rg.edges[s]) {
            const double c = model_move_cost(e.transition);
            if (dist[layer][s] + c < dist[layer][e.target]) {
              dist[layer][e.target] = dist[layer][s] + c;
              step[layer][e.target] = detail::OracleStep{MoveKind::ModelMove, e.transition, layer, s, c};
              changed = true;
            }
          }
        }
      }
      if (layer == L) break;
      const auto& alt = trace.events[layer].distribution[r.choice[layer]];
      const ActivityLabel observed(alt.activity);
      const double sc = sync_cost(profile, alt.probability);
      for (std::size_t s = 0; s < S; ++s) {
        if (dist[layer][s] == kInf) continue;
        const double log_c = dist[layer][s] + profile.nonsync_cost;
        if (log_c < dist[layer + 1][s]) {
          dist[layer + 1][s] = log_c;
          step[layer + 1][s] = detail::OracleStep{MoveKind::LogMove, 0, layer, s, profile.nonsync_cost};
        }
        for (const auto& e : rg.edges[s]) {
          if (model.transitions[e.transition].label != observed) continue;
          const double c = dist[layer][s] + sc;
          if (c < dist[layer + 1][e.target]) {
            dist[layer + 1][e.target] = c;
            step[layer + 1][e.target] = detail::OracleStep{MoveKind::Sync, e.transition, layer, s, sc};
          }
        }
      }
    }

    const double total = dist[L][*rg.final_state];
    if (!(total < best.total_cost)) continue;

    std::vector<AlignmentMove> moves;
    std::size_t layer = L;
    std::size_t s = *rg.final_state;
    while (step[layer][s]) {
      const auto& st = *step[layer][s];
      AlignmentMove m;
      m.kind = st.kind;
      m.cost = st.cost;
      if (st.kind != MoveKind::LogMove) {
        const auto& mt = model.transitions[st.model_transition];
        m.model_transition = mt.id;
        m.model_label = mt.label;
      }
      if (st.kind != MoveKind::ModelMove) {
        const std::size_t i = st.prev_layer;
        const auto& alt = trace.events[i].distribution[r.choice[i]];
        m.trace_transition = trace_transition_id(i + 1, r.choice[i] + 1);
        m.trace_label = ActivityLabel(alt.activity);
        if (st.kind == MoveKind::Sync) m.weight = alt.probability;
      }
      switch (st.kind) {
        case MoveKind::ModelMove: m.transition_id = model_ns(*m.model_transition); break;
        case MoveKind::LogMove: m.transition_id = trace_ns(*m.trace_transition); break;
        case MoveKind::Sync: m.transition_id = sync_id(*m.model_transition, *m.trace_transition); break;
      }
      moves.push_back(std::move(m));
      layer = st.prev_layer;
      s = st.prev_state;
    }
    std::reverse(moves.begin(), moves.end());
    best.moves = std::move(moves);
    best.total_cost = total;
  }
  if (best.total_cost == kInf) throw NoAlignmentError("no realization aligns with the model");
  return best;
}

}  // namespace stocon
