#pragma once

// Stochastic trace model: a sequential net with one place per boundary and
// one weighted transition per alternative activity of each event.

#include <string>
#include <vector>

#include "stocon/log.hpp"
#include "stocon/net.hpp"

namespace stocon {

inline std::string trace_place_id(std::size_t i) { return "p_" + std::to_string(i); }

/// Event position i and alternative j are 1-based, as in t_1_1.
inline std::string trace_transition_id(std::size_t i, std::size_t j) {
  return "t_" + std::to_string(i) + "_" + std::to_string(j);
}

inline SystemNet build_stochastic_trace_net(const StochasticTrace& trace) {
  validate_trace(trace);
  SystemNet net;
  const std::size_t n = trace.events.size();
  for (std::size_t i = 0; i <= n; ++i) net.places.push_back(trace_place_id(i));
  for (std::size_t i = 1; i <= n; ++i) {
    const auto& event = trace.events[i - 1];
    for (std::size_t j = 1; j <= event.distribution.size(); ++j) {
      const auto& alt = event.distribution[j - 1];
      const auto id = trace_transition_id(i, j);
      net.transitions.push_back({id, ActivityLabel(alt.activity), alt.probability});
      net.arcs.push_back({trace_place_id(i - 1), id});
      net.arcs.push_back({id, trace_place_id(i)});
    }
  }
  net.initial_marking.add(trace_place_id(0));
  net.final_marking.add(trace_place_id(n));
  return net;
}

/// Position structure of a trace net, recovered from the net itself.
struct TraceNetLayout {
  std::vector<std::string> places;                 // boundary places in order, size = length + 1
  std::vector<std::vector<std::string>> positions;  // transitions crossing each position
};

/// Walks the chain from the initial place. Throws DomainError if the net is
/// not a sequential trace net (single-token start/end, 1-in/1-out transitions
/// between consecutive places, weights summing to 1 per position).
inline TraceNetLayout trace_net_layout(const SystemNet& net) {
  if (net.initial_marking.total() != 1 || net.final_marking.total() != 1)
    throw DomainError("trace net must start and end with a single token");
  const CompiledNet compiled(net);
  std::vector<std::vector<std::size_t>> leaving(compiled.place_count());
  for (std::size_t t = 0; t < compiled.transition_count(); ++t) {
    if (compiled.preset(t).size() != 1 || compiled.postset(t).size() != 1)
      throw DomainError("trace net transition " + net.transitions[t].id + " is not 1-in/1-out");
    if (net.transitions[t].label.is_tau())
      throw DomainError("trace net transition " + net.transitions[t].id + " is silent");
    leaving[compiled.preset(t)[0]].push_back(t);
  }

  TraceNetLayout layout;
  std::size_t place = *compiled.place(net.initial_marking.entries().begin()->first);
  std::size_t visited = 0;
  layout.places.push_back(net.places[place]);
  while (!leaving[place].empty()) {
    const auto& ts = leaving[place];
    const std::size_t next = compiled.postset(ts.front())[0];
    std::vector<std::string> ids;
    double sum = 0.0;
    for (auto t : ts) {
      if (compiled.postset(t)[0] != next)
        throw DomainError("trace net position at " + net.places[place] + " branches to different places");
      ids.push_back(net.transitions[t].id);
      sum += net.transitions[t].weight.value_or(1.0);
    }
    if (std::abs(sum - 1.0) > kDistributionTolerance)
      throw DomainError("trace net weights at " + net.places[place] + " do not sum to 1");
    visited += ts.size();
    layout.positions.push_back(std::move(ids));
    place = next;
    layout.places.push_back(net.places[place]);
    if (layout.places.size() > compiled.place_count()) throw DomainError("trace net contains a cycle");
  }
  if (visited != compiled.transition_count()) throw DomainError("trace net has unreachable transitions");
  if (net.final_marking.count(net.places[place]) != 1)
    throw DomainError("trace net final marking is not the end of the chain");
  return layout;
}

}  // namespace stocon
