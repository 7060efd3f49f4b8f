#pragma once

// Optimal alignment as a shortest path over the reachability graph of the
// synchronous product. The graph is explored implicitly: Dijkstra by default,
// A* when the position-based heuristic is enabled.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "stocon/cost.hpp"
#include "stocon/error.hpp"
#include "stocon/net.hpp"
#include "stocon/sync_product.hpp"

namespace stocon {

struct SearchOptions {
  bool heuristic = false;
  std::size_t node_cap = 1'000'000;  // max explored (closed) markings
};

struct AlignmentMove {
  std::string transition_id;
  MoveKind kind = MoveKind::ModelMove;
  std::optional<std::string> model_transition;
  std::optional<std::string> trace_transition;
  SideLabel model_label;
  SideLabel trace_label;
  std::optional<double> weight;
  double cost = 0.0;
};

struct Alignment {
  std::vector<AlignmentMove> moves;
  double total_cost = 0.0;
  std::size_t explored_nodes = 0;

  std::size_t count(MoveKind k) const {
    return static_cast<std::size_t>(
        std::count_if(moves.begin(), moves.end(), [k](const AlignmentMove& m) { return m.kind == k; }));
  }
};

inline AlignmentMove make_alignment_move(const ProductTransition& t, double cost) {
  return AlignmentMove{t.id, t.kind, t.model_transition, t.trace_transition, t.model_label, t.trace_label,
                       t.weight, cost};
}

namespace detail {

struct DenseHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto x : v) {
      h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

/// Per-position lower bound on the cost of crossing the remaining trace,
/// indexed by the number of events already consumed.
inline std::vector<double> remaining_cost_bounds(const SyncProductNet& product, const CostProfile& profile) {
  const std::size_t n = product.trace_length();
  std::vector<double> cheapest(n, profile.nonsync_cost);
  for (const auto& m : product.moves) {
    if (m.kind != MoveKind::Sync) continue;
    const double c = move_cost(m, profile);
    cheapest[*m.trace_position] = std::min(cheapest[*m.trace_position], c);
  }
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t k = n; k-- > 0;) suffix[k] = suffix[k + 1] + cheapest[k];
  return suffix;
}

}  // namespace detail

/// Lower bound on the cost still needed from `marking`: each event not yet
/// consumed must be crossed by exactly one log or sync move.
inline double admissible_heuristic(const Marking& marking, const SyncProductNet& product,
                                   const CostProfile& profile) {
  const auto suffix = detail::remaining_cost_bounds(product, profile);
  for (std::size_t k = 0; k < product.trace_places.size(); ++k)
    if (marking.count(product.trace_places[k]) > 0) return suffix[k];
  throw DomainError("marking " + marking.to_string() + " has no token on the trace side");
}

/// Minimum-cost firing sequence from the initial to the final marking.
/// Ties are broken by (f, fewer moves, transition id order, discovery order),
/// so the reported alignment is deterministic.
inline Alignment optimal_alignment(const SyncProductNet& product, const CostProfile& profile,
                                   const SearchOptions& options = {}) {
  profile.validate();
  const CompiledNet net(product.net);
  const std::size_t T = net.transition_count();

  std::vector<double> cost(T);
  for (std::size_t t = 0; t < T; ++t) cost[t] = move_cost(product.moves[t], profile);

  std::vector<std::uint32_t> id_rank(T);
  {
    std::vector<std::size_t> order(T);
    for (std::size_t i = 0; i < T; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return product.moves[a].id < product.moves[b].id; });
    for (std::size_t r = 0; r < T; ++r) id_rank[order[r]] = static_cast<std::uint32_t>(r);
  }

  const std::vector<double> suffix = options.heuristic ? detail::remaining_cost_bounds(product, profile)
                                                       : std::vector<double>(product.trace_length() + 1, 0.0);
  std::vector<bool> advances(T, false);
  for (std::size_t t = 0; t < T; ++t) advances[t] = product.moves[t].kind != MoveKind::ModelMove;

  std::size_t start_pos = 0;
  for (std::size_t k = 0; k < product.trace_places.size(); ++k)
    if (product.net.initial_marking.count(product.trace_places[k]) > 0) start_pos = k;

  struct Node {
    const std::vector<std::uint32_t>* marking;
    double g;
    std::size_t parent;
    std::size_t via;
    std::uint32_t moves;
    std::uint32_t pos;
    bool closed;
  };
  struct Entry {
    double f;
    std::uint32_t moves;
    std::uint32_t rank;
    std::uint64_t seq;
    double g;
    std::size_t node;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.f != b.f) return a.f > b.f;
      if (a.moves != b.moves) return a.moves > b.moves;
      if (a.rank != b.rank) return a.rank > b.rank;
      return a.seq > b.seq;
    }
  };
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::unordered_map<std::vector<std::uint32_t>, std::size_t, detail::DenseHash> index;
  std::vector<Node> nodes;
  std::priority_queue<Entry, std::vector<Entry>, Later> open;
  std::uint64_t seq = 0;

  const auto goal = net.dense(product.net.final_marking);
  {
    auto [it, _] = index.emplace(net.dense(product.net.initial_marking), 0);
    nodes.push_back({&it->first, 0.0, kNone, kNone, 0, static_cast<std::uint32_t>(start_pos), false});
    open.push({suffix[start_pos], 0, 0, seq++, 0.0, 0});
  }

  std::size_t explored = 0;
  std::vector<std::uint32_t> next;
  while (!open.empty()) {
    const Entry top = open.top();
    open.pop();
    Node& node = nodes[top.node];
    if (node.closed || top.g > node.g) continue;
    node.closed = true;

    if (*node.marking == goal) {
      Alignment result;
      result.explored_nodes = explored;
      std::vector<std::size_t> path;
      for (std::size_t n = top.node; nodes[n].parent != kNone; n = nodes[n].parent) path.push_back(nodes[n].via);
      std::reverse(path.begin(), path.end());
      for (auto t : path) {
        result.moves.push_back(make_alignment_move(product.moves[t], cost[t]));
        result.total_cost += cost[t];
      }
      return result;
    }

    if (++explored > options.node_cap)
      throw CapacityError("alignment search exceeded node cap of " + std::to_string(options.node_cap) +
                          " explored markings (frontier size " + std::to_string(open.size()) + ")");

    const std::vector<std::uint32_t>& here = *node.marking;
    const double g = node.g;
    const std::uint32_t moves = node.moves;
    const std::uint32_t pos = node.pos;
    const std::size_t here_index = top.node;
    for (std::size_t t = 0; t < T; ++t) {
      bool enabled = true;
      for (auto p : net.preset(t))
        if (here[p] == 0) {
          enabled = false;
          break;
        }
      if (!enabled) continue;
      next = here;
      for (auto p : net.preset(t)) --next[p];
      for (auto p : net.postset(t)) ++next[p];
      const double g2 = g + cost[t];
      const std::uint32_t pos2 = pos + (advances[t] ? 1 : 0);
      auto [it, inserted] = index.emplace(next, nodes.size());
      if (inserted) {
        nodes.push_back({&it->first, g2, here_index, t, moves + 1, pos2, false});
      } else {
        Node& other = nodes[it->second];
        if (other.closed || !(g2 < other.g)) continue;
        other.g = g2;
        other.parent = here_index;
        other.via = t;
        other.moves = moves + 1;
      }
      open.push({g2 + suffix[pos2], moves + 1, id_rank[t], seq++, g2, it->second});
    }
  }
  throw NoAlignmentError("final marking " + product.net.final_marking.to_string() + " is unreachable");
}

}  // namespace stocon
