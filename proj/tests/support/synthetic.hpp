#pragma once

// Synthetic models and logs for property and acceptance tests.
//
// Models are built from random process trees (sequence, exclusive choice,
// parallel, loop), which compile to sound, safe Petri nets. Traces are tree
// playouts with optional event-level noise.

#include <algorithm>
#include <string>
#include <vector>

#include "stocon/log.hpp"
#include "stocon/net.hpp"
#include "stocon/perturb.hpp"

namespace stocon::testing {

struct Tree {
  enum class Kind { Leaf, Tau, Seq, Xor, And, Loop };
  Kind kind = Kind::Leaf;
  std::string label;
  std::vector<Tree> children;  // Loop: {do, redo}

  static Tree leaf(std::string a) { return {Kind::Leaf, std::move(a), {}}; }
  static Tree tau() { return {Kind::Tau, {}, {}}; }
  static Tree seq(std::vector<Tree> c) { return {Kind::Seq, {}, std::move(c)}; }
  static Tree choice(std::vector<Tree> c) { return {Kind::Xor, {}, std::move(c)}; }
  static Tree parallel(std::vector<Tree> c) { return {Kind::And, {}, std::move(c)}; }
  static Tree loop(Tree body, Tree redo) { return {Kind::Loop, {}, {std::move(body), std::move(redo)}}; }
};

inline std::vector<std::string> letters(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(std::string(1, static_cast<char>('A' + i)));
  return out;
}

/// Random tree with `leaves` visible leaves labeled from `alphabet`.
inline Tree random_tree(RngStream& rng, const std::vector<std::string>& alphabet, std::size_t leaves,
                        bool parallel = true, int depth = 0) {
  if (leaves <= 1 || depth > 3) {
    if (leaves == 0) return Tree::tau();
    return Tree::leaf(alphabet[rng.uniform_index(alphabet.size())]);
  }
  const std::size_t kind = rng.uniform_index(10);
  if (kind < 1)
    return Tree::loop(random_tree(rng, alphabet, leaves - 1, parallel, depth + 1),
                      rng.uniform_index(2) ? Tree::tau() : random_tree(rng, alphabet, 1, parallel, depth + 1));
  const std::size_t k = std::min<std::size_t>(leaves, 2 + rng.uniform_index(2));
  std::vector<std::size_t> sizes(k, 1);
  for (std::size_t extra = leaves - k; extra > 0; --extra) ++sizes[rng.uniform_index(k)];
  std::vector<Tree> kids;
  for (auto s : sizes) kids.push_back(random_tree(rng, alphabet, s, parallel, depth + 1));
  if (kind < 5 || (!parallel && kind >= 8)) return Tree::seq(std::move(kids));
  if (kind < 8) {
    if (rng.uniform_index(4) == 0) kids.push_back(Tree::tau());
    return Tree::choice(std::move(kids));
  }
  return Tree::parallel(std::move(kids));
}

namespace detail {

struct NetBuilder {
  SystemNet net;
  std::size_t places = 0;
  std::size_t transitions = 0;

  std::string place() {
    net.places.push_back("p" + std::to_string(places++));
    return net.places.back();
  }
  void transition(const ActivityLabel& label, const std::vector<std::string>& in,
                  const std::vector<std::string>& out) {
    const std::string id = "t" + std::to_string(transitions++);
    net.transitions.push_back({id, label, std::nullopt});
    for (const auto& p : in) net.arcs.push_back({p, id});
    for (const auto& p : out) net.arcs.push_back({id, p});
  }

  void build(const Tree& t, const std::string& entry, const std::string& exit) {
    switch (t.kind) {
      case Tree::Kind::Leaf: transition(ActivityLabel(t.label), {entry}, {exit}); break;
      case Tree::Kind::Tau: transition(ActivityLabel::tau(), {entry}, {exit}); break;
      case Tree::Kind::Seq: {
        std::string from = entry;
        for (std::size_t i = 0; i < t.children.size(); ++i) {
          const std::string to = i + 1 == t.children.size() ? exit : place();
          build(t.children[i], from, to);
          from = to;
        }
        break;
      }
      case Tree::Kind::Xor:
        for (const auto& c : t.children) {
          // private places keep each branch a proper block
          const std::string a = place(), b = place();
          transition(ActivityLabel::tau(), {entry}, {a});
          build(c, a, b);
          transition(ActivityLabel::tau(), {b}, {exit});
        }
        break;
      case Tree::Kind::And: {
        std::vector<std::string> starts, ends;
        for (std::size_t i = 0; i < t.children.size(); ++i) starts.push_back(place()), ends.push_back(place());
        transition(ActivityLabel::tau(), {entry}, starts);
        for (std::size_t i = 0; i < t.children.size(); ++i) build(t.children[i], starts[i], ends[i]);
        transition(ActivityLabel::tau(), ends, {exit});
        break;
      }
      case Tree::Kind::Loop: {
        const std::string head = place(), tail = place();
        transition(ActivityLabel::tau(), {entry}, {head});
        build(t.children[0], head, tail);
        build(t.children[1], tail, head);
        transition(ActivityLabel::tau(), {tail}, {exit});
        break;
      }
    }
  }
};

}  // namespace detail

inline SystemNet tree_to_net(const Tree& tree) {
  detail::NetBuilder b;
  const std::string source = b.place(), sink = b.place();
  b.build(tree, source, sink);
  b.net.initial_marking.add(source);
  b.net.final_marking.add(sink);
  return b.net;
}

/// p0 -t_A-> p1 -t_B-> p2 ...
inline SystemNet sequence_net(const std::vector<std::string>& labels) {
  SystemNet net;
  net.places.push_back("p0");
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string id = "t_" + labels[i];
    net.places.push_back("p" + std::to_string(i + 1));
    net.transitions.push_back({id, ActivityLabel(labels[i]), std::nullopt});
    net.arcs.push_back({"p" + std::to_string(i), id});
    net.arcs.push_back({id, "p" + std::to_string(i + 1)});
  }
  net.initial_marking.add("p0");
  net.final_marking.add("p" + std::to_string(labels.size()));
  return net;
}

/// Random sound net with at most `max_transitions` transitions.
inline SystemNet random_model(RngStream& rng, const std::vector<std::string>& alphabet,
                              std::size_t max_transitions, bool parallel = true) {
  while (true) {
    const std::size_t leaves = 1 + rng.uniform_index(std::max<std::size_t>(1, max_transitions / 2));
    SystemNet net = tree_to_net(random_tree(rng, alphabet, leaves, parallel));
    if (net.transitions.size() <= max_transitions) return net;
  }
}

/// A random execution of the tree. Loops repeat with probability `again`.
inline std::vector<std::string> playout(const Tree& t, RngStream& rng, double again = 0.5) {
  switch (t.kind) {
    case Tree::Kind::Leaf: return {t.label};
    case Tree::Kind::Tau: return {};
    case Tree::Kind::Seq: {
      std::vector<std::string> out;
      for (const auto& c : t.children) {
        auto part = playout(c, rng, again);
        out.insert(out.end(), part.begin(), part.end());
      }
      return out;
    }
    case Tree::Kind::Xor: return playout(t.children[rng.uniform_index(t.children.size())], rng, again);
    case Tree::Kind::And: {
      std::vector<std::vector<std::string>> parts;
      for (const auto& c : t.children) parts.push_back(playout(c, rng, again));
      std::vector<std::size_t> cursor(parts.size(), 0);
      std::vector<std::string> out;
      while (true) {
        std::vector<std::size_t> open;
        for (std::size_t i = 0; i < parts.size(); ++i)
          if (cursor[i] < parts[i].size()) open.push_back(i);
        if (open.empty()) return out;
        const auto pick = open[rng.uniform_index(open.size())];
        out.push_back(parts[pick][cursor[pick]++]);
      }
    }
    case Tree::Kind::Loop: {
      auto out = playout(t.children[0], rng, again);
      while (rng.uniform_open01() < again) {
        auto redo = playout(t.children[1], rng, again);
        auto body = playout(t.children[0], rng, again);
        out.insert(out.end(), redo.begin(), redo.end());
        out.insert(out.end(), body.begin(), body.end());
      }
      return out;
    }
  }
  return {};
}

/// Each event is, with probability `noise`, replaced, dropped, or followed by
/// a random insertion (equally likely).
inline std::vector<std::string> add_noise(std::vector<std::string> trace, RngStream& rng,
                                          const std::vector<std::string>& alphabet, double noise) {
  std::vector<std::string> out;
  for (auto& a : trace) {
    if (rng.uniform_open01() >= noise) {
      out.push_back(a);
      continue;
    }
    switch (rng.uniform_index(3)) {
      case 0: out.push_back(alphabet[rng.uniform_index(alphabet.size())]); break;
      case 1: break;
      default:
        out.push_back(a);
        out.push_back(alphabet[rng.uniform_index(alphabet.size())]);
    }
  }
  return out;
}

/// Random stochastic trace with up to `max_events` events and up to
/// `max_alternatives` alternatives per event, realization count <= `max_realizations`.
inline StochasticTrace random_stochastic_trace(RngStream& rng, const std::vector<std::string>& alphabet,
                                               std::size_t max_events, std::size_t max_alternatives,
                                               std::uint64_t max_realizations, std::string case_id = "c") {
  while (true) {
    StochasticTrace t{case_id, {}};
    const std::size_t n = rng.uniform_index(max_events + 1);
    for (std::size_t i = 0; i < n; ++i) {
      StochasticEvent e{"e" + std::to_string(i + 1), std::nullopt, {}};
      const std::size_t k = 1 + rng.uniform_index(std::min(max_alternatives, alphabet.size()));
      auto picks = rng.sample(alphabet.size(), k);
      std::vector<double> w(k);
      double sum = 0.0;
      for (auto& x : w) sum += (x = 0.05 + rng.uniform_open01());
      double acc = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        const double p = j + 1 == k ? 1.0 - acc : w[j] / sum;
        acc += p;
        e.distribution.push_back({alphabet[picks[j]], p});
      }
      t.events.push_back(std::move(e));
    }
    if (realization_count(t) <= max_realizations) return t;
  }
}

/// The four-event trace used throughout as the worked example.
inline StochasticTrace running_example() {
  StochasticTrace t{"1", {}};
  t.events.push_back({"e1", "2020-08-13T12:00", {{"A", 1.0}}});
  t.events.push_back({"e2", "2020-08-13T14:55", {{"B", 0.2}, {"C", 0.8}}});
  t.events.push_back({"e3", "2020-08-15T17:39", {{"D", 0.6}, {"E", 0.2}, {"F", 0.1}, {"G", 0.1}}});
  t.events.push_back({"e4", "2020-08-15T19:47", {{"F", 1.0}}});
  return t;
}

/// The fixed 10-activity model used by the trend experiments: a loop over a
/// choice/parallel body, framed by a start activity and a final choice.
inline Tree trend_model_tree() {
  using T = Tree;
  return T::seq({T::leaf("A"),
                 T::loop(T::seq({T::choice({T::leaf("B"), T::leaf("C")}), T::parallel({T::leaf("D"), T::leaf("E")}),
                                 T::choice({T::leaf("F"), T::tau()})}),
                         T::leaf("G")),
                 T::choice({T::leaf("H"), T::leaf("I")}), T::leaf("J")});
}

/// Noisy playouts of the trend model. Trace i uses stream (seed, i).
inline StochasticLog trend_log(std::size_t traces, std::uint64_t seed, double noise, double again = 0.5) {
  const Tree tree = trend_model_tree();
  const auto alphabet = letters(10);
  StochasticLog log;
  for (std::size_t i = 0; i < traces; ++i) {
    RngStream rng(seed, i);
    log.traces.push_back(
        deterministic_trace("case" + std::to_string(i + 1), add_noise(playout(tree, rng, again), rng, alphabet, noise)));
  }
  return log;
}

/// `per_bucket` noisy playouts whose length falls in each [lo, hi] bucket.
inline StochasticLog bucketed_log(const std::vector<std::pair<std::size_t, std::size_t>>& buckets,
                                  std::size_t per_bucket, std::uint64_t seed, double noise) {
  const Tree tree = trend_model_tree();
  const auto alphabet = letters(10);
  StochasticLog log;
  std::uint64_t draw = 0;
  for (const auto& [lo, hi] : buckets) {
    // loop repetitions grow with the bucket so rejection stays cheap
    const double again = 1.0 - 4.0 / (static_cast<double>(lo + hi) / 2.0 + 4.0);
    for (std::size_t k = 0; k < per_bucket;) {
      RngStream rng(seed, draw++);
      auto acts = add_noise(playout(tree, rng, again), rng, alphabet, noise);
      if (acts.size() < lo || acts.size() > hi) continue;
      log.traces.push_back(deterministic_trace("case" + std::to_string(log.traces.size() + 1), acts));
      ++k;
    }
  }
  return log;
}

}  // namespace stocon::testing
