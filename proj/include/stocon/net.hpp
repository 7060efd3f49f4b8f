#pragma once

// Labeled Petri nets: labels, markings, firing rule and structural validation.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "stocon/error.hpp"

namespace stocon {

/// An activity name, or the silent label TAU. TAU never equals a textual label.
class ActivityLabel {
 public:
  ActivityLabel() = default;  // TAU
  explicit ActivityLabel(std::string text) : text_(std::move(text)) {}

  static ActivityLabel tau() { return ActivityLabel{}; }

  bool is_tau() const { return !text_.has_value(); }
  /// Precondition: !is_tau().
  const std::string& text() const { return *text_; }

  /// Human-readable rendering; TAU prints as "<tau>".
  std::string display() const { return text_ ? *text_ : std::string("<tau>"); }

  friend bool operator==(const ActivityLabel&, const ActivityLabel&) = default;
  friend auto operator<=>(const ActivityLabel&, const ActivityLabel&) = default;

 private:
  std::optional<std::string> text_;
};

struct Transition {
  std::string id;
  ActivityLabel label;
  std::optional<double> weight;  // firing probability in (0,1], trace nets only

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct Arc {
  std::string source;
  std::string target;

  friend bool operator==(const Arc&, const Arc&) = default;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

/// Multiset of tokens over place ids. Zero counts are never stored, so two
/// markings are equal iff their maps are equal.
class Marking {
 public:
  Marking() = default;
  Marking(std::initializer_list<std::pair<const std::string, std::uint32_t>> init) {
    for (const auto& [place, n] : init) add(place, n);
  }

  std::uint32_t count(const std::string& place) const {
    auto it = counts_.find(place);
    return it == counts_.end() ? 0 : it->second;
  }

  void add(const std::string& place, std::uint32_t n = 1) {
    if (n == 0) return;
    counts_[place] += n;
  }

  /// Removes n tokens. Precondition: count(place) >= n.
  void remove(const std::string& place, std::uint32_t n = 1) {
    auto it = counts_.find(place);
    if (it == counts_.end() || it->second < n)
      throw PreconditionError("cannot remove " + std::to_string(n) + " token(s) from place " + place);
    it->second -= n;
    if (it->second == 0) counts_.erase(it);
  }

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (const auto& [_, n] : counts_) sum += n;
    return sum;
  }

  bool empty() const { return counts_.empty(); }
  const std::map<std::string, std::uint32_t>& entries() const { return counts_; }

  /// Multiset sum.
  friend Marking operator+(Marking lhs, const Marking& rhs) {
    for (const auto& [place, n] : rhs.counts_) lhs.add(place, n);
    return lhs;
  }

  friend bool operator==(const Marking&, const Marking&) = default;

  std::string to_string() const {
    std::string out = "[";
    bool first = true;
    for (const auto& [place, n] : counts_) {
      if (!first) out += ",";
      first = false;
      out += place;
      if (n != 1) out += "^" + std::to_string(n);
    }
    return out + "]";
  }

 private:
  std::map<std::string, std::uint32_t> counts_;
};

/// A labeled Petri net with initial and final markings. Arc multiplicity is 1.
struct SystemNet {
  std::vector<std::string> places;
  std::vector<Transition> transitions;
  std::vector<Arc> arcs;
  Marking initial_marking;
  Marking final_marking;

  const Transition* find_transition(const std::string& id) const {
    for (const auto& t : transitions)
      if (t.id == id) return &t;
    return nullptr;
  }

  bool has_place(const std::string& id) const {
    for (const auto& p : places)
      if (p == id) return true;
    return false;
  }

  friend bool operator==(const SystemNet&, const SystemNet&) = default;
};

/// Lists every violated structural invariant; empty iff the net is well formed.
inline std::vector<std::string> validate_net(const SystemNet& net) {
  std::vector<std::string> report;
  std::set<std::string> places;
  std::set<std::string> transitions;

  for (const auto& p : net.places) {
    if (p.empty()) report.push_back("place with empty id");
    if (!places.insert(p).second) report.push_back("duplicate place id: " + p);
  }
  for (const auto& t : net.transitions) {
    if (t.id.empty()) report.push_back("transition with empty id");
    if (!transitions.insert(t.id).second) report.push_back("duplicate transition id: " + t.id);
    if (places.count(t.id)) report.push_back("id used by both a place and a transition: " + t.id);
    if (!t.label.is_tau() && t.label.text().empty())
      report.push_back("transition " + t.id + " has an empty label");
    if (t.weight && !(*t.weight > 0.0 && *t.weight <= 1.0))
      report.push_back("transition " + t.id + " has weight outside (0,1]: " + std::to_string(*t.weight));
  }

  std::set<Arc> seen;
  for (const auto& a : net.arcs) {
    const bool src_place = places.count(a.source) > 0;
    const bool src_trans = transitions.count(a.source) > 0;
    const bool dst_place = places.count(a.target) > 0;
    const bool dst_trans = transitions.count(a.target) > 0;
    const std::string arc_text = a.source + "->" + a.target;
    if (!src_place && !src_trans) report.push_back("arc source is unknown: " + arc_text);
    if (!dst_place && !dst_trans) report.push_back("arc target is unknown: " + arc_text);
    if (src_place && dst_place) report.push_back("arc connects two places: " + arc_text);
    if (src_trans && dst_trans) report.push_back("arc connects two transitions: " + arc_text);
    if (!seen.insert(a).second) report.push_back("duplicate arc (multiplicity > 1): " + arc_text);
  }

  for (const auto& [p, _] : net.initial_marking.entries())
    if (!places.count(p)) report.push_back("initial marking names unknown place " + p);
  for (const auto& [p, _] : net.final_marking.entries())
    if (!places.count(p)) report.push_back("final marking names unknown place " + p);
  return report;
}

/// Index-based view of a net for the firing rule. Places and transitions are
/// numbered in declaration order.
class CompiledNet {
 public:
  explicit CompiledNet(const SystemNet& net) {
    for (std::size_t i = 0; i < net.places.size(); ++i) place_index_.emplace(net.places[i], i);
    for (std::size_t i = 0; i < net.transitions.size(); ++i)
      transition_index_.emplace(net.transitions[i].id, i);
    preset_.resize(net.transitions.size());
    postset_.resize(net.transitions.size());
    for (const auto& a : net.arcs) {
      if (auto t = transition_index_.find(a.target); t != transition_index_.end()) {
        if (auto p = place_index_.find(a.source); p != place_index_.end())
          preset_[t->second].push_back(p->second);
      } else if (auto t2 = transition_index_.find(a.source); t2 != transition_index_.end()) {
        if (auto p = place_index_.find(a.target); p != place_index_.end())
          postset_[t2->second].push_back(p->second);
      }
    }
  }

  std::size_t place_count() const { return place_index_.size(); }
  std::size_t transition_count() const { return preset_.size(); }
  const std::vector<std::size_t>& preset(std::size_t t) const { return preset_[t]; }
  const std::vector<std::size_t>& postset(std::size_t t) const { return postset_[t]; }

  std::optional<std::size_t> place(const std::string& id) const {
    auto it = place_index_.find(id);
    if (it == place_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<std::size_t> transition(const std::string& id) const {
    auto it = transition_index_.find(id);
    if (it == transition_index_.end()) return std::nullopt;
    return it->second;
  }

  /// Dense token vector for a marking; throws DomainError on unknown places.
  std::vector<std::uint32_t> dense(const Marking& m) const {
    std::vector<std::uint32_t> v(place_count(), 0);
    for (const auto& [p, n] : m.entries()) {
      auto idx = place(p);
      if (!idx) throw DomainError("marking names unknown place " + p);
      v[*idx] = n;
    }
    return v;
  }

 private:
  std::unordered_map<std::string, std::size_t> place_index_;
  std::unordered_map<std::string, std::size_t> transition_index_;
  std::vector<std::vector<std::size_t>> preset_;
  std::vector<std::vector<std::size_t>> postset_;
};

/// Transitions enabled at m, in declaration order.
inline std::vector<std::string> enabled_transitions(const SystemNet& net, const Marking& m) {
  const CompiledNet compiled(net);
  const auto tokens = compiled.dense(m);
  std::vector<std::string> enabled;
  for (std::size_t t = 0; t < compiled.transition_count(); ++t) {
    bool ok = true;
    for (auto p : compiled.preset(t)) ok = ok && tokens[p] > 0;
    if (ok) enabled.push_back(net.transitions[t].id);
  }
  return enabled;
}

/// Fires transition `id` at m and returns the successor marking.
inline Marking fire(const SystemNet& net, const Marking& m, const std::string& id) {
  const CompiledNet compiled(net);
  const auto t = compiled.transition(id);
  if (!t) throw DomainError("unknown transition " + id);
  compiled.dense(m);  // rejects unknown places
  for (auto p : compiled.preset(*t)) {
    if (m.count(net.places[p]) == 0)
      throw PreconditionError(id + " not enabled: place " + net.places[p] + " has no token");
  }
  Marking next = m;
  for (auto p : compiled.preset(*t)) next.remove(net.places[p]);
  for (auto p : compiled.postset(*t)) next.add(net.places[p]);
  return next;
}

}  // namespace stocon
