#pragma once

// Stochastically known event logs and realization enumeration.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "stocon/error.hpp"

namespace stocon {

inline constexpr double kDistributionTolerance = 1e-9;

/// One (activity, probability) alternative of an event.
struct Alternative {
  std::string activity;
  double probability = 1.0;

  friend bool operator==(const Alternative&, const Alternative&) = default;
};

struct StochasticEvent {
  std::string event_id;
  std::optional<std::string> timestamp;  // carried through, never used for alignment
  std::vector<Alternative> distribution;  // document order

  bool deterministic() const { return distribution.size() == 1; }

  friend bool operator==(const StochasticEvent&, const StochasticEvent&) = default;
};

struct StochasticTrace {
  std::string case_id;
  std::vector<StochasticEvent> events;

  std::size_t size() const { return events.size(); }

  friend bool operator==(const StochasticTrace&, const StochasticTrace&) = default;
};

struct StochasticLog {
  std::vector<StochasticTrace> traces;

  /// Every activity appearing in any event, sorted.
  std::vector<std::string> alphabet() const {
    std::set<std::string> labels;
    for (const auto& t : traces)
      for (const auto& e : t.events)
        for (const auto& a : e.distribution) labels.insert(a.activity);
    return {labels.begin(), labels.end()};
  }

  friend bool operator==(const StochasticLog&, const StochasticLog&) = default;
};

/// Throws ValidationError naming the event if its distribution is invalid.
inline void validate_event(const StochasticEvent& e) {
  const std::string who = "event " + (e.event_id.empty() ? std::string("<unnamed>") : e.event_id);
  if (e.distribution.empty()) throw ValidationError(who + ": empty distribution");
  std::set<std::string> seen;
  double sum = 0.0;
  for (const auto& a : e.distribution) {
    if (a.activity.empty()) throw ValidationError(who + ": empty activity label");
    if (!seen.insert(a.activity).second) throw ValidationError(who + ": duplicate activity " + a.activity);
    if (!(a.probability > 0.0 && a.probability <= 1.0))
      throw ValidationError(who + ": probability of " + a.activity + " outside (0,1]: " +
                            std::to_string(a.probability));
    sum += a.probability;
  }
  if (std::abs(sum - 1.0) > kDistributionTolerance) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", sum);
    throw ValidationError(who + ": distribution sums to " + buf);
  }
}

inline void validate_trace(const StochasticTrace& t) {
  for (const auto& e : t.events) validate_event(e);
}

inline void validate_log(const StochasticLog& log) {
  std::set<std::string> ids;
  for (const auto& t : log.traces) {
    if (!ids.insert(t.case_id).second) throw ValidationError("duplicate case_id " + t.case_id);
    validate_trace(t);
  }
}

/// Warnings for traces whose timestamps decrease in record order.
inline std::vector<std::string> timestamp_warnings(const StochasticLog& log) {
  std::vector<std::string> warnings;
  for (const auto& t : log.traces) {
    const std::string* prev = nullptr;
    for (const auto& e : t.events) {
      if (!e.timestamp) continue;
      if (prev && *e.timestamp < *prev)
        warnings.push_back("case " + t.case_id + ": timestamp of event " + e.event_id +
                           " precedes its predecessor");
      prev = &*e.timestamp;
    }
  }
  return warnings;
}

/// Lifts a sequence of activities to a trace of probability-1 events.
inline StochasticTrace deterministic_trace(std::string case_id, const std::vector<std::string>& activities) {
  StochasticTrace t{std::move(case_id), {}};
  for (std::size_t i = 0; i < activities.size(); ++i)
    t.events.push_back({"e" + std::to_string(i + 1), std::nullopt, {{activities[i], 1.0}}});
  return t;
}

/// Product of the distribution sizes, saturating at UINT64_MAX.
inline std::uint64_t realization_count(const StochasticTrace& trace) {
  std::uint64_t count = 1;
  for (const auto& e : trace.events) {
    const std::uint64_t n = e.distribution.size();
    if (n != 0 && count > std::numeric_limits<std::uint64_t>::max() / n)
      return std::numeric_limits<std::uint64_t>::max();
    count *= n;
  }
  return count;
}

struct Realization {
  std::vector<std::size_t> choice;  // alternative index per event
  std::vector<std::string> activities;
  double probability = 1.0;
};

/// Every realization, lexicographic in per-event document order.
inline std::vector<Realization> enumerate_realizations(const StochasticTrace& trace, std::uint64_t cap) {
  const auto count = realization_count(trace);
  if (count > cap)
    throw CapacityError("trace " + trace.case_id + " has " + std::to_string(count) +
                        " realizations, cap is " + std::to_string(cap));
  std::vector<Realization> out;
  out.reserve(count);
  const std::size_t n = trace.events.size();
  std::vector<std::size_t> choice(n, 0);
  while (true) {
    Realization r;
    r.choice = choice;
    r.activities.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto& alt = trace.events[i].distribution[choice[i]];
      r.activities.push_back(alt.activity);
      r.probability *= alt.probability;
    }
    out.push_back(std::move(r));
    // odometer, last event fastest
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++choice[i] < trace.events[i].distribution.size()) break;
      choice[i] = 0;
      if (i == 0) return out;
    }
    if (n == 0) return out;
  }
}

}  // namespace stocon
