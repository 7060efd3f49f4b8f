#pragma once

// Seeded generation of stochastic experiment logs from deterministic ones:
// optional pre-modification (relabel / swap / duplicate), then injection of
// parallel alternatives with a fixed probability for the original activity.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "stocon/batch.hpp"
#include "stocon/error.hpp"
#include "stocon/log.hpp"

namespace stocon {

enum class PerturbMode { None, Relabel, Swap, Duplicate, All };

inline const char* to_string(PerturbMode m) {
  switch (m) {
    case PerturbMode::None: return "none";
    case PerturbMode::Relabel: return "relabel";
    case PerturbMode::Swap: return "swap";
    case PerturbMode::Duplicate: return "duplicate";
    case PerturbMode::All: return "all";
  }
  return "?";
}

inline PerturbMode parse_perturb_mode(const std::string& s) {
  if (s == "none") return PerturbMode::None;
  if (s == "relabel") return PerturbMode::Relabel;
  if (s == "swap") return PerturbMode::Swap;
  if (s == "duplicate") return PerturbMode::Duplicate;
  if (s == "all") return PerturbMode::All;
  throw DomainError("unknown mode '" + s + "' (expected none, relabel, swap, duplicate or all)");
}

/// How the leftover 1 - P_f is divided among the added alternatives.
enum class SplitRule { Simplex, Equal };

struct PerturbConfig {
  unsigned n_parallel = 2;          // N_t, alternatives per uncertain event
  double original_prob = 0.75;      // P_f
  double uncertain_portion = 1.0;   // T_p
  PerturbMode mode = PerturbMode::None;
  double mode_fraction = 0.3;
  std::uint64_t seed = 0;
  SplitRule split = SplitRule::Simplex;

  void validate() const {
    if (n_parallel < 2) throw DomainError("number of parallel transitions must be >= 2");
    if (!(original_prob > 0.0 && original_prob <= 1.0)) throw DomainError("P_f must lie in (0,1]");
    if (!(uncertain_portion >= 0.0 && uncertain_portion <= 1.0)) throw DomainError("T_p must lie in [0,1]");
    if (!(mode_fraction >= 0.0 && mode_fraction <= 1.0)) throw DomainError("mode fraction must lie in [0,1]");
  }
};

/// floor(fraction * n), tolerant to representation error in the fraction.
inline std::size_t fraction_count(double fraction, std::size_t n) {
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
}

/// Deterministic random stream keyed by (seed, case index, purpose, sub-key).
/// Distributions are implemented here (not with <random> distributions) so
/// output is identical across standard libraries.
class RngStream {
 public:
  enum Purpose : std::uint64_t { kRelabel = 1, kSwap = 2, kDuplicate = 3, kOrder = 4, kAlternatives = 5 };

  RngStream(std::uint64_t seed, std::uint64_t case_index, std::uint64_t purpose = 0, std::uint64_t sub = 0)
      : seed_(seed), case_(case_index), engine_(derive(seed, case_index, purpose, sub)) {}

  /// Independent stream for the same (seed, case).
  RngStream fork(std::uint64_t purpose, std::uint64_t sub = 0) const { return {seed_, case_, purpose, sub}; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, n), unbiased. Precondition: n > 0.
  std::size_t uniform_index(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do x = next_u64();
    while (x >= limit);
    return static_cast<std::size_t>(x % bound);
  }

  /// Uniform in the open interval (0,1).
  double uniform_open01() {
    while (true) {
      const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
      if (u > 0.0) return u;
    }
  }

  /// k distinct indices from [0, n), in draw order (partial Fisher-Yates).
  std::vector<std::size_t> sample(std::size_t n, std::size_t k) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    k = std::min(k, n);
    for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + uniform_index(n - i)]);
    pool.resize(k);
    return pool;
  }

 private:
  static std::uint64_t splitmix(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t c, std::uint64_t purpose, std::uint64_t sub) {
    std::uint64_t x = seed;
    std::uint64_t h = splitmix(x);
    for (std::uint64_t part : {c, purpose, sub}) {
      x = h ^ part;
      h = splitmix(x);
    }
    return h;
  }

  std::uint64_t seed_;
  std::uint64_t case_;
  std::mt19937_64 engine_;
};

namespace detail {

inline void require_deterministic(const StochasticTrace& t) {
  for (const auto& e : t.events)
    if (e.distribution.size() != 1 || e.distribution[0].probability != 1.0)
      throw DomainError("case " + t.case_id + ": event " + e.event_id + " is not deterministic");
}

}  // namespace detail

/// Gives floor(fraction * len) randomly chosen events a different label drawn
/// uniformly from the rest of the alphabet.
inline StochasticTrace relabel_events(StochasticTrace trace, double fraction, RngStream& rng,
                                      const std::vector<std::string>& alphabet,
                                      std::vector<std::size_t>* touched = nullptr) {
  detail::require_deterministic(trace);
  if (alphabet.size() < 2) throw DomainError("relabeling needs an alphabet of at least 2 activities");
  auto positions = rng.sample(trace.size(), fraction_count(fraction, trace.size()));
  for (auto pos : positions) {
    auto& act = trace.events[pos].distribution[0].activity;
    std::vector<std::string> others;
    for (const auto& a : alphabet)
      if (a != act) others.push_back(a);
    act = others[rng.uniform_index(others.size())];
  }
  if (touched) {
    std::sort(positions.begin(), positions.end());
    *touched = positions;
  }
  return trace;
}

/// Swaps floor(fraction * len) chosen events with a random neighbor. The first
/// and last positions can only swap inward. Swaps run in ascending position
/// order and exchange activities, leaving ids and timestamps in place.
inline StochasticTrace swap_events(StochasticTrace trace, double fraction, RngStream& rng,
                                   std::vector<std::size_t>* touched = nullptr) {
  detail::require_deterministic(trace);
  const std::size_t n = trace.size();
  if (n < 2) throw DomainError("case " + trace.case_id + ": swapping needs at least 2 events");
  auto positions = rng.sample(n, fraction_count(fraction, n));
  std::sort(positions.begin(), positions.end());
  for (auto pos : positions) {
    std::size_t other;
    if (pos == 0) other = 1;
    else if (pos == n - 1) other = n - 2;
    else other = rng.uniform_index(2) == 0 ? pos - 1 : pos + 1;
    std::swap(trace.events[pos].distribution, trace.events[other].distribution);
  }
  if (touched) *touched = positions;
  return trace;
}

/// Duplicates floor(fraction * len) chosen events right after themselves.
inline StochasticTrace duplicate_events(StochasticTrace trace, double fraction, RngStream& rng,
                                        std::vector<std::size_t>* touched = nullptr) {
  detail::require_deterministic(trace);
  auto positions = rng.sample(trace.size(), fraction_count(fraction, trace.size()));
  std::sort(positions.begin(), positions.end());
  std::vector<StochasticEvent> out;
  out.reserve(trace.size() + positions.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out.push_back(trace.events[i]);
    if (next < positions.size() && positions[next] == i) {
      StochasticEvent copy = trace.events[i];
      copy.event_id += "_dup";
      out.push_back(std::move(copy));
      ++next;
    }
  }
  trace.events = std::move(out);
  if (touched) *touched = positions;
  return trace;
}

/// Makes floor(T_p * len) events uncertain. The original activity keeps P_f;
/// N_t - 1 distinct other activities share the rest.
///
/// Event selection takes a prefix of one per-trace random order, and each
/// position draws its alternatives from its own stream, so for a fixed seed the
/// uncertain events at a smaller T_p (or N_t) are a subset of those at a larger
/// one and carry the same alternatives.
inline StochasticTrace add_parallel_transitions(StochasticTrace trace, const PerturbConfig& config,
                                                const RngStream& base, const std::vector<std::string>& alphabet,
                                                std::vector<std::size_t>* touched = nullptr) {
  config.validate();
  detail::require_deterministic(trace);
  if (alphabet.size() < config.n_parallel)
    throw DomainError("alphabet of " + std::to_string(alphabet.size()) + " activities is too small for N_t = " +
                      std::to_string(config.n_parallel));
  RngStream order_rng = base.fork(RngStream::kOrder);
  const auto order = order_rng.sample(trace.size(), trace.size());
  const std::size_t count = fraction_count(config.uncertain_portion, trace.size());
  std::vector<std::size_t> chosen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
  std::sort(chosen.begin(), chosen.end());

  const std::size_t extras = config.n_parallel - 1;
  for (auto pos : chosen) {
    auto& event = trace.events[pos];
    const std::string original = event.distribution[0].activity;
    RngStream rng = base.fork(RngStream::kAlternatives, pos);

    std::vector<std::string> candidates;
    for (const auto& a : alphabet)
      if (a != original) candidates.push_back(a);
    const auto picks = rng.sample(candidates.size(), extras);

    std::vector<double> shares(extras);
    const double leftover = 1.0 - config.original_prob;
    if (config.split == SplitRule::Equal || extras == 1) {
      std::fill(shares.begin(), shares.end(), leftover / static_cast<double>(extras));
    } else {
      // spacings of sorted uniforms: a uniform point on the simplex
      while (true) {
        std::vector<double> cuts(extras - 1);
        for (auto& c : cuts) c = rng.uniform_open01();
        std::sort(cuts.begin(), cuts.end());
        double prev = 0.0;
        bool degenerate = false;
        for (std::size_t k = 0; k < extras; ++k) {
          const double cut = k + 1 < extras ? cuts[k] : 1.0;
          shares[k] = (cut - prev) * leftover;
          degenerate = degenerate || !(cut > prev);
          prev = cut;
        }
        if (!degenerate) break;
      }
    }

    event.distribution[0].probability = config.original_prob;
    if (leftover > 0.0)
      for (std::size_t k = 0; k < extras; ++k) event.distribution.push_back({candidates[picks[k]], shares[k]});
  }
  if (touched) *touched = chosen;
  return trace;
}

struct TraceProvenance {
  std::string case_id;
  std::vector<std::size_t> relabeled;
  std::vector<std::size_t> swapped;
  std::vector<std::size_t> duplicated;
  std::vector<std::size_t> uncertain;
};

struct GeneratedLog {
  StochasticLog log;
  std::vector<TraceProvenance> provenance;
};

/// Pre-modification for the configured mode (relabel, swap, duplicate in that
/// order for All), then parallel-transition injection. Each trace uses streams
/// keyed by its index in the input log.
inline GeneratedLog generate_experiment_log(const StochasticLog& det_log, const PerturbConfig& config,
                                            unsigned threads = 1) {
  config.validate();
  const auto alphabet = det_log.alphabet();
  GeneratedLog out;
  out.log.traces.resize(det_log.traces.size());
  out.provenance.resize(det_log.traces.size());
  parallel_for(det_log.traces.size(), threads, [&](std::size_t i) {
    const RngStream base(config.seed, i);
    StochasticTrace t = det_log.traces[i];
    TraceProvenance& prov = out.provenance[i];
    prov.case_id = t.case_id;
    const bool all = config.mode == PerturbMode::All;
    if (all || config.mode == PerturbMode::Relabel) {
      RngStream rng = base.fork(RngStream::kRelabel);
      t = relabel_events(std::move(t), config.mode_fraction, rng, alphabet, &prov.relabeled);
    }
    if ((all || config.mode == PerturbMode::Swap) && t.size() >= 2) {
      RngStream rng = base.fork(RngStream::kSwap);
      t = swap_events(std::move(t), config.mode_fraction, rng, &prov.swapped);
    }
    if (all || config.mode == PerturbMode::Duplicate) {
      RngStream rng = base.fork(RngStream::kDuplicate);
      t = duplicate_events(std::move(t), config.mode_fraction, rng, &prov.duplicated);
    }
    out.log.traces[i] = add_parallel_transitions(std::move(t), config, base, alphabet, &prov.uncertain);
  });
  return out;
}

inline std::string serialize_provenance(const GeneratedLog& g, const PerturbConfig& config) {
  using ojson = nlohmann::ordered_json;
  ojson doc = ojson::object();
  doc["config"] = {{"n_parallel", config.n_parallel},
                   {"original_prob", config.original_prob},
                   {"uncertain_portion", config.uncertain_portion},
                   {"mode", to_string(config.mode)},
                   {"mode_fraction", config.mode_fraction},
                   {"seed", config.seed},
                   {"split", config.split == SplitRule::Simplex ? "simplex" : "equal"}};
  ojson cases = ojson::array();
  for (const auto& p : g.provenance) {
    cases.push_back({{"case_id", p.case_id},
                     {"relabeled", p.relabeled},
                     {"swapped", p.swapped},
                     {"duplicated", p.duplicated},
                     {"uncertain", p.uncertain}});
  }
  doc["cases"] = std::move(cases);
  return doc.dump(2) + "\n";
}

}  // namespace stocon
