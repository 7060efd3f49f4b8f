#pragma once

// Whole-log alignment with optional per-trace parallelism.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "stocon/cost.hpp"
#include "stocon/log.hpp"
#include "stocon/search.hpp"
#include "stocon/sync_product.hpp"
#include "stocon/trace_net.hpp"

namespace stocon {

/// Thread count: an explicit request wins, then STOCON_THREADS, then 1.
/// Zero means "one per hardware thread".
inline unsigned resolve_threads(std::optional<unsigned> requested = std::nullopt) {
  unsigned n = 1;
  if (requested) {
    n = *requested;
  } else if (const char* env = std::getenv("STOCON_THREADS"); env && *env) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0') n = static_cast<unsigned>(v);
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any fn is rethrown after all workers join.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < count && !failed; i = next++) {
      try {
        fn(i);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  for (unsigned k = 0; k < n; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

inline Alignment align_trace(const SystemNet& model, const StochasticTrace& trace, const CostProfile& profile,
                             const SearchOptions& options = {}) {
  const auto product = build_sync_product(model, build_stochastic_trace_net(trace));
  return optimal_alignment(product, profile, options);
}

struct TraceOutcome {
  std::string case_id;
  std::optional<Alignment> alignment;
  std::string error;  // set iff !alignment
  double wall_time_ms = 0.0;
};

struct LogAlignment {
  std::vector<TraceOutcome> outcomes;  // log order
  double mean_cost = 0.0;              // over aligned traces; 0 when none
  std::size_t failures = 0;

  std::size_t aligned() const { return outcomes.size() - failures; }
};

/// Aligns every trace. Per-trace errors are collected, never thrown, and the
/// result does not depend on the thread count.
inline LogAlignment align_log(const SystemNet& model, const StochasticLog& log, const CostProfile& profile,
                              const SearchOptions& options = {}, unsigned threads = 1) {
  LogAlignment result;
  result.outcomes.resize(log.traces.size());
  parallel_for(log.traces.size(), threads, [&](std::size_t i) {
    TraceOutcome& out = result.outcomes[i];
    out.case_id = log.traces[i].case_id;
    const auto start = std::chrono::steady_clock::now();
    try {
      out.alignment = align_trace(model, log.traces[i], profile, options);
    } catch (const std::exception& e) {
      out.error = e.what();
    }
    out.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  });
  double sum = 0.0;
  for (const auto& o : result.outcomes) {
    if (o.alignment) sum += o.alignment->total_cost;
    else ++result.failures;
  }
  if (result.aligned() > 0) result.mean_cost = sum / static_cast<double>(result.aligned());
  return result;
}

}  // namespace stocon
