#pragma once

// Experiment sweeps over (mode, N_t, P_f, T_p) with figure-ready CSV output.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "stocon/batch.hpp"
#include "stocon/cost.hpp"
#include "stocon/perturb.hpp"
#include "stocon/report.hpp"
#include "stocon/search.hpp"

namespace stocon {

struct SweepSpec {
  std::vector<double> pf{0.55, 0.75, 0.95};
  double tp_step = 0.05;
  std::vector<unsigned> nt{2, 3, 4};
  std::vector<PerturbMode> modes{PerturbMode::None};
  std::vector<ProfileKind> profiles{ProfileKind::Stochastic, ProfileKind::LowerBound};
  std::uint64_t seed = 0;
  unsigned repetitions = 1;  // seeds seed, seed+1, ...
  double mode_fraction = 0.3;
  std::vector<std::size_t> length_edges{10, 30, 50};  // groups [0,9] [10,29] [30,49] [50,inf)
  SearchOptions search{true, 1'000'000};

  void validate() const {
    if (pf.empty() || nt.empty() || modes.empty() || profiles.empty())
      throw DomainError("sweep value lists must be nonempty");
    if (!(tp_step > 0.0 && tp_step <= 1.0)) throw DomainError("T_p step must lie in (0,1]");
    if (repetitions == 0) throw DomainError("repetitions must be positive");
    for (double p : pf)
      if (!(p > 0.0 && p <= 1.0)) throw DomainError("P_f values must lie in (0,1]");
    for (unsigned n : nt)
      if (n < 2) throw DomainError("N_t values must be >= 2");
    for (std::size_t i = 1; i < length_edges.size(); ++i)
      if (length_edges[i] <= length_edges[i - 1]) throw DomainError("length group edges must increase");
  }

  /// 0, step, 2*step, ... up to and always including 1.
  std::vector<double> tp_values() const {
    std::vector<double> v;
    for (std::size_t k = 0;; ++k) {
      const double x = std::round(static_cast<double>(k) * tp_step * 1e9) / 1e9;
      if (x > 1.0 + 1e-12) break;
      v.push_back(std::min(x, 1.0));
    }
    if (v.back() < 1.0) v.push_back(1.0);
    return v;
  }

  std::string length_group(std::size_t len) const {
    std::size_t lo = 0;
    for (auto edge : length_edges) {
      if (len < edge) return std::to_string(lo) + "-" + std::to_string(edge - 1);
      lo = edge;
    }
    return std::to_string(lo) + "+";
  }
};

/// Aggregate over all traces of all repetitions at one sweep coordinate.
struct ReportRow {
  std::vector<std::string> coords;  // values for the table's coordinate columns
  ProfileKind profile = ProfileKind::Stochastic;
  double mean_cost = 0.0;
  double std_cost = 0.0;
  std::size_t n_traces = 0;
  std::size_t n_failures = 0;
};

struct ReportTable {
  std::vector<std::string> coord_columns;
  std::vector<ReportRow> rows;

  std::string csv() const {
    std::ostringstream out;
    for (const auto& c : coord_columns) out << c << ',';
    out << "profile,mean_cost,std,n_traces,n_failures\n";
    for (const auto& r : rows) {
      for (const auto& c : r.coords) out << c << ',';
      out << to_string(r.profile) << ',' << format_number(r.mean_cost) << ',' << format_number(r.std_cost) << ','
          << r.n_traces << ',' << r.n_failures << "\n";
    }
    return out.str();
  }
};

struct SelfCheck {
  std::string name;
  std::string scope;
  bool passed = true;
  std::string detail;
};

struct SweepResult {
  ReportTable fig4;
  ReportTable fig5;
  ReportTable fig6;
  std::vector<SelfCheck> checks;
  std::vector<std::string> errors;  // CSV lines for errors.csv

  bool all_checks_passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  std::string checks_csv() const {
    std::ostringstream out;
    out << "check,scope,status,detail\n";
    for (const auto& c : checks)
      out << c.name << ',' << c.scope << ',' << (c.passed ? "PASS" : "FAIL") << ',' << c.detail << "\n";
    return out.str();
  }

  std::string errors_csv() const {
    std::ostringstream out;
    out << "seed,mode,nt,pf,tp,profile,case_id,error\n";
    for (const auto& e : errors) out << e << "\n";
    return out.str();
  }
};

namespace detail {

/// Per-trace costs of one log under one profile; nullopt marks a failure.
using CostVector = std::vector<std::optional<double>>;

struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::size_t n = 0;
  std::size_t failures = 0;

  void add(const std::optional<double>& c) {
    if (!c) {
      ++failures;
      return;
    }
    sum += *c;
    sum_sq += *c * *c;
    ++n;
  }

  ReportRow row(std::vector<std::string> coords, ProfileKind profile) const {
    ReportRow r;
    r.coords = std::move(coords);
    r.profile = profile;
    r.n_traces = n;
    r.n_failures = failures;
    if (n > 0) {
      r.mean_cost = sum / static_cast<double>(n);
      r.std_cost = std::sqrt(std::max(0.0, sum_sq / static_cast<double>(n) - r.mean_cost * r.mean_cost));
    }
    return r;
  }
};

inline std::string sanitize_csv_cell(std::string s) {
  for (auto& c : s)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  return s;
}

}  // namespace detail

/// Runs the full grid. Results are independent of `threads`.
inline SweepResult run_sweep(const SystemNet& model, const StochasticLog& det_log, const SweepSpec& spec,
                             unsigned threads = 1) {
  spec.validate();
  const auto tps = spec.tp_values();
  const std::size_t R = spec.repetitions, M = spec.modes.size(), N = spec.nt.size(), F = spec.pf.size(),
                    P = tps.size(), K = spec.profiles.size();
  const std::size_t traces = det_log.traces.size();

  struct Point {
    std::size_t rep, mode, nt, pf, tp;
  };
  std::vector<Point> points;
  for (std::size_t r = 0; r < R; ++r)
    for (std::size_t m = 0; m < M; ++m)
      for (std::size_t n = 0; n < N; ++n)
        for (std::size_t f = 0; f < F; ++f)
          for (std::size_t t = 0; t < P; ++t) points.push_back({r, m, n, f, t});

  struct PointResult {
    std::vector<detail::CostVector> costs;            // per profile
    std::vector<std::vector<std::string>> messages;  // per profile, per trace
    std::string generation_error;
  };
  std::vector<PointResult> results(points.size());

  CostProfile det_profile{ProfileKind::Deterministic};
  auto costs_of = [&](const StochasticLog& log, const CostProfile& profile, std::vector<std::string>* messages) {
    auto aligned = align_log(model, log, profile, spec.search, 1);
    detail::CostVector v;
    for (const auto& o : aligned.outcomes) {
      v.push_back(o.alignment ? std::optional<double>(o.alignment->total_cost) : std::nullopt);
      if (messages) messages->push_back(o.error);
    }
    return v;
  };

  // references: the unperturbed log, and each (rep, mode) pre-modified log
  const detail::CostVector reference_original = costs_of(det_log, det_profile, nullptr);
  std::vector<detail::CostVector> reference_premodified(R * M);
  std::vector<detail::CostVector> det_equivalence(R * N);

  auto config_for = [&](std::size_t rep, std::size_t mode, unsigned nt, double pf, double tp) {
    PerturbConfig c;
    c.n_parallel = nt;
    c.original_prob = pf;
    c.uncertain_portion = tp;
    c.mode = spec.modes[mode];
    c.mode_fraction = spec.mode_fraction;
    c.seed = spec.seed + rep;
    return c;
  };

  const std::size_t ref_tasks = R * M + R * N;
  parallel_for(points.size() + ref_tasks, threads, [&](std::size_t task) {
    if (task >= points.size()) {
      const std::size_t k = task - points.size();
      if (k < R * M) {
        const auto cfg = config_for(k / M, k % M, spec.nt.front(), 1.0, 0.0);
        try {
          reference_premodified[k] = costs_of(generate_experiment_log(det_log, cfg).log, det_profile, nullptr);
        } catch (const std::exception&) {
          reference_premodified[k] = detail::CostVector(traces);
        }
      } else {
        const std::size_t j = k - R * M;
        PerturbConfig cfg = config_for(j / N, 0, spec.nt[j % N], 1.0, 1.0);
        cfg.mode = PerturbMode::None;
        try {
          det_equivalence[j] = costs_of(generate_experiment_log(det_log, cfg).log,
                                        CostProfile{ProfileKind::Stochastic}, nullptr);
        } catch (const std::exception&) {
          det_equivalence[j] = detail::CostVector(traces);
        }
      }
      return;
    }
    const Point& pt = points[task];
    PointResult& out = results[task];
    out.costs.resize(K);
    out.messages.resize(K);
    try {
      const auto cfg = config_for(pt.rep, pt.mode, spec.nt[pt.nt], spec.pf[pt.pf], tps[pt.tp]);
      const auto generated = generate_experiment_log(det_log, cfg);
      for (std::size_t k = 0; k < K; ++k)
        out.costs[k] = costs_of(generated.log, CostProfile{spec.profiles[k]}, &out.messages[k]);
    } catch (const std::exception& e) {
      out.generation_error = e.what();
      for (std::size_t k = 0; k < K; ++k) out.costs[k] = detail::CostVector(traces);
    }
  });

  auto point_index = [&](std::size_t r, std::size_t m, std::size_t n, std::size_t f, std::size_t t) {
    return (((r * M + m) * N + n) * F + f) * P + t;
  };

  SweepResult result;

  // errors
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pt = points[i];
    const std::string prefix = std::to_string(spec.seed + pt.rep) + ',' + to_string(spec.modes[pt.mode]) + ',' +
                               std::to_string(spec.nt[pt.nt]) + ',' + format_number(spec.pf[pt.pf]) + ',' +
                               format_number(tps[pt.tp]) + ',';
    if (!results[i].generation_error.empty()) {
      result.errors.push_back(prefix + "*,*," + detail::sanitize_csv_cell(results[i].generation_error));
      continue;
    }
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t c = 0; c < traces; ++c)
        if (!results[i].costs[k][c])
          result.errors.push_back(prefix + to_string(spec.profiles[k]) + ',' + det_log.traces[c].case_id + ',' +
                                  detail::sanitize_csv_cell(results[i].messages[k][c]));
  }

  // fig5: every grid point
  result.fig5.coord_columns = {"mode", "nt", "pf", "tp"};
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t f = 0; f < F; ++f)
        for (std::size_t t = 0; t < P; ++t)
          for (std::size_t k = 0; k < K; ++k) {
            detail::Accumulator acc;
            for (std::size_t r = 0; r < R; ++r)
              for (const auto& c : results[point_index(r, m, n, f, t)].costs[k]) acc.add(c);
            result.fig5.rows.push_back(acc.row({to_string(spec.modes[m]), std::to_string(spec.nt[n]),
                                                format_number(spec.pf[f]), format_number(tps[t])},
                                               spec.profiles[k]));
          }

  // fig4: T_p = 1 slice plus the P_f = 1 deterministic reference points
  result.fig4.coord_columns = {"mode", "nt", "pf", "reference"};
  for (std::size_t m = 0; m < M; ++m) {
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t f = 0; f < F; ++f)
        for (std::size_t k = 0; k < K; ++k) {
          detail::Accumulator acc;
          for (std::size_t r = 0; r < R; ++r)
            for (const auto& c : results[point_index(r, m, n, f, P - 1)].costs[k]) acc.add(c);
          result.fig4.rows.push_back(acc.row(
              {to_string(spec.modes[m]), std::to_string(spec.nt[n]), format_number(spec.pf[f]), "none"},
              spec.profiles[k]));
        }
    detail::Accumulator original, premodified;
    for (std::size_t r = 0; r < R; ++r) {
      for (const auto& c : reference_original) original.add(c);
      for (const auto& c : reference_premodified[r * M + m]) premodified.add(c);
    }
    result.fig4.rows.push_back(
        original.row({to_string(spec.modes[m]), "0", "1", "original"}, ProfileKind::Deterministic));
    result.fig4.rows.push_back(
        premodified.row({to_string(spec.modes[m]), "0", "1", "premodified"}, ProfileKind::Deterministic));
  }

  // fig6: T_p = 1 slice grouped by original trace length
  result.fig6.coord_columns = {"mode", "nt", "pf", "length_group"};
  std::vector<std::string> groups;
  {
    std::vector<std::string> seen;
    for (std::size_t lo = 0, g = 0; g <= spec.length_edges.size(); ++g) {
      seen.push_back(spec.length_group(lo));
      if (g < spec.length_edges.size()) lo = spec.length_edges[g];
    }
    groups = seen;
  }
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t f = 0; f < F; ++f)
        for (const auto& group : groups)
          for (std::size_t k = 0; k < K; ++k) {
            detail::Accumulator acc;
            for (std::size_t r = 0; r < R; ++r) {
              const auto& costs = results[point_index(r, m, n, f, P - 1)].costs[k];
              for (std::size_t c = 0; c < traces; ++c)
                if (spec.length_group(det_log.traces[c].size()) == group) acc.add(costs[c]);
            }
            if (acc.n + acc.failures == 0) continue;
            result.fig6.rows.push_back(acc.row({to_string(spec.modes[m]), std::to_string(spec.nt[n]),
                                                format_number(spec.pf[f]), group},
                                               spec.profiles[k]));
          }

  // self-checks
  std::optional<std::size_t> stoch, lower;
  for (std::size_t k = 0; k < K; ++k) {
    if (spec.profiles[k] == ProfileKind::Stochastic) stoch = k;
    if (spec.profiles[k] == ProfileKind::LowerBound) lower = k;
  }
  if (stoch && lower) {
    SelfCheck dom{"dominance", "all points", true, "lower-bound <= stochastic per trace"};
    for (std::size_t i = 0; i < points.size() && dom.passed; ++i)
      for (std::size_t c = 0; c < traces; ++c) {
        const auto& s = results[i].costs[*stoch][c];
        const auto& l = results[i].costs[*lower][c];
        if (s && l && *l > *s + 1e-12) {
          dom.passed = false;
          dom.detail = "case " + det_log.traces[c].case_id + " at point " + std::to_string(i);
          break;
        }
      }
    result.checks.push_back(dom);
  }
  if (lower) {
    for (std::size_t m = 0; m < M; ++m) {
      SelfCheck mono{"lower-bound-monotone-tp", to_string(spec.modes[m]), true,
                     "lower-bound cost non-increasing in T_p per trace"};
      for (std::size_t r = 0; r < R && mono.passed; ++r)
        for (std::size_t n = 0; n < N && mono.passed; ++n)
          for (std::size_t f = 0; f < F && mono.passed; ++f)
            for (std::size_t t = 1; t < P && mono.passed; ++t)
              for (std::size_t c = 0; c < traces; ++c) {
                const auto& before = results[point_index(r, m, n, f, t - 1)].costs[*lower][c];
                const auto& after = results[point_index(r, m, n, f, t)].costs[*lower][c];
                if (before && after && *after > *before + 1e-12) {
                  mono.passed = false;
                  mono.detail = "case " + det_log.traces[c].case_id + " nt=" + std::to_string(spec.nt[n]) +
                                " pf=" + format_number(spec.pf[f]) + " tp=" + format_number(tps[t]);
                  break;
                }
              }
      result.checks.push_back(mono);
    }
  }
  {
    SelfCheck eq{"deterministic-equivalence", "pf=1", true,
                 "stochastic cost at P_f=1 equals deterministic cost of the unperturbed log"};
    for (std::size_t j = 0; j < R * N && eq.passed; ++j)
      for (std::size_t c = 0; c < traces; ++c)
        if (det_equivalence[j][c] != reference_original[c]) {
          eq.passed = false;
          eq.detail = "case " + det_log.traces[c].case_id + " nt=" + std::to_string(spec.nt[j % N]);
          break;
        }
    result.checks.push_back(eq);
  }
  return result;
}

/// Writes fig4.csv, fig5.csv, fig6.csv, selfcheck.csv and errors.csv.
inline void write_sweep(const SweepResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  write_file((base / "fig4.csv").string(), result.fig4.csv());
  write_file((base / "fig5.csv").string(), result.fig5.csv());
  write_file((base / "fig6.csv").string(), result.fig6.csv());
  write_file((base / "selfcheck.csv").string(), result.checks_csv());
  write_file((base / "errors.csv").string(), result.errors_csv());
}

}  // namespace stocon
