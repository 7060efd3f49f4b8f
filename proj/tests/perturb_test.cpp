#include <gtest/gtest.h>

#include <set>

#include "stocon/log_io.hpp"
#include "stocon/perturb.hpp"
#include "support/synthetic.hpp"

using namespace stocon;

namespace {

StochasticTrace ten_events() {
  return deterministic_trace("c", {"A", "B", "C", "D", "E", "F", "G", "H", "I", "J"});
}

const std::vector<std::string> kAlphabet = stocon::testing::letters(10);

std::vector<std::string> activities(const StochasticTrace& t) {
  std::vector<std::string> out;
  for (const auto& e : t.events) out.push_back(e.distribution[0].activity);
  return out;
}

StochasticLog toy_log(std::size_t n) {
  StochasticLog log;
  RngStream rng(5, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> acts;
    const std::size_t len = 1 + rng.uniform_index(12);
    for (std::size_t k = 0; k < len; ++k) acts.push_back(kAlphabet[rng.uniform_index(kAlphabet.size())]);
    log.traces.push_back(deterministic_trace("case" + std::to_string(i), acts));
  }
  return log;
}

}  // namespace

TEST(RngStream, StreamsAreReproducibleAndIndependent) {
  RngStream a(1, 2, RngStream::kSwap), b(1, 2, RngStream::kSwap), c(1, 2, RngStream::kRelabel);
  const auto x = a.next_u64();
  EXPECT_EQ(x, b.next_u64());
  EXPECT_NE(x, c.next_u64());
  const auto s = a.sample(10, 4);
  EXPECT_EQ(std::set<std::size_t>(s.begin(), s.end()).size(), 4u);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform_open01();
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(RngStream, SamplePrefixProperty) {
  RngStream a(3, 0), b(3, 0);
  const auto small = a.sample(20, 5), large = b.sample(20, 9);
  EXPECT_TRUE(std::equal(small.begin(), small.end(), large.begin()));
}

TEST(Relabel, CountAndIdentity) {
  RngStream rng(1, 0);
  std::vector<std::size_t> touched;
  const auto out = relabel_events(ten_events(), 0.3, rng, kAlphabet, &touched);
  ASSERT_EQ(touched.size(), 3u);
  std::size_t changed = 0;
  for (std::size_t i = 0; i < 10; ++i) changed += activities(out)[i] != activities(ten_events())[i];
  EXPECT_EQ(changed, 3u);
  RngStream rng0(1, 0);
  EXPECT_EQ(relabel_events(ten_events(), 0.0, rng0, kAlphabet), ten_events());
}

TEST(Relabel, RepresentationErrorInFraction) {
  // 0.1 * 30 is 3.0000000000000004 and 0.7 * 10 is 7.000000000000001
  EXPECT_EQ(fraction_count(0.1, 30), 3u);
  EXPECT_EQ(fraction_count(0.7, 10), 7u);
  EXPECT_EQ(fraction_count(0.3, 10), 3u);
  EXPECT_EQ(fraction_count(0.29, 10), 2u);
}

TEST(Swap, TwoEventTraceAlwaysSwaps) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    RngStream rng(seed, 0);
    const auto out = swap_events(deterministic_trace("c", {"A", "B"}), 0.5, rng);
    EXPECT_EQ(activities(out), (std::vector<std::string>{"B", "A"}));
    EXPECT_EQ(out.events[0].event_id, "e1");
  }
}

TEST(Swap, CountAndIdentity) {
  RngStream rng(2, 0);
  std::vector<std::size_t> touched;
  const auto out = swap_events(ten_events(), 0.3, rng, &touched);
  EXPECT_EQ(touched.size(), 3u);
  auto sorted = activities(out);
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, activities(ten_events()));
  RngStream rng0(2, 0);
  EXPECT_EQ(swap_events(ten_events(), 0.0, rng0), ten_events());
  RngStream rng1(2, 0);
  EXPECT_THROW(swap_events(deterministic_trace("c", {"A"}), 0.5, rng1), DomainError);
}

TEST(Duplicate, InsertsCopyAfterOriginal) {
  RngStream rng(4, 0);
  std::vector<std::size_t> touched;
  const auto out = duplicate_events(ten_events(), 0.3, rng, &touched);
  EXPECT_EQ(out.size(), 13u);
  RngStream rng0(4, 0);
  EXPECT_EQ(duplicate_events(ten_events(), 0.0, rng0), ten_events());
  // find a position that duplicated exactly one event: <A,B,C> with position 1
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RngStream r(seed, 0);
    std::vector<std::size_t> pos;
    const auto t = duplicate_events(deterministic_trace("c", {"A", "B", "C"}), 0.34, r, &pos);
    if (pos == std::vector<std::size_t>{1}) {
      EXPECT_EQ(activities(t), (std::vector<std::string>{"A", "B", "B", "C"}));
      EXPECT_EQ(t.events[2].event_id, "e2_dup");
      return;
    }
  }
  FAIL() << "no seed duplicated position 1";
}

TEST(ParallelTransitions, HalfOfFourEvents) {
  PerturbConfig cfg;
  cfg.n_parallel = 2;
  cfg.original_prob = 0.75;
  cfg.uncertain_portion = 0.5;
  const auto out =
      add_parallel_transitions(deterministic_trace("c", {"A", "B", "C", "D"}), cfg, RngStream(9, 0), kAlphabet);
  std::size_t uncertain = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& d = out.events[i].distribution;
    EXPECT_EQ(d[0].activity, std::string(1, static_cast<char>('A' + i)));
    if (d.size() == 2) {
      ++uncertain;
      EXPECT_EQ(d[0].probability, 0.75);
      EXPECT_NE(d[1].activity, d[0].activity);
    } else {
      EXPECT_EQ(d.size(), 1u);
    }
  }
  EXPECT_EQ(uncertain, 2u);
  validate_trace(out);
}

TEST(ParallelTransitions, FullPortionTouchesEveryEvent) {
  PerturbConfig cfg;
  cfg.uncertain_portion = 1.0;
  cfg.n_parallel = 4;
  cfg.original_prob = 0.55;
  const auto out = add_parallel_transitions(ten_events(), cfg, RngStream(9, 0), kAlphabet);
  for (const auto& e : out.events) {
    EXPECT_EQ(e.distribution.size(), 4u);
    double sum = 0.0;
    for (const auto& a : e.distribution) sum += a.probability;
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  validate_trace(out);
}

TEST(ParallelTransitions, CertainOriginalDropsAlternatives) {
  PerturbConfig cfg;
  cfg.original_prob = 1.0;
  EXPECT_EQ(add_parallel_transitions(ten_events(), cfg, RngStream(9, 0), kAlphabet), ten_events());
}

TEST(ParallelTransitions, EqualSplit) {
  PerturbConfig cfg;
  cfg.n_parallel = 3;
  cfg.original_prob = 0.5;
  cfg.split = SplitRule::Equal;
  const auto out = add_parallel_transitions(ten_events(), cfg, RngStream(9, 0), kAlphabet);
  EXPECT_EQ(out.events[0].distribution[1].probability, 0.25);
  EXPECT_EQ(out.events[0].distribution[2].probability, 0.25);
}

TEST(ParallelTransitions, NestedAcrossPortionAndCount) {
  const auto trace = deterministic_trace("c", std::vector<std::string>(kAlphabet.begin(), kAlphabet.end()));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PerturbConfig small, large;
    small.uncertain_portion = 0.5;
    large.uncertain_portion = 0.55;
    std::vector<std::size_t> a, b;
    add_parallel_transitions(trace, small, RngStream(seed, 0), kAlphabet, &a);
    add_parallel_transitions(trace, large, RngStream(seed, 0), kAlphabet, &b);
    EXPECT_TRUE(std::includes(b.begin(), b.end(), a.begin(), a.end()));

    PerturbConfig two, four;
    two.n_parallel = 2;
    four.n_parallel = 4;
    const auto t2 = add_parallel_transitions(trace, two, RngStream(seed, 0), kAlphabet);
    const auto t4 = add_parallel_transitions(trace, four, RngStream(seed, 0), kAlphabet);
    for (std::size_t i = 0; i < trace.size(); ++i)
      EXPECT_EQ(t2.events[i].distribution[1].activity, t4.events[i].distribution[1].activity);
  }
}

TEST(ParallelTransitions, Errors) {
  PerturbConfig cfg;
  cfg.n_parallel = 11;
  EXPECT_THROW(add_parallel_transitions(ten_events(), cfg, RngStream(0, 0), kAlphabet), DomainError);
  cfg.n_parallel = 1;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg.n_parallel = 2;
  cfg.original_prob = 0.0;
  EXPECT_THROW(cfg.validate(), DomainError);
  PerturbConfig ok;
  EXPECT_THROW(add_parallel_transitions(stocon::testing::running_example(), ok, RngStream(0, 0), kAlphabet),
               DomainError);
}

TEST(ExperimentLog, NoModeNoPortionIsIdentity) {
  const auto log = toy_log(15);
  PerturbConfig cfg;
  cfg.uncertain_portion = 0.0;
  cfg.seed = 77;
  EXPECT_EQ(generate_experiment_log(log, cfg).log, log);
}

TEST(ExperimentLog, SeededOutputIsStableAcrossThreadCounts) {
  const auto log = toy_log(40);
  PerturbConfig cfg;
  cfg.n_parallel = 3;
  cfg.original_prob = 0.95;
  cfg.mode = PerturbMode::All;
  cfg.seed = 7;
  const auto one = generate_experiment_log(log, cfg, 1);
  const auto many = generate_experiment_log(log, cfg, 8);
  EXPECT_EQ(serialize_log(one.log), serialize_log(many.log));
  EXPECT_EQ(serialize_provenance(one, cfg), serialize_provenance(many, cfg));
  cfg.seed = 8;
  EXPECT_NE(serialize_log(generate_experiment_log(log, cfg).log), serialize_log(one.log));
}

TEST(ExperimentLog, AllModeAppliesEveryModification) {
  const auto log = toy_log(30);
  PerturbConfig cfg;
  cfg.mode = PerturbMode::All;
  cfg.mode_fraction = 0.3;
  cfg.uncertain_portion = 0.0;
  const auto g = generate_experiment_log(log, cfg);
  std::size_t relabeled = 0, swapped = 0, duplicated = 0;
  for (std::size_t i = 0; i < log.traces.size(); ++i) {
    const auto& p = g.provenance[i];
    relabeled += p.relabeled.size();
    swapped += p.swapped.size();
    duplicated += p.duplicated.size();
    EXPECT_EQ(g.log.traces[i].size(), log.traces[i].size() + p.duplicated.size());
  }
  EXPECT_GT(relabeled, 0u);
  EXPECT_GT(swapped, 0u);
  EXPECT_GT(duplicated, 0u);
}

TEST(ExperimentLog, RejectsStochasticInput) {
  StochasticLog log{{stocon::testing::running_example()}};
  EXPECT_THROW(generate_experiment_log(log, PerturbConfig{}), DomainError);
}

TEST(PerturbMode, Names) {
  for (auto m : {PerturbMode::None, PerturbMode::Relabel, PerturbMode::Swap, PerturbMode::Duplicate, PerturbMode::All})
    EXPECT_EQ(parse_perturb_mode(to_string(m)), m);
  EXPECT_THROW(parse_perturb_mode("shuffle"), DomainError);
}
