#include <gtest/gtest.h>

#include "stocon/batch.hpp"
#include "stocon/oracle.hpp"
#include "stocon/report.hpp"
#include "stocon/search.hpp"
#include "stocon/trace_net.hpp"
#include "support/synthetic.hpp"

using namespace stocon;
using stocon::testing::running_example;
using stocon::testing::sequence_net;

namespace {

StochasticTrace a_then_b_or_c() {
  return {"c", {{"e1", std::nullopt, {{"A", 1.0}}}, {"e2", std::nullopt, {{"B", 0.2}, {"C", 0.8}}}}};
}

SyncProductNet product_of(const SystemNet& model, const StochasticTrace& t) {
  return build_sync_product(model, build_stochastic_trace_net(t));
}

const CostProfile kStochastic{ProfileKind::Stochastic};
const CostProfile kDeterministic{ProfileKind::Deterministic};
const CostProfile kLower{ProfileKind::LowerBound};

}  // namespace

TEST(OptimalAlignment, StochasticPrefersUnlikelySyncOverTwoMoves) {
  const auto a = optimal_alignment(product_of(sequence_net({"A", "B"}), a_then_b_or_c()), kStochastic);
  EXPECT_NEAR(a.total_cost, 0.9816843611, 1e-9);
  ASSERT_EQ(a.moves.size(), 2u);
  EXPECT_EQ(a.moves[0].kind, MoveKind::Sync);
  EXPECT_EQ(a.moves[0].model_label, ActivityLabel("A"));
  EXPECT_EQ(a.moves[1].kind, MoveKind::Sync);
  EXPECT_EQ(a.moves[1].trace_label, ActivityLabel("B"));
  EXPECT_EQ(a.moves[1].weight, 0.2);
}

TEST(OptimalAlignment, LowerBoundPicksCheapestRealization) {
  const auto a = optimal_alignment(product_of(sequence_net({"A", "B"}), a_then_b_or_c()), kLower);
  EXPECT_EQ(a.total_cost, 0.0);
  EXPECT_EQ(a.count(MoveKind::Sync), 2u);
}

TEST(OptimalAlignment, EmptyTraceAgainstEmptyModel) {
  SystemNet model;
  model.places = {"p"};
  model.initial_marking.add("p");
  model.final_marking.add("p");
  const auto a = optimal_alignment(product_of(model, StochasticTrace{"c", {}}), kStochastic);
  EXPECT_EQ(a.total_cost, 0.0);
  EXPECT_TRUE(a.moves.empty());
}

TEST(OptimalAlignment, PerfectFit) {
  const auto a =
      optimal_alignment(product_of(sequence_net({"A", "B"}), deterministic_trace("c", {"A", "B"})), kDeterministic);
  EXPECT_EQ(a.total_cost, 0.0);
}

TEST(OptimalAlignment, ClassicDeviations) {
  // <A,X,C> against A->B->C: one log move and one model move
  const auto a = optimal_alignment(product_of(sequence_net({"A", "B", "C"}), deterministic_trace("c", {"A", "X", "C"})),
                                   kDeterministic);
  EXPECT_EQ(a.total_cost, 2.0);
  EXPECT_EQ(a.count(MoveKind::LogMove), 1u);
  EXPECT_EQ(a.count(MoveKind::ModelMove), 1u);
}

TEST(OptimalAlignment, SilentMovesAreFree) {
  SystemNet model = sequence_net({"A", "B"});
  model.transitions.push_back({"skip", ActivityLabel::tau(), std::nullopt});
  model.arcs.push_back({"p1", "skip"});
  model.arcs.push_back({"skip", "p2"});
  const auto a = optimal_alignment(product_of(model, deterministic_trace("c", {"A"})), kDeterministic);
  EXPECT_EQ(a.total_cost, 0.0);
  ASSERT_EQ(a.moves.size(), 2u);
  EXPECT_EQ(a.moves[1].model_transition, "skip");
  EXPECT_EQ(display(a.moves[1].trace_label), ">>");
}

TEST(OptimalAlignment, UnreachableFinalMarking) {
  SystemNet model = sequence_net({"A"});
  model.places.push_back("dead");
  model.final_marking = Marking{{"dead", 1}};
  EXPECT_THROW(optimal_alignment(product_of(model, deterministic_trace("c", {"A"})), kStochastic), NoAlignmentError);
}

TEST(OptimalAlignment, NodeCapReportsFrontier) {
  const auto product = product_of(sequence_net({"A", "B", "C", "D"}), deterministic_trace("c", {"D", "C", "B", "A"}));
  try {
    optimal_alignment(product, kStochastic, {false, 3});
    FAIL();
  } catch (const CapacityError& e) {
    EXPECT_NE(std::string(e.what()).find("frontier"), std::string::npos);
  }
}

TEST(OptimalAlignment, DeterministicOutputAcrossRuns) {
  const auto product = product_of(sequence_net({"A", "C", "D", "F"}), running_example());
  const auto first = alignment_dump(optimal_alignment(product, kStochastic));
  for (int i = 0; i < 5; ++i) EXPECT_EQ(alignment_dump(optimal_alignment(product, kStochastic)), first);
}

TEST(Heuristic, RemainingEventBound) {
  const auto product = product_of(sequence_net({"A", "B"}), a_then_b_or_c());
  EXPECT_NEAR(admissible_heuristic(product.net.initial_marking, product, kStochastic), 0.9816843611, 1e-9);
  EXPECT_EQ(admissible_heuristic(product.net.final_marking, product, kStochastic), 0.0);
  EXPECT_EQ(admissible_heuristic(product.net.initial_marking, product, kLower), 0.0);
  // positions without any sync option cost one move
  const auto unmatched = product_of(sequence_net({"A"}), deterministic_trace("c", {"X", "Y"}));
  EXPECT_EQ(admissible_heuristic(unmatched.net.initial_marking, unmatched, kLower), 2.0);
}

TEST(Heuristic, AStarMatchesDijkstra) {
  const auto product = product_of(sequence_net({"A", "C", "D", "F"}), running_example());
  for (const auto& p : {kStochastic, kDeterministic, kLower}) {
    const auto plain = optimal_alignment(product, p, {false});
    const auto guided = optimal_alignment(product, p, {true});
    EXPECT_NEAR(plain.total_cost, guided.total_cost, 1e-12);
    EXPECT_LE(guided.explored_nodes, plain.explored_nodes);
  }
}

TEST(BruteForce, TwoEventExample) {
  const auto a = brute_force_alignment(sequence_net({"A", "B"}), a_then_b_or_c(), kStochastic, 256);
  EXPECT_NEAR(a.total_cost, 0.9816843611, 1e-9);
  EXPECT_EQ(a.count(MoveKind::Sync), 2u);
}

TEST(BruteForce, RunningExampleEightRealizations) {
  const auto model = sequence_net({"A", "C", "D", "F"});
  for (const auto& p : {kStochastic, kDeterministic, kLower}) {
    const auto oracle = brute_force_alignment(model, running_example(), p, 8);
    const auto search = optimal_alignment(product_of(model, running_example()), p);
    EXPECT_NEAR(oracle.total_cost, search.total_cost, 1e-9);
  }
  EXPECT_THROW(brute_force_alignment(model, running_example(), kStochastic, 7), CapacityError);
}

TEST(BruteForce, ReachabilityGraph) {
  const auto rg = build_reachability_graph(sequence_net({"A", "B"}), 100);
  EXPECT_EQ(rg.states.size(), 3u);
  ASSERT_TRUE(rg.final_state);
  EXPECT_THROW(build_reachability_graph(sequence_net({"A", "B"}), 2), CapacityError);
}

TEST(BruteForce, AgreesWithSearchOnRandomInstances) {
  const auto alphabet = stocon::testing::letters(5);
  for (std::uint64_t i = 0; i < 60; ++i) {
    RngStream rng(99, i);
    const auto model = stocon::testing::random_model(rng, alphabet, 12);
    const auto trace = stocon::testing::random_stochastic_trace(rng, alphabet, 5, 3, 64);
    for (const auto& p : {kStochastic, kLower}) {
      const double expected = brute_force_alignment(model, trace, p, 64).total_cost;
      EXPECT_NEAR(align_trace(model, trace, p).total_cost, expected, 1e-9) << "instance " << i;
    }
  }
}

TEST(AlignLog, MeanAndFailures) {
  const auto model = sequence_net({"A", "B"});
  StochasticLog same{{deterministic_trace("a", {"A"}), deterministic_trace("b", {"A"})}};
  const auto one = align_trace(model, same.traces[0], kStochastic);
  const auto both = align_log(model, same, kStochastic, {}, 2);
  EXPECT_EQ(both.mean_cost, one.total_cost);

  SystemNet dead = model;
  dead.places.push_back("dead");
  dead.final_marking = Marking{{"dead", 1}};
  StochasticLog log{{deterministic_trace("a", {"A", "B"})}};
  const auto failed = align_log(dead, log, kStochastic, {}, 1);
  EXPECT_EQ(failed.failures, 1u);
  EXPECT_FALSE(failed.outcomes[0].error.empty());
}

TEST(AlignLog, ResultCsvHasOneRowPerCase) {
  const auto model = sequence_net({"A", "B"});
  StochasticLog log{{deterministic_trace("a", {"A", "B"}), deterministic_trace("b", {"B"})}};
  const auto csv = result_csv(align_log(model, log, kStochastic, {}, 1), ProfileKind::Stochastic);
  const auto table = parse_csv(csv);
  EXPECT_EQ(table.rows.size(), 2u);
  EXPECT_EQ(table.rows[0][0], "a");
}

TEST(Threads, ResolveAndParallelFor) {
  EXPECT_EQ(resolve_threads(3u), 3u);
  std::vector<int> hits(100, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 3, [](std::size_t i) {
                 if (i == 7) throw DomainError("boom");
               }),
               DomainError);
}
