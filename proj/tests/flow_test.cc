#include <numeric>
#include <vector>

#include "gtest/gtest.h"

#include "hypar/flow/flow_problem.hpp"
#include "hypar/flow/flow_refinement.hpp"
#include "hypar/flow/flowcutter.hpp"
#include "hypar/flow/implicit_flow.hpp"
#include "tests/lawler_oracle.hpp"
#include "tests/test_instances.hpp"

namespace hypar {

namespace {

FlowProblem singleNetProblem() {
  FlowProblem problem;
  problem.to_parent = { kInvalidVertex, kInvalidVertex };
  problem.vertex_weight = { 1, 1 };
  problem.net_pins = { { FlowProblem::kSource, FlowProblem::kSink } };
  problem.net_capacity = { 1 };
  return problem;
}

void auditFlowState(const ImplicitLawlerMaxFlow& flow) {
  const FlowProblem& problem = flow.problem();
  std::vector<Weight> balance(problem.numVertices(), 0);
  for (uint32_t e = 0; e < problem.numNets(); ++e) {
    Weight sent = 0;
    Weight received = 0;
    for (uint32_t i = 0; i < problem.net_pins[e].size(); ++i) {
      const Weight f = flow.pinFlow(e, i);
      sent += std::max<Weight>(0, f);
      received += std::max<Weight>(0, -f);
      balance[problem.net_pins[e][i]] += f;
    }
    ASSERT_EQ(flow.netFlow(e), sent);
    ASSERT_EQ(sent, received);
    ASSERT_LE(flow.netFlow(e), problem.net_capacity[e]);
    ASSERT_GE(flow.netFlow(e), 0);
  }
  for (uint32_t v = 0; v < problem.numVertices(); ++v) {
    if (flow.side(v) == ImplicitLawlerMaxFlow::Side::none) {
      ASSERT_EQ(balance[v], 0) << "conservation violated at vertex " << v;
    }
  }
}

}  // namespace

TEST(ImplicitMaxFlow, SingleNetBetweenTerminals) {
  const FlowProblem problem = singleNetProblem();
  ImplicitLawlerMaxFlow flow(problem);
  ASSERT_EQ(flow.augmentToMaxFlow(), 1);
  const auto source_reach = flow.sourceReachableNodes();
  const auto sink_reach = flow.sinkReachingNodes();
  ASSERT_EQ(flow.cutNets(source_reach, true), (std::vector<uint32_t>{ 0 }));
  ASSERT_EQ(flow.cutNets(sink_reach, false), (std::vector<uint32_t>{ 0 }));
  auditFlowState(flow);
}

TEST(ImplicitMaxFlow, ParallelNetsAddUp) {
  FlowProblem problem = singleNetProblem();
  problem.net_pins.push_back({ FlowProblem::kSource, FlowProblem::kSink });
  problem.net_capacity = { 2, 3 };
  ImplicitLawlerMaxFlow flow(problem);
  ASSERT_EQ(flow.augmentToMaxFlow(), 5);
  auditFlowState(flow);
}

TEST(ImplicitMaxFlow, MatchesTheExplicitLawlerOracle) {
  Randomize rng(2718);
  for (int round = 0; round < 120; ++round) {
    const FlowProblem problem = testing::randomFlowProblem(
        rng, static_cast<uint32_t>(rng.integer(3, 18)),
        static_cast<uint32_t>(rng.integer(2, 24)));
    ImplicitLawlerMaxFlow flow(problem);
    const Weight value = flow.augmentToMaxFlow();
    ASSERT_EQ(value, testing::explicitLawlerMaxFlow(problem)) << "round " << round;
    auditFlowState(flow);

    // Both residual cuts carry exactly the flow value.
    const auto source_reach = flow.sourceReachableNodes();
    const auto sink_reach = flow.sinkReachingNodes();
    Weight source_cut = 0;
    for (const uint32_t e : flow.cutNets(source_reach, true)) {
      source_cut += problem.net_capacity[e];
    }
    Weight sink_cut = 0;
    for (const uint32_t e : flow.cutNets(sink_reach, false)) {
      sink_cut += problem.net_capacity[e];
    }
    ASSERT_EQ(source_cut, value);
    ASSERT_EQ(sink_cut, value);
  }
}

TEST(FlowCutterTest, FindsTheBridgeOfADumbbell) {
  // Two tightly connected groups joined by a single unit net. The flow
  // instance mirrors a corridor whose input bipartition cuts weight 3.
  FlowProblem problem;
  problem.to_parent.assign(8, kInvalidVertex);
  problem.vertex_weight.assign(8, 1);
  // Vertices 2,3,4 belong to the source group, 5,6,7 to the sink group.
  problem.net_pins = {
    { FlowProblem::kSource, 2, 3 }, { 2, 3, 4 },
    { FlowProblem::kSink, 5, 6 }, { 5, 6, 7 },
    { 4, 5 }  // the bridge
  };
  problem.net_capacity = { 3, 3, 3, 3, 1 };

  FlowCutter::Settings settings;
  settings.input_cut_value = 3;  // e.g. net {2,3,4} currently cut
  settings.side_caps = { 5, 5 };
  Randomize rng(1);
  const FlowCutterResult result = FlowCutter::run(problem, settings, rng);
  ASSERT_TRUE(result.accepted);
  ASSERT_EQ(result.cut_value, 1);
  // The bridge separates {s,2,3,4} from {5,6,7,t}.
  ASSERT_EQ(result.side[4], 0);
  ASSERT_EQ(result.side[5], 1);
}

TEST(FlowCutterTest, DeclinesWhenTheCutWouldGrow) {
  // Input cut 0 cannot be beaten; any flow at all exceeds it.
  FlowProblem problem = singleNetProblem();
  FlowCutter::Settings settings;
  settings.input_cut_value = 0;
  settings.side_caps = { 1, 1 };
  Randomize rng(2);
  const FlowCutterResult result = FlowCutter::run(problem, settings, rng);
  ASSERT_FALSE(result.accepted);
}

TEST(CorridorExtraction, RespectsWeightBoundsAndBuildsTerminals) {
  Randomize rng(77);
  const ds::Hypergraph hg = testing::randomHypergraph(rng, 30, 45, 4);
  const auto blocks = testing::randomBlocks(rng, 30, 2);
  Partition partition = testing::makeAssignedPartition(hg, blocks, 2, 0.5);

  const Weight bound = 6;
  const FlowProblem problem = CorridorExtractor::extract(
      hg, partition, 0, 1, Objective::km1, bound, bound);
  if (problem.empty()) {
    return;
  }
  std::array<Weight, 2> corridor_weight = { 0, 0 };
  for (uint32_t v = 2; v < problem.numVertices(); ++v) {
    const VertexID parent = problem.to_parent[v];
    corridor_weight[partition.blockOf(parent)] += hg.vertexWeight(parent);
  }
  ASSERT_LE(corridor_weight[0], bound);
  ASSERT_LE(corridor_weight[1], bound);
  ASSERT_EQ(problem.vertex_weight[FlowProblem::kSource],
            partition.blockWeight(0) - corridor_weight[0]);
  ASSERT_EQ(problem.vertex_weight[FlowProblem::kSink],
            partition.blockWeight(1) - corridor_weight[1]);
  for (const auto& pins : problem.net_pins) {
    ASSERT_GE(pins.size(), 2u);
  }
}

TEST(CorridorExtraction, NoBorderMeansEmptyProblem) {
  ds::Hypergraph hg(4, { { 0, 1 }, { 2, 3 } });
  Partition partition = testing::makeAssignedPartition(hg, { 0, 0, 1, 1 }, 2);
  const FlowProblem problem =
      CorridorExtractor::extract(hg, partition, 0, 1, Objective::km1, 10, 10);
  ASSERT_TRUE(problem.empty());
}

TEST(FlowRefinementTest, ImprovesACraftedBipartition) {
  // Vertex 2 sits on the wrong side: moving it to block 0 drops the cut
  // from 2 to 1.
  ds::Hypergraph hg(6, { { 0, 1, 2 }, { 0, 2 }, { 2, 3 }, { 3, 4, 5 } });
  Partition partition = testing::makeAssignedPartition(hg, { 0, 0, 1, 1, 1, 1 }, 2, 0.5);
  ASSERT_EQ(partition.connectivityMetric(), 2);
  FlowRefinement::Settings settings;
  settings.epsilon = 0.5;
  Randomize rng(3);
  const bool changed = FlowRefinement::refinePair(hg, partition, 0, 1, settings, rng);
  ASSERT_TRUE(changed);
  ASSERT_EQ(partition.connectivityMetric(), 1);
  ASSERT_EQ(partition.blockOf(2), 0);
  ASSERT_TRUE(partition.isConsistent());
}

TEST(FlowRefinementTest, NeverDegradesTheObjective) {
  Randomize rng(991);
  for (const Objective objective : { Objective::km1, Objective::cut }) {
    for (int round = 0; round < 12; ++round) {
      const ds::Hypergraph hg = testing::randomHypergraph(rng, 26, 40, 5, true);
      const PartitionID k = 2 + static_cast<PartitionID>(round % 3);
      Partition partition(hg, k, 0.35);
      hg.forVertices([&](const VertexID v) {
        PartitionID lightest = 0;
        for (PartitionID j = 1; j < k; ++j) {
          if (partition.blockWeight(j) < partition.blockWeight(lightest)) {
            lightest = j;
          }
        }
        partition.assign(v, lightest);
      });
      ASSERT_TRUE(partition.isBalanced());
      const Weight before = partition.objective(objective);

      FlowRefinement::Settings settings;
      settings.objective = objective;
      settings.epsilon = 0.35;
      FlowRefinement::runActiveBlockSchedule(hg, partition, settings, rng);

      ASSERT_LE(partition.objective(objective), before);
      ASSERT_TRUE(partition.isBalanced());
      ASSERT_TRUE(partition.isConsistent());
    }
  }
}

}  // namespace hypar
