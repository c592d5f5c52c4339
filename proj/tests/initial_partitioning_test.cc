#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "gtest/gtest.h"

#include "hypar/initial_partitioning/adaptive_epsilon.hpp"
#include "hypar/initial_partitioning/portfolio.hpp"
#include "hypar/initial_partitioning/recursive_bipartition.hpp"
#include "tests/test_instances.hpp"

namespace hypar {

TEST(AdaptiveEpsilon, IsTheIdentityForATrivialSplit) {
  ASSERT_NEAR(adaptiveEpsilon(0.03, 2, 2, 100, 100), 0.03, 1e-12);
  ASSERT_NEAR(adaptiveEpsilon(0.0, 7, 7, 100, 100), 0.0, 1e-12);
}

TEST(AdaptiveEpsilon, EvaluatesTheClosedFormForTheFirstBipartition) {
  // First call with k = k' = 4: (1.03)^(1/2) - 1.
  const double eps = adaptiveEpsilon(0.03, 4, 4, 1234, 1234);
  ASSERT_NEAR(eps, 0.0148891565092219, 1e-12);
  ASSERT_NEAR(eps, std::sqrt(1.03) - 1.0, 1e-15);
}

TEST(AdaptiveEpsilon, RejectsNonpositiveWeights) {
  ASSERT_THROW(adaptiveEpsilon(0.03, 4, 4, 0, 10), PreconditionError);
  ASSERT_THROW(adaptiveEpsilon(0.03, 4, 4, 10, -1), PreconditionError);
  ASSERT_THROW(adaptiveEpsilon(0.03, 4, 1, 10, 10), PreconditionError);
}

TEST(GrowthScores, MaxNetGainSumsWeightsOfNetsTouchingTheTargetBlock) {
  // Vertex 0 is adjacent to block 0 through nets of weight 2 and 3.
  ds::Hypergraph hg(4, { { 0, 1 }, { 0, 2 }, { 0, 3 } }, {}, { 2, 3, 7 });
  Partition partition(hg, 2, 0.03);
  partition.assign(1, 0);
  partition.assign(2, 0);
  partition.assign(3, 1);
  ASSERT_EQ(maxNetGain(hg, partition, 0, 0), 5);
  ASSERT_EQ(maxNetGain(hg, partition, 0, 1), 7);
}

TEST(GrowthScores, PseudoPeripheralSeedsOfAPathAreItsEndpoints) {
  ds::Hypergraph path(5, { { 0, 1 }, { 1, 2 }, { 2, 3 }, { 3, 4 } });
  for (uint64_t seed = 0; seed < 5; ++seed) {
    Randomize rng(seed);
    const auto [a, b] = pseudoPeripheralSeeds(path, rng);
    const std::set<VertexID> seeds = { a, b };
    ASSERT_EQ(seeds, (std::set<VertexID>{ 0, 4 }));
  }
}

TEST(Portfolio, TwoIsolatedVerticesSplitWithCutZero) {
  ds::Hypergraph hg(2, {});
  PortfolioBipartitioner::Settings settings;
  settings.max_side_weights = { 1, 1 };
  settings.target_side_weights = { 1, 1 };
  const PortfolioResult result = PortfolioBipartitioner::run(hg, settings, 7);
  ASSERT_EQ(result.objective, 0);
  ASSERT_TRUE(result.balanced);
}

TEST(Portfolio, EveryAlgorithmAssignsAllVertices) {
  Randomize instance_rng(55);
  const ds::Hypergraph hg = testing::randomHypergraph(instance_rng, 30, 40, 5);
  PortfolioBipartitioner::Settings settings;
  settings.max_side_weights = { 18, 18 };
  settings.target_side_weights = { 15, 15 };
  for (size_t algo = 0; algo < kNumBipartitionAlgorithms; ++algo) {
    Randomize rng(algo + 1);
    Partition partition(hg, 2, 0.03, { 18, 18 });
    PortfolioBipartitioner::buildCandidate(hg, partition,
                                           static_cast<BipartitionAlgorithm>(algo),
                                           settings, rng);
    ASSERT_TRUE(partition.allAssigned()) << "algorithm " << algo;
  }
}

TEST(Portfolio, ReturnsTheBestCandidateAcrossAlgorithms) {
  Randomize instance_rng(66);
  const ds::Hypergraph hg = testing::randomHypergraph(instance_rng, 24, 30, 4);
  PortfolioBipartitioner::Settings settings;
  // Generous caps: every candidate is balanced, so the returned value
  // must equal the minimum over the per-algorithm bests.
  settings.max_side_weights = { 24, 24 };
  settings.target_side_weights = { 12, 12 };
  settings.runs_per_algorithm = 5;
  const PortfolioResult result = PortfolioBipartitioner::run(hg, settings, 99);
  const Weight min_over_algorithms =
      *std::min_element(result.best_per_algorithm.begin(), result.best_per_algorithm.end());
  ASSERT_EQ(result.objective, min_over_algorithms);
  ASSERT_TRUE(result.balanced);
}

TEST(Portfolio, HandlesDisconnectedInputs) {
  // Two disjoint triangles with unit weights; the optimum cut is zero.
  ds::Hypergraph hg(6, { { 0, 1, 2 }, { 0, 1 }, { 3, 4, 5 }, { 4, 5 } });
  PortfolioBipartitioner::Settings settings;
  settings.max_side_weights = { 3, 3 };
  settings.target_side_weights = { 3, 3 };
  const PortfolioResult result = PortfolioBipartitioner::run(hg, settings, 3);
  ASSERT_EQ(result.objective, 0);
  ASSERT_TRUE(result.balanced);
}

namespace {

RecursiveBipartitioner::Settings defaultSettings(const Objective objective) {
  RecursiveBipartitioner::Settings settings;
  settings.objective = objective;
  settings.epsilon = 0.03;
  settings.runs_per_algorithm = 4;  // keeps unit tests quick
  return settings;
}

}  // namespace

TEST(RecursiveBipartition, SplitsDisjointComponentsPerfectly) {
  // Two disjoint equal components, k=2, eps=0: optimum 0 is reachable.
  ds::Hypergraph hg(8, { { 0, 1 }, { 1, 2 }, { 2, 3 }, { 4, 5 }, { 5, 6 }, { 6, 7 } });
  auto settings = defaultSettings(Objective::km1);
  settings.epsilon = 0.0;
  const auto blocks = RecursiveBipartitioner::partition(hg, 2, settings, 42);
  ASSERT_EQ(metrics::connectivityFromScratch(hg, blocks), 0);
  Partition partition = testing::makeAssignedPartition(hg, blocks, 2, 0.0);
  ASSERT_TRUE(partition.isFeasible());
}

TEST(RecursiveBipartition, ProducesFeasibleThreeWayPartitions) {
  Randomize rng(17);
  for (int round = 0; round < 5; ++round) {
    const ds::Hypergraph hg = testing::randomHypergraph(rng, 45, 60, 4);
    const auto blocks =
        RecursiveBipartitioner::partition(hg, 3, defaultSettings(Objective::km1), round);
    Partition partition = testing::makeAssignedPartition(hg, blocks, 3, 0.03);
    ASSERT_TRUE(partition.isBalanced()) << "round " << round
        << " imbalance " << partition.imbalance();
  }
}

TEST(RecursiveBipartition, KeepsTheLemmaGuaranteeForLargerK) {
  Randomize rng(23);
  for (const PartitionID k : { 4, 6, 8 }) {
    for (int round = 0; round < 3; ++round) {
      const ds::Hypergraph hg = testing::randomHypergraph(rng, 64, 80, 4);
      for (const Objective objective : { Objective::km1, Objective::cut }) {
        const auto blocks =
            RecursiveBipartitioner::partition(hg, k, defaultSettings(objective),
                                              static_cast<uint64_t>(round));
        Partition partition = testing::makeAssignedPartition(hg, blocks, k, 0.03);
        ASSERT_TRUE(partition.isBalanced())
            << "k=" << k << " objective=" << toString(objective)
            << " imbalance=" << partition.imbalance();
      }
    }
  }
}

TEST(RecursiveBipartition, IsDeterministicPerSeed) {
  Randomize rng(29);
  const ds::Hypergraph hg = testing::randomHypergraph(rng, 40, 52, 4);
  const auto settings = defaultSettings(Objective::km1);
  const auto first = RecursiveBipartitioner::partition(hg, 4, settings, 1001);
  const auto second = RecursiveBipartitioner::partition(hg, 4, settings, 1001);
  ASSERT_EQ(first, second);
  const auto other_seed = RecursiveBipartitioner::partition(hg, 4, settings, 1002);
  (void)other_seed;  // different seeds are allowed to differ; must not crash
}

}  // namespace hypar
