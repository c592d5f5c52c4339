#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "gtest/gtest.h"

#include "hypar/coarsening/coarsener.hpp"
#include "hypar/preprocessing/community_detection.hpp"
#include "tests/test_instances.hpp"

namespace hypar {

namespace {

// Multiset of (sorted pin set, weight) over enabled nets; the shape the
// naive dedup oracle compares against.
std::multiset<std::pair<std::vector<VertexID>, Weight>> netShape(const ds::Hypergraph& hg) {
  std::multiset<std::pair<std::vector<VertexID>, Weight>> shape;
  hg.forNets([&](const NetID e) {
    std::vector<VertexID> pins(hg.pins(e).begin(), hg.pins(e).end());
    std::sort(pins.begin(), pins.end());
    shape.insert({ pins, hg.netWeight(e) });
  });
  return shape;
}

// Naive O(m^2) parallel-net dedup on a copy of the net shape.
std::multiset<std::pair<std::vector<VertexID>, Weight>> naiveDedup(
    const std::multiset<std::pair<std::vector<VertexID>, Weight>>& shape) {
  std::map<std::vector<VertexID>, Weight> merged;
  for (const auto& [pins, weight] : shape) {
    merged[pins] += weight;
  }
  std::multiset<std::pair<std::vector<VertexID>, Weight>> result;
  for (const auto& [pins, weight] : merged) {
    result.insert({ pins, weight });
  }
  return result;
}

std::vector<PartitionID> allInOneCluster(const ds::Hypergraph& hg) {
  return std::vector<PartitionID>(hg.initialNumVertices(), 0);
}

}  // namespace

TEST(HeavyEdgeRatingTest, EvaluatesWeightOverSizeMinusOne) {
  ds::Hypergraph hg(3, { { 0, 1 }, { 0, 1, 2 } }, {}, { 1, 2 });
  HeavyEdgeRating rating;
  ASSERT_DOUBLE_EQ(rating.netContribution(hg, 0), 1.0);       // 1/(2-1)
  ASSERT_DOUBLE_EQ(rating.netContribution(hg, 1), 1.0);       // 2/(3-1)
  // Shared nets {w=2,|e|=3} and {w=1,|e|=2} rate 2/2 + 1/1 = 2.
  ASSERT_DOUBLE_EQ(rating.netContribution(hg, 0) + rating.netContribution(hg, 1), 2.0);
}

TEST(PrunerTest, MergesParallelNetsBySummingWeights) {
  // Contracting (1,2) turns {0,1,2} into {0,1}, parallel to net 0.
  ds::Hypergraph hg(3, { { 0, 1 }, { 0, 1, 2 } }, {}, { 3, 4 });
  hg.contract(1, 2);
  std::vector<NetPruneRecord> records;
  HypergraphPruner::pruneIncidentNets(hg, 1, records);
  ASSERT_EQ(hg.currentNumNets(), 1);
  ASSERT_EQ(hg.netWeight(0), 7);
  ASSERT_EQ(records.size(), 1u);
  ASSERT_EQ(records[0].kind, NetPruneRecord::Kind::parallel);
  ASSERT_EQ(records[0].survivor, 0u);
  ASSERT_EQ(records[0].removed_weight, 4);
}

TEST(PrunerTest, RemovesSingleVertexNets) {
  ds::Hypergraph hg(2, { { 0, 1 }, { 0, 1 } }, {}, { 1, 1 });
  hg.contract(0, 1);
  std::vector<NetPruneRecord> records;
  HypergraphPruner::pruneIncidentNets(hg, 0, records);
  // Both nets shrank to {0}; single-vertex nets are removed before
  // parallel detection.
  ASSERT_EQ(hg.currentNumNets(), 0);
  ASSERT_EQ(records.size(), 2u);
  ASSERT_EQ(records[0].kind, NetPruneRecord::Kind::single_vertex);
}

TEST(PrunerTest, FingerprintDetectionMatchesNaivePairwiseComparison) {
  Randomize rng(71);
  for (int round = 0; round < 30; ++round) {
    ds::Hypergraph hg = testing::randomHypergraph(rng, 12, 30, 4, true);
    std::vector<VertexID> enabled = hg.vertices();
    const size_t a = static_cast<size_t>(rng.integer(0, 11));
    size_t b = static_cast<size_t>(rng.integer(0, 10));
    if (b >= a) {
      ++b;
    }
    const VertexID u = enabled[a];
    hg.contract(u, enabled[b]);

    // Expected shape: among the nets of the representative, drop
    // single-pin nets and merge equal pin sets; other nets stay as-is.
    std::multiset<std::pair<std::vector<VertexID>, Weight>> scope;
    std::multiset<std::pair<std::vector<VertexID>, Weight>> rest;
    for (const auto& entry : netShape(hg)) {
      const bool contains_u = std::binary_search(entry.first.begin(), entry.first.end(), u);
      if (contains_u && entry.first.size() > 1) {
        scope.insert(entry);
      } else if (!contains_u) {
        rest.insert(entry);
      }
    }
    auto expected = naiveDedup(scope);
    expected.insert(rest.begin(), rest.end());

    std::vector<NetPruneRecord> records;
    HypergraphPruner::pruneIncidentNets(hg, u, records);
    ASSERT_EQ(netShape(hg), expected);
    ASSERT_TRUE(hg.isConsistent());
  }
}

TEST(CoarsenerTest, StopsBelowTheContractionLimit) {
  Randomize rng(11);
  ds::Hypergraph hg = testing::randomHypergraph(rng, 60, 90, 4);
  Coarsener::Parameters params;
  params.contraction_limit = 20;
  params.max_vertex_weight = 8;
  const auto history = Coarsener::coarsen(hg, allInOneCluster(hg), params, rng);
  ASSERT_LT(hg.currentNumVertices(), 20);
  ASSERT_EQ(hg.currentNumVertices() + history.steps.size(), 60u);
}

TEST(CoarsenerTest, RespectsCommunitiesAndWeightCap) {
  Randomize rng(13);
  ds::Hypergraph original = testing::randomHypergraph(rng, 40, 60, 4);
  ds::Hypergraph hg = original;
  std::vector<PartitionID> communities(40);
  for (VertexID v = 0; v < 40; ++v) {
    communities[v] = v % 3;
  }
  Coarsener::Parameters params;
  params.contraction_limit = 2;
  params.max_vertex_weight = 5;
  const auto history = Coarsener::coarsen(hg, communities, params, rng);

  // Replay on the untouched copy auditing every contraction.
  for (const auto& step : history.steps) {
    ASSERT_EQ(communities[step.memento.u], communities[step.memento.v]);
    ASSERT_LE(original.vertexWeight(step.memento.u) + original.vertexWeight(step.memento.v), 5);
    original.contract(step.memento.u, step.memento.v);
  }
}

TEST(CoarsenerTest, FullUnrollRestoresTheOriginalHypergraph) {
  Randomize rng(17);
  for (int round = 0; round < 5; ++round) {
    ds::Hypergraph hg = testing::randomHypergraph(rng, 30, 45, 5, true);
    const ds::Hypergraph original = hg;
    Coarsener::Parameters params;
    params.contraction_limit = 5;
    params.max_vertex_weight = 30;
    auto history = Coarsener::coarsen(hg, allInOneCluster(hg), params, rng);
    ds::Hypergraph::UncontractionEffects effects;
    while (!history.steps.empty()) {
      Coarsener::uncoarsenStep(hg, history, nullptr, effects);
    }
    Coarsener::restoreInitialPruned(hg, history, nullptr);
    ASSERT_TRUE(hg == original);
  }
}

TEST(CoarsenerTest, RestoresUnmergedParallelNetWeights) {
  ds::Hypergraph hg(3, { { 0, 1 }, { 0, 1, 2 } }, {}, { 3, 4 });
  const ds::Hypergraph original = hg;
  Randomize rng(23);
  Coarsener::Parameters params;
  params.contraction_limit = 2;
  params.max_vertex_weight = 10;
  auto history = Coarsener::coarsen(hg, allInOneCluster(hg), params, rng);
  ASSERT_EQ(hg.currentNumVertices(), 2);

  ds::Hypergraph::UncontractionEffects effects;
  while (!history.steps.empty()) {
    Coarsener::uncoarsenStep(hg, history, nullptr, effects);
  }
  Coarsener::restoreInitialPruned(hg, history, nullptr);
  ASSERT_EQ(hg.netWeight(0), 3);
  ASSERT_EQ(hg.netWeight(1), 4);
  ASSERT_TRUE(hg == original);
}

TEST(CoarsenerTest, RestoresSingleVertexNetsWithOriginalWeight) {
  ds::Hypergraph hg(3, { { 0 }, { 0, 1, 2 } }, {}, { 9, 1 });
  const ds::Hypergraph original = hg;
  Randomize rng(29);
  Coarsener::Parameters params;
  params.contraction_limit = 2;
  params.max_vertex_weight = 10;
  auto history = Coarsener::coarsen(hg, allInOneCluster(hg), params, rng);
  ASSERT_EQ(history.initial_pruned.size(), 1u);

  ds::Hypergraph::UncontractionEffects effects;
  while (!history.steps.empty()) {
    Coarsener::uncoarsenStep(hg, history, nullptr, effects);
  }
  Coarsener::restoreInitialPruned(hg, history, nullptr);
  ASSERT_EQ(hg.netWeight(0), 9);
  ASSERT_TRUE(hg == original);
}

TEST(CoarsenerTest, ProjectionPreservesObjectivesOnEveryLevel) {
  Randomize rng(37);
  for (int round = 0; round < 5; ++round) {
    ds::Hypergraph hg = testing::randomHypergraph(rng, 30, 40, 5, true);
    Coarsener::Parameters params;
    params.contraction_limit = 6;
    params.max_vertex_weight = 40;
    auto history = Coarsener::coarsen(hg, allInOneCluster(hg), params, rng);

    Partition partition(hg, 3, 0.03);
    hg.forVertices([&](const VertexID v) {
      partition.assign(v, static_cast<PartitionID>(rng.integer(0, 2)));
    });
    const Weight km1 = partition.connectivityMetric();
    const Weight cut = partition.cutNet();

    ds::Hypergraph::UncontractionEffects effects;
    while (!history.steps.empty()) {
      Coarsener::uncoarsenStep(hg, history, &partition, effects);
      ASSERT_EQ(partition.connectivityMetric(), km1);
      ASSERT_EQ(partition.cutNet(), cut);
      ASSERT_TRUE(partition.isConsistent());
    }
    Coarsener::restoreInitialPruned(hg, history, &partition);
    ASSERT_EQ(partition.connectivityMetric(), km1);
    ASSERT_TRUE(partition.isConsistent());
  }
}

TEST(CoarsenerTest, UncoarsenStepOnEmptyHistoryFails) {
  ds::Hypergraph hg(2, { { 0, 1 } });
  CoarseningHistory history;
  ds::Hypergraph::UncontractionEffects effects;
  ASSERT_THROW(Coarsener::uncoarsenStep(hg, history, nullptr, effects), PreconditionError);
}

}  // namespace hypar
