#include <algorithm>
#include <vector>

#include "gtest/gtest.h"

#include "hypar/datastructure/hypergraph.hpp"
#include "hypar/datastructure/subhypergraph.hpp"
#include "tests/test_instances.hpp"

namespace hypar::ds {

using testing::sevenVertexHypergraph;
using testing::deleteRelinkHypergraph;
using testing::randomHypergraph;
using testing::fingerprintFromScratch;

TEST(AHypergraph, InitializesInternalRepresentation) {
  Hypergraph hg = sevenVertexHypergraph();
  ASSERT_EQ(hg.currentNumVertices(), 7);
  ASSERT_EQ(hg.currentNumNets(), 4);
  ASSERT_EQ(hg.currentNumPins(), 12u);
  ASSERT_EQ(hg.vertexDegree(0), 2u);
  ASSERT_EQ(hg.vertexDegree(6), 2u);
  ASSERT_EQ(hg.netSize(1), 4u);
  ASSERT_TRUE(hg.isConsistent());
}

TEST(AHypergraph, MaintainsFingerprintsOnConstruction) {
  Hypergraph hg = sevenVertexHypergraph();
  hg.forNets([&](const NetID e) {
    ASSERT_EQ(hg.netFingerprint(e), fingerprintFromScratch(hg, e));
  });
}

TEST(ContractionTest, PerformsDeleteAndRelinkOperations) {
  Hypergraph hg = deleteRelinkHypergraph();
  const Memento memento = hg.contract(0, 1);
  // Net 0 contained both endpoints: edge deletion, size decrement.
  ASSERT_EQ(hg.netSize(0), 1u);
  ASSERT_EQ(hg.pins(0)[0], 0u);
  // Net 1 contained only the partner: pin slot rewritten, net relinked.
  ASSERT_EQ(hg.netSize(1), 2u);
  ASSERT_TRUE(hg.containsPin(1, 0));
  ASSERT_TRUE(hg.containsPin(1, 2));
  const auto nets_of_u = hg.incidentNets(0);
  ASSERT_NE(std::find(nets_of_u.begin(), nets_of_u.end(), 1u), nets_of_u.end());
  ASSERT_FALSE(hg.vertexIsEnabled(1));
  ASSERT_EQ(memento.u, 0u);
  ASSERT_EQ(memento.v, 1u);
  ASSERT_TRUE(hg.isConsistent());
}

TEST(ContractionTest, CombinesVertexWeights) {
  Hypergraph hg(2, { { 0, 1 } });
  hg.contract(0, 1);
  ASSERT_EQ(hg.vertexWeight(0), 2);
  // Removal of the resulting single-vertex net is the coarsener's job.
  ASSERT_EQ(hg.netSize(0), 1u);
}

TEST(ContractionTest, UpdatesFingerprintOnRelink) {
  // Net {1,2}, contract(0,1): fingerprint changes by 0^2 - 1^2.
  Hypergraph hg(3, { { 1, 2 } });
  const Fingerprint before = hg.netFingerprint(0);
  hg.contract(0, 1);
  ASSERT_EQ(hg.netFingerprint(0), before - 1 + 0);
  ASSERT_EQ(hg.netFingerprint(0), fingerprintFromScratch(hg, 0));
}

TEST(ContractionTest, AllowsNonAdjacentPairs) {
  Hypergraph hg(4, { { 0, 1 }, { 2, 3 } });
  hg.contract(0, 2);
  ASSERT_EQ(hg.vertexWeight(0), 2);
  ASSERT_TRUE(hg.containsPin(1, 0));
  ASSERT_TRUE(hg.isConsistent());
}

TEST(ContractionTest, RejectsInvalidPairs) {
  Hypergraph hg = sevenVertexHypergraph();
  ASSERT_THROW(hg.contract(0, 0), PreconditionError);
  ASSERT_THROW(hg.contract(0, 42), PreconditionError);
  hg.contract(0, 1);
  ASSERT_THROW(hg.contract(2, 1), PreconditionError);  // 1 is disabled
}

TEST(UncontractionTest, RestoresDeleteAndRelinkOperations) {
  Hypergraph hg = deleteRelinkHypergraph();
  const Hypergraph original = hg;
  const Memento memento = hg.contract(0, 1);
  hg.uncontract(memento);
  ASSERT_EQ(hg.netSize(0), 2u);
  ASSERT_TRUE(hg.containsPin(1, 1));
  ASSERT_FALSE(hg.containsPin(1, 0));
  ASSERT_TRUE(hg == original);
}

TEST(UncontractionTest, RoundtripIsIdentity) {
  Hypergraph hg = sevenVertexHypergraph();
  const Hypergraph original = hg;
  const Memento memento = hg.contract(3, 4);
  hg.uncontract(memento);
  ASSERT_TRUE(hg == original);
  ASSERT_TRUE(hg.isConsistent());
}

TEST(UncontractionTest, RejectsOutOfOrderMementos) {
  Hypergraph hg = sevenVertexHypergraph();
  const Memento memento = hg.contract(3, 4);
  hg.uncontract(memento);
  ASSERT_THROW(hg.uncontract(memento), PreconditionError);
}

TEST(UncontractionTest, RandomSequencesRestoreOriginalExactly) {
  Randomize rng(42);
  for (int round = 0; round < 50; ++round) {
    Hypergraph hg = randomHypergraph(rng, 30, 40, 6, true);
    const Hypergraph original = hg;
    std::vector<Memento> mementos;
    std::vector<VertexID> enabled = hg.vertices();
    const int num_contractions = static_cast<int>(rng.integer(1, 29));
    for (int i = 0; i < num_contractions; ++i) {
      const size_t a = static_cast<size_t>(rng.integer(0, static_cast<int64_t>(enabled.size()) - 1));
      size_t b = static_cast<size_t>(rng.integer(0, static_cast<int64_t>(enabled.size()) - 2));
      if (b >= a) {
        ++b;
      }
      mementos.push_back(hg.contract(enabled[a], enabled[b]));
      enabled.erase(enabled.begin() + static_cast<long>(b));
      ASSERT_TRUE(hg.isConsistent());
    }
    while (!mementos.empty()) {
      hg.uncontract(mementos.back());
      mementos.pop_back();
    }
    ASSERT_TRUE(hg == original);
  }
}

TEST(UncontractionTest, PinCountNeverIncreasesUnderContraction) {
  Randomize rng(7);
  Hypergraph hg = randomHypergraph(rng, 20, 30);
  size_t last = hg.currentNumPins();
  std::vector<VertexID> enabled = hg.vertices();
  for (int i = 0; i < 10; ++i) {
    hg.contract(enabled[0], enabled[enabled.size() - 1 - i]);
    ASSERT_LE(hg.currentNumPins(), last);
    last = hg.currentNumPins();
  }
}

TEST(NetRemovalTest, RemoveAndRestoreIsIdentity) {
  Hypergraph hg = sevenVertexHypergraph();
  const Hypergraph original = hg;
  hg.removeNet(2);
  ASSERT_FALSE(hg.netIsEnabled(2));
  ASSERT_EQ(hg.currentNumNets(), 3);
  ASSERT_EQ(hg.currentNumPins(), 9u);
  ASSERT_TRUE(hg.isConsistent());
  hg.restoreNet(2);
  ASSERT_TRUE(hg == original);
}

TEST(RestrictedViewsTest, WithoutCutNetsBothModesInduceTheSameSubhypergraphs) {
  Hypergraph hg(4, { { 0, 1 }, { 2, 3 } });
  const std::vector<PartitionID> blocks = { 0, 0, 1, 1 };
  auto [removed0, removed1] = restrictedViews(hg, blocks, CutNetPolicy::remove);
  auto [split0, split1] = restrictedViews(hg, blocks, CutNetPolicy::split);
  ASSERT_TRUE(removed0.hypergraph == split0.hypergraph);
  ASSERT_TRUE(removed1.hypergraph == split1.hypergraph);
  ASSERT_EQ(removed0.hypergraph.currentNumNets(), 1);
  ASSERT_EQ(removed1.hypergraph.currentNumNets(), 1);
}

TEST(RestrictedViewsTest, SplitsCutNetsAndDiscardsSinglePinFragments) {
  // Cut net {0,1,2} has two pins on side 0 and one on side 1.
  Hypergraph hg(4, { { 0, 1, 2 }, { 2, 3 } });
  const std::vector<PartitionID> blocks = { 0, 0, 1, 1 };
  auto [side0, side1] = restrictedViews(hg, blocks, CutNetPolicy::split);
  ASSERT_EQ(side0.hypergraph.currentNumVertices(), 2);
  ASSERT_EQ(side0.hypergraph.currentNumNets(), 1);  // fragment {0,1}
  ASSERT_EQ(side0.hypergraph.netSize(0), 2u);
  // Side 1 keeps net {2,3} but discards the single-pin fragment {2}.
  ASSERT_EQ(side1.hypergraph.currentNumNets(), 1);
  ASSERT_EQ(side1.hypergraph.netSize(0), 2u);
}

TEST(RestrictedViewsTest, CutNetModeOmitsCutNetsEntirely) {
  Hypergraph hg(4, { { 0, 1 }, { 0, 1, 2 }, { 2, 3 } });
  const std::vector<PartitionID> blocks = { 0, 0, 1, 1 };
  auto [side0, side1] = restrictedViews(hg, blocks, CutNetPolicy::remove);
  // The cut net {0,1,2} is absent from both section hypergraphs.
  ASSERT_EQ(side0.hypergraph.currentNumNets(), 1);
  ASSERT_EQ(side1.hypergraph.currentNumNets(), 1);
  ASSERT_EQ(side0.hypergraph.netSize(0), 2u);
  ASSERT_EQ(side1.hypergraph.netSize(0), 2u);
}

TEST(RestrictedViewsTest, RejectsNonBipartitionInput) {
  Hypergraph hg(4, { { 0, 1 }, { 2, 3 } });
  const std::vector<PartitionID> blocks = { 0, 0, 1, 2 };
  ASSERT_THROW(restrictedViews(hg, blocks, CutNetPolicy::split), PreconditionError);
}

}  // namespace hypar::ds
