#include <cmath>
#include <numeric>
#include <vector>

#include "gtest/gtest.h"

#include "hypar/preprocessing/community_detection.hpp"
#include "hypar/preprocessing/min_hash_sparsifier.hpp"
#include "tests/test_instances.hpp"

namespace hypar {

namespace {

// Direct evaluation of the modularity definition over the adjacency
// matrix; the independent oracle for the optimized implementation.
double modularityByDefinition(const community::LouvainGraph& graph,
                              const std::vector<PartitionID>& community) {
  const uint32_t n = graph.numNodes();
  std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
  for (uint32_t u = 0; u < n; ++u) {
    for (const auto& arc : graph.adjacency[u]) {
      a[u][arc.head] += arc.weight;
    }
  }
  std::vector<double> degree(n, 0.0);
  double two_m = 0.0;
  for (uint32_t i = 0; i < n; ++i) {
    for (uint32_t j = 0; j < n; ++j) {
      degree[i] += a[i][j];
    }
    two_m += degree[i];
  }
  if (two_m == 0.0) {
    return 0.0;
  }
  double q = 0.0;
  for (uint32_t i = 0; i < n; ++i) {
    for (uint32_t j = 0; j < n; ++j) {
      if (community[i] == community[j]) {
        q += a[i][j] - degree[i] * degree[j] / two_m;
      }
    }
  }
  return q / two_m;
}

community::LouvainGraph randomGraph(Randomize& rng, const uint32_t n, const uint32_t num_edges) {
  community::LouvainGraph graph;
  graph.adjacency.resize(n);
  for (uint32_t i = 0; i < num_edges; ++i) {
    const uint32_t u = static_cast<uint32_t>(rng.integer(0, n - 1));
    uint32_t v = static_cast<uint32_t>(rng.integer(0, n - 2));
    if (v >= u) {
      ++v;
    }
    graph.addEdge(u, v, static_cast<double>(rng.integer(1, 4)));
  }
  return graph;
}

community::LouvainGraph twoTriangles() {
  community::LouvainGraph graph;
  graph.adjacency.resize(6);
  graph.addEdge(0, 1, 1.0);
  graph.addEdge(1, 2, 1.0);
  graph.addEdge(0, 2, 1.0);
  graph.addEdge(3, 4, 1.0);
  graph.addEdge(4, 5, 1.0);
  graph.addEdge(3, 5, 1.0);
  return graph;
}

}  // namespace

TEST(Modularity, MatchesDefinitionOracleOnRandomGraphs) {
  Randomize rng(2024);
  for (int round = 0; round < 15; ++round) {
    const auto graph = randomGraph(rng, 8, 14);
    std::vector<PartitionID> community(8);
    for (auto& c : community) {
      c = static_cast<PartitionID>(rng.integer(0, 3));
    }
    ASSERT_NEAR(community::modularity(graph, community),
                modularityByDefinition(graph, community), 1e-12);
  }
}

TEST(Modularity, SingleCommunityGivesExactlyZero) {
  Randomize rng(77);
  for (int round = 0; round < 10; ++round) {
    const auto graph = randomGraph(rng, 10, 20);
    const std::vector<PartitionID> one(10, 0);
    ASSERT_EQ(community::modularity(graph, one), 0.0);
  }
}

TEST(Modularity, SeparatedEdgeEndpointsGiveMinusOneHalf) {
  community::LouvainGraph graph;
  graph.adjacency.resize(2);
  graph.addEdge(0, 1, 1.0);
  ASSERT_DOUBLE_EQ(community::modularity(graph, { 0, 1 }), -0.5);
}

TEST(Louvain, FindsTheTwoTrianglesAsOptimalCommunities) {
  const auto graph = twoTriangles();

  // Brute force over all assignments of six nodes to at most six labels.
  double best_q = -1.0;
  std::vector<PartitionID> assignment(6, 0);
  for (int code = 0; code < 6 * 6 * 6 * 6 * 6 * 6; ++code) {
    int rest = code;
    for (int i = 0; i < 6; ++i) {
      assignment[i] = rest % 6;
      rest /= 6;
    }
    best_q = std::max(best_q, community::modularity(graph, assignment));
  }
  ASSERT_NEAR(best_q, 0.5, 1e-12);

  Randomize rng(1);
  const auto community = community::louvain(graph, 100, 0.0001, rng);
  ASSERT_DOUBLE_EQ(community::modularity(graph, community), 0.5);
  ASSERT_EQ(community[0], community[1]);
  ASSERT_EQ(community[1], community[2]);
  ASSERT_EQ(community[3], community[4]);
  ASSERT_EQ(community[4], community[5]);
  ASSERT_NE(community[0], community[3]);
}

TEST(Louvain, NeverEndsBelowTheSingletonClustering) {
  Randomize rng(31337);
  for (int round = 0; round < 10; ++round) {
    const auto graph = randomGraph(rng, 12, 20);
    std::vector<PartitionID> singletons(12);
    std::iota(singletons.begin(), singletons.end(), 0);
    const double q_singleton = community::modularity(graph, singletons);
    const auto community = community::louvain(graph, 100, 0.0001, rng);
    ASSERT_GE(community::modularity(graph, community), q_singleton - 1e-12);
  }
}

TEST(CommunityDetection, AssignsEveryVertexADenseCommunityId) {
  Randomize rng(4);
  const ds::Hypergraph hg = testing::randomHypergraph(rng, 20, 30);
  Context ctx;
  Randomize communities_rng(9);
  const CommunityAssignment assignment =
      detectCommunities(hg, ctx.preprocessing, communities_rng);
  ASSERT_GT(assignment.num_communities, 0);
  hg.forVertices([&](const VertexID v) {
    ASSERT_GE(assignment.community[v], 0);
    ASSERT_LT(assignment.community[v], assignment.num_communities);
  });
}

TEST(CommunityDetection, UsesDensityDependentEdgeWeights) {
  // density = 1/4 < 0.75: bipartite edge weight is d(v)/|e|.
  const ds::Hypergraph sparse(4, { { 0, 1, 2, 3 } });
  std::vector<VertexID> vertex_of_node;
  auto graph = community::buildBipartiteGraph(sparse, 0.75, vertex_of_node);
  ASSERT_DOUBLE_EQ(graph.adjacency[0][0].weight, 1.0 / 4.0);

  // density = 4/2 >= 0.75: constant edge weights.
  const ds::Hypergraph dense(2, { { 0, 1 }, { 0, 1 }, { 0, 1 }, { 0, 1 } });
  graph = community::buildBipartiteGraph(dense, 0.75, vertex_of_node);
  ASSERT_DOUBLE_EQ(graph.adjacency[0][0].weight, 1.0);
}

TEST(MinHash, CollisionRateMatchesJaccardIndex) {
  // Two vertices sharing two of their three nets: J = 2/4 = 0.5.
  const ds::Hypergraph hg(2, { { 0, 1 }, { 0, 1 }, { 0 }, { 1 } });
  const double jaccard = jaccardIndex(hg, 0, 1);
  ASSERT_DOUBLE_EQ(jaccard, 0.5);

  Randomize rng(5517);
  int collisions = 0;
  const int trials = 10000;
  for (int i = 0; i < trials; ++i) {
    const MinHashFunction h = MinHashFunction::random(rng);
    if (h.minOver(hg.incidentNets(0)) == h.minOver(hg.incidentNets(1))) {
      ++collisions;
    }
  }
  ASSERT_NEAR(static_cast<double>(collisions) / trials, jaccard, 0.02);
}

TEST(MinHash, EqualIncidenceSetsAlwaysCollide) {
  const ds::Hypergraph hg(2, { { 0, 1 }, { 0, 1 }, { 0, 1 } });
  ASSERT_DOUBLE_EQ(jaccardIndex(hg, 0, 1), 1.0);
  Randomize rng(8);
  for (int i = 0; i < 100; ++i) {
    const MinHashFunction h = MinHashFunction::random(rng);
    ASSERT_EQ(h.minOver(hg.incidentNets(0)), h.minOver(hg.incidentNets(1)));
  }
}

TEST(MinHash, DisjointIncidenceSetsRarelyCollide) {
  ds::Hypergraph hg(4, { { 0, 1 }, { 2, 3 } });
  ASSERT_DOUBLE_EQ(jaccardIndex(hg, 0, 2), 0.0);
  Randomize rng(9);
  int collisions = 0;
  for (int i = 0; i < 10000; ++i) {
    const MinHashFunction h = MinHashFunction::random(rng);
    if (h.minOver(hg.incidentNets(0)) == h.minOver(hg.incidentNets(2))) {
      ++collisions;
    }
  }
  ASSERT_NEAR(static_cast<double>(collisions) / 10000.0, 0.0, 0.02);
}

namespace {

// Instance with large nets so that the sparsifier threshold is met, made
// of groups of vertices with identical incidence sets.
ds::Hypergraph largeNetHypergraph(const VertexID groups, const VertexID group_size) {
  const VertexID n = groups * group_size;
  std::vector<std::vector<VertexID>> nets;
  for (VertexID g = 0; g < groups; ++g) {
    std::vector<VertexID> pins;
    for (VertexID i = 0; i < group_size; ++i) {
      pins.push_back(g * group_size + i);
    }
    // Each group gets two identical large nets.
    nets.push_back(pins);
    nets.push_back(pins);
  }
  return ds::Hypergraph(n, nets);
}

}  // namespace

TEST(Sparsifier, SkipsInstancesWithSmallMedianNetSize) {
  Randomize rng(3);
  ds::Hypergraph hg = testing::randomHypergraph(rng, 20, 30, 5);
  Context ctx;
  const auto result = MinHashSparsifier::sparsify(hg, ctx.preprocessing, rng);
  ASSERT_FALSE(result.applied);
  ASSERT_EQ(hg.currentNumVertices(), 20);
}

TEST(Sparsifier, ClustersVerticesWithIdenticalNeighborhoods) {
  ds::Hypergraph hg = largeNetHypergraph(4, 30);
  ASSERT_GE(MinHashSparsifier::medianNetSize(hg), 28.0);
  Context ctx;
  Randomize rng(12);
  const auto result = MinHashSparsifier::sparsify(hg, ctx.preprocessing, rng);
  ASSERT_TRUE(result.applied);
  ASSERT_LT(hg.currentNumVertices(), 120);
  ASSERT_TRUE(hg.isConsistent());

  // Cluster size stays within [cmin interpreted at close time, cmax].
  std::vector<int> cluster_size(hg.initialNumVertices(), 0);
  for (VertexID v = 0; v < hg.initialNumVertices(); ++v) {
    cluster_size[result.representative[v]] += 1;
  }
  for (VertexID v = 0; v < hg.initialNumVertices(); ++v) {
    ASSERT_LE(cluster_size[v], static_cast<int>(ctx.preprocessing.sparsifier_cluster_max_size));
    if (!hg.vertexIsEnabled(v)) {
      // Merged-away vertices must point at an enabled representative.
      ASSERT_TRUE(hg.vertexIsEnabled(result.representative[v]));
    }
  }
}

TEST(Sparsifier, ProjectedPartitionsKeepTheObjectiveValue) {
  ds::Hypergraph hg = largeNetHypergraph(4, 30);
  const ds::Hypergraph original = hg;
  Context ctx;
  Randomize rng(21);
  const auto result = MinHashSparsifier::sparsify(hg, ctx.preprocessing, rng);
  ASSERT_TRUE(result.applied);

  // Partition the sparsified hypergraph at random and project back.
  Randomize block_rng(5);
  std::vector<PartitionID> sparse_blocks(hg.initialNumVertices(), 0);
  hg.forVertices([&](const VertexID v) {
    sparse_blocks[v] = static_cast<PartitionID>(block_rng.integer(0, 1));
  });
  std::vector<PartitionID> projected(original.initialNumVertices());
  original.forVertices([&](const VertexID v) {
    projected[v] = sparse_blocks[result.representative[v]];
  });
  ASSERT_EQ(metrics::connectivityFromScratch(hg, sparse_blocks),
            metrics::connectivityFromScratch(original, projected));
  ASSERT_EQ(metrics::cutNetFromScratch(hg, sparse_blocks),
            metrics::cutNetFromScratch(original, projected));
}

}  // namespace hypar
