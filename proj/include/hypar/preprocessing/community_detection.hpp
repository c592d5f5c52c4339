#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "hypar/datastructure/hypergraph.hpp"
#include "hypar/definitions.hpp"
#include "hypar/partition/context.hpp"
#include "hypar/utils/randomize.hpp"

namespace hypar {

struct CommunityAssignment {
  std::vector<PartitionID> community;  // indexed by original vertex id
  PartitionID num_communities = 0;
};

namespace community {

// Undirected weighted graph for modularity optimization. Every edge
// {i,j} with i != j appears in both adjacency lists; a self-loop entry
// stores the full diagonal value A_ii once.
struct LouvainGraph {
  struct Arc {
    uint32_t head;
    double weight;
  };
  std::vector<std::vector<Arc>> adjacency;

  uint32_t numNodes() const { return static_cast<uint32_t>(adjacency.size()); }

  void addEdge(const uint32_t u, const uint32_t v, const double w) {
    if (u == v) {
      adjacency[u].push_back({ u, w });
    } else {
      adjacency[u].push_back({ v, w });
      adjacency[v].push_back({ u, w });
    }
  }

  double weightedDegree(const uint32_t u) const {
    double sum = 0.0;
    for (const Arc& arc : adjacency[u]) {
      sum += arc.weight;
    }
    return sum;
  }

  double totalWeight() const {  // 2m
    double sum = 0.0;
    for (uint32_t u = 0; u < numNodes(); ++u) {
      sum += weightedDegree(u);
    }
    return sum;
  }
};

// Q = sum_c [ in_c/(2m) - (tot_c/(2m))^2 ] with in_c summed over ordered
// pairs inside c.
inline double modularity(const LouvainGraph& graph, const std::vector<PartitionID>& community) {
  const double two_m = graph.totalWeight();
  if (two_m == 0.0) {
    return 0.0;
  }
  PartitionID num_communities = 0;
  for (const PartitionID c : community) {
    num_communities = std::max(num_communities, c + 1);
  }
  std::vector<double> in(num_communities, 0.0);
  std::vector<double> tot(num_communities, 0.0);
  for (uint32_t u = 0; u < graph.numNodes(); ++u) {
    tot[community[u]] += graph.weightedDegree(u);
    for (const auto& arc : graph.adjacency[u]) {
      if (community[arc.head] == community[u]) {
        in[community[u]] += arc.weight;
      }
    }
  }
  double q = 0.0;
  for (PartitionID c = 0; c < num_communities; ++c) {
    q += in[c] / two_m - (tot[c] / two_m) * (tot[c] / two_m);
  }
  return q;
}

namespace internal {

// One local-moving phase. Returns true if any node changed its community.
inline bool localMovingPhase(const LouvainGraph& graph, std::vector<PartitionID>& community,
                             const uint32_t max_iterations, const double min_gain,
                             Randomize& rng) {
  const uint32_t n = graph.numNodes();
  const double two_m = graph.totalWeight();
  const double m = two_m / 2.0;
  if (m == 0.0) {
    return false;
  }

  std::vector<double> tot(n, 0.0);
  for (uint32_t u = 0; u < n; ++u) {
    tot[community[u]] += graph.weightedDegree(u);
  }

  std::vector<uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);

  std::vector<double> weight_to(n, 0.0);
  std::vector<PartitionID> touched;
  bool any_move = false;
  for (uint32_t iteration = 0; iteration < max_iterations; ++iteration) {
    double phase_gain = 0.0;
    bool moved = false;
    for (const uint32_t u : order) {
      const PartitionID own = community[u];
      const double k_u = graph.weightedDegree(u);

      touched.clear();
      for (const auto& arc : graph.adjacency[u]) {
        if (arc.head == u) {
          // Self-loops contribute identically to every candidate.
          continue;
        }
        const PartitionID c = community[arc.head];
        if (weight_to[c] == 0.0) {
          touched.push_back(c);
        }
        weight_to[c] += arc.weight;
      }

      // Remove u from its community, then find the best insertion.
      tot[own] -= k_u;
      PartitionID best = own;
      double best_score = weight_to[own] - k_u * tot[own] / two_m;
      for (const PartitionID c : touched) {
        const double score = weight_to[c] - k_u * tot[c] / two_m;
        if (score > best_score || (score == best_score && c < best)) {
          best_score = score;
          best = c;
        }
      }
      if (best != own) {
        const double gain = (best_score - (weight_to[own] - k_u * tot[own] / two_m)) / m;
        phase_gain += gain;
        community[u] = best;
        moved = true;
        any_move = true;
      }
      tot[community[u]] += k_u;

      for (const PartitionID c : touched) {
        weight_to[c] = 0.0;
      }
      weight_to[own] = 0.0;
    }
    if (!moved || phase_gain < min_gain) {
      break;
    }
  }
  return any_move;
}

inline LouvainGraph aggregate(const LouvainGraph& graph, const std::vector<PartitionID>& community,
                              const PartitionID num_communities) {
  LouvainGraph coarse;
  coarse.adjacency.resize(num_communities);
  std::vector<double> accumulated(num_communities, 0.0);
  std::vector<PartitionID> touched;
  for (PartitionID c = 0; c < num_communities; ++c) {
    coarse.adjacency[c].clear();
  }
  // Accumulate per source community to keep memory linear.
  std::vector<std::vector<uint32_t>> members(num_communities);
  for (uint32_t u = 0; u < graph.numNodes(); ++u) {
    members[community[u]].push_back(u);
  }
  for (PartitionID c = 0; c < num_communities; ++c) {
    touched.clear();
    double loop = 0.0;
    for (const uint32_t u : members[c]) {
      for (const auto& arc : graph.adjacency[u]) {
        const PartitionID d = community[arc.head];
        if (d == c) {
          loop += arc.weight;  // ordered pairs inside c, loops included once
        } else {
          if (accumulated[d] == 0.0) {
            touched.push_back(d);
          }
          accumulated[d] += arc.weight;
        }
      }
    }
    if (loop != 0.0) {
      coarse.adjacency[c].push_back({ static_cast<uint32_t>(c), loop });
    }
    for (const PartitionID d : touched) {
      coarse.adjacency[c].push_back({ static_cast<uint32_t>(d), accumulated[d] });
      accumulated[d] = 0.0;
    }
  }
  return coarse;
}

inline PartitionID renumber(std::vector<PartitionID>& community) {
  std::vector<PartitionID> remap(community.size(), kInvalidPartition);
  PartitionID next = 0;
  for (PartitionID& c : community) {
    if (remap[c] == kInvalidPartition) {
      remap[c] = next++;
    }
    c = remap[c];
  }
  return next;
}

}  // namespace internal

// Louvain heuristic: local moving phases followed by graph aggregation,
// repeated until no node moves. Never decreases modularity.
inline std::vector<PartitionID> louvain(const LouvainGraph& graph,
                                        const uint32_t max_iterations,
                                        const double min_gain,
                                        Randomize& rng) {
  std::vector<PartitionID> community(graph.numNodes());
  std::iota(community.begin(), community.end(), 0);

  LouvainGraph current = graph;
  std::vector<PartitionID> current_community;
  while (true) {
    current_community.resize(current.numNodes());
    std::iota(current_community.begin(), current_community.end(), 0);
    const bool moved = internal::localMovingPhase(current, current_community,
                                                  max_iterations, min_gain, rng);
    if (!moved) {
      break;
    }
    const PartitionID num_communities = internal::renumber(current_community);
    for (PartitionID& c : community) {
      c = current_community[c];
    }
    if (static_cast<uint32_t>(num_communities) == current.numNodes()) {
      break;
    }
    current = internal::aggregate(current, current_community, num_communities);
  }
  internal::renumber(community);
  return community;
}

// Bipartite representation of the hypergraph: vertices first, then nets.
// Edge weights are constant for dense instances (density >= threshold)
// and d(v)/|e| otherwise, which lets small nets shape the communities.
inline LouvainGraph buildBipartiteGraph(const ds::Hypergraph& hg,
                                        const double density_threshold,
                                        std::vector<VertexID>& vertex_of_node) {
  std::vector<uint32_t> node_of_vertex(hg.initialNumVertices());
  vertex_of_node.clear();
  hg.forVertices([&](const VertexID v) {
    node_of_vertex[v] = static_cast<uint32_t>(vertex_of_node.size());
    vertex_of_node.push_back(v);
  });
  const uint32_t num_vertex_nodes = static_cast<uint32_t>(vertex_of_node.size());

  std::vector<uint32_t> node_of_net(hg.initialNumNets());
  uint32_t num_net_nodes = 0;
  hg.forNets([&](const NetID e) { node_of_net[e] = num_vertex_nodes + num_net_nodes++; });

  const double density = static_cast<double>(hg.currentNumNets()) /
                         static_cast<double>(std::max<VertexID>(hg.currentNumVertices(), 1));
  const bool constant_weights = density >= density_threshold;

  LouvainGraph graph;
  graph.adjacency.resize(num_vertex_nodes + num_net_nodes);
  hg.forNets([&](const NetID e) {
    for (const VertexID pin : hg.pins(e)) {
      const double weight = constant_weights
          ? 1.0
          : static_cast<double>(hg.vertexDegree(pin)) / static_cast<double>(hg.netSize(e));
      graph.addEdge(node_of_vertex[pin], node_of_net[e], weight);
    }
  });
  return graph;
}

}  // namespace community

// Runs Louvain on the weighted bipartite representation and keeps the
// communities of the vertex side only.
inline CommunityAssignment detectCommunities(const ds::Hypergraph& hg,
                                             const Context::Preprocessing& cfg,
                                             Randomize& rng) {
  CommunityAssignment result;
  result.community.assign(hg.initialNumVertices(), kInvalidPartition);
  if (hg.currentNumVertices() == 0) {
    return result;
  }
  std::vector<VertexID> vertex_of_node;
  const community::LouvainGraph graph =
      community::buildBipartiteGraph(hg, cfg.community_density_threshold, vertex_of_node);
  const std::vector<PartitionID> node_community =
      community::louvain(graph, cfg.community_max_iterations, cfg.community_min_gain, rng);

  // Restrict to the vertex side and renumber densely.
  std::vector<PartitionID> remap(graph.numNodes(), kInvalidPartition);
  PartitionID next = 0;
  for (uint32_t node = 0; node < vertex_of_node.size(); ++node) {
    const PartitionID c = node_community[node];
    if (remap[c] == kInvalidPartition) {
      remap[c] = next++;
    }
    result.community[vertex_of_node[node]] = remap[c];
  }
  result.num_communities = next;
  return result;
}

// Single community for every vertex; used when community detection is off.
inline CommunityAssignment singleCommunity(const ds::Hypergraph& hg) {
  CommunityAssignment result;
  result.community.assign(hg.initialNumVertices(), 0);
  result.num_communities = 1;
  return result;
}

}  // namespace hypar
