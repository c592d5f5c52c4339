#pragma once

#include <array>
#include <utility>
#include <vector>

#include "hypar/datastructure/hypergraph.hpp"
#include "hypar/definitions.hpp"

namespace hypar::ds {

struct SubHypergraph {
  Hypergraph hypergraph;
  // Maps sub-hypergraph vertex ids back to ids of the parent hypergraph.
  std::vector<VertexID> to_parent;
};

enum class CutNetPolicy : uint8_t {
  remove,  // section hypergraphs: cut nets are omitted entirely
  split    // subhypergraphs: each cut net e is replaced by e ∩ V_i
};

// Builds the two sub-instances induced by a bipartition for the recursive
// step. Cut-net removal keeps only nets fully inside one side; cut-net
// splitting keeps e ∩ V_i per side, discarding single-pin fragments.
inline std::pair<SubHypergraph, SubHypergraph> restrictedViews(
    const Hypergraph& hg,
    const std::vector<PartitionID>& block,
    const CutNetPolicy policy) {
  std::array<std::vector<VertexID>, 2> to_parent;
  std::vector<VertexID> to_sub(hg.initialNumVertices(), kInvalidVertex);
  hg.forVertices([&](const VertexID v) {
    const PartitionID b = block[v];
    if (b != 0 && b != 1) {
      throw PreconditionError("restrictedViews: input is not a bipartition");
    }
    to_sub[v] = static_cast<VertexID>(to_parent[b].size());
    to_parent[b].push_back(v);
  });

  std::array<std::vector<std::vector<VertexID>>, 2> net_pins;
  std::array<std::vector<Weight>, 2> net_weights;
  hg.forNets([&](const NetID e) {
    std::array<std::vector<VertexID>, 2> fragment;
    for (const VertexID pin : hg.pins(e)) {
      fragment[block[pin]].push_back(to_sub[pin]);
    }
    const bool is_cut = !fragment[0].empty() && !fragment[1].empty();
    if (is_cut && policy == CutNetPolicy::remove) {
      return;
    }
    for (int side = 0; side < 2; ++side) {
      // Single-pin fragments can never be cut again and are discarded.
      if (fragment[side].size() >= 2) {
        net_pins[side].push_back(std::move(fragment[side]));
        net_weights[side].push_back(hg.netWeight(e));
      }
    }
  });

  std::array<std::vector<Weight>, 2> vertex_weights;
  for (int side = 0; side < 2; ++side) {
    vertex_weights[side].reserve(to_parent[side].size());
    for (const VertexID v : to_parent[side]) {
      vertex_weights[side].push_back(hg.vertexWeight(v));
    }
  }

  SubHypergraph first{ Hypergraph(static_cast<VertexID>(to_parent[0].size()),
                                  net_pins[0], vertex_weights[0], net_weights[0]),
                       std::move(to_parent[0]) };
  SubHypergraph second{ Hypergraph(static_cast<VertexID>(to_parent[1].size()),
                                   net_pins[1], vertex_weights[1], net_weights[1]),
                        std::move(to_parent[1]) };
  return { std::move(first), std::move(second) };
}

// Compacts a hypergraph with disabled vertices/nets into a fresh instance
// with dense ids. Used to hand coarse instances to sub-pipelines.
inline SubHypergraph compactCopy(const Hypergraph& hg) {
  std::vector<VertexID> to_parent;
  std::vector<VertexID> to_sub(hg.initialNumVertices(), kInvalidVertex);
  hg.forVertices([&](const VertexID v) {
    to_sub[v] = static_cast<VertexID>(to_parent.size());
    to_parent.push_back(v);
  });
  std::vector<std::vector<VertexID>> net_pins;
  std::vector<Weight> net_weights;
  std::vector<Weight> vertex_weights;
  vertex_weights.reserve(to_parent.size());
  for (const VertexID v : to_parent) {
    vertex_weights.push_back(hg.vertexWeight(v));
  }
  hg.forNets([&](const NetID e) {
    std::vector<VertexID> pins;
    pins.reserve(hg.netSize(e));
    for (const VertexID pin : hg.pins(e)) {
      pins.push_back(to_sub[pin]);
    }
    net_pins.push_back(std::move(pins));
    net_weights.push_back(hg.netWeight(e));
  });
  return SubHypergraph{ Hypergraph(static_cast<VertexID>(to_parent.size()),
                                   net_pins, vertex_weights, net_weights),
                        std::move(to_parent) };
}

}  // namespace hypar::ds
