#pragma once

#include <algorithm>
#include <array>
#include <limits>
#include <queue>
#include <vector>

#include "hypar/datastructure/fast_reset_flag_array.hpp"
#include "hypar/datastructure/hypergraph.hpp"
#include "hypar/definitions.hpp"
#include "hypar/partition/partition.hpp"

namespace hypar {

// Flow instance over the corridor around the cut of one block pair.
// Vertex 0 is the source terminal (the contracted remainder of the first
// block), vertex 1 the sink terminal; movable corridor vertices follow.
struct FlowProblem {
  static constexpr uint32_t kSource = 0;
  static constexpr uint32_t kSink = 1;

  std::vector<VertexID> to_parent;  // kInvalidVertex for the two terminals
  std::vector<Weight> vertex_weight;
  std::vector<std::vector<uint32_t>> net_pins;
  std::vector<Weight> net_capacity;

  uint32_t numVertices() const { return static_cast<uint32_t>(vertex_weight.size()); }
  uint32_t numNets() const { return static_cast<uint32_t>(net_pins.size()); }

  size_t numPins() const {
    size_t pins = 0;
    for (const auto& net : net_pins) {
      pins += net.size();
    }
    return pins;
  }

  bool empty() const { return numVertices() <= 2 || net_pins.empty(); }

  Weight totalWeight() const {
    Weight total = 0;
    for (const Weight w : vertex_weight) {
      total += w;
    }
    return total;
  }

  // Capacity of the nets cut by the given side assignment (0/1 per flow
  // vertex); the baseline a refinement has to beat.
  Weight cutCapacity(const std::vector<uint8_t>& side) const {
    Weight cut = 0;
    for (uint32_t e = 0; e < numNets(); ++e) {
      bool has0 = false;
      bool has1 = false;
      for (const uint32_t pin : net_pins[e]) {
        has0 = has0 || side[pin] == 0;
        has1 = has1 || side[pin] == 1;
      }
      if (has0 && has1) {
        cut += net_capacity[e];
      }
    }
    return cut;
  }
};

class CorridorExtractor {
 public:
  // Grows one BFS per block from the pair's border vertices, confined to
  // the block, until the side weight bound is hit; the remainders become
  // the terminals. Nets keep their weight as capacity; for the cut-net
  // metric, nets with pins in other blocks cannot leave the cut and are
  // omitted.
  static FlowProblem extract(const ds::Hypergraph& hg, const Partition& partition,
                             const PartitionID block0, const PartitionID block1,
                             const Objective objective,
                             const Weight side_bound0, const Weight side_bound1) {
    std::array<std::vector<VertexID>, 2> corridor;
    collectSide(hg, partition, block0, block1, side_bound0, corridor[0]);
    collectSide(hg, partition, block1, block0, side_bound1, corridor[1]);
    // A terminal without pins cannot anchor the flow; if a whole block
    // was swallowed, its most distant corridor vertex stays outside as
    // the required terminal pin.
    for (int side = 0; side < 2; ++side) {
      const PartitionID block = side == 0 ? block0 : block1;
      Weight collected = 0;
      for (const VertexID v : corridor[side]) {
        collected += hg.vertexWeight(v);
      }
      if (!corridor[side].empty() && collected == partition.blockWeight(block)) {
        corridor[side].pop_back();
      }
    }

    FlowProblem problem;
    problem.to_parent = { kInvalidVertex, kInvalidVertex };
    problem.vertex_weight = { 0, 0 };
    std::vector<uint32_t> flow_id(hg.initialNumVertices(), kNotInCorridor);
    std::array<Weight, 2> corridor_weight = { 0, 0 };
    for (int side = 0; side < 2; ++side) {
      for (const VertexID v : corridor[side]) {
        flow_id[v] = problem.numVertices();
        problem.to_parent.push_back(v);
        problem.vertex_weight.push_back(hg.vertexWeight(v));
        corridor_weight[side] += hg.vertexWeight(v);
      }
    }
    if (problem.numVertices() <= 2) {
      return FlowProblem{};
    }
    problem.vertex_weight[FlowProblem::kSource] =
        partition.blockWeight(block0) - corridor_weight[0];
    problem.vertex_weight[FlowProblem::kSink] =
        partition.blockWeight(block1) - corridor_weight[1];

    // Collect the nets touching the corridor exactly once.
    ds::FastResetFlagArray seen(hg.initialNumNets());
    seen.reset();
    std::vector<uint32_t> pins;
    for (uint32_t flow_vertex = 2; flow_vertex < problem.numVertices(); ++flow_vertex) {
      const VertexID v = problem.to_parent[flow_vertex];
      for (const NetID e : hg.incidentNets(v)) {
        if (seen[e]) {
          continue;
        }
        seen.set(e);
        pins.clear();
        bool skip = false;
        bool has_source = false;
        bool has_sink = false;
        for (const VertexID pin : hg.pins(e)) {
          const PartitionID block = partition.blockOf(pin);
          if (flow_id[pin] != kNotInCorridor) {
            pins.push_back(flow_id[pin]);
          } else if (block == block0) {
            has_source = true;
          } else if (block == block1) {
            has_sink = true;
          } else if (objective == Objective::cut) {
            // A net reaching other blocks stays in the cut regardless.
            skip = true;
            break;
          }
        }
        if (skip) {
          continue;
        }
        if (has_source) {
          pins.push_back(FlowProblem::kSource);
        }
        if (has_sink) {
          pins.push_back(FlowProblem::kSink);
        }
        if (pins.size() >= 2) {
          problem.net_pins.push_back(pins);
          problem.net_capacity.push_back(hg.netWeight(e));
        }
      }
    }
    if (problem.net_pins.empty()) {
      return FlowProblem{};
    }
    return problem;
  }

  // Side assignment of the current partition within the flow problem.
  static std::vector<uint8_t> currentSides(const FlowProblem& problem,
                                           const Partition& partition,
                                           const PartitionID block0) {
    std::vector<uint8_t> side(problem.numVertices(), 1);
    side[FlowProblem::kSource] = 0;
    for (uint32_t v = 2; v < problem.numVertices(); ++v) {
      side[v] = partition.blockOf(problem.to_parent[v]) == block0 ? 0 : 1;
    }
    return side;
  }

 private:
  static constexpr uint32_t kNotInCorridor = std::numeric_limits<uint32_t>::max();

  // BFS from the pair border confined to the block, in visit order,
  // until the weight bound would be exceeded.
  static void collectSide(const ds::Hypergraph& hg, const Partition& partition,
                          const PartitionID own_block, const PartitionID other_block,
                          const Weight bound, std::vector<VertexID>& corridor) {
    std::queue<VertexID> queue;
    std::vector<uint8_t> enqueued(hg.initialNumVertices(), 0);
    hg.forVertices([&](const VertexID v) {
      if (partition.blockOf(v) == own_block && partition.vertexBlockCount(v, other_block) > 0) {
        queue.push(v);
        enqueued[v] = 1;
      }
    });
    Weight collected_weight = 0;
    while (!queue.empty()) {
      const VertexID v = queue.front();
      queue.pop();
      if (collected_weight + hg.vertexWeight(v) > bound) {
        return;  // weight constraint reached, corridor side complete
      }
      collected_weight += hg.vertexWeight(v);
      corridor.push_back(v);
      for (const NetID e : hg.incidentNets(v)) {
        for (const VertexID pin : hg.pins(e)) {
          if (!enqueued[pin] && partition.blockOf(pin) == own_block) {
            enqueued[pin] = 1;
            queue.push(pin);
          }
        }
      }
    }
  }
};

}  // namespace hypar
