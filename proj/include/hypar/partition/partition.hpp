#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "hypar/datastructure/hypergraph.hpp"
#include "hypar/definitions.hpp"

namespace hypar {

// k-way partition state with incrementally maintained block weights,
// per-net pin counts Φ(e,V_i), connectivity sets Λ(e), per-vertex block
// adjacency and cut-net counts, and quotient-graph pair counts.
// Vertices may be unassigned during initial partitioning growth.
class Partition {
 public:
  struct MoveDelta {
    Weight cut_delta = 0;
    Weight km1_delta = 0;
  };

  Partition(const ds::Hypergraph& hg, const PartitionID k,
            const double epsilon,
            std::vector<Weight> max_block_weights = {})
    : _hg(&hg),
      _k(k),
      _epsilon(epsilon),
      _block(hg.initialNumVertices(), kInvalidPartition),
      _block_weight(k, 0),
      _pin_count(hg.initialNumNets()),
      _vertex_block_count(static_cast<size_t>(hg.initialNumVertices()) * k, 0),
      _incident_cut_nets(hg.initialNumVertices(), 0),
      _pair_count(static_cast<size_t>(k) * k, 0),
      _max_block_weight(std::move(max_block_weights)) {
    HYPAR_ASSERT(k >= 1);
    if (_max_block_weight.empty()) {
      const Weight lmax = defaultMaxBlockWeight(hg.totalWeight(), k, epsilon);
      _max_block_weight.assign(k, lmax);
    }
    HYPAR_ASSERT(static_cast<PartitionID>(_max_block_weight.size()) == k);
  }

  static Weight defaultMaxBlockWeight(const Weight total, const PartitionID k,
                                      const double epsilon) {
    const Weight ceil_avg = (total + k - 1) / k;
    return static_cast<Weight>((1.0 + epsilon) * static_cast<double>(ceil_avg));
  }

  const ds::Hypergraph& hypergraph() const { return *_hg; }
  PartitionID k() const { return _k; }
  double epsilon() const { return _epsilon; }
  Weight maxBlockWeight(const PartitionID i) const { return _max_block_weight[i]; }
  const std::vector<Weight>& maxBlockWeights() const { return _max_block_weight; }

  PartitionID blockOf(const VertexID v) const { return _block[v]; }
  Weight blockWeight(const PartitionID i) const { return _block_weight[i]; }

  bool allAssigned() const {
    bool ok = true;
    _hg->forVertices([&](const VertexID v) { ok = ok && _block[v] != kInvalidPartition; });
    return ok;
  }

  // Assigns an unassigned vertex (initial partitioning growth).
  void assign(const VertexID v, const PartitionID b) {
    HYPAR_ASSERT(_block[v] == kInvalidPartition);
    checkBlock(b);
    _block[v] = b;
    _block_weight[b] += _hg->vertexWeight(v);
    for (const NetID e : _hg->incidentNets(v)) {
      incrementPinCount(e, b);
    }
  }

  // Reverts an assignment (label-propagation style growth algorithms
  // re-evaluate vertices).
  void unassign(const VertexID v) {
    const PartitionID b = _block[v];
    HYPAR_ASSERT(b != kInvalidPartition);
    _block[v] = kInvalidPartition;
    _block_weight[b] -= _hg->vertexWeight(v);
    for (const NetID e : _hg->incidentNets(v)) {
      decrementPinCount(e, b);
    }
  }

  // Moves an assigned vertex to another block and reports the net-level
  // pin-count transitions to the visitor as
  //   on_net(e, phi_from_after, phi_to_after).
  template <typename F>
  MoveDelta applyMove(const VertexID v, const PartitionID to, F&& on_net) {
    const PartitionID from = _block[v];
    if (from == kInvalidPartition || from == to) {
      throw PreconditionError("applyMove: vertex not assigned to a different block");
    }
    checkBlock(to);
    MoveDelta delta;
    _block[v] = to;
    _block_weight[from] -= _hg->vertexWeight(v);
    _block_weight[to] += _hg->vertexWeight(v);
    for (const NetID e : _hg->incidentNets(v)) {
      const Weight w = _hg->netWeight(e);
      const PartitionID lambda_before = connectivity(e);
      decrementPinCount(e, from);
      incrementPinCount(e, to);
      const PartitionID lambda_after = connectivity(e);
      delta.km1_delta += w * (lambda_after - lambda_before);
      delta.cut_delta += w * ((lambda_after > 1 ? 1 : 0) - (lambda_before > 1 ? 1 : 0));
      on_net(e, pinCountInBlock(e, from), pinCountInBlock(e, to));
    }
    return delta;
  }

  MoveDelta applyMove(const VertexID v, const PartitionID to) {
    return applyMove(v, to, [](NetID, uint32_t, uint32_t) { });
  }

  uint32_t pinCountInBlock(const NetID e, const PartitionID i) const {
    for (const auto& [block, count] : _pin_count[e]) {
      if (block == i) {
        return count;
      }
    }
    return 0;
  }

  PartitionID connectivity(const NetID e) const {
    return static_cast<PartitionID>(_pin_count[e].size());
  }

  // Sorted sequence of (block, pin count) pairs of a net.
  const std::vector<std::pair<PartitionID, uint32_t>>& connectivitySet(const NetID e) const {
    return _pin_count[e];
  }

  bool isCut(const NetID e) const { return connectivity(e) > 1; }

  bool isBorder(const VertexID v) const { return _incident_cut_nets[v] > 0; }
  uint32_t numIncidentCutNets(const VertexID v) const { return _incident_cut_nets[v]; }

  // Number of nets of v that connect it to block i.
  uint32_t vertexBlockCount(const VertexID v, const PartitionID i) const {
    return _vertex_block_count[static_cast<size_t>(v) * _k + i];
  }

  // Blocks adjacent to v, excluding its own block.
  std::vector<PartitionID> adjacentBlocks(const VertexID v) const {
    std::vector<PartitionID> result;
    for (PartitionID i = 0; i < _k; ++i) {
      if (i != _block[v] && vertexBlockCount(v, i) > 0) {
        result.push_back(i);
      }
    }
    return result;
  }

  // Quotient graph edges: all block pairs sharing at least one net.
  std::vector<std::pair<PartitionID, PartitionID>> quotientGraphEdges() const {
    std::vector<std::pair<PartitionID, PartitionID>> edges;
    for (PartitionID i = 0; i < _k; ++i) {
      for (PartitionID j = i + 1; j < _k; ++j) {
        if (_pair_count[static_cast<size_t>(i) * _k + j] > 0) {
          edges.emplace_back(i, j);
        }
      }
    }
    return edges;
  }

  Weight cutNet() const {
    requireAssigned();
    return _cut_total;
  }

  Weight connectivityMetric() const {
    requireAssigned();
    return _km1_total;
  }

  Weight objective(const Objective o) const {
    return o == Objective::cut ? cutNet() : connectivityMetric();
  }

  // max_i c(V_i) / ceil(c(V)/k) − 1.
  double imbalance() const {
    const Weight total = _hg->totalWeight();
    const Weight ceil_avg = (total + _k - 1) / _k;
    Weight max_weight = 0;
    for (PartitionID i = 0; i < _k; ++i) {
      max_weight = std::max(max_weight, _block_weight[i]);
    }
    return static_cast<double>(max_weight) / static_cast<double>(ceil_avg) - 1.0;
  }

  bool hasEmptyBlock() const {
    return std::any_of(_block_weight.begin(), _block_weight.end(),
                       [](const Weight w) { return w == 0; });
  }

  // Feasible iff every block is within its weight cap and non-empty.
  bool isFeasible() const {
    for (PartitionID i = 0; i < _k; ++i) {
      if (_block_weight[i] > _max_block_weight[i]) {
        return false;
      }
    }
    return !hasEmptyBlock();
  }

  bool isBalanced() const {
    for (PartitionID i = 0; i < _k; ++i) {
      if (_block_weight[i] > _max_block_weight[i]) {
        return false;
      }
    }
    return true;
  }

  std::vector<PartitionID> exportBlocks() const { return _block; }

  // --- hooks keeping the state in sync with hypergraph mutations ---

  // Call right after hg.uncontract(m, effects). v joins u's block.
  void onUncontract(const ds::Memento& m, const ds::Hypergraph::UncontractionEffects& effects) {
    const PartitionID b = _block[m.u];
    HYPAR_ASSERT(b != kInvalidPartition);
    _block[m.v] = b;
    for (const NetID e : effects.restored_pin_nets) {
      // u stays a pin, so Λ(e) cannot change; only the count grows.
      bumpPinCount(e, b);
      for (const auto& [block, count] : _pin_count[e]) {
        vertexBlockCountRef(m.v, block) += 1;
      }
      if (isCut(e)) {
        _incident_cut_nets[m.v] += 1;
      }
    }
    for (const NetID e : effects.relinked_nets) {
      // The pin slot switched from u back to v within the same block.
      for (const auto& [block, count] : _pin_count[e]) {
        vertexBlockCountRef(m.u, block) -= 1;
        vertexBlockCountRef(m.v, block) += 1;
      }
      if (isCut(e)) {
        _incident_cut_nets[m.u] -= 1;
        _incident_cut_nets[m.v] += 1;
      }
    }
  }

  // Call right after hg.restoreNet(e) during uncoarsening.
  void onRestoreNet(const NetID e) {
    HYPAR_ASSERT(_pin_count[e].empty());
    for (const VertexID pin : _hg->pins(e)) {
      incrementPinCount(e, _block[pin]);
    }
  }

  // Call when a net's weight changes while it is part of the partition
  // (un-merging parallel nets restores the survivor's own weight).
  void onNetWeightChange(const NetID e, const Weight old_weight, const Weight new_weight) {
    const PartitionID lambda = connectivity(e);
    if (lambda > 1) {
      _cut_total += new_weight - old_weight;
      _km1_total += static_cast<Weight>(lambda - 1) * (new_weight - old_weight);
    }
  }

  bool isConsistent() const {
    Partition fresh(*_hg, _k, _epsilon, _max_block_weight);
    _hg->forVertices([&](const VertexID v) {
      if (_block[v] != kInvalidPartition) {
        fresh.assign(v, _block[v]);
      }
    });
    if (fresh._block_weight != _block_weight ||
        fresh._cut_total != _cut_total ||
        fresh._km1_total != _km1_total ||
        fresh._incident_cut_nets != _incident_cut_nets ||
        fresh._vertex_block_count != _vertex_block_count ||
        fresh._pair_count != _pair_count) {
      return false;
    }
    bool nets_match = true;
    _hg->forNets([&](const NetID e) {
      nets_match = nets_match && fresh._pin_count[e] == _pin_count[e];
    });
    return nets_match;
  }

 private:
  void checkBlock(const PartitionID b) const {
    if (b < 0 || b >= _k) {
      throw PreconditionError("block id out of range");
    }
  }

  void requireAssigned() const {
    if (!allAssigned()) {
      throw PreconditionError("operation requires a complete assignment");
    }
  }

  uint32_t& vertexBlockCountRef(const VertexID v, const PartitionID i) {
    return _vertex_block_count[static_cast<size_t>(v) * _k + i];
  }

  uint32_t& pairCountRef(const PartitionID i, const PartitionID j) {
    return _pair_count[static_cast<size_t>(std::min(i, j)) * _k + std::max(i, j)];
  }

  void bumpPinCount(const NetID e, const PartitionID b) {
    for (auto& [block, count] : _pin_count[e]) {
      if (block == b) {
        ++count;
        return;
      }
    }
    HYPAR_ASSERT(false);
  }

  void incrementPinCount(const NetID e, const PartitionID b) {
    auto& sets = _pin_count[e];
    auto it = std::lower_bound(sets.begin(), sets.end(), b,
                               [](const auto& entry, const PartitionID key) {
                                 return entry.first < key;
                               });
    if (it != sets.end() && it->first == b) {
      ++it->second;
      return;
    }
    // Block b enters Λ(e).
    const Weight w = _hg->netWeight(e);
    const PartitionID lambda_before = connectivity(e);
    for (const auto& [block, count] : sets) {
      pairCountRef(block, b) += 1;
    }
    sets.insert(it, { b, 1 });
    for (const VertexID pin : _hg->pins(e)) {
      vertexBlockCountRef(pin, b) += 1;
    }
    if (lambda_before == 1) {
      // Net became cut.
      _cut_total += w;
      for (const VertexID pin : _hg->pins(e)) {
        _incident_cut_nets[pin] += 1;
      }
    }
    if (lambda_before >= 1) {
      _km1_total += w;
    }
  }

  void decrementPinCount(const NetID e, const PartitionID b) {
    auto& sets = _pin_count[e];
    auto it = std::lower_bound(sets.begin(), sets.end(), b,
                               [](const auto& entry, const PartitionID key) {
                                 return entry.first < key;
                               });
    HYPAR_ASSERT(it != sets.end() && it->first == b);
    if (it->second > 1) {
      --it->second;
      return;
    }
    // Block b leaves Λ(e).
    const Weight w = _hg->netWeight(e);
    sets.erase(it);
    for (const auto& [block, count] : sets) {
      pairCountRef(block, b) -= 1;
    }
    for (const VertexID pin : _hg->pins(e)) {
      vertexBlockCountRef(pin, b) -= 1;
    }
    const PartitionID lambda_after = connectivity(e);
    if (lambda_after == 1) {
      // Net became internal.
      _cut_total -= w;
      for (const VertexID pin : _hg->pins(e)) {
        _incident_cut_nets[pin] -= 1;
      }
    }
    if (lambda_after >= 1) {
      _km1_total -= w;
    }
  }

  const ds::Hypergraph* _hg;
  PartitionID _k;
  double _epsilon;
  std::vector<PartitionID> _block;
  std::vector<Weight> _block_weight;
  // Per net: sorted (block, pin count) pairs, i.e. Λ(e) with Φ(e, ·).
  std::vector<std::vector<std::pair<PartitionID, uint32_t>>> _pin_count;
  std::vector<uint32_t> _vertex_block_count;
  std::vector<uint32_t> _incident_cut_nets;
  std::vector<uint32_t> _pair_count;
  std::vector<Weight> _max_block_weight;
  Weight _cut_total = 0;
  Weight _km1_total = 0;
};

namespace metrics {

// Objective recomputation from raw pin lists; the independent recount
// counterpart to the incrementally maintained totals.
inline Weight cutNetFromScratch(const ds::Hypergraph& hg, const std::vector<PartitionID>& block) {
  Weight total = 0;
  hg.forNets([&](const NetID e) {
    const auto pins = hg.pins(e);
    for (const VertexID pin : pins) {
      if (block[pin] != block[pins.front()]) {
        total += hg.netWeight(e);
        break;
      }
    }
  });
  return total;
}

inline Weight connectivityFromScratch(const ds::Hypergraph& hg, const std::vector<PartitionID>& block) {
  Weight total = 0;
  std::vector<PartitionID> seen;
  hg.forNets([&](const NetID e) {
    seen.clear();
    for (const VertexID pin : hg.pins(e)) {
      if (std::find(seen.begin(), seen.end(), block[pin]) == seen.end()) {
        seen.push_back(block[pin]);
      }
    }
    total += hg.netWeight(e) * static_cast<Weight>(seen.size() - 1);
  });
  return total;
}

}  // namespace metrics
}  // namespace hypar
