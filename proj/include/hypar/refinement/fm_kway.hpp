#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "hypar/datastructure/addressable_pq.hpp"
#include "hypar/datastructure/fast_reset_flag_array.hpp"
#include "hypar/datastructure/hypergraph.hpp"
#include "hypar/definitions.hpp"
#include "hypar/partition/context.hpp"
#include "hypar/partition/partition.hpp"
#include "hypar/refinement/gain_cache.hpp"
#include "hypar/refinement/stopping_rule.hpp"

namespace hypar {

inline Gain computeGainK(const ds::Hypergraph& hg, const Partition& partition,
                         const VertexID v, const PartitionID to, const Objective objective) {
  const PartitionID own = partition.blockOf(v);
  Gain gain = 0;
  for (const NetID e : hg.incidentNets(v)) {
    const Weight w = hg.netWeight(e);
    if (objective == Objective::km1) {
      if (partition.pinCountInBlock(e, own) == 1) {
        gain += w;
      }
      if (partition.pinCountInBlock(e, to) == 0) {
        gain -= w;
      }
    } else {
      const uint32_t size = static_cast<uint32_t>(hg.netSize(e));
      if (partition.pinCountInBlock(e, to) == size - 1) {
        gain += w;
      }
      if (partition.pinCountInBlock(e, own) == size) {
        gain -= w;
      }
    }
  }
  return gain;
}

// Localized k-way FM with one priority queue per block. Moves go to
// adjacent blocks only; a queue is enabled while it is non-empty and its
// block is not overloaded. After moving a vertex, its target block can
// no longer leave the connectivity set of its nets this pass; once both
// endpoints of a move are unremovable for a net, the net is excluded
// from delta-gain updates except for the two crossings that can still
// touch the cache rows of marked pins.
class KWayFM {
 public:
  KWayFM(const ds::Hypergraph& hg, Partition& partition, const Objective objective,
         const StoppingRule rule, const uint32_t simple_limit)
    : _hg(&hg),
      _partition(&partition),
      _objective(objective),
      _k(partition.k()),
      _cache(hg.initialNumVertices(), partition.k()),
      _stopping(rule, simple_limit),
      _pq(partition.k()),
      _active(hg.initialNumVertices()),
      _marked(hg.initialNumVertices()),
      _unremovable_stamp(static_cast<size_t>(hg.initialNumNets()) * partition.k(), 0),
      _unremovable_epoch(1) {
    for (auto& pq : _pq) {
      pq.setUniverseSize(hg.initialNumVertices());
    }
  }

  // The uncontraction can change the gains of the pair only; both rows
  // are recomputed lazily on activation.
  bool refineAfterUncontraction(const VertexID u, const VertexID v) {
    _cache.invalidateRow(u);
    _cache.invalidateRow(v);
    const std::array<VertexID, 2> seeds = { u, v };
    return refine(seeds);
  }

  bool refineFullBoundary() {
    std::vector<VertexID> seeds;
    _hg->forVertices([&](const VertexID v) {
      if (_partition->isBorder(v)) {
        seeds.push_back(v);
      }
    });
    return refine(seeds);
  }

  template <typename SeedRange>
  bool refine(const SeedRange& seeds) {
    bool improved_any = false;
    while (runPass(seeds)) {
      improved_any = true;
    }
    return improved_any;
  }

  const GainCacheK& cache() const { return _cache; }
  bool isActive(const VertexID v) const { return _active[v]; }
  bool pqContains(const VertexID v, const PartitionID j) const { return _pq[j].contains(v); }
  Gain pqKey(const VertexID v, const PartitionID j) const { return _pq[j].key(v); }

  // Invoked after the updates of every executed move; lets debug builds
  // audit queues and cache entries against from-scratch recomputation.
  void setAuditor(std::function<void()> auditor) { _auditor = std::move(auditor); }

 private:
  struct MoveRecord {
    VertexID v;
    PartitionID from;
    size_t cache_watermark;
  };

  struct NetTransition {
    NetID e;
    uint32_t phi_from_after;
    uint32_t phi_to_after;
  };

  struct StateQuality {
    bool feasible;
    Weight objective;
    Weight max_block_weight;

    bool betterThan(const StateQuality& other) const {
      if (feasible != other.feasible) {
        return feasible;
      }
      return objective < other.objective ||
             (objective == other.objective && max_block_weight < other.max_block_weight);
    }
  };

  StateQuality currentQuality(const Weight objective) const {
    bool feasible = true;
    Weight max_weight = 0;
    for (PartitionID i = 0; i < _k; ++i) {
      feasible = feasible && _partition->blockWeight(i) <= _partition->maxBlockWeight(i);
      max_weight = std::max(max_weight, _partition->blockWeight(i));
    }
    return StateQuality{ feasible, objective, max_weight };
  }

  template <typename SeedRange>
  bool runPass(const SeedRange& seeds) {
    _active.reset();
    _marked.reset();
    for (auto& pq : _pq) {
      pq.clear();
    }
    ++_unremovable_epoch;
    _moves.clear();

    bool any_seed = false;
    for (const VertexID v : seeds) {
      if (!_marked[v] && _partition->isBorder(v)) {
        activate(v);
        any_seed = true;
      }
    }
    if (!any_seed) {
      return false;
    }

    Weight objective = _partition->objective(_objective);
    const StateQuality input_quality = currentQuality(objective);
    StateQuality best_quality = input_quality;
    size_t best_prefix = 0;

    _stopping.reset(_hg->currentNumVertices());

    while (true) {
      const auto [v, to] = selectMove();
      if (v == kInvalidVertex) {
        break;
      }
      const Gain gain = _pq[to].key(v);
      const PartitionID from = _partition->blockOf(v);

      _moves.push_back(MoveRecord{ v, from, _cache.logWatermark() });
      _marked.set(v);
      _active.unset(v);
      removeFromAllQueues(v);

      _transitions.clear();
      const auto delta = _partition->applyMove(v, to,
          [&](const NetID e, const uint32_t phi_from_after, const uint32_t phi_to_after) {
            _transitions.push_back({ e, phi_from_after, phi_to_after });
          });
      objective += _objective == Objective::km1 ? delta.km1_delta : delta.cut_delta;

      updateMovedVertexCache(v, gain, from, to);
      _pending_activations.clear();
      _pending_inserts.clear();
      for (const auto& transition : _transitions) {
        updateNet(v, from, to, transition);
      }
      // Fresh computations happen once per move, after all per-net
      // deltas, so they cannot be double-corrected.
      for (const auto& [pin, j] : _pending_inserts) {
        if (_cache.isCached(pin) && !_cache.contains(pin, j) &&
            j != _partition->blockOf(pin)) {
          const Gain value = computeGainK(*_hg, *_partition, pin, j, _objective);
          _cache.insert(pin, j, value, true);
          if (_active[pin] && !_marked[pin]) {
            _pq[j].insert(pin, value);
          }
        }
      }
      for (const VertexID pin : _pending_activations) {
        activate(pin);
      }
      for (const NetID e : _hg->incidentNets(v)) {
        markUnremovable(e, to);
      }
      if (_auditor) {
        _auditor();
      }

      _stopping.step(gain);
      const StateQuality quality = currentQuality(objective);
      if (quality.betterThan(best_quality)) {
        best_quality = quality;
        best_prefix = _moves.size();
        _stopping.improvementFound();
      }
      if (_stopping.shouldStop()) {
        break;
      }
    }

    rollbackTo(best_prefix);
    _cache.commitPass();
    return best_quality.betterThan(input_quality);
  }

  std::pair<VertexID, PartitionID> selectMove() const {
    VertexID best_vertex = kInvalidVertex;
    PartitionID best_block = kInvalidPartition;
    Gain best_gain = 0;
    for (PartitionID j = 0; j < _k; ++j) {
      if (_pq[j].empty() ||
          _partition->blockWeight(j) > _partition->maxBlockWeight(j)) {
        continue;  // overloaded targets stay disabled
      }
      const Gain key = _pq[j].topKey();
      if (best_vertex == kInvalidVertex || key > best_gain ||
          (key == best_gain &&
           _partition->blockWeight(j) < _partition->blockWeight(best_block))) {
        best_vertex = _pq[j].top();
        best_block = j;
        best_gain = key;
      }
    }
    return { best_vertex, best_block };
  }

  void removeFromAllQueues(const VertexID v) {
    for (uint32_t i = 0; i < _cache.rowSize(v); ++i) {
      const PartitionID j = _cache.blockAt(v, i);
      if (_pq[j].contains(v)) {
        _pq[j].remove(v);
      }
    }
  }

  void updateMovedVertexCache(const VertexID v, const Gain gain,
                              const PartitionID from, const PartitionID to) {
    _cache.remove(v, to, true);
    Gain own_delta = 0;
    for (const auto& [e, phi_from_after, phi_to_after] : _transitions) {
      const Weight w = _hg->netWeight(e);
      if (_objective == Objective::km1) {
        // The vertex's own-block term sits in the positive part of the
        // connectivity gain ...
        own_delta += (phi_to_after == 1 ? w : 0) - (phi_from_after == 0 ? w : 0);
      } else {
        // ... but in the negative part of the cut gain.
        const uint32_t size = static_cast<uint32_t>(_hg->netSize(e));
        own_delta += (phi_from_after == size - 1 ? w : 0) - (phi_to_after == size ? w : 0);
      }
    }
    if (own_delta != 0) {
      _cache.adjustAll(v, own_delta);
    }
    if (_partition->vertexBlockCount(v, from) > 0) {
      _cache.insert(v, from, -gain, true);
    }
  }

  bool isUnremovable(const NetID e, const PartitionID j) const {
    return _unremovable_stamp[static_cast<size_t>(e) * _k + j] == _unremovable_epoch;
  }

  void markUnremovable(const NetID e, const PartitionID j) {
    _unremovable_stamp[static_cast<size_t>(e) * _k + j] = _unremovable_epoch;
  }

  void updateNet(const VertexID v, const PartitionID from, const PartitionID to,
                 const NetTransition& transition) {
    const NetID e = transition.e;
    const Weight w = _hg->netWeight(e);
    const uint32_t phi_from = transition.phi_from_after;
    const uint32_t phi_to = transition.phi_to_after;
    const uint32_t size = static_cast<uint32_t>(_hg->netSize(e));

    if (isUnremovable(e, from) && isUnremovable(e, to)) {
      // Both endpoints stay connected for the rest of the pass; the only
      // gain terms that can still change belong to marked lone occupants.
      if (_objective == Objective::km1) {
        if (phi_to == 2) {
          forUniquePin(e, v, to, true, [&](const VertexID x) { _cache.adjustAll(x, -w); });
        }
        if (phi_from == 1) {
          forUniquePin(e, v, from, true, [&](const VertexID x) { _cache.adjustAll(x, w); });
        }
      } else {
        if (phi_to == size - 1) {
          forUniquePin(e, v, to, false, [&](const VertexID x) {
            if (_cache.isCached(x) && _cache.contains(x, to)) {
              _cache.adjust(x, to, w);
            }
          });
        }
        if (phi_from == size - 2 && phi_from > 0) {
          forUniquePin(e, v, from, false, [&](const VertexID x) {
            if (_cache.isCached(x) && _cache.contains(x, from)) {
              _cache.adjust(x, from, -w);
            }
          });
        }
      }
      return;
    }

    const bool to_entered = phi_to == 1;
    const bool from_left = phi_from == 0;
    for (const VertexID pin : _hg->pins(e)) {
      if (pin == v) {
        continue;
      }
      const PartitionID pin_block = _partition->blockOf(pin);

      // Gains towards the move target.
      Gain delta_to = 0;
      if (_objective == Objective::km1) {
        delta_to = to_entered ? w : 0;
      } else if (phi_to == size - 1 && pin_block != to) {
        delta_to = w;
      }
      if (to_entered || delta_to != 0) {
        applyTargetDelta(pin, to, delta_to);
      }

      // Gains towards the source block.
      Gain delta_from = 0;
      if (_objective == Objective::km1) {
        delta_from = from_left ? -w : 0;
      } else if (phi_from == size - 2 && pin_block != from) {
        delta_from = -w;
      }
      if (from_left) {
        releaseOrAdjust(pin, from, delta_from);
      } else if (delta_from != 0) {
        applyTargetDelta(pin, from, delta_from);
      }

      // Terms independent of the move direction.
      Gain delta_all = 0;
      if (_objective == Objective::km1) {
        if (phi_to == 2 && pin_block == to) {
          delta_all -= w;
        }
        if (phi_from == 1 && pin_block == from) {
          delta_all += w;
        }
      } else {
        if (phi_to == size) {
          delta_all -= w;
        }
        if (phi_from == size - 1) {
          delta_all += w;
        }
      }
      if (delta_all != 0) {
        adjustAllTargets(pin, delta_all);
      }

      if (!_marked[pin]) {
        if (!_active[pin]) {
          if (_partition->isBorder(pin)) {
            _pending_activations.push_back(pin);
          }
        } else if (!_partition->isBorder(pin)) {
          deactivate(pin);
        }
      }
    }
  }

  // Finds the single pin (other than the moved vertex) inside the given
  // block (in_block) or outside of it (!in_block) and applies f.
  template <typename F>
  void forUniquePin(const NetID e, const VertexID v, const PartitionID block,
                    const bool in_block, F&& f) {
    for (const VertexID pin : _hg->pins(e)) {
      if (pin != v && (in_block ? _partition->blockOf(pin) == block
                                : _partition->blockOf(pin) != block)) {
        f(pin);
        return;
      }
    }
  }

  // Adjusts the cached gain of pin towards block j. If j just became
  // adjacent, the entry is queued for one fresh computation at the end
  // of the move.
  void applyTargetDelta(const VertexID pin, const PartitionID j, const Gain delta) {
    if (!_cache.isCached(pin)) {
      return;
    }
    if (_cache.contains(pin, j)) {
      if (delta != 0) {
        _cache.adjust(pin, j, delta);
        if (_active[pin] && _pq[j].contains(pin)) {
          _pq[j].adjustKeyBy(pin, delta);
        }
      }
    } else if (j != _partition->blockOf(pin)) {
      _pending_inserts.emplace_back(pin, j);
    }
  }

  // The from-block may have dropped out of the pin's adjacency entirely.
  void releaseOrAdjust(const VertexID pin, const PartitionID from, const Gain delta) {
    if (!_cache.isCached(pin) || !_cache.contains(pin, from)) {
      return;
    }
    if (_partition->vertexBlockCount(pin, from) == 0) {
      _cache.remove(pin, from, true);
      if (_pq[from].contains(pin)) {
        _pq[from].remove(pin);
      }
    } else if (delta != 0) {
      _cache.adjust(pin, from, delta);
      if (_active[pin] && _pq[from].contains(pin)) {
        _pq[from].adjustKeyBy(pin, delta);
      }
    }
  }

  void adjustAllTargets(const VertexID pin, const Gain delta) {
    if (!_cache.isCached(pin)) {
      return;
    }
    _cache.adjustAll(pin, delta);
    if (_active[pin] && !_marked[pin]) {
      for (uint32_t i = 0; i < _cache.rowSize(pin); ++i) {
        const PartitionID j = _cache.blockAt(pin, i);
        if (_pq[j].contains(pin)) {
          _pq[j].adjustKeyBy(pin, delta);
        }
      }
    }
  }

  void activate(const VertexID v) {
    if (_active[v] || _marked[v] || !_partition->isBorder(v)) {
      return;
    }
    if (!_cache.isCached(v)) {
      _cache.markCached(v, true);
      for (const PartitionID j : _partition->adjacentBlocks(v)) {
        _cache.insert(v, j, computeGainK(*_hg, *_partition, v, j, _objective), true);
      }
    }
    for (uint32_t i = 0; i < _cache.rowSize(v); ++i) {
      _pq[_cache.blockAt(v, i)].insert(v, _cache.valueAt(v, i));
    }
    _active.set(v);
  }

  void deactivate(const VertexID v) {
    removeFromAllQueues(v);
    _active.unset(v);
  }

  void rollbackTo(const size_t best_prefix) {
    if (best_prefix < _moves.size()) {
      const size_t cache_watermark = _moves[best_prefix].cache_watermark;
      while (_moves.size() > best_prefix) {
        const MoveRecord& record = _moves.back();
        _partition->applyMove(record.v, record.from);
        _moves.pop_back();
      }
      _cache.rollbackTo(cache_watermark);
    }
  }

  const ds::Hypergraph* _hg;
  Partition* _partition;
  Objective _objective;
  PartitionID _k;
  GainCacheK _cache;
  StoppingPolicy _stopping;
  std::vector<ds::AddressablePQ<VertexID, Gain>> _pq;
  ds::FastResetFlagArray _active;
  ds::FastResetFlagArray _marked;
  std::vector<uint32_t> _unremovable_stamp;
  uint32_t _unremovable_epoch;
  std::vector<MoveRecord> _moves;
  std::vector<NetTransition> _transitions;
  std::vector<VertexID> _pending_activations;
  std::vector<std::pair<VertexID, PartitionID>> _pending_inserts;
  std::function<void()> _auditor;
};

}  // namespace hypar
