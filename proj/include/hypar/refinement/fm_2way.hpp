#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <span>
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

inline Gain computeGain2(const ds::Hypergraph& hg, const Partition& partition,
                         const VertexID v) {
  const PartitionID own = partition.blockOf(v);
  const PartitionID other = 1 - own;
  Gain gain = 0;
  for (const NetID e : hg.incidentNets(v)) {
    const uint32_t size = static_cast<uint32_t>(hg.netSize(e));
    if (partition.pinCountInBlock(e, other) == size - 1) {
      gain += hg.netWeight(e);
    }
    if (partition.pinCountInBlock(e, own) == size) {
      gain -= hg.netWeight(e);
    }
  }
  return gain;
}

// Localized 2-way FM. A pass starts from the given seed vertices (the
// uncontracted pair, or the whole boundary for initial partitions),
// repeatedly performs the highest-gain move from the enabled queues,
// and finally rolls back to the best balanced state it saw. Nets with
// marked pins in both blocks are locked and skipped during updates;
// their gain contributions cannot change any more.
class TwoWayFM {
 public:
  TwoWayFM(const ds::Hypergraph& hg, Partition& partition,
           const StoppingRule rule, const uint32_t simple_limit)
    : _hg(&hg),
      _partition(&partition),
      _cache(hg.initialNumVertices()),
      _stopping(rule, simple_limit),
      _active(hg.initialNumVertices()),
      _marked(hg.initialNumVertices()),
      _marked_pins(hg.initialNumNets(), { 0, 0 }) {
    _pq[0].setUniverseSize(hg.initialNumVertices());
    _pq[1].setUniverseSize(hg.initialNumVertices());
  }

  // Repair cache entries invalidated by an uncontraction, then refine.
  bool refineAfterUncontraction(const VertexID u, const VertexID v) {
    _cache.setUnlogged(u, computeGain2(*_hg, *_partition, u));
    _cache.setUnlogged(v, computeGain2(*_hg, *_partition, v));
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

  const GainCache2& cache() const { return _cache; }

  // Invoked after the updates of every executed move; lets debug builds
  // audit queues and cache entries against from-scratch recomputation.
  void setAuditor(std::function<void()> auditor) { _auditor = std::move(auditor); }

  bool isActive(const VertexID v) const { return _active[v]; }
  Gain pqKey(const VertexID v) const {
    return _pq[0].contains(v) ? _pq[0].key(v) : _pq[1].key(v);
  }
  bool inAnyPQ(const VertexID v) const { return _pq[0].contains(v) || _pq[1].contains(v); }

 private:
  struct MoveRecord {
    VertexID v;
    PartitionID from;
    size_t cache_watermark;
  };

  struct StateQuality {
    bool feasible;
    Weight cut;
    Weight overflow;
    Weight max_block_weight;

    bool betterThan(const StateQuality& other) const {
      if (feasible != other.feasible) {
        return feasible;
      }
      if (feasible) {
        return cut < other.cut || (cut == other.cut && max_block_weight < other.max_block_weight);
      }
      return overflow < other.overflow || (overflow == other.overflow && cut < other.cut);
    }
  };

  StateQuality currentQuality(const Weight cut) const {
    Weight overflow = 0;
    Weight max_weight = 0;
    for (PartitionID i = 0; i < 2; ++i) {
      overflow += std::max<Weight>(0, _partition->blockWeight(i) - _partition->maxBlockWeight(i));
      max_weight = std::max(max_weight, _partition->blockWeight(i));
    }
    return StateQuality{ overflow == 0, cut, overflow, max_weight };
  }

  template <typename SeedRange>
  bool runPass(const SeedRange& seeds) {
    _active.reset();
    _marked.reset();
    _pq[0].clear();
    _pq[1].clear();
    for (const NetID e : _touched_nets) {
      _marked_pins[e] = { 0, 0 };
    }
    _touched_nets.clear();
    _moves.clear();

    bool any_seed = false;
    for (const VertexID v : seeds) {
      if (_partition->isBorder(v)) {
        activate(v);
        any_seed = true;
      }
    }
    if (!any_seed) {
      return false;
    }

    Weight cut = _partition->cutNet();
    const StateQuality input_quality = currentQuality(cut);
    StateQuality best_quality = input_quality;
    size_t best_prefix = 0;

    _stopping.reset(_hg->currentNumVertices());

    while (true) {
      const PartitionID to = selectQueue();
      if (to == kInvalidPartition) {
        break;
      }
      const VertexID v = _pq[to].top();
      const Gain gain = _pq[to].topKey();
      _pq[to].deleteTop();
      const PartitionID from = 1 - to;

      _moves.push_back(MoveRecord{ v, from, _cache.logWatermark() });
      _marked.set(v);
      _active.unset(v);

      _transitions.clear();
      const auto delta = _partition->applyMove(v, to,
          [&](const NetID e, const uint32_t phi_from_after, const uint32_t phi_to_after) {
            _transitions.push_back({ e, phi_from_after, phi_to_after });
          });
      cut += delta.cut_delta;

      // Moving back would undo exactly this move.
      _cache.adjustLogged(v, -gain - _cache.get(v));

      _pending_activations.clear();
      for (const auto& transition : _transitions) {
        updateNeighborsOfNet(v, to, transition);
      }
      for (const VertexID pin : _pending_activations) {
        activate(pin);
      }
      if (_auditor) {
        _auditor();
      }

      _stopping.step(gain);
      const StateQuality quality = currentQuality(cut);
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

  struct NetTransition {
    NetID e;
    uint32_t phi_from_after;
    uint32_t phi_to_after;
  };

  PartitionID selectQueue() const {
    PartitionID best = kInvalidPartition;
    bool best_fits = false;
    for (PartitionID j = 0; j < 2; ++j) {
      if (_pq[j].empty() ||
          _partition->blockWeight(j) >= _partition->maxBlockWeight(j)) {
        continue;  // queues of non-underloaded blocks stay disabled
      }
      const bool fits = _partition->blockWeight(j) + _hg->vertexWeight(_pq[j].top()) <=
                        _partition->maxBlockWeight(j);
      if (best == kInvalidPartition || _pq[j].topKey() > _pq[best].topKey() ||
          (_pq[j].topKey() == _pq[best].topKey() &&
           (fits && !best_fits ||
            (fits == best_fits &&
             _partition->blockWeight(j) < _partition->blockWeight(best))))) {
        best = j;
        best_fits = fits;
      }
    }
    return best;
  }

  bool isLocked(const NetID e) const {
    return _marked_pins[e][0] > 0 && _marked_pins[e][1] > 0;
  }

  void updateNeighborsOfNet(const VertexID v, const PartitionID to,
                            const NetTransition& transition) {
    const NetID e = transition.e;
    const PartitionID from = 1 - to;
    const Weight w = _hg->netWeight(e);
    if (isLocked(e)) {
      // Free pins of a locked net have provably frozen contributions,
      // but a marked pin that is the lone occupant of its block still
      // carries a live completing-move term in its cache entry.
      if (transition.phi_to_after == 2 || transition.phi_from_after == 1) {
        for (const VertexID pin : _hg->pins(e)) {
          if (pin == v) {
            continue;
          }
          if (transition.phi_to_after == 2 && _partition->blockOf(pin) == to) {
            _cache.adjustLogged(pin, -w);
          }
          if (transition.phi_from_after == 1 && _partition->blockOf(pin) == from) {
            _cache.adjustLogged(pin, w);
          }
        }
      }
      _marked_pins[e][to] += 1;
      return;
    }
    Gain delta_all = 0;
    if (transition.phi_to_after == 1) {
      delta_all += w;  // the net just became cut
    }
    if (transition.phi_from_after == 0) {
      delta_all -= w;  // the net just became internal to "to"
    }
    for (const VertexID pin : _hg->pins(e)) {
      if (pin == v) {
        continue;
      }
      Gain delta = delta_all;
      if (transition.phi_to_after == 2 && _partition->blockOf(pin) == to) {
        delta -= w;  // pin lost its completing move
      }
      if (transition.phi_from_after == 1 && _partition->blockOf(pin) == from) {
        delta += w;  // pin became the last one on the from side
      }
      if (delta != 0) {
        _cache.adjustLogged(pin, delta);
        if (_active[pin] && !_marked[pin]) {
          _pq[1 - _partition->blockOf(pin)].adjustKeyBy(pin, delta);
        }
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
    if (_marked_pins[e][0] == 0 && _marked_pins[e][1] == 0) {
      _touched_nets.push_back(e);
    }
    _marked_pins[e][to] += 1;
  }

  void activate(const VertexID v) {
    if (_active[v] || _marked[v] || !_partition->isBorder(v)) {
      return;
    }
    Gain gain;
    if (_cache.isCached(v)) {
      gain = _cache.get(v);
    } else {
      gain = computeGain2(*_hg, *_partition, v);
      _cache.insertLogged(v, gain);
    }
    _pq[1 - _partition->blockOf(v)].insert(v, gain);
    _active.set(v);
  }

  void deactivate(const VertexID v) {
    _pq[1 - _partition->blockOf(v)].remove(v);
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
  GainCache2 _cache;
  StoppingPolicy _stopping;
  std::array<ds::AddressablePQ<VertexID, Gain>, 2> _pq;
  ds::FastResetFlagArray _active;
  ds::FastResetFlagArray _marked;
  std::vector<std::array<uint16_t, 2>> _marked_pins;
  std::vector<NetID> _touched_nets;
  std::vector<MoveRecord> _moves;
  std::vector<NetTransition> _transitions;
  std::vector<VertexID> _pending_activations;
  std::function<void()> _auditor;
};

}  // namespace hypar
