#pragma once

#include <cstdint>
#include <vector>

#include "hypar/definitions.hpp"

namespace hypar {

// Per-vertex 2-way gain cache. Entries survive across local searches
// along the n-level hierarchy; a rollback log restores the cache when a
// pass rolls moves back. Entries first cached during a rolled-back part
// of a pass are dropped again, everything older is delta-corrected.
class GainCache2 {
 public:
  explicit GainCache2(const size_t n = 0) : _gain(n, 0), _valid(n, 0) { }

  void setSize(const size_t n) {
    _gain.assign(n, 0);
    _valid.assign(n, 0);
    _log.clear();
  }

  bool isCached(const VertexID v) const { return _valid[v] != 0; }
  Gain get(const VertexID v) const { return _gain[v]; }

  // Fresh computation outside any pass (e.g. after an uncontraction).
  void setUnlogged(const VertexID v, const Gain gain) {
    _gain[v] = gain;
    _valid[v] = 1;
  }

  void invalidate(const VertexID v) { _valid[v] = 0; }

  // First computation of a pass; rolled back to "not cached".
  void insertLogged(const VertexID v, const Gain gain) {
    _gain[v] = gain;
    _valid[v] = 1;
    _log.push_back(Entry{ Entry::Kind::insert, v, 0 });
  }

  void adjustLogged(const VertexID v, const Gain delta) {
    if (_valid[v] != 0) {
      _gain[v] += delta;
      _log.push_back(Entry{ Entry::Kind::adjust, v, delta });
    }
  }

  size_t logWatermark() const { return _log.size(); }

  void rollbackTo(const size_t watermark) {
    while (_log.size() > watermark) {
      const Entry& entry = _log.back();
      if (entry.kind == Entry::Kind::insert) {
        _valid[entry.v] = 0;
      } else {
        _gain[entry.v] -= entry.delta;
      }
      _log.pop_back();
    }
  }

  void commitPass() { _log.clear(); }

 private:
  struct Entry {
    enum class Kind : uint8_t {
      insert,
      adjust
    };
    Kind kind;
    VertexID v;
    Gain delta;
  };

  std::vector<Gain> _gain;
  std::vector<uint8_t> _valid;
  std::vector<Entry> _log;
};

// Sparse-set gain store for k-way refinement: per vertex the gains for
// all adjacent blocks, O(k) space per vertex, O(1) add/remove/update.
// The rollback log additionally records block add/remove operations.
class GainCacheK {
 public:
  GainCacheK(const size_t n = 0, const PartitionID k = 0) { setSize(n, k); }

  void setSize(const size_t n, const PartitionID k) {
    _k = k;
    _position.assign(n * static_cast<size_t>(k), kNone);
    _block.assign(n * static_cast<size_t>(k), 0);
    _value.assign(n * static_cast<size_t>(k), 0);
    _row_size.assign(n, 0);
    _cached.assign(n, 0);
    _log.clear();
  }

  bool isCached(const VertexID v) const { return _cached[v] != 0; }

  bool contains(const VertexID v, const PartitionID j) const {
    return _position[slot(v, j)] != kNone;
  }

  Gain get(const VertexID v, const PartitionID j) const {
    return _value[row(v) + _position[slot(v, j)]];
  }

  uint32_t rowSize(const VertexID v) const { return _row_size[v]; }

  PartitionID blockAt(const VertexID v, const uint32_t i) const {
    return _block[row(v) + i];
  }

  Gain valueAt(const VertexID v, const uint32_t i) const {
    return _value[row(v) + i];
  }

  void markCached(const VertexID v, const bool logged) {
    _cached[v] = 1;
    if (logged) {
      _log.push_back(Entry{ Entry::Kind::cache_row, v, 0, 0 });
    }
  }

  void invalidateRow(const VertexID v) {
    clearRow(v);
    _cached[v] = 0;
  }

  void insert(const VertexID v, const PartitionID j, const Gain value, const bool logged) {
    HYPAR_ASSERT(!contains(v, j));
    const uint32_t pos = _row_size[v]++;
    _position[slot(v, j)] = pos;
    _block[row(v) + pos] = j;
    _value[row(v) + pos] = value;
    if (logged) {
      _log.push_back(Entry{ Entry::Kind::insert_block, v, j, value });
    }
  }

  void remove(const VertexID v, const PartitionID j, const bool logged) {
    const uint32_t pos = _position[slot(v, j)];
    HYPAR_ASSERT(pos != kNone);
    const Gain old_value = _value[row(v) + pos];
    const uint32_t last = --_row_size[v];
    if (pos != last) {
      _block[row(v) + pos] = _block[row(v) + last];
      _value[row(v) + pos] = _value[row(v) + last];
      _position[slot(v, _block[row(v) + pos])] = pos;
    }
    _position[slot(v, j)] = kNone;
    if (logged) {
      _log.push_back(Entry{ Entry::Kind::remove_block, v, j, old_value });
    }
  }

  void adjust(const VertexID v, const PartitionID j, const Gain delta) {
    const uint32_t pos = _position[slot(v, j)];
    HYPAR_ASSERT(pos != kNone);
    _value[row(v) + pos] += delta;
    _log.push_back(Entry{ Entry::Kind::adjust, v, j, delta });
  }

  void adjustAll(const VertexID v, const Gain delta) {
    for (uint32_t i = 0; i < _row_size[v]; ++i) {
      _value[row(v) + i] += delta;
      _log.push_back(Entry{ Entry::Kind::adjust, v, _block[row(v) + i], delta });
    }
  }

  size_t logWatermark() const { return _log.size(); }

  void rollbackTo(const size_t watermark) {
    while (_log.size() > watermark) {
      const Entry entry = _log.back();
      _log.pop_back();
      switch (entry.kind) {
        case Entry::Kind::adjust:
          _value[row(entry.v) + _position[slot(entry.v, entry.j)]] -= entry.value;
          break;
        case Entry::Kind::insert_block:
          remove(entry.v, entry.j, false);
          break;
        case Entry::Kind::remove_block:
          insert(entry.v, entry.j, entry.value, false);
          break;
        case Entry::Kind::cache_row:
          clearRow(entry.v);
          _cached[entry.v] = 0;
          break;
      }
    }
  }

  void commitPass() { _log.clear(); }

 private:
  static constexpr uint32_t kNone = std::numeric_limits<uint32_t>::max();

  struct Entry {
    enum class Kind : uint8_t {
      adjust,
      insert_block,
      remove_block,
      cache_row
    };
    Kind kind;
    VertexID v;
    PartitionID j;
    Gain value;
  };

  size_t row(const VertexID v) const { return static_cast<size_t>(v) * _k; }
  size_t slot(const VertexID v, const PartitionID j) const { return row(v) + j; }

  void clearRow(const VertexID v) {
    for (uint32_t i = 0; i < _row_size[v]; ++i) {
      _position[slot(v, _block[row(v) + i])] = kNone;
    }
    _row_size[v] = 0;
  }

  PartitionID _k = 0;
  std::vector<uint32_t> _position;
  std::vector<PartitionID> _block;
  std::vector<Gain> _value;
  std::vector<uint32_t> _row_size;
  std::vector<uint8_t> _cached;
  std::vector<Entry> _log;
};

}  // namespace hypar
