#pragma once

#include <cstddef>
#include <vector>

#include "hypar/definitions.hpp"

namespace hypar::ds {

// Folklore sparse-set map over a small dense key universe [0, universe).
// insert/remove/update/contains in O(1), iteration over contained entries
// in O(size), clear in O(size).
template <typename Key, typename Value>
class SparseMap {
 public:
  struct Entry {
    Key key;
    Value value;
  };

  explicit SparseMap(const size_t universe = 0) : _sparse(universe, 0) { }

  void setUniverseSize(const size_t universe) {
    _sparse.assign(universe, 0);
    _dense.clear();
  }

  size_t size() const { return _dense.size(); }
  bool empty() const { return _dense.empty(); }

  bool contains(const Key key) const {
    const size_t pos = _sparse[key];
    return pos < _dense.size() && _dense[pos].key == key;
  }

  Value& operator[] (const Key key) {
    if (!contains(key)) {
      _sparse[key] = _dense.size();
      _dense.push_back(Entry{ key, Value() });
    }
    return _dense[_sparse[key]].value;
  }

  const Value& get(const Key key) const { return _dense[_sparse[key]].value; }

  void remove(const Key key) {
    const size_t pos = _sparse[key];
    if (pos < _dense.size() && _dense[pos].key == key) {
      _dense[pos] = _dense.back();
      _sparse[_dense[pos].key] = pos;
      _dense.pop_back();
    }
  }

  void clear() { _dense.clear(); }

  auto begin() const { return _dense.begin(); }
  auto end() const { return _dense.end(); }
  auto begin() { return _dense.begin(); }
  auto end() { return _dense.end(); }

 private:
  std::vector<size_t> _sparse;
  std::vector<Entry> _dense;
};

}  // namespace hypar::ds
