#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "hypar/definitions.hpp"

namespace hypar::ds {

// Addressable binary max-heap over ids from a dense universe.
// Supports insert, deleteMax, arbitrary remove and key updates, all
// O(log n). Ties on the key are broken towards the most recently
// inserted id (documented as arbitrary).
template <typename IDType, typename KeyType>
class AddressablePQ {
 public:
  explicit AddressablePQ(const size_t universe = 0)
    : _position(universe, kNotContained), _counter(0) { }

  void setUniverseSize(const size_t universe) {
    _position.assign(universe, kNotContained);
    _heap.clear();
    _counter = 0;
  }

  bool empty() const { return _heap.empty(); }
  size_t size() const { return _heap.size(); }

  bool contains(const IDType id) const { return _position[id] != kNotContained; }

  KeyType key(const IDType id) const { return _heap[_position[id]].key; }

  void insert(const IDType id, const KeyType key) {
    _heap.push_back(HeapElement{ key, _counter++, id });
    _position[id] = _heap.size() - 1;
    siftUp(_heap.size() - 1);
  }

  IDType top() const { return _heap[0].id; }
  KeyType topKey() const { return _heap[0].key; }

  void deleteTop() { removeAt(0); }

  void remove(const IDType id) { removeAt(_position[id]); }

  void updateKey(const IDType id, const KeyType new_key) {
    const size_t pos = _position[id];
    const KeyType old_key = _heap[pos].key;
    _heap[pos].key = new_key;
    if (new_key > old_key) {
      siftUp(pos);
    } else if (new_key < old_key) {
      siftDown(pos);
    }
  }

  void adjustKeyBy(const IDType id, const KeyType delta) {
    updateKey(id, _heap[_position[id]].key + delta);
  }

  void clear() {
    for (const HeapElement& elem : _heap) {
      _position[elem.id] = kNotContained;
    }
    _heap.clear();
  }

 private:
  static constexpr size_t kNotContained = std::numeric_limits<size_t>::max();

  struct HeapElement {
    KeyType key;
    uint64_t stamp;
    IDType id;

    bool operator< (const HeapElement& other) const {
      return key < other.key || (key == other.key && stamp < other.stamp);
    }
  };

  void removeAt(const size_t pos) {
    _position[_heap[pos].id] = kNotContained;
    if (pos != _heap.size() - 1) {
      _heap[pos] = _heap.back();
      _position[_heap[pos].id] = pos;
      _heap.pop_back();
      if (!siftUp(pos)) {
        siftDown(pos);
      }
    } else {
      _heap.pop_back();
    }
  }

  bool siftUp(size_t pos) {
    bool moved = false;
    while (pos > 0) {
      const size_t parent = (pos - 1) / 2;
      if (_heap[parent] < _heap[pos]) {
        swapElements(parent, pos);
        pos = parent;
        moved = true;
      } else {
        break;
      }
    }
    return moved;
  }

  void siftDown(size_t pos) {
    while (true) {
      const size_t left = 2 * pos + 1;
      const size_t right = 2 * pos + 2;
      size_t largest = pos;
      if (left < _heap.size() && _heap[largest] < _heap[left]) {
        largest = left;
      }
      if (right < _heap.size() && _heap[largest] < _heap[right]) {
        largest = right;
      }
      if (largest == pos) {
        break;
      }
      swapElements(pos, largest);
      pos = largest;
    }
  }

  void swapElements(const size_t a, const size_t b) {
    std::swap(_heap[a], _heap[b]);
    _position[_heap[a].id] = a;
    _position[_heap[b].id] = b;
  }

  std::vector<size_t> _position;
  std::vector<HeapElement> _heap;
  uint64_t _counter;
};

}  // namespace hypar::ds
