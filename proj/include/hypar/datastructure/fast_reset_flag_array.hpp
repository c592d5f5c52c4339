#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace hypar::ds {

// Bit vector with O(1) amortized reset via a generation counter.
class FastResetFlagArray {
 public:
  explicit FastResetFlagArray(const size_t size = 0) : _stamp(size, 0), _threshold(1) { }

  void setSize(const size_t size) {
    _stamp.assign(size, 0);
    _threshold = 1;
  }

  size_t size() const { return _stamp.size(); }

  void set(const size_t i) { _stamp[i] = _threshold; }

  void unset(const size_t i) { _stamp[i] = 0; }

  bool operator[] (const size_t i) const { return _stamp[i] == _threshold; }

  void reset() {
    if (_threshold == std::numeric_limits<uint32_t>::max()) {
      _stamp.assign(_stamp.size(), 0);
      _threshold = 0;
    }
    ++_threshold;
  }

 private:
  std::vector<uint32_t> _stamp;
  uint32_t _threshold;
};

}  // namespace hypar::ds
