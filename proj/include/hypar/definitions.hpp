#pragma once

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace hypar {

using VertexID = uint32_t;
using NetID = uint32_t;
using PartitionID = int32_t;
using Weight = int64_t;
using Gain = int64_t;
using Fingerprint = uint64_t;

constexpr VertexID kInvalidVertex = std::numeric_limits<VertexID>::max();
constexpr NetID kInvalidNet = std::numeric_limits<NetID>::max();
constexpr PartitionID kInvalidPartition = -1;

enum class Objective : uint8_t {
  cut,
  km1
};

enum class Mode : uint8_t {
  direct_kway,
  recursive_bipartition
};

inline std::string toString(const Objective o) {
  return o == Objective::cut ? "cut" : "km1";
}

inline std::string toString(const Mode m) {
  return m == Mode::direct_kway ? "direct" : "rb";
}

// Thrown when a documented operation precondition is violated.
class PreconditionError : public std::logic_error {
 public:
  explicit PreconditionError(const std::string& what) : std::logic_error(what) { }
};

#define HYPAR_ASSERT(cond)                                                    \
  do {                                                                        \
    if (!(cond)) {                                                            \
      throw ::std::logic_error(std::string("assertion failed: ") + #cond +   \
                               " at " + __FILE__ + ":" +                      \
                               std::to_string(__LINE__));                     \
    }                                                                         \
  } while (false)

}  // namespace hypar
