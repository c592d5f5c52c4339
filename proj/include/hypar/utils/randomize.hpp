#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace hypar {

// Seeded RNG wrapper. Every randomized component draws from its own
// Randomize instance derived from the master seed, so that runs are
// reproducible per (seed, config, input).
class Randomize {
 public:
  explicit Randomize(const uint64_t seed) : _gen(seed) { }

  // Derives an independent stream, e.g. for one portfolio run.
  static Randomize derived(const uint64_t master_seed, const uint64_t stream) {
    std::seed_seq seq{ master_seed, stream };
    std::mt19937_64 gen(0);
    gen.seed(seq);
    return Randomize(gen());
  }

  std::mt19937_64& engine() { return _gen; }

  // Uniform in [low, high] (inclusive).
  int64_t integer(const int64_t low, const int64_t high) {
    return std::uniform_int_distribution<int64_t>(low, high)(_gen);
  }

  bool coinToss() {
    return std::uniform_int_distribution<int>(0, 1)(_gen) == 1;
  }

  double real(const double low, const double high) {
    return std::uniform_real_distribution<double>(low, high)(_gen);
  }

  template <typename T>
  void shuffle(std::vector<T>& vec) {
    std::shuffle(vec.begin(), vec.end(), _gen);
  }

 private:
  std::mt19937_64 _gen;
};

}  // namespace hypar
