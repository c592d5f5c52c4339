#pragma once

#include <cmath>
#include <cstdint>

#include "hypar/definitions.hpp"
#include "hypar/partition/context.hpp"

namespace hypar {

// Random-walk stopping model: with mu the average gain since the last
// improvement and sigma^2 the variance observed during the current
// search, further improvement is unlikely once p > sigma^2 / (4 mu^2).
// At least log2(n) steps run after every improvement; if the average is
// still zero by then, the search is cut off instead of drifting through
// zero-gain moves.
class AdaptiveStoppingRule {
 public:
  void reset(const uint64_t num_vertices) {
    _min_steps = static_cast<uint32_t>(
        std::ceil(std::log2(static_cast<double>(std::max<uint64_t>(num_vertices, 2)))));
    _steps_since_improvement = 0;
    _sum_since_improvement = 0;
    _num_steps = 0;
    _sum = 0;
    _sum_squares = 0;
  }

  void step(const Gain gain) {
    ++_steps_since_improvement;
    _sum_since_improvement += gain;
    ++_num_steps;
    _sum += gain;
    _sum_squares += gain * gain;
  }

  void improvementFound() {
    _steps_since_improvement = 0;
    _sum_since_improvement = 0;
  }

  bool shouldStop() const {
    if (_steps_since_improvement < _min_steps) {
      return false;
    }
    if (_sum_since_improvement == 0) {
      return true;
    }
    const double p = static_cast<double>(_steps_since_improvement);
    const double mu = static_cast<double>(_sum_since_improvement) / p;
    const double mean = static_cast<double>(_sum) / static_cast<double>(_num_steps);
    const double variance =
        static_cast<double>(_sum_squares) / static_cast<double>(_num_steps) - mean * mean;
    return p > variance / (4.0 * mu * mu);
  }

 private:
  uint32_t _min_steps = 0;
  uint32_t _steps_since_improvement = 0;
  Gain _sum_since_improvement = 0;
  uint64_t _num_steps = 0;
  Gain _sum = 0;
  Gain _sum_squares = 0;
};

// Plain cutoff after a fixed number of non-improving moves.
class SimpleStoppingRule {
 public:
  explicit SimpleStoppingRule(const uint32_t limit = 50) : _limit(limit) { }

  void reset(uint64_t) { _steps_since_improvement = 0; }
  void step(Gain) { ++_steps_since_improvement; }
  void improvementFound() { _steps_since_improvement = 0; }
  bool shouldStop() const { return _steps_since_improvement >= _limit; }

 private:
  uint32_t _limit;
  uint32_t _steps_since_improvement = 0;
};

// Runtime-selected rule.
class StoppingPolicy {
 public:
  StoppingPolicy(const StoppingRule rule, const uint32_t simple_limit)
    : _rule(rule), _simple(simple_limit) { }

  void reset(const uint64_t n) {
    _adaptive.reset(n);
    _simple.reset(n);
  }
  void step(const Gain gain) {
    _adaptive.step(gain);
    _simple.step(gain);
  }
  void improvementFound() {
    _adaptive.improvementFound();
    _simple.improvementFound();
  }
  bool shouldStop() const {
    return _rule == StoppingRule::adaptive ? _adaptive.shouldStop() : _simple.shouldStop();
  }

 private:
  StoppingRule _rule;
  AdaptiveStoppingRule _adaptive;
  SimpleStoppingRule _simple;
};

}  // namespace hypar
