#pragma once

#include <algorithm>
#include <vector>

#include "hypar/definitions.hpp"
#include "hypar/flow/flow_problem.hpp"
#include "hypar/flow/implicit_flow.hpp"
#include "hypar/utils/randomize.hpp"

namespace hypar {

struct FlowCutterResult {
  bool accepted = false;
  std::vector<uint8_t> side;  // per flow vertex, 0 = first block
  Weight cut_value = 0;
};

// Incremental max-flow bipartitioning: solve, and while the min cut is
// unbalanced, convert the smaller side to terminals plus one piercing
// vertex and resolve. Gives up as soon as the cut exceeds the input
// bipartition's. After the first balanced cut, several repetitions
// continue with non-augmenting piercings only, chasing better balance.
class FlowCutter {
 public:
  struct Settings {
    Weight input_cut_value = 0;
    std::array<Weight, 2> side_caps{};  // resulting block weight limits
    uint32_t most_balanced_repetitions = 7;
  };

  static FlowCutterResult run(const FlowProblem& problem, const Settings& settings,
                              Randomize& rng) {
    FlowCutterResult best;
    if (problem.empty()) {
      return best;
    }
    ImplicitLawlerMaxFlow flow(problem);
    Weight best_balance = std::numeric_limits<Weight>::max();

    while (true) {
      flow.augmentToMaxFlow();
      if (flow.flowValue() > settings.input_cut_value) {
        return best;  // cannot beat the input bipartition any more
      }
      const auto source_reach = flow.sourceReachableNodes();
      const auto sink_reach = flow.sinkReachingNodes();
      const auto source_sides = flow.inducedSides(source_reach, true);
      const auto sink_sides = flow.inducedSides(sink_reach, false);

      const Weight source_side_weight = sideWeight(problem, source_sides, 0);
      const Weight sink_side_weight = sideWeight(problem, sink_sides, 1);
      const Weight total = problem.totalWeight();

      const bool source_balanced = balanced(settings, source_side_weight, total);
      const bool sink_balanced = balanced(settings, total - sink_side_weight, total);
      if (source_balanced || sink_balanced) {
        const auto& sides = source_balanced ? source_sides : sink_sides;
        best.accepted = true;
        best.side = sides;
        best.cut_value = flow.flowValue();
        best_balance = balanceScore(settings, problem, sides);
        mostBalancedRepetitions(problem, settings, flow, rng, best, best_balance);
        return best;
      }

      // Grow the smaller side and pierce.
      const bool grow_source = source_side_weight <= total - sink_side_weight;
      if (!growAndPierce(problem, flow, rng, grow_source,
                         grow_source ? source_reach : sink_reach,
                         grow_source ? sink_reach : source_reach, false)) {
        return best;  // no piercing candidate left
      }
    }
  }

 private:
  static Weight sideWeight(const FlowProblem& problem, const std::vector<uint8_t>& sides,
                           const uint8_t side) {
    Weight weight = 0;
    for (uint32_t v = 0; v < problem.numVertices(); ++v) {
      if (sides[v] == side) {
        weight += problem.vertex_weight[v];
      }
    }
    return weight;
  }

  static bool balanced(const Settings& settings, const Weight side0_weight,
                       const Weight total) {
    return side0_weight <= settings.side_caps[0] &&
           total - side0_weight <= settings.side_caps[1];
  }

  // Larger final block, used to compare balance between balanced cuts.
  static Weight balanceScore(const Settings& settings, const FlowProblem& problem,
                             const std::vector<uint8_t>& sides) {
    const Weight w0 = sideWeight(problem, sides, 0);
    return std::max(w0, problem.totalWeight() - w0);
  }

  // Converts the chosen side's reachable set to terminals and adds one
  // piercing vertex incident to that side's cut. Returns false when no
  // candidate exists. With non_augmenting_only set, candidates that
  // reopen a path to the opposite terminal are not eligible.
  static bool growAndPierce(const FlowProblem& problem, ImplicitLawlerMaxFlow& flow,
                            Randomize& rng, const bool grow_source,
                            const std::vector<uint8_t>& own_reach,
                            const std::vector<uint8_t>& opposite_reach,
                            const bool non_augmenting_only) {
    const auto own_side = grow_source ? ImplicitLawlerMaxFlow::Side::source
                                      : ImplicitLawlerMaxFlow::Side::sink;
    for (uint32_t v = 0; v < problem.numVertices(); ++v) {
      if (own_reach[v] && flow.side(v) == ImplicitLawlerMaxFlow::Side::none) {
        flow.setSide(v, own_side);
      }
    }
    const auto cut = flow.cutNets(own_reach, grow_source);
    std::vector<uint32_t> preferred;
    std::vector<uint32_t> other;
    for (const uint32_t e : cut) {
      for (const uint32_t pin : problem.net_pins[e]) {
        if (flow.side(pin) != ImplicitLawlerMaxFlow::Side::none) {
          continue;
        }
        // Piercing a vertex that can reach the opposite terminal in the
        // residual network would create an augmenting path.
        if (!opposite_reach[pin]) {
          preferred.push_back(pin);
        } else if (!non_augmenting_only) {
          other.push_back(pin);
        }
      }
    }
    auto& pool = preferred.empty() ? other : preferred;
    std::sort(pool.begin(), pool.end());
    pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
    if (pool.empty()) {
      return false;
    }
    const uint32_t piercing =
        pool[static_cast<size_t>(rng.integer(0, static_cast<int64_t>(pool.size()) - 1))];
    flow.setSide(piercing, own_side);
    return true;
  }

  // Restarts from the first balanced cut and keeps piercing without
  // augmentation to find better balanced cuts of the same value.
  static void mostBalancedRepetitions(const FlowProblem& problem, const Settings& settings,
                                      ImplicitLawlerMaxFlow& flow, Randomize& rng,
                                      FlowCutterResult& best, Weight& best_balance) {
    const auto snapshot = flow.snapshot();
    for (uint32_t rep = 0; rep < settings.most_balanced_repetitions; ++rep) {
      flow.restore(snapshot);
      while (true) {
        const Weight added = flow.augmentToMaxFlow();
        if (added > 0 || flow.flowValue() > settings.input_cut_value) {
          break;  // piercing augmented after all; this line of cuts is done
        }
        const auto source_reach = flow.sourceReachableNodes();
        const auto sink_reach = flow.sinkReachingNodes();
        const auto source_sides = flow.inducedSides(source_reach, true);
        const auto sink_sides = flow.inducedSides(sink_reach, false);
        const Weight total = problem.totalWeight();
        for (const auto* sides : { &source_sides, &sink_sides }) {
          const Weight w0 = sideWeight(problem, *sides, 0);
          if (balanced(settings, w0, total)) {
            const Weight score = std::max(w0, total - w0);
            if (score < best_balance) {
              best_balance = score;
              best.side = *sides;
              best.cut_value = flow.flowValue();
            }
          }
        }
        const Weight source_weight = sideWeight(problem, source_sides, 0);
        const bool grow_source = source_weight <= total - sideWeight(problem, sink_sides, 1);
        if (!growAndPierce(problem, flow, rng, grow_source,
                           grow_source ? source_reach : sink_reach,
                           grow_source ? sink_reach : source_reach, true)) {
          break;
        }
      }
    }
  }
};

}  // namespace hypar
