#pragma once

#include <algorithm>
#include <array>
#include <vector>

#include "hypar/definitions.hpp"
#include "hypar/flow/flow_problem.hpp"
#include "hypar/flow/flowcutter.hpp"
#include "hypar/partition/partition.hpp"
#include "hypar/utils/randomize.hpp"

namespace hypar {

// Flow-based refinement of block pairs with active block scheduling:
// all blocks start active, a pair is refined while one member is
// active, and a block stays active for the next round only if a
// refinement involving it changed the partition.
class FlowRefinement {
 public:
  struct Settings {
    Objective objective = Objective::km1;
    double alpha = 16.0;
    double epsilon = 0.03;
    uint32_t most_balanced_repetitions = 7;
  };

  // Refines one adjacent block pair; returns true if the partition changed.
  static bool refinePair(const ds::Hypergraph& hg, Partition& partition,
                         const PartitionID block0, const PartitionID block1,
                         const Settings& settings, Randomize& rng) {
    const Weight total = hg.totalWeight();
    const double average = static_cast<double>(total) / static_cast<double>(partition.k());
    const auto side_bound = [&](const PartitionID other) {
      return static_cast<Weight>((1.0 + settings.alpha * settings.epsilon) * average) -
             partition.blockWeight(other);
    };
    const FlowProblem problem = CorridorExtractor::extract(
        hg, partition, block0, block1, settings.objective,
        side_bound(block1), side_bound(block0));
    if (problem.empty()) {
      return false;
    }

    const std::vector<uint8_t> input_sides =
        CorridorExtractor::currentSides(problem, partition, block0);

    FlowCutter::Settings cutter_settings;
    cutter_settings.input_cut_value = problem.cutCapacity(input_sides);
    cutter_settings.side_caps = { partition.maxBlockWeight(block0),
                                  partition.maxBlockWeight(block1) };
    cutter_settings.most_balanced_repetitions = settings.most_balanced_repetitions;
    const FlowCutterResult result = FlowCutter::run(problem, cutter_settings, rng);
    if (!result.accepted) {
      return false;
    }

    // Apply tentatively and evaluate the true metric delta.
    const Weight max_pair_weight_before =
        std::max(partition.blockWeight(block0), partition.blockWeight(block1));
    Weight delta = 0;
    std::vector<std::pair<VertexID, PartitionID>> moves;
    for (uint32_t v = 2; v < problem.numVertices(); ++v) {
      const VertexID parent = problem.to_parent[v];
      const PartitionID target = result.side[v] == 0 ? block0 : block1;
      if (partition.blockOf(parent) != target) {
        const auto move_delta = partition.applyMove(parent, target);
        delta += settings.objective == Objective::km1 ? move_delta.km1_delta
                                                      : move_delta.cut_delta;
        moves.emplace_back(parent, target == block0 ? block1 : block0);
      }
    }
    const Weight max_pair_weight_after =
        std::max(partition.blockWeight(block0), partition.blockWeight(block1));
    const bool balanced = partition.blockWeight(block0) <= partition.maxBlockWeight(block0) &&
                          partition.blockWeight(block1) <= partition.maxBlockWeight(block1);
    const bool accept =
        balanced && (delta < 0 ||
                     (delta == 0 && max_pair_weight_after < max_pair_weight_before));
    if (!accept) {
      for (auto it = moves.rbegin(); it != moves.rend(); ++it) {
        partition.applyMove(it->first, it->second);
      }
      return false;
    }
    return !moves.empty();
  }

  // One full active-block scheduling sweep. Returns true if any pair
  // refinement changed the partition.
  static bool runActiveBlockSchedule(const ds::Hypergraph& hg, Partition& partition,
                                     const Settings& settings, Randomize& rng) {
    std::vector<uint8_t> active(partition.k(), 1);
    bool changed_any = false;
    while (std::any_of(active.begin(), active.end(), [](const uint8_t a) { return a != 0; })) {
      std::vector<uint8_t> next_active(partition.k(), 0);
      bool changed_this_round = false;
      for (const auto& [i, j] : partition.quotientGraphEdges()) {
        if (!active[i] && !active[j]) {
          continue;
        }
        if (refinePair(hg, partition, i, j, settings, rng)) {
          next_active[i] = 1;
          next_active[j] = 1;
          changed_this_round = true;
          changed_any = true;
        }
      }
      if (!changed_this_round) {
        break;
      }
      active = std::move(next_active);
    }
    return changed_any;
  }
};

}  // namespace hypar
