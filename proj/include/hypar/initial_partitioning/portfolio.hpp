#pragma once

#include <array>
#include <queue>
#include <vector>

#include "hypar/datastructure/addressable_pq.hpp"
#include "hypar/datastructure/fast_reset_flag_array.hpp"
#include "hypar/datastructure/hypergraph.hpp"
#include "hypar/definitions.hpp"
#include "hypar/partition/partition.hpp"
#include "hypar/refinement/fm_2way.hpp"
#include "hypar/utils/randomize.hpp"

namespace hypar {

enum class BipartitionAlgorithm : uint8_t {
  random = 0,
  bfs,
  ghg_global_fm,
  ghg_global_maxnet,
  ghg_sequential_fm,
  ghg_sequential_maxnet,
  ghg_round_robin_fm,
  ghg_round_robin_maxnet,
  sclap,
  count
};

constexpr size_t kNumBipartitionAlgorithms = static_cast<size_t>(BipartitionAlgorithm::count);

struct PortfolioResult {
  std::vector<PartitionID> blocks;
  Weight objective = 0;
  double imbalance = 0.0;
  bool balanced = false;
  std::array<Weight, kNumBipartitionAlgorithms> best_per_algorithm{};
};

// Gain of assigning an unassigned vertex to a side, with every
// unassigned pin counted as if it sat on the opposite side.
inline Gain growthGain(const ds::Hypergraph& hg, const Partition& partition,
                       const VertexID v, const PartitionID side) {
  Gain gain = 0;
  for (const NetID e : hg.incidentNets(v)) {
    const uint32_t in_side = partition.pinCountInBlock(e, side);
    if (in_side == hg.netSize(e) - 1) {
      gain += hg.netWeight(e);
    }
    if (in_side == 0) {
      gain -= hg.netWeight(e);
    }
  }
  return gain;
}

// Sum of the weights of all nets already touching the side.
inline Gain maxNetGain(const ds::Hypergraph& hg, const Partition& partition,
                       const VertexID v, const PartitionID side) {
  Gain gain = 0;
  for (const NetID e : hg.incidentNets(v)) {
    if (partition.pinCountInBlock(e, side) > 0) {
      gain += hg.netWeight(e);
    }
  }
  return gain;
}

// Two vertices that are far apart: the endpoint of a BFS started from
// the endpoint of a first BFS. Disconnected inputs restart the first
// traversal from random unvisited vertices.
inline std::pair<VertexID, VertexID> pseudoPeripheralSeeds(const ds::Hypergraph& hg,
                                                           Randomize& rng) {
  const std::vector<VertexID> vertices = hg.vertices();
  HYPAR_ASSERT(!vertices.empty());
  ds::FastResetFlagArray visited(hg.initialNumVertices());

  const auto bfs = [&](const VertexID start, const bool restart) {
    visited.reset();
    std::queue<VertexID> queue;
    queue.push(start);
    visited.set(start);
    VertexID last = start;
    size_t num_visited = 1;
    while (true) {
      while (!queue.empty()) {
        const VertexID u = queue.front();
        queue.pop();
        last = u;
        for (const NetID e : hg.incidentNets(u)) {
          for (const VertexID pin : hg.pins(e)) {
            if (!visited[pin]) {
              visited.set(pin);
              ++num_visited;
              queue.push(pin);
            }
          }
        }
      }
      if (!restart || num_visited == vertices.size()) {
        return last;
      }
      for (const VertexID v : vertices) {
        if (!visited[v]) {
          visited.set(v);
          ++num_visited;
          queue.push(v);
          break;
        }
      }
    }
  };

  const VertexID start = vertices[static_cast<size_t>(
      rng.integer(0, static_cast<int64_t>(vertices.size()) - 1))];
  const VertexID first = bfs(start, true);
  VertexID second = bfs(first, false);
  if (second == first) {
    for (const VertexID v : vertices) {
      if (v != first) {
        second = v;
        break;
      }
    }
  }
  return { second, first };
}

class PortfolioBipartitioner {
 public:
  struct Settings {
    std::array<Weight, 2> max_side_weights;
    std::array<Weight, 2> target_side_weights;
    double epsilon = 0.03;
    uint32_t runs_per_algorithm = 20;
    uint32_t sclap_tau = 5;
    uint32_t fm_nonimproving_moves = 50;
  };

  // Runs all nine algorithms with runs_per_algorithm seeds each, refines
  // every candidate with 2-way FM under the simple stopping rule, and
  // returns the best balanced candidate, or the least imbalanced one if
  // no candidate is balanced.
  static PortfolioResult run(const ds::Hypergraph& hg, const Settings& settings,
                             const uint64_t master_seed) {
    PortfolioResult best;
    bool have_best = false;
    std::array<bool, kNumBipartitionAlgorithms> have_algo_best{};

    for (size_t algo = 0; algo < kNumBipartitionAlgorithms; ++algo) {
      for (uint32_t run = 0; run < settings.runs_per_algorithm; ++run) {
        Randomize rng = Randomize::derived(master_seed,
                                           algo * settings.runs_per_algorithm + run);
        Partition partition(hg, 2, settings.epsilon,
                            { settings.max_side_weights[0], settings.max_side_weights[1] });
        buildCandidate(hg, partition, static_cast<BipartitionAlgorithm>(algo),
                       settings, rng);
        TwoWayFM fm(hg, partition, StoppingRule::simple, settings.fm_nonimproving_moves);
        fm.refineFullBoundary();

        const Weight objective = partition.cutNet();
        const double imbalance = partition.imbalance();
        const bool balanced = partition.isBalanced();
        if (!have_algo_best[algo] || objective < best.best_per_algorithm[algo]) {
          best.best_per_algorithm[algo] = objective;
          have_algo_best[algo] = true;
        }
        const bool better =
            !have_best ||
            (balanced != best.balanced ? balanced
                                       : objective < best.objective ||
                                         (objective == best.objective &&
                                          imbalance < best.imbalance));
        if (better) {
          best.blocks = partition.exportBlocks();
          best.objective = objective;
          best.imbalance = imbalance;
          best.balanced = balanced;
          have_best = true;
        }
      }
    }
    return best;
  }

  static void buildCandidate(const ds::Hypergraph& hg, Partition& partition,
                             const BipartitionAlgorithm algorithm,
                             const Settings& settings, Randomize& rng) {
    switch (algorithm) {
      case BipartitionAlgorithm::random:
        randomBipartition(hg, partition, settings, rng);
        break;
      case BipartitionAlgorithm::bfs:
        bfsBipartition(hg, partition, settings, rng);
        break;
      case BipartitionAlgorithm::ghg_global_fm:
        greedyHypergraphGrowing(hg, partition, settings, rng, Growth::global, Score::fm);
        break;
      case BipartitionAlgorithm::ghg_global_maxnet:
        greedyHypergraphGrowing(hg, partition, settings, rng, Growth::global, Score::max_net);
        break;
      case BipartitionAlgorithm::ghg_sequential_fm:
        greedyHypergraphGrowing(hg, partition, settings, rng, Growth::sequential, Score::fm);
        break;
      case BipartitionAlgorithm::ghg_sequential_maxnet:
        greedyHypergraphGrowing(hg, partition, settings, rng, Growth::sequential, Score::max_net);
        break;
      case BipartitionAlgorithm::ghg_round_robin_fm:
        greedyHypergraphGrowing(hg, partition, settings, rng, Growth::round_robin, Score::fm);
        break;
      case BipartitionAlgorithm::ghg_round_robin_maxnet:
        greedyHypergraphGrowing(hg, partition, settings, rng, Growth::round_robin, Score::max_net);
        break;
      case BipartitionAlgorithm::sclap:
        sizeConstrainedLabelPropagation(hg, partition, settings, rng);
        break;
      case BipartitionAlgorithm::count:
        break;
    }
    assignLeftoversToLighterSide(hg, partition);
  }

 private:
  enum class Growth : uint8_t {
    global,
    sequential,
    round_robin
  };
  enum class Score : uint8_t {
    fm,
    max_net
  };

  static void assignLeftoversToLighterSide(const ds::Hypergraph& hg, Partition& partition) {
    hg.forVertices([&](const VertexID v) {
      if (partition.blockOf(v) == kInvalidPartition) {
        const PartitionID lighter =
            partition.blockWeight(0) <= partition.blockWeight(1) ? 0 : 1;
        partition.assign(v, lighter);
      }
    });
  }

  static void randomBipartition(const ds::Hypergraph& hg, Partition& partition,
                                const Settings& settings, Randomize& rng) {
    std::vector<VertexID> vertices = hg.vertices();
    rng.shuffle(vertices);
    for (const VertexID v : vertices) {
      const PartitionID side = rng.coinToss() ? 1 : 0;
      if (partition.blockWeight(side) + hg.vertexWeight(v) <= settings.max_side_weights[side]) {
        partition.assign(v, side);
      } else if (partition.blockWeight(1 - side) + hg.vertexWeight(v) <=
                 settings.max_side_weights[1 - side]) {
        partition.assign(v, 1 - side);
      } else {
        // Both assignments overload; assign randomly anyway.
        partition.assign(v, side);
      }
    }
  }

  static void bfsBipartition(const ds::Hypergraph& hg, Partition& partition,
                             const Settings& settings, Randomize& rng) {
    std::vector<VertexID> vertices = hg.vertices();
    ds::FastResetFlagArray visited(hg.initialNumVertices());
    visited.reset();
    std::queue<VertexID> queue;
    const VertexID start = vertices[static_cast<size_t>(
        rng.integer(0, static_cast<int64_t>(vertices.size()) - 1))];
    queue.push(start);
    visited.set(start);
    bool bound_reached = false;
    while (!bound_reached) {
      while (!queue.empty() && !bound_reached) {
        const VertexID u = queue.front();
        queue.pop();
        if (partition.blockWeight(0) + hg.vertexWeight(u) > settings.max_side_weights[0]) {
          bound_reached = true;
          break;
        }
        partition.assign(u, 0);
        for (const NetID e : hg.incidentNets(u)) {
          for (const VertexID pin : hg.pins(e)) {
            if (!visited[pin]) {
              visited.set(pin);
              queue.push(pin);
            }
          }
        }
      }
      if (bound_reached) {
        break;
      }
      bool found_unvisited = false;
      for (const VertexID v : vertices) {
        if (!visited[v]) {
          visited.set(v);
          queue.push(v);
          found_unvisited = true;
          break;
        }
      }
      if (!found_unvisited) {
        break;
      }
    }
    hg.forVertices([&](const VertexID v) {
      if (partition.blockOf(v) == kInvalidPartition) {
        partition.assign(v, 1);
      }
    });
  }

  static Gain score(const ds::Hypergraph& hg, const Partition& partition, const VertexID v,
                    const PartitionID side, const Score kind) {
    return kind == Score::fm ? growthGain(hg, partition, v, side)
                             : maxNetGain(hg, partition, v, side);
  }

  static void greedyHypergraphGrowing(const ds::Hypergraph& hg, Partition& partition,
                                      const Settings& settings, Randomize& rng,
                                      const Growth growth, const Score kind) {
    const auto [seed0, seed1] = pseudoPeripheralSeeds(hg, rng);
    std::array<ds::AddressablePQ<VertexID, Gain>, 2> pq;
    pq[0].setUniverseSize(hg.initialNumVertices());
    pq[1].setUniverseSize(hg.initialNumVertices());

    const auto insertOrUpdateNeighbors = [&](const VertexID u) {
      for (const NetID e : hg.incidentNets(u)) {
        for (const VertexID pin : hg.pins(e)) {
          if (partition.blockOf(pin) != kInvalidPartition) {
            continue;
          }
          for (PartitionID side = 0; side < 2; ++side) {
            if (growth == Growth::sequential && side == 1) {
              continue;
            }
            const Gain gain = score(hg, partition, pin, side, kind);
            if (pq[side].contains(pin)) {
              pq[side].updateKey(pin, gain);
            } else {
              pq[side].insert(pin, gain);
            }
          }
        }
      }
    };

    const auto assignVertex = [&](const VertexID v, const PartitionID side) {
      partition.assign(v, side);
      for (PartitionID s = 0; s < 2; ++s) {
        if (pq[s].contains(v)) {
          pq[s].remove(v);
        }
      }
      insertOrUpdateNeighbors(v);
    };

    assignVertex(seed0, 0);
    if (seed1 != seed0) {
      assignVertex(seed1, 1);
    }

    // Pop the next fitting vertex from one queue.
    const auto growSide = [&](const PartitionID side) {
      while (!pq[side].empty()) {
        const VertexID v = pq[side].top();
        if (partition.blockWeight(side) + hg.vertexWeight(v) <=
            settings.max_side_weights[side]) {
          assignVertex(v, side);
          return true;
        }
        pq[side].remove(v);
      }
      return false;
    };

    if (growth == Growth::sequential) {
      while (partition.blockWeight(0) < settings.target_side_weights[0] && growSide(0)) {
      }
      // Remaining vertices constitute the second block.
      hg.forVertices([&](const VertexID v) {
        if (partition.blockOf(v) == kInvalidPartition) {
          partition.assign(v, 1);
        }
      });
      return;
    }

    PartitionID round_robin_side = 0;
    while (true) {
      PartitionID side = kInvalidPartition;
      if (growth == Growth::round_robin) {
        if (!pq[round_robin_side].empty()) {
          side = round_robin_side;
        } else if (!pq[1 - round_robin_side].empty()) {
          side = 1 - round_robin_side;
        }
        round_robin_side = 1 - round_robin_side;
      } else {  // global: highest score of both queues
        for (PartitionID s = 0; s < 2; ++s) {
          if (pq[s].empty()) {
            continue;
          }
          if (side == kInvalidPartition || pq[s].topKey() > pq[side].topKey() ||
              (pq[s].topKey() == pq[side].topKey() &&
               partition.blockWeight(s) < partition.blockWeight(side))) {
            side = s;
          }
        }
      }
      if (side == kInvalidPartition) {
        break;
      }
      if (!growSide(side) && pq[0].empty() && pq[1].empty()) {
        break;
      }
    }
  }

  static void sizeConstrainedLabelPropagation(const ds::Hypergraph& hg, Partition& partition,
                                              const Settings& settings, Randomize& rng) {
    const auto [seed0, seed1] = pseudoPeripheralSeeds(hg, rng);
    const auto seedLabel = [&](const VertexID seed, const PartitionID label) {
      if (partition.blockOf(seed) != kInvalidPartition) {
        return;
      }
      partition.assign(seed, label);
      uint32_t assigned = 0;
      for (const VertexID neighbor : hg.neighbors(seed)) {
        if (assigned >= settings.sclap_tau) {
          break;
        }
        if (partition.blockOf(neighbor) == kInvalidPartition &&
            partition.blockWeight(label) + hg.vertexWeight(neighbor) <=
                settings.max_side_weights[label]) {
          partition.assign(neighbor, label);
          ++assigned;
        }
      }
    };
    seedLabel(seed0, 0);
    seedLabel(seed1, 1);

    std::vector<VertexID> order = hg.vertices();
    for (uint32_t round = 0; round < 100; ++round) {
      rng.shuffle(order);
      bool changed = false;
      bool unlabeled = false;
      for (const VertexID u : order) {
        std::array<bool, 2> candidate = { false, false };
        for (const NetID e : hg.incidentNets(u)) {
          for (const VertexID pin : hg.pins(e)) {
            const PartitionID label = partition.blockOf(pin);
            if (pin != u && label != kInvalidPartition) {
              candidate[label] = true;
            }
          }
        }
        if (!candidate[0] && !candidate[1]) {
          unlabeled = unlabeled || partition.blockOf(u) == kInvalidPartition;
          continue;
        }
        const PartitionID old_label = partition.blockOf(u);
        if (old_label != kInvalidPartition) {
          partition.unassign(u);
        }
        PartitionID best_label = kInvalidPartition;
        Gain best_gain = 0;
        for (PartitionID label = 0; label < 2; ++label) {
          if (!candidate[label] ||
              partition.blockWeight(label) + hg.vertexWeight(u) >
                  settings.max_side_weights[label]) {
            continue;
          }
          const Gain gain = growthGain(hg, partition, u, label);
          if (best_label == kInvalidPartition || gain > best_gain ||
              (gain == best_gain && rng.coinToss())) {
            best_label = label;
            best_gain = gain;
          }
        }
        if (best_label == kInvalidPartition) {
          best_label = old_label;  // no feasible relabeling
        }
        if (best_label != kInvalidPartition) {
          partition.assign(u, best_label);
        }
        changed = changed || best_label != old_label;
        unlabeled = unlabeled || best_label == kInvalidPartition;
      }
      if (!changed && !unlabeled) {
        break;
      }
    }
  }
};

}  // namespace hypar
