#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "hypar/coarsening/coarsener.hpp"
#include "hypar/datastructure/hypergraph.hpp"
#include "hypar/datastructure/subhypergraph.hpp"
#include "hypar/definitions.hpp"
#include "hypar/initial_partitioning/adaptive_epsilon.hpp"
#include "hypar/initial_partitioning/portfolio.hpp"
#include "hypar/partition/context.hpp"
#include "hypar/partition/partition.hpp"
#include "hypar/preprocessing/community_detection.hpp"
#include "hypar/refinement/fm_2way.hpp"

namespace hypar {

// Called after each uncontraction of a bipartition pipeline; lets the
// caller hook flow-based refinement into the 2^j schedule.
using BipartitionLevelHook =
    std::function<void(const ds::Hypergraph&, Partition&, uint64_t uncontractions)>;

// n-level recursive bipartitioning. Every node bipartitions its
// sub-hypergraph under the adaptive imbalance parameter and recurses on
// the two restricted views; cut nets are removed for cut optimization
// and split for connectivity optimization.
class RecursiveBipartitioner {
 public:
  struct Settings {
    Objective objective = Objective::km1;
    double epsilon = 0.03;
    VertexID coarsest_size = 300;
    size_t max_rated_net_size = 1000;
    StoppingRule stopping_rule = StoppingRule::simple;
    uint32_t fm_nonimproving_moves = 50;
    uint32_t runs_per_algorithm = 20;
    uint32_t sclap_tau = 5;
    bool use_communities = true;
    Context::Preprocessing preprocessing;
    BipartitionLevelHook level_hook;
  };

  // hg must be dense (all vertices and nets enabled). Returns one block
  // id per vertex.
  static std::vector<PartitionID> partition(const ds::Hypergraph& hg, const PartitionID k,
                                            const Settings& settings, const uint64_t seed) {
    std::vector<PartitionID> blocks(hg.initialNumVertices(), 0);
    if (k <= 1) {
      return blocks;
    }
    std::vector<VertexID> identity(hg.initialNumVertices());
    for (VertexID v = 0; v < hg.initialNumVertices(); ++v) {
      identity[v] = v;
    }
    State state{ settings, hg.totalWeight(), k, blocks };
    recurse(state, hg, identity, k, 0, seed);
    return state.blocks;
  }

  // One bipartition of a (dense) hypergraph: coarsen, portfolio, then
  // uncoarsen with localized 2-way refinement after every uncontraction.
  static std::vector<PartitionID> bipartition(const ds::Hypergraph& input,
                                              const std::array<Weight, 2>& max_side_weights,
                                              const std::array<Weight, 2>& target_side_weights,
                                              const double epsilon, const Settings& settings,
                                              const uint64_t seed) {
    ds::Hypergraph hg = input;
    Randomize rng = Randomize::derived(seed, 0x10);

    std::vector<PartitionID> cluster(hg.initialNumVertices(), 0);
    if (settings.use_communities && hg.currentNumVertices() > settings.coarsest_size) {
      Randomize louvain_rng = Randomize::derived(seed, 0x11);
      cluster = detectCommunities(hg, settings.preprocessing, louvain_rng).community;
    }

    Coarsener::Parameters params;
    params.contraction_limit = settings.coarsest_size;
    params.max_vertex_weight =
        (hg.totalWeight() + std::max<VertexID>(settings.coarsest_size, 1) - 1) /
        std::max<VertexID>(settings.coarsest_size, 1);
    params.max_rated_net_size = settings.max_rated_net_size;
    CoarseningHistory history = Coarsener::coarsen(hg, cluster, params, rng);

    PortfolioBipartitioner::Settings portfolio_settings;
    portfolio_settings.max_side_weights = max_side_weights;
    portfolio_settings.target_side_weights = target_side_weights;
    portfolio_settings.epsilon = epsilon;
    portfolio_settings.runs_per_algorithm = settings.runs_per_algorithm;
    portfolio_settings.sclap_tau = settings.sclap_tau;
    portfolio_settings.fm_nonimproving_moves = settings.fm_nonimproving_moves;
    const PortfolioResult initial =
        PortfolioBipartitioner::run(hg, portfolio_settings, seed);

    Partition partition(hg, 2, epsilon, { max_side_weights[0], max_side_weights[1] });
    hg.forVertices([&](const VertexID v) { partition.assign(v, initial.blocks[v]); });

    TwoWayFM fm(hg, partition, settings.stopping_rule, settings.fm_nonimproving_moves);
    ds::Hypergraph::UncontractionEffects effects;
    uint64_t uncontractions = 0;
    while (!history.steps.empty()) {
      const ds::Memento memento = Coarsener::uncoarsenStep(hg, history, &partition, effects);
      fm.refineAfterUncontraction(memento.u, memento.v);
      ++uncontractions;
      if (settings.level_hook) {
        settings.level_hook(hg, partition, uncontractions);
      }
    }
    Coarsener::restoreInitialPruned(hg, history, &partition);
    return partition.exportBlocks();
  }

 private:
  struct State {
    const Settings& settings;
    Weight total_weight;
    PartitionID k;
    std::vector<PartitionID> blocks;
  };

  static void recurse(State& state, const ds::Hypergraph& hg,
                      const std::vector<VertexID>& to_top, const PartitionID k_prime,
                      const PartitionID block_offset, const uint64_t seed) {
    if (k_prime == 1) {
      hg.forVertices([&](const VertexID v) { state.blocks[to_top[v]] = block_offset; });
      return;
    }
    const Weight weight = hg.totalWeight();
    // Ceil-based caps can hand a node slightly more weight than its
    // real-valued budget, driving the formula below zero; a node is
    // always granted at least the fair ceil share per side.
    const double eps_prime = std::max(0.0, adaptiveEpsilon(state.settings.epsilon, state.k,
                                                           k_prime, state.total_weight, weight));
    const PartitionID k0 = k_prime / 2;
    const PartitionID k1 = k_prime - k0;
    const auto side_cap = [&](const PartitionID side_k) {
      const Weight proportional = (side_k * weight + k_prime - 1) / k_prime;
      return static_cast<Weight>((1.0 + eps_prime) * static_cast<double>(proportional));
    };
    const std::array<Weight, 2> caps = { side_cap(k0), side_cap(k1) };
    const std::array<Weight, 2> targets = { (k0 * weight + k_prime - 1) / k_prime,
                                            (k1 * weight + k_prime - 1) / k_prime };

    const std::vector<PartitionID> two_way =
        bipartition(hg, caps, targets, eps_prime, state.settings, seed);

    if (k_prime == 2) {
      hg.forVertices([&](const VertexID v) {
        state.blocks[to_top[v]] = block_offset + two_way[v];
      });
      return;
    }

    const ds::CutNetPolicy policy = state.settings.objective == Objective::cut
                                    ? ds::CutNetPolicy::remove
                                    : ds::CutNetPolicy::split;
    auto [side0, side1] = ds::restrictedViews(hg, two_way, policy);
    for (VertexID& v : side0.to_parent) {
      v = to_top[v];
    }
    for (VertexID& v : side1.to_parent) {
      v = to_top[v];
    }
    recurse(state, side0.hypergraph, side0.to_parent, k0, block_offset,
            seed * 2654435761u + 1);
    recurse(state, side1.hypergraph, side1.to_parent, k1, block_offset + k0,
            seed * 2654435761u + 2);
  }
};

}  // namespace hypar
