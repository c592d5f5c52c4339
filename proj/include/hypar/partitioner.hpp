#pragma once

#include <chrono>
#include <cstdint>
#include <vector>

#include "hypar/coarsening/coarsener.hpp"
#include "hypar/datastructure/hypergraph.hpp"
#include "hypar/datastructure/subhypergraph.hpp"
#include "hypar/definitions.hpp"
#include "hypar/flow/flow_refinement.hpp"
#include "hypar/initial_partitioning/recursive_bipartition.hpp"
#include "hypar/io/formats.hpp"
#include "hypar/partition/context.hpp"
#include "hypar/partition/partition.hpp"
#include "hypar/preprocessing/community_detection.hpp"
#include "hypar/preprocessing/min_hash_sparsifier.hpp"
#include "hypar/refinement/fm_kway.hpp"

namespace hypar {

struct PartitioningStats {
  int64_t preprocessing_ms = 0;
  int64_t coarsening_ms = 0;
  int64_t initial_partitioning_ms = 0;
  int64_t refinement_ms = 0;
  int64_t total_ms = 0;
  std::vector<Weight> objective_trajectory;
  Weight cut = 0;
  Weight km1 = 0;
  Weight objective_value = 0;
  double imbalance = 0.0;
  bool feasible = false;
  bool sparsifier_applied = false;
};

struct PartitioningResult {
  std::vector<PartitionID> blocks;
  PartitioningStats stats;
};

class Partitioner {
 public:
  // Hooks for the memetic operators, which run the n-level pipeline with
  // restricted contractions, a seeded coarsest partition, or the
  // edge-frequency rating.
  struct NLevelOptions {
    const std::vector<PartitionID>* cluster_restriction = nullptr;
    const std::vector<PartitionID>* seed_partition = nullptr;
    const std::vector<uint32_t>* net_frequency = nullptr;
    double zeta = 0.5;
    bool stop_when_no_contraction_possible = false;
  };

  static PartitioningResult partition(const ds::Hypergraph& input, const Context& ctx) {
    ctx.validate();
    const auto start = now();
    PartitioningResult result;
    result.blocks.assign(input.initialNumVertices(), 0);
    if (ctx.k == 1) {
      finalizeStats(input, result, ctx, start);
      return result;
    }

    ds::Hypergraph hg = input;
    const auto preprocessing_start = now();
    SparsifierResult sparsifier;
    if (ctx.preprocessing.use_sparsifier) {
      Randomize rng = Randomize::derived(ctx.seed, 0x5e5);
      sparsifier = MinHashSparsifier::sparsify(hg, ctx.preprocessing, rng);
    }
    result.stats.sparsifier_applied = sparsifier.applied;
    result.stats.preprocessing_ms = elapsedMs(preprocessing_start);

    std::vector<PartitionID> blocks;
    if (ctx.mode == Mode::direct_kway) {
      blocks = directKWayOnWorkingCopy(hg, ctx, ctx.seed, NLevelOptions{}, &result.stats);
    } else {
      const ds::SubHypergraph compact = ds::compactCopy(hg);
      RecursiveBipartitioner::Settings settings = recursiveSettings(ctx);
      settings.stopping_rule = ctx.refinement.stopping_rule;
      if (ctx.flow.enable) {
        settings.level_hook = makeFlowLevelHook(ctx);
      }
      const auto ip_start = now();
      const std::vector<PartitionID> compact_blocks =
          RecursiveBipartitioner::partition(compact.hypergraph, ctx.k, settings, ctx.seed);
      result.stats.initial_partitioning_ms = elapsedMs(ip_start);
      blocks.assign(hg.initialNumVertices(), 0);
      for (VertexID v = 0; v < compact.hypergraph.initialNumVertices(); ++v) {
        blocks[compact.to_parent[v]] = compact_blocks[v];
      }
    }

    // Project through the sparsifier clusters.
    if (sparsifier.applied) {
      input.forVertices([&](const VertexID v) {
        result.blocks[v] = blocks[sparsifier.representative[v]];
      });
    } else {
      input.forVertices([&](const VertexID v) { result.blocks[v] = blocks[v]; });
    }
    finalizeStats(input, result, ctx, start);
    return result;
  }

  // Direct k-way n-level run on a dense hypergraph: coarsen under the
  // cluster restriction, partition the coarsest level (or adopt the
  // seed), then uncoarsen with localized k-way FM after every
  // uncontraction and flow refinement after 2^j uncontractions.
  static std::vector<PartitionID> directKWay(const ds::Hypergraph& input, const Context& ctx,
                                             const uint64_t seed, const NLevelOptions& options,
                                             PartitioningStats* stats = nullptr) {
    ds::Hypergraph hg = input;
    return directKWayOnWorkingCopy(hg, ctx, seed, options, stats);
  }

 private:
  using Clock = std::chrono::steady_clock;

  static Clock::time_point now() { return Clock::now(); }

  static int64_t elapsedMs(const Clock::time_point& since) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(now() - since).count();
  }

  static RecursiveBipartitioner::Settings recursiveSettings(const Context& ctx) {
    RecursiveBipartitioner::Settings settings;
    settings.objective = ctx.objective;
    settings.epsilon = ctx.epsilon;
    settings.coarsest_size = ctx.initial_partitioning.coarsest_size;
    settings.max_rated_net_size = ctx.coarsening.max_rated_net_size;
    settings.stopping_rule = StoppingRule::simple;
    settings.fm_nonimproving_moves = ctx.initial_partitioning.fm_nonimproving_moves;
    settings.runs_per_algorithm = ctx.initial_partitioning.runs_per_algorithm;
    settings.sclap_tau = ctx.initial_partitioning.sclap_tau;
    settings.use_communities = ctx.preprocessing.use_communities;
    settings.preprocessing = ctx.preprocessing;
    return settings;
  }

  // Flow refinement on the 2^j schedule for the bipartition pipelines of
  // the recursive-bipartitioning mode.
  static BipartitionLevelHook makeFlowLevelHook(const Context& ctx) {
    return [ctx](const ds::Hypergraph& hg, Partition& partition, const uint64_t uncontractions) {
      if (uncontractions < 2 || (uncontractions & (uncontractions - 1)) != 0) {
        return;
      }
      FlowRefinement::Settings settings;
      settings.objective = ctx.objective;
      settings.alpha = ctx.flow.alpha;
      settings.epsilon = partition.epsilon();
      settings.most_balanced_repetitions = ctx.flow.most_balanced_repetitions;
      Randomize rng = Randomize::derived(ctx.seed, 0xf10 + uncontractions);
      FlowRefinement::runActiveBlockSchedule(hg, partition, settings, rng);
    };
  }

  static std::vector<PartitionID> directKWayOnWorkingCopy(ds::Hypergraph& hg, const Context& ctx,
                                                          const uint64_t seed,
                                                          const NLevelOptions& options,
                                                          PartitioningStats* stats) {
    const auto communities_start = now();
    std::vector<PartitionID> cluster;
    if (options.cluster_restriction != nullptr) {
      cluster = *options.cluster_restriction;
    } else if (ctx.preprocessing.use_communities) {
      Randomize rng = Randomize::derived(seed, 0x10541);
      cluster = detectCommunities(hg, ctx.preprocessing, rng).community;
    } else {
      cluster.assign(hg.initialNumVertices(), 0);
    }
    if (stats != nullptr) {
      stats->preprocessing_ms += elapsedMs(communities_start);
    }

    const auto coarsening_start = now();
    const VertexID contraction_limit =
        options.stop_when_no_contraction_possible
            ? 0
            : ctx.coarsening.contraction_limit_multiplier * static_cast<VertexID>(ctx.k);
    Coarsener::Parameters params;
    params.contraction_limit = contraction_limit;
    const Weight total_weight = hg.totalWeight();
    const VertexID kappa_divisor =
        std::max<VertexID>(ctx.coarsening.contraction_limit_multiplier * ctx.k, 1);
    params.max_vertex_weight = (total_weight + kappa_divisor - 1) / kappa_divisor;
    params.max_rated_net_size = ctx.coarsening.max_rated_net_size;

    Randomize coarsening_rng = Randomize::derived(seed, 0xc0a);
    CoarseningHistory history;
    if (options.net_frequency != nullptr) {
      EdgeFrequencyRating rating{ options.net_frequency, options.zeta };
      history = Coarsener::coarsen(hg, cluster, params, coarsening_rng, rating);
    } else {
      history = Coarsener::coarsen(hg, cluster, params, coarsening_rng);
    }
    if (stats != nullptr) {
      stats->coarsening_ms += elapsedMs(coarsening_start);
    }

    const auto ip_start = now();
    Partition partition(hg, ctx.k, ctx.epsilon);
    if (options.seed_partition != nullptr) {
      hg.forVertices([&](const VertexID v) {
        partition.assign(v, (*options.seed_partition)[v]);
      });
    } else {
      const ds::SubHypergraph compact = ds::compactCopy(hg);
      const std::vector<PartitionID> coarse_blocks = RecursiveBipartitioner::partition(
          compact.hypergraph, ctx.k, recursiveSettings(ctx), seed);
      for (VertexID v = 0; v < compact.hypergraph.initialNumVertices(); ++v) {
        partition.assign(compact.to_parent[v], coarse_blocks[v]);
      }
    }
    if (stats != nullptr) {
      stats->initial_partitioning_ms += elapsedMs(ip_start);
      stats->objective_trajectory.push_back(partition.objective(ctx.objective));
    }

    const auto refinement_start = now();
    KWayFM fm(hg, partition, ctx.objective, ctx.refinement.stopping_rule,
              ctx.refinement.simple_nonimproving_moves);
    FlowRefinement::Settings flow_settings;
    flow_settings.objective = ctx.objective;
    flow_settings.alpha = ctx.flow.alpha;
    flow_settings.epsilon = ctx.epsilon;
    flow_settings.most_balanced_repetitions = ctx.flow.most_balanced_repetitions;

    ds::Hypergraph::UncontractionEffects effects;
    uint64_t uncontractions = 0;
    uint64_t next_flow_trigger = 2;
    while (!history.steps.empty()) {
      const ds::Memento memento = Coarsener::uncoarsenStep(hg, history, &partition, effects);
      fm.refineAfterUncontraction(memento.u, memento.v);
      ++uncontractions;
      if (ctx.flow.enable && uncontractions == next_flow_trigger) {
        Randomize rng = Randomize::derived(seed, 0xf70 + uncontractions);
        FlowRefinement::runActiveBlockSchedule(hg, partition, flow_settings, rng);
        next_flow_trigger *= 2;
        if (stats != nullptr) {
          stats->objective_trajectory.push_back(partition.objective(ctx.objective));
        }
      }
    }
    Coarsener::restoreInitialPruned(hg, history, &partition);
    if (ctx.flow.enable && uncontractions > 0 && uncontractions * 2 != next_flow_trigger) {
      // Final level is refined even when it is not a power of two.
      Randomize rng = Randomize::derived(seed, 0xf7f);
      FlowRefinement::runActiveBlockSchedule(hg, partition, flow_settings, rng);
    }
    if (stats != nullptr) {
      stats->refinement_ms += elapsedMs(refinement_start);
      stats->objective_trajectory.push_back(partition.objective(ctx.objective));
    }
    return partition.exportBlocks();
  }

  static void finalizeStats(const ds::Hypergraph& input, PartitioningResult& result,
                            const Context& ctx, const Clock::time_point& start) {
    Partition partition(input, ctx.k, ctx.epsilon);
    input.forVertices([&](const VertexID v) { partition.assign(v, result.blocks[v]); });
    result.stats.cut = partition.cutNet();
    result.stats.km1 = partition.connectivityMetric();
    result.stats.objective_value = partition.objective(ctx.objective);
    result.stats.imbalance = partition.imbalance();
    result.stats.feasible = partition.isFeasible();
    result.stats.total_ms = elapsedMs(start);
  }
};

}  // namespace hypar
