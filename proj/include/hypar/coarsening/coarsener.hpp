#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "hypar/coarsening/hypergraph_pruner.hpp"
#include "hypar/datastructure/hypergraph.hpp"
#include "hypar/datastructure/sparse_map.hpp"
#include "hypar/definitions.hpp"
#include "hypar/partition/partition.hpp"
#include "hypar/utils/randomize.hpp"

namespace hypar {

// One level of the n-level hierarchy: a contraction plus the nets that
// were pruned right after it.
struct CoarseningStep {
  ds::Memento memento;
  std::vector<NetPruneRecord> pruned;
};

struct CoarseningHistory {
  // Single-vertex nets that came with the input, removed up front.
  std::vector<NetPruneRecord> initial_pruned;
  std::vector<CoarseningStep> steps;

  bool empty() const { return steps.empty(); }
};

// Heavy-edge rating: prefers many heavy, small nets in common.
struct HeavyEdgeRating {
  double netContribution(const ds::Hypergraph& hg, const NetID e) const {
    return static_cast<double>(hg.netWeight(e)) / static_cast<double>(hg.netSize(e) - 1);
  }
  double pairFactor(const ds::Hypergraph&, VertexID, VertexID) const { return 1.0; }
};

// Rating that damps nets appearing often in the cut of good solutions.
struct EdgeFrequencyRating {
  const std::vector<uint32_t>* frequency;
  double zeta;

  double netContribution(const ds::Hypergraph& hg, const NetID e) const {
    return std::exp(-zeta * static_cast<double>((*frequency)[e])) /
           static_cast<double>(hg.netSize(e));
  }
  double pairFactor(const ds::Hypergraph& hg, const VertexID u, const VertexID v) const {
    return 1.0 / (static_cast<double>(hg.vertexWeight(u)) *
                  static_cast<double>(hg.vertexWeight(v)));
  }
};

class Coarsener {
 public:
  struct Parameters {
    VertexID contraction_limit = 0;  // stop once the vertex count drops below
    Weight max_vertex_weight = std::numeric_limits<Weight>::max();  // κ
    size_t max_rated_net_size = 1000;  // ι
  };

  // Passes over random permutations of the remaining vertices; each vertex
  // picks its highest-rated eligible partner inside its cluster and the
  // pair is contracted on the fly. Ties favor a partner untouched in this
  // pass, then a random one. After every contraction, single-vertex and
  // parallel nets are removed.
  template <typename Rating = HeavyEdgeRating>
  static CoarseningHistory coarsen(ds::Hypergraph& hg,
                                   const std::vector<PartitionID>& cluster,
                                   const Parameters& params, Randomize& rng,
                                   const Rating& rating = Rating()) {
    CoarseningHistory history;
    HypergraphPruner::removeAllSingleVertexNets(hg, history.initial_pruned);

    ds::SparseMap<VertexID, double> scores(hg.initialNumVertices());
    std::vector<uint8_t> touched(hg.initialNumVertices(), 0);
    std::vector<VertexID> candidates;

    while (hg.currentNumVertices() >= std::max<VertexID>(params.contraction_limit, 3)) {
      std::vector<VertexID> permutation = hg.vertices();
      rng.shuffle(permutation);
      std::fill(touched.begin(), touched.end(), 0);
      bool progress = false;

      for (const VertexID u : permutation) {
        if (!hg.vertexIsEnabled(u)) {
          continue;  // already used as a contraction partner
        }
        if (hg.currentNumVertices() < std::max<VertexID>(params.contraction_limit, 3)) {
          break;
        }
        const VertexID partner = bestPartner(hg, u, cluster, params, rating, scores,
                                             touched, candidates, rng);
        if (partner == kInvalidVertex) {
          continue;
        }
        CoarseningStep step;
        step.memento = hg.contract(u, partner);
        touched[u] = 1;
        HypergraphPruner::pruneIncidentNets(hg, u, step.pruned);
        history.steps.push_back(std::move(step));
        progress = true;
      }
      if (!progress) {
        break;
      }
    }
    return history;
  }

  // Restores the nets pruned at the top level and reverses its
  // contraction; the exposed pair seeds the localized refinement.
  static ds::Memento uncoarsenStep(ds::Hypergraph& hg, CoarseningHistory& history,
                                   Partition* partition,
                                   ds::Hypergraph::UncontractionEffects& effects) {
    if (history.steps.empty()) {
      throw PreconditionError("uncoarsenStep: history is empty");
    }
    CoarseningStep step = std::move(history.steps.back());
    history.steps.pop_back();
    restorePruned(hg, step.pruned, partition);
    hg.uncontract(step.memento, effects);
    if (partition != nullptr) {
      partition->onUncontract(step.memento, effects);
    }
    return step.memento;
  }

  // Restores the input's own single-vertex nets once uncoarsening is done.
  static void restoreInitialPruned(ds::Hypergraph& hg, CoarseningHistory& history,
                                   Partition* partition) {
    restorePruned(hg, history.initial_pruned, partition);
    history.initial_pruned.clear();
  }

  static void restorePruned(ds::Hypergraph& hg, std::vector<NetPruneRecord>& records,
                            Partition* partition) {
    for (auto it = records.rbegin(); it != records.rend(); ++it) {
      if (it->kind == NetPruneRecord::Kind::parallel) {
        const Weight old_weight = hg.netWeight(it->survivor);
        hg.setNetWeight(it->survivor, old_weight - it->removed_weight);
        if (partition != nullptr) {
          partition->onNetWeightChange(it->survivor, old_weight,
                                       old_weight - it->removed_weight);
        }
      }
      hg.restoreNet(it->net);
      if (partition != nullptr) {
        partition->onRestoreNet(it->net);
      }
    }
    records.clear();
  }

 private:
  template <typename Rating>
  static VertexID bestPartner(const ds::Hypergraph& hg, const VertexID u,
                              const std::vector<PartitionID>& cluster,
                              const Parameters& params, const Rating& rating,
                              ds::SparseMap<VertexID, double>& scores,
                              const std::vector<uint8_t>& touched,
                              std::vector<VertexID>& candidates, Randomize& rng) {
    scores.clear();
    const Weight weight_u = hg.vertexWeight(u);
    for (const NetID e : hg.incidentNets(u)) {
      if (hg.netSize(e) > params.max_rated_net_size) {
        continue;
      }
      const double contribution = rating.netContribution(hg, e);
      for (const VertexID p : hg.pins(e)) {
        if (p != u) {
          scores[p] += contribution;
        }
      }
    }

    double best_score = 0.0;
    bool best_untouched = false;
    candidates.clear();
    for (const auto& [p, raw_score] : scores) {
      if (cluster[p] != cluster[u] || weight_u + hg.vertexWeight(p) > params.max_vertex_weight) {
        continue;
      }
      const double score = raw_score * rating.pairFactor(hg, u, p);
      const bool untouched = touched[p] == 0;
      if (score > best_score ||
          (score == best_score && untouched && !best_untouched)) {
        best_score = score;
        best_untouched = untouched;
        candidates.clear();
        candidates.push_back(p);
      } else if (score == best_score && untouched == best_untouched) {
        candidates.push_back(p);
      }
    }
    if (candidates.empty()) {
      return kInvalidVertex;
    }
    return candidates[static_cast<size_t>(
        rng.integer(0, static_cast<int64_t>(candidates.size()) - 1))];
  }
};

}  // namespace hypar
