#pragma once

#include <algorithm>
#include <vector>

#include "hypar/datastructure/hypergraph.hpp"
#include "hypar/definitions.hpp"

namespace hypar {

// One removed single-vertex net or one parallel-net merge, recorded so
// that uncoarsening can restore nets and weights exactly.
struct NetPruneRecord {
  enum class Kind : uint8_t {
    single_vertex,
    parallel
  };
  Kind kind;
  NetID net;            // the removed net
  NetID survivor;       // parallel only: the net that absorbed the weight
  Weight removed_weight;  // parallel only: weight of the removed net
};

// Detects and removes single-vertex nets and parallel nets among the
// incident nets of a vertex, the only place where a contraction can have
// created them. Parallel candidates are grouped by (fingerprint, size)
// and confirmed by exact pin comparison; the smallest net id survives
// and absorbs the weights.
class HypergraphPruner {
 public:
  static void pruneIncidentNets(ds::Hypergraph& hg, const VertexID u,
                                std::vector<NetPruneRecord>& records) {
    removeSingleVertexNets(hg, u, records);

    // Snapshot I(u): removals below mutate the incidence list.
    std::vector<NetID> nets(hg.incidentNets(u).begin(), hg.incidentNets(u).end());
    std::sort(nets.begin(), nets.end());

    std::vector<std::vector<VertexID>> sorted_pins(nets.size());
    const auto pins_of = [&](const size_t i) -> const std::vector<VertexID>& {
      if (sorted_pins[i].empty()) {
        const auto pins = hg.pins(nets[i]);
        sorted_pins[i].assign(pins.begin(), pins.end());
        std::sort(sorted_pins[i].begin(), sorted_pins[i].end());
      }
      return sorted_pins[i];
    };

    std::vector<bool> removed(nets.size(), false);
    for (size_t i = 0; i < nets.size(); ++i) {
      if (removed[i]) {
        continue;
      }
      for (size_t j = i + 1; j < nets.size(); ++j) {
        if (removed[j] ||
            hg.netFingerprint(nets[i]) != hg.netFingerprint(nets[j]) ||
            hg.netSize(nets[i]) != hg.netSize(nets[j])) {
          continue;
        }
        if (pins_of(i) == pins_of(j)) {
          const Weight removed_weight = hg.netWeight(nets[j]);
          hg.setNetWeight(nets[i], hg.netWeight(nets[i]) + removed_weight);
          hg.removeNet(nets[j]);
          removed[j] = true;
          records.push_back(NetPruneRecord{ NetPruneRecord::Kind::parallel,
                                            nets[j], nets[i], removed_weight });
        }
      }
    }
  }

  static void removeSingleVertexNets(ds::Hypergraph& hg, const VertexID u,
                                     std::vector<NetPruneRecord>& records) {
    std::vector<NetID> nets(hg.incidentNets(u).begin(), hg.incidentNets(u).end());
    std::sort(nets.begin(), nets.end());
    for (const NetID e : nets) {
      if (hg.netSize(e) == 1) {
        hg.removeNet(e);
        records.push_back(NetPruneRecord{ NetPruneRecord::Kind::single_vertex,
                                          e, kInvalidNet, 0 });
      }
    }
  }

  // Initial pass removing single-vertex nets that came with the input.
  static void removeAllSingleVertexNets(ds::Hypergraph& hg,
                                        std::vector<NetPruneRecord>& records) {
    hg.forNets([&](const NetID e) {
      if (hg.netSize(e) == 1) {
        hg.removeNet(e);
        records.push_back(NetPruneRecord{ NetPruneRecord::Kind::single_vertex,
                                          e, kInvalidNet, 0 });
      }
    });
  }
};

}  // namespace hypar
