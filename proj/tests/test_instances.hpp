#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "hypar/datastructure/hypergraph.hpp"
#include "hypar/partition/partition.hpp"
#include "hypar/utils/randomize.hpp"

namespace hypar::testing {

// Standard 7-vertex instance used across the unit tests.
inline ds::Hypergraph sevenVertexHypergraph() {
  return ds::Hypergraph(7, { { 0, 2 }, { 0, 1, 3, 4 }, { 3, 4, 6 }, { 2, 5, 6 } });
}

// Two nets around a contractible pair: contracting (0,1) triggers a
// delete on net 0 and a relink on net 1.
inline ds::Hypergraph deleteRelinkHypergraph() {
  return ds::Hypergraph(3, { { 0, 1 }, { 1, 2 } });
}

// Six vertices, five nets; the bipartition {0,1,2|3,4,5} cuts exactly
// three of them.
inline ds::Hypergraph threeCutNetHypergraph() {
  return ds::Hypergraph(6, { { 0, 3 }, { 1, 4 }, { 2, 5 }, { 0, 1 }, { 3, 4 } });
}

// Random hypergraph with nets of 2..max_net_size distinct pins.
inline ds::Hypergraph randomHypergraph(Randomize& rng, const VertexID n, const NetID m,
                                       const size_t max_net_size = 5,
                                       const bool random_weights = false) {
  std::vector<std::vector<VertexID>> nets(m);
  std::vector<VertexID> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  for (NetID e = 0; e < m; ++e) {
    const size_t size = static_cast<size_t>(
        rng.integer(2, static_cast<int64_t>(std::min<size_t>(max_net_size, n))));
    rng.shuffle(ids);
    nets[e].assign(ids.begin(), ids.begin() + size);
  }
  std::vector<Weight> vertex_weights;
  std::vector<Weight> net_weights;
  if (random_weights) {
    for (VertexID v = 0; v < n; ++v) {
      vertex_weights.push_back(rng.integer(1, 4));
    }
    for (NetID e = 0; e < m; ++e) {
      net_weights.push_back(rng.integer(1, 5));
    }
  }
  return ds::Hypergraph(n, nets, vertex_weights, net_weights);
}

inline std::vector<PartitionID> randomBlocks(Randomize& rng, const VertexID n,
                                             const PartitionID k) {
  std::vector<PartitionID> blocks(n);
  for (VertexID v = 0; v < n; ++v) {
    blocks[v] = static_cast<PartitionID>(rng.integer(0, k - 1));
  }
  return blocks;
}

inline Partition makeAssignedPartition(const ds::Hypergraph& hg,
                                       const std::vector<PartitionID>& blocks,
                                       const PartitionID k, const double epsilon = 0.03) {
  Partition partition(hg, k, epsilon);
  hg.forVertices([&](const VertexID v) { partition.assign(v, blocks[v]); });
  return partition;
}

// Independent fingerprint oracle.
inline Fingerprint fingerprintFromScratch(const ds::Hypergraph& hg, const NetID e) {
  Fingerprint fp = 0;
  for (const VertexID pin : hg.pins(e)) {
    fp += static_cast<Fingerprint>(pin) * static_cast<Fingerprint>(pin);
  }
  return fp;
}

}  // namespace hypar::testing
