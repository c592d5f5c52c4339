#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "hypar/coarsening/hypergraph_pruner.hpp"
#include "hypar/datastructure/hypergraph.hpp"
#include "hypar/definitions.hpp"
#include "hypar/partition/context.hpp"
#include "hypar/utils/randomize.hpp"

namespace hypar {

// h(x) = a*x + b mod p with a odd. a != 0 makes the map a bijection on
// [0,p), so min-hash collision probability approximates the Jaccard
// coefficient of the hashed sets.
class MinHashFunction {
 public:
  static constexpr uint64_t kPrime = 2147483647ULL;  // 2^31 - 1

  MinHashFunction(const uint64_t a, const uint64_t b)
    : _a(a % kPrime), _b(b % kPrime) {
    if (_a % 2 == 0) {
      _a = (_a + 1) % kPrime;
    }
    if (_a == 0) {
      _a = 1;
    }
  }

  static MinHashFunction random(Randomize& rng) {
    return MinHashFunction(static_cast<uint64_t>(rng.integer(1, kPrime - 1)),
                           static_cast<uint64_t>(rng.integer(0, kPrime - 1)));
  }

  uint64_t hash(const uint64_t x) const { return (_a * x + _b) % kPrime; }

  template <typename Range>
  uint64_t minOver(const Range& range) const {
    uint64_t best = kPrime;
    for (const auto x : range) {
      best = std::min(best, hash(static_cast<uint64_t>(x)));
    }
    return best;
  }

 private:
  uint64_t _a;
  uint64_t _b;
};

// Exact Jaccard coefficient of the incident-net sets of two vertices.
inline double jaccardIndex(const ds::Hypergraph& hg, const VertexID u, const VertexID v) {
  std::vector<NetID> a(hg.incidentNets(u).begin(), hg.incidentNets(u).end());
  std::vector<NetID> b(hg.incidentNets(v).begin(), hg.incidentNets(v).end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::vector<NetID> intersection;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(intersection));
  const size_t union_size = a.size() + b.size() - intersection.size();
  return union_size == 0 ? 1.0
                         : static_cast<double>(intersection.size()) / static_cast<double>(union_size);
}

struct SparsifierResult {
  bool applied = false;
  // Per original vertex: the enabled vertex it was merged into (itself if
  // unclustered). Projects partitions of the sparsified hypergraph back.
  std::vector<VertexID> representative;
};

// Multi-pass min-hash clustering over the incident-net sets. Vertices
// with equal fingerprints land in one bucket and are clustered up to
// c_max members; clusters of at least c_min become inactive. Clusters
// are contracted for good, pruning single-vertex and parallel nets.
class MinHashSparsifier {
 public:
  static double medianNetSize(const ds::Hypergraph& hg) {
    std::vector<size_t> sizes;
    sizes.reserve(hg.currentNumNets());
    hg.forNets([&](const NetID e) { sizes.push_back(hg.netSize(e)); });
    if (sizes.empty()) {
      return 0.0;
    }
    std::sort(sizes.begin(), sizes.end());
    const size_t mid = sizes.size() / 2;
    return sizes.size() % 2 == 1
           ? static_cast<double>(sizes[mid])
           : (static_cast<double>(sizes[mid - 1]) + static_cast<double>(sizes[mid])) / 2.0;
  }

  static SparsifierResult sparsify(ds::Hypergraph& hg, const Context::Preprocessing& cfg,
                                   Randomize& rng) {
    SparsifierResult result;
    result.representative.resize(hg.initialNumVertices());
    for (VertexID v = 0; v < hg.initialNumVertices(); ++v) {
      result.representative[v] = v;
    }
    if (medianNetSize(hg) < cfg.sparsifier_median_net_size_threshold) {
      return result;
    }

    const VertexID n = hg.currentNumVertices();
    std::vector<std::vector<VertexID>> clusters;
    std::vector<VertexID> active = hg.vertices();

    for (uint32_t pass = 0; pass < cfg.sparsifier_max_passes && !active.empty(); ++pass) {
      // Unclustered vertices count as singleton clusters here.
      if (clusters.size() + active.size() < n / 2) {
        break;
      }
      for (uint32_t round = 0; round < cfg.sparsifier_num_fingerprints && !active.empty(); ++round) {
        const auto buckets = bucketByFingerprint(hg, active, cfg, rng);
        std::vector<VertexID> unclustered;
        for (const auto& [fingerprint, members] : buckets) {
          size_t i = 0;
          while (i < members.size()) {
            const size_t end = std::min(members.size(), i + cfg.sparsifier_cluster_max_size);
            if (end - i >= cfg.sparsifier_cluster_min_size) {
              clusters.emplace_back(members.begin() + static_cast<long>(i),
                                    members.begin() + static_cast<long>(end));
            } else {
              unclustered.insert(unclustered.end(), members.begin() + static_cast<long>(i),
                                 members.begin() + static_cast<long>(end));
            }
            i = end;
          }
        }
        active = std::move(unclustered);
      }
    }

    if (clusters.empty()) {
      return result;
    }

    result.applied = true;
    std::vector<NetPruneRecord> discard;
    for (const auto& cluster : clusters) {
      const VertexID representative = cluster.front();
      for (size_t i = 1; i < cluster.size(); ++i) {
        hg.contract(representative, cluster[i]);
        result.representative[cluster[i]] = representative;
      }
      HypergraphPruner::pruneIncidentNets(hg, representative, discard);
    }
    return result;
  }

 private:
  // Buckets the given vertices by a min-hash fingerprint over I(v).
  // The fingerprint length starts at one hash and doubles while any
  // bucket stays larger than twice the cluster capacity.
  static std::map<std::vector<uint64_t>, std::vector<VertexID>> bucketByFingerprint(
      const ds::Hypergraph& hg, const std::vector<VertexID>& vertices,
      const Context::Preprocessing& cfg, Randomize& rng) {
    std::map<std::vector<uint64_t>, std::vector<VertexID>> buckets;
    uint32_t fingerprint_size = 1;
    while (true) {
      buckets.clear();
      std::vector<MinHashFunction> hashes;
      hashes.reserve(fingerprint_size);
      for (uint32_t i = 0; i < fingerprint_size; ++i) {
        hashes.push_back(MinHashFunction::random(rng));
      }
      size_t largest_bucket = 0;
      for (const VertexID v : vertices) {
        std::vector<uint64_t> fingerprint;
        fingerprint.reserve(fingerprint_size);
        for (const auto& h : hashes) {
          fingerprint.push_back(h.minOver(hg.incidentNets(v)));
        }
        auto& bucket = buckets[fingerprint];
        bucket.push_back(v);
        largest_bucket = std::max(largest_bucket, bucket.size());
      }
      if (largest_bucket <= 2 * cfg.sparsifier_cluster_max_size ||
          fingerprint_size >= cfg.sparsifier_max_fingerprint_size) {
        return buckets;
      }
      fingerprint_size = std::min(2 * fingerprint_size, cfg.sparsifier_max_fingerprint_size);
    }
  }
};

}  // namespace hypar
