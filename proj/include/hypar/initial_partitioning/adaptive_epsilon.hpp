#pragma once

#include <cmath>

#include "hypar/definitions.hpp"

namespace hypar {

// Imbalance parameter for one recursive-bipartitioning node. Splitting
// a sub-hypergraph of weight c(V_i) into k' blocks with
//   eps' = ((1+eps) * (k' * c(V)) / (k * c(V_i)))^(1/ceil(log2 k')) - 1
// at every node keeps the final k-way partition eps-balanced. For the
// very first bipartition this reduces to (1+eps)^(1/ceil(log2 k)) - 1.
inline double adaptiveEpsilon(const double epsilon, const PartitionID k,
                              const PartitionID k_prime, const Weight total_weight,
                              const Weight subproblem_weight) {
  if (k_prime < 2 || total_weight <= 0 || subproblem_weight <= 0) {
    throw PreconditionError("adaptiveEpsilon: k' >= 2 and positive weights required");
  }
  const double ratio = (static_cast<double>(k_prime) * static_cast<double>(total_weight)) /
                       (static_cast<double>(k) * static_cast<double>(subproblem_weight));
  const double exponent = 1.0 / std::ceil(std::log2(static_cast<double>(k_prime)));
  return std::pow((1.0 + epsilon) * ratio, exponent) - 1.0;
}

}  // namespace hypar
