#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "hypar/definitions.hpp"

namespace hypar {

enum class StoppingRule : uint8_t {
  simple,
  adaptive
};

// Effective configuration of one partitioner run. Defaults follow the
// framework configuration the quality experiments were run with.
struct Context {
  Objective objective = Objective::km1;
  Mode mode = Mode::direct_kway;
  PartitionID k = 2;
  double epsilon = 0.03;
  uint64_t seed = 0;

  struct Preprocessing {
    bool use_sparsifier = true;
    bool use_communities = true;
    // Sparsification only pays off for instances with large nets.
    double sparsifier_median_net_size_threshold = 28;
    uint32_t sparsifier_cluster_min_size = 2;
    uint32_t sparsifier_cluster_max_size = 10;
    uint32_t sparsifier_max_passes = 10;
    uint32_t sparsifier_max_fingerprint_size = 8;
    uint32_t sparsifier_num_fingerprints = 4;
    double community_density_threshold = 0.75;
    uint32_t community_max_iterations = 100;
    double community_min_gain = 0.0001;
  } preprocessing;

  struct Coarsening {
    uint32_t contraction_limit_multiplier = 160;  // t: stop below t*k vertices
    size_t max_rated_net_size = 1000;             // ι
  } coarsening;

  struct InitialPartitioning {
    uint32_t runs_per_algorithm = 20;
    VertexID coarsest_size = 300;
    uint32_t sclap_tau = 5;
    uint32_t fm_nonimproving_moves = 50;
  } initial_partitioning;

  struct Refinement {
    StoppingRule stopping_rule = StoppingRule::adaptive;
    uint32_t simple_nonimproving_moves = 50;
  } refinement;

  struct Flow {
    bool enable = true;
    double alpha = 16.0;
    uint32_t most_balanced_repetitions = 7;
  } flow;

  struct Evolutionary {
    double time_limit_s = 60.0;
    double eta = 0.15;
    double zeta = 0.5;
    double p_recombine_two_point = 0.5;
    double p_recombine_edge_frequency = 0.2;
    double p_mutate_vcycle_reuse = 0.15;
    double p_mutate_vcycle_fresh = 0.15;
  } evolutionary;

  void validate() const {
    if (k < 1) {
      throw std::invalid_argument("k must be at least 1");
    }
    if (epsilon < 0.0) {
      throw std::invalid_argument("epsilon must be non-negative");
    }
    if (preprocessing.sparsifier_cluster_min_size < 2 ||
        preprocessing.sparsifier_cluster_max_size < preprocessing.sparsifier_cluster_min_size) {
      throw std::invalid_argument("sparsifier cluster bounds must satisfy 2 <= cmin <= cmax");
    }
    if (preprocessing.community_density_threshold < 0.0) {
      throw std::invalid_argument("community density threshold must be non-negative");
    }
    if (coarsening.contraction_limit_multiplier == 0) {
      throw std::invalid_argument("coarsening.t must be positive");
    }
    if (initial_partitioning.runs_per_algorithm == 0) {
      throw std::invalid_argument("ip.runs-per-algorithm must be positive");
    }
    if (flow.alpha < 1.0) {
      throw std::invalid_argument("flow.alpha must be at least 1");
    }
    const double psum = evolutionary.p_recombine_two_point +
                        evolutionary.p_recombine_edge_frequency +
                        evolutionary.p_mutate_vcycle_reuse +
                        evolutionary.p_mutate_vcycle_fresh;
    if (psum <= 0.0) {
      throw std::invalid_argument("evolutionary operator probabilities must not all be zero");
    }
  }

  bool setKeyValue(const std::string& key, const std::string& value) {
    const auto as_double = [&] { return std::stod(value); };
    const auto as_int = [&] { return std::stoll(value); };
    const auto as_bool = [&] {
      if (value == "true" || value == "1") return true;
      if (value == "false" || value == "0") return false;
      throw std::invalid_argument("expected boolean for key " + key);
    };
    if (key == "objective") {
      if (value == "cut") { objective = Objective::cut; }
      else if (value == "km1") { objective = Objective::km1; }
      else { throw std::invalid_argument("objective must be cut or km1"); }
    } else if (key == "mode") {
      if (value == "direct") { mode = Mode::direct_kway; }
      else if (value == "rb") { mode = Mode::recursive_bipartition; }
      else { throw std::invalid_argument("mode must be direct or rb"); }
    } else if (key == "k") { k = static_cast<PartitionID>(as_int()); }
    else if (key == "epsilon") { epsilon = as_double(); }
    else if (key == "seed") { seed = static_cast<uint64_t>(as_int()); }
    else if (key == "preprocessing.use-sparsifier") { preprocessing.use_sparsifier = as_bool(); }
    else if (key == "preprocessing.use-communities") { preprocessing.use_communities = as_bool(); }
    else if (key == "sparsify.enable-threshold-median-net-size") {
      preprocessing.sparsifier_median_net_size_threshold = as_double();
    } else if (key == "sparsify.cmin") { preprocessing.sparsifier_cluster_min_size = static_cast<uint32_t>(as_int()); }
    else if (key == "sparsify.cmax") { preprocessing.sparsifier_cluster_max_size = static_cast<uint32_t>(as_int()); }
    else if (key == "sparsify.max-passes") { preprocessing.sparsifier_max_passes = static_cast<uint32_t>(as_int()); }
    else if (key == "community.density-threshold") { preprocessing.community_density_threshold = as_double(); }
    else if (key == "community.max-iters") { preprocessing.community_max_iterations = static_cast<uint32_t>(as_int()); }
    else if (key == "community.min-gain") { preprocessing.community_min_gain = as_double(); }
    else if (key == "coarsening.t") { coarsening.contraction_limit_multiplier = static_cast<uint32_t>(as_int()); }
    else if (key == "coarsening.max-rated-net-size") { coarsening.max_rated_net_size = static_cast<size_t>(as_int()); }
    else if (key == "ip.runs-per-algorithm") { initial_partitioning.runs_per_algorithm = static_cast<uint32_t>(as_int()); }
    else if (key == "ip.coarsest-size") { initial_partitioning.coarsest_size = static_cast<VertexID>(as_int()); }
    else if (key == "ip.sclap-tau") { initial_partitioning.sclap_tau = static_cast<uint32_t>(as_int()); }
    else if (key == "ip.fm-nonimproving-moves") { initial_partitioning.fm_nonimproving_moves = static_cast<uint32_t>(as_int()); }
    else if (key == "fm.stopping-rule") {
      if (value == "simple") { refinement.stopping_rule = StoppingRule::simple; }
      else if (value == "adaptive") { refinement.stopping_rule = StoppingRule::adaptive; }
      else { throw std::invalid_argument("fm.stopping-rule must be simple or adaptive"); }
    } else if (key == "fm.simple-nonimproving") { refinement.simple_nonimproving_moves = static_cast<uint32_t>(as_int()); }
    else if (key == "flow.enable") { flow.enable = as_bool(); }
    else if (key == "flow.alpha") { flow.alpha = as_double(); }
    else if (key == "flow.mbc-repetitions") { flow.most_balanced_repetitions = static_cast<uint32_t>(as_int()); }
    else if (key == "evo.time-limit-s") { evolutionary.time_limit_s = as_double(); }
    else if (key == "evo.eta") { evolutionary.eta = as_double(); }
    else if (key == "evo.zeta") { evolutionary.zeta = as_double(); }
    else if (key == "evo.p-recombine-two-point") { evolutionary.p_recombine_two_point = as_double(); }
    else if (key == "evo.p-recombine-edge-frequency") { evolutionary.p_recombine_edge_frequency = as_double(); }
    else if (key == "evo.p-mutate-reuse") { evolutionary.p_mutate_vcycle_reuse = as_double(); }
    else if (key == "evo.p-mutate-fresh") { evolutionary.p_mutate_vcycle_fresh = as_double(); }
    else {
      return false;
    }
    return true;
  }

  // Line-oriented key=value file with '#' comments.
  void loadFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
      throw std::runtime_error("cannot open config file: " + path);
    }
    std::string line;
    size_t line_number = 0;
    while (std::getline(in, line)) {
      ++line_number;
      const size_t comment = line.find('#');
      if (comment != std::string::npos) {
        line = line.substr(0, comment);
      }
      const size_t first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos) {
        continue;
      }
      const size_t eq = line.find('=');
      if (eq == std::string::npos) {
        throw std::runtime_error("config line " + std::to_string(line_number) +
                                 ": expected key=value");
      }
      const auto trim = [](std::string s) {
        const size_t a = s.find_first_not_of(" \t\r");
        const size_t b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
      };
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (!setKeyValue(key, value)) {
        throw std::runtime_error("config line " + std::to_string(line_number) +
                                 ": unknown key '" + key + "'");
      }
    }
  }

  // Compact echo of the effective configuration for result records.
  std::string toCompactString() const {
    std::ostringstream out;
    out << "objective=" << toString(objective)
        << ";mode=" << toString(mode)
        << ";k=" << k
        << ";epsilon=" << epsilon
        << ";seed=" << seed
        << ";sparsifier=" << (preprocessing.use_sparsifier ? 1 : 0)
        << ";communities=" << (preprocessing.use_communities ? 1 : 0)
        << ";coarsening.t=" << coarsening.contraction_limit_multiplier
        << ";coarsening.max-rated-net-size=" << coarsening.max_rated_net_size
        << ";ip.runs-per-algorithm=" << initial_partitioning.runs_per_algorithm
        << ";ip.coarsest-size=" << initial_partitioning.coarsest_size
        << ";fm.stopping-rule=" << (refinement.stopping_rule == StoppingRule::simple ? "simple" : "adaptive")
        << ";flow.enable=" << (flow.enable ? 1 : 0)
        << ";flow.alpha=" << flow.alpha
        << ";flow.mbc-repetitions=" << flow.most_balanced_repetitions;
    return out.str();
  }
};

}  // namespace hypar
