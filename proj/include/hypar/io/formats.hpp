#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hypar/datastructure/hypergraph.hpp"
#include "hypar/definitions.hpp"

namespace hypar::io {

class ParseError : public std::runtime_error {
 public:
  ParseError(const size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      _line(line) { }

  size_t line() const { return _line; }

 private:
  size_t _line;
};

namespace internal {

// Reads the next line that is neither empty nor a '%' comment.
inline bool nextContentLine(std::istream& in, std::string& line, size_t& line_number) {
  while (std::getline(in, line)) {
    ++line_number;
    size_t first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '%') {
      continue;
    }
    return true;
  }
  return false;
}

inline std::vector<int64_t> parseIntegers(const std::string& line, const size_t line_number) {
  std::vector<int64_t> values;
  std::istringstream stream(line);
  std::string token;
  while (stream >> token) {
    size_t consumed = 0;
    int64_t value = 0;
    try {
      value = std::stoll(token, &consumed);
    } catch (const std::exception&) {
      throw ParseError(line_number, "expected an integer, got '" + token + "'");
    }
    if (consumed != token.size()) {
      throw ParseError(line_number, "non-integral value '" + token + "'");
    }
    values.push_back(value);
  }
  return values;
}

}  // namespace internal

// hMetis hypergraph format: header "m n [fmt]", fmt in {absent,1,10,11};
// fmt 1/11 puts the net weight first on each net line; fmt 10/11 appends
// n vertex-weight lines. Pins are 1-based; '%' lines are comments.
inline ds::Hypergraph readHMetis(std::istream& in) {
  std::string line;
  size_t line_number = 0;
  if (!internal::nextContentLine(in, line, line_number)) {
    throw ParseError(line_number, "missing header");
  }
  const auto header = internal::parseIntegers(line, line_number);
  if (header.size() < 2 || header.size() > 3) {
    throw ParseError(line_number, "header must be 'm n [fmt]'");
  }
  const int64_t num_nets = header[0];
  const int64_t num_vertices = header[1];
  const int64_t fmt = header.size() == 3 ? header[2] : 0;
  if (num_nets < 0 || num_vertices < 0) {
    throw ParseError(line_number, "negative counts in header");
  }
  if (fmt != 0 && fmt != 1 && fmt != 10 && fmt != 11) {
    throw ParseError(line_number, "unsupported fmt code " + std::to_string(fmt));
  }
  const bool has_net_weights = fmt == 1 || fmt == 11;
  const bool has_vertex_weights = fmt == 10 || fmt == 11;

  std::vector<std::vector<VertexID>> net_pins(num_nets);
  std::vector<Weight> net_weights(num_nets, 1);
  std::unordered_set<VertexID> seen;
  for (int64_t e = 0; e < num_nets; ++e) {
    if (!internal::nextContentLine(in, line, line_number)) {
      throw ParseError(line_number, "expected " + std::to_string(num_nets) +
                       " net lines, got " + std::to_string(e));
    }
    auto values = internal::parseIntegers(line, line_number);
    size_t first_pin = 0;
    if (has_net_weights) {
      if (values.empty()) {
        throw ParseError(line_number, "missing net weight");
      }
      if (values[0] <= 0) {
        throw ParseError(line_number, "nonpositive net weight");
      }
      net_weights[e] = values[0];
      first_pin = 1;
    }
    if (values.size() == first_pin) {
      throw ParseError(line_number, "net without pins");
    }
    seen.clear();
    for (size_t i = first_pin; i < values.size(); ++i) {
      const int64_t pin = values[i];
      if (pin < 1 || pin > num_vertices) {
        throw ParseError(line_number, "pin " + std::to_string(pin) + " out of range");
      }
      const VertexID v = static_cast<VertexID>(pin - 1);
      if (!seen.insert(v).second) {
        throw ParseError(line_number, "duplicate pin " + std::to_string(pin));
      }
      net_pins[e].push_back(v);
    }
  }

  std::vector<Weight> vertex_weights(num_vertices, 1);
  if (has_vertex_weights) {
    for (int64_t v = 0; v < num_vertices; ++v) {
      if (!internal::nextContentLine(in, line, line_number)) {
        throw ParseError(line_number, "expected " + std::to_string(num_vertices) +
                         " vertex weight lines, got " + std::to_string(v));
      }
      auto values = internal::parseIntegers(line, line_number);
      if (values.size() != 1) {
        throw ParseError(line_number, "expected exactly one vertex weight");
      }
      if (values[0] <= 0) {
        throw ParseError(line_number, "nonpositive vertex weight");
      }
      vertex_weights[v] = values[0];
    }
  }
  if (internal::nextContentLine(in, line, line_number)) {
    throw ParseError(line_number, "trailing content after declared counts");
  }
  return ds::Hypergraph(static_cast<VertexID>(num_vertices), net_pins,
                        vertex_weights, net_weights);
}

inline ds::Hypergraph readHMetisFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open hypergraph file: " + path);
  }
  return readHMetis(in);
}

// Writes enabled vertices and nets with dense 1-based ids, choosing the
// smallest fmt code that preserves all weights.
inline void writeHMetis(const ds::Hypergraph& hg, std::ostream& out) {
  std::vector<VertexID> to_dense(hg.initialNumVertices(), kInvalidVertex);
  VertexID next = 0;
  hg.forVertices([&](const VertexID v) { to_dense[v] = next++; });

  bool vertex_weighted = false;
  hg.forVertices([&](const VertexID v) {
    vertex_weighted = vertex_weighted || hg.vertexWeight(v) != 1;
  });
  bool net_weighted = false;
  hg.forNets([&](const NetID e) {
    net_weighted = net_weighted || hg.netWeight(e) != 1;
  });

  out << hg.currentNumNets() << " " << hg.currentNumVertices();
  const int fmt = (vertex_weighted ? 10 : 0) + (net_weighted ? 1 : 0);
  if (fmt != 0) {
    out << " " << (fmt == 10 ? "10" : std::to_string(fmt));
  }
  out << "\n";
  hg.forNets([&](const NetID e) {
    bool first = true;
    if (net_weighted) {
      out << hg.netWeight(e);
      first = false;
    }
    for (const VertexID pin : hg.pins(e)) {
      out << (first ? "" : " ") << (to_dense[pin] + 1);
      first = false;
    }
    out << "\n";
  });
  if (vertex_weighted) {
    hg.forVertices([&](const VertexID v) { out << hg.vertexWeight(v) << "\n"; });
  }
}

inline std::string writeHMetisToString(const ds::Hypergraph& hg) {
  std::ostringstream out;
  writeHMetis(hg, out);
  return out.str();
}

// Undirected graph as parsed from a Metis file.
struct Graph {
  struct Edge {
    uint32_t head;
    Weight weight;
  };
  uint32_t num_nodes = 0;
  size_t num_edges = 0;  // undirected edge count
  std::vector<std::vector<Edge>> adjacency;
  std::vector<Weight> node_weights;
};

// Metis graph format: header "n m [fmt]" with fmt in {absent,0,1,10,11};
// line i lists [node weight] neighbor [edge weight] ... with 1-based ids.
inline Graph readMetisGraph(std::istream& in) {
  std::string line;
  size_t line_number = 0;
  if (!internal::nextContentLine(in, line, line_number)) {
    throw ParseError(line_number, "missing header");
  }
  const auto header = internal::parseIntegers(line, line_number);
  if (header.size() < 2 || header.size() > 3) {
    throw ParseError(line_number, "header must be 'n m [fmt]'");
  }
  const int64_t num_nodes = header[0];
  const int64_t num_edges = header[1];
  const int64_t fmt = header.size() == 3 ? header[2] : 0;
  if (fmt != 0 && fmt != 1 && fmt != 10 && fmt != 11) {
    throw ParseError(line_number, "unsupported fmt code " + std::to_string(fmt));
  }
  const bool has_edge_weights = fmt == 1 || fmt == 11;
  const bool has_node_weights = fmt == 10 || fmt == 11;

  Graph graph;
  graph.num_nodes = static_cast<uint32_t>(num_nodes);
  graph.num_edges = static_cast<size_t>(num_edges);
  graph.adjacency.resize(num_nodes);
  graph.node_weights.assign(num_nodes, 1);

  for (int64_t u = 0; u < num_nodes; ++u) {
    if (!std::getline(in, line)) {
      throw ParseError(line_number, "expected " + std::to_string(num_nodes) +
                       " adjacency lines, got " + std::to_string(u));
    }
    ++line_number;
    if (!line.empty() && line.find_first_not_of(" \t\r") != std::string::npos &&
        line[line.find_first_not_of(" \t\r")] == '%') {
      --u;
      continue;
    }
    auto values = internal::parseIntegers(line, line_number);
    size_t i = 0;
    if (has_node_weights) {
      if (values.empty() || values[0] <= 0) {
        throw ParseError(line_number, "missing or nonpositive node weight");
      }
      graph.node_weights[u] = values[0];
      i = 1;
    }
    while (i < values.size()) {
      const int64_t head = values[i++];
      if (head < 1 || head > num_nodes) {
        throw ParseError(line_number, "neighbor " + std::to_string(head) + " out of range");
      }
      if (head - 1 == u) {
        throw ParseError(line_number, "self-loop at node " + std::to_string(u + 1));
      }
      Weight w = 1;
      if (has_edge_weights) {
        if (i >= values.size()) {
          throw ParseError(line_number, "missing edge weight");
        }
        w = values[i++];
        if (w <= 0) {
          throw ParseError(line_number, "nonpositive edge weight");
        }
      }
      graph.adjacency[u].push_back({ static_cast<uint32_t>(head - 1), w });
    }
  }

  // Adjacency must be symmetric with matching weights.
  size_t directed_edges = 0;
  for (uint32_t u = 0; u < graph.num_nodes; ++u) {
    directed_edges += graph.adjacency[u].size();
    for (const auto& [head, weight] : graph.adjacency[u]) {
      bool mirrored = false;
      for (const auto& [back, back_weight] : graph.adjacency[head]) {
        if (back == u && back_weight == weight) {
          mirrored = true;
          break;
        }
      }
      if (!mirrored) {
        throw ParseError(0, "asymmetric adjacency between nodes " +
                         std::to_string(u + 1) + " and " + std::to_string(head + 1));
      }
    }
  }
  if (directed_edges != 2 * graph.num_edges) {
    throw ParseError(0, "edge count mismatch: header declares " +
                     std::to_string(graph.num_edges) + " edges, body has " +
                     std::to_string(directed_edges) + " adjacency entries");
  }
  return graph;
}

inline Graph readMetisGraphFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open graph file: " + path);
  }
  return readMetisGraph(in);
}

struct EdgePartitionInstance {
  ds::Hypergraph hypergraph;
  // Hypergraph vertex i corresponds to graph edge (edges[i].first, edges[i].second).
  std::vector<std::pair<uint32_t, uint32_t>> edges;
};

// One hypergraph vertex per graph edge, one net per graph node containing
// the edges incident to that node. Partitioning for connectivity yields an
// edge partition whose replica count equals the connectivity metric.
inline EdgePartitionInstance graphToEdgePartitionHypergraph(const Graph& graph) {
  EdgePartitionInstance instance;
  std::vector<std::vector<VertexID>> net_pins(graph.num_nodes);
  std::vector<Weight> vertex_weights;
  for (uint32_t u = 0; u < graph.num_nodes; ++u) {
    for (const auto& [head, weight] : graph.adjacency[u]) {
      if (u < head) {
        const VertexID edge_vertex = static_cast<VertexID>(instance.edges.size());
        instance.edges.emplace_back(u, head);
        vertex_weights.push_back(weight);
        net_pins[u].push_back(edge_vertex);
        net_pins[head].push_back(edge_vertex);
      }
    }
  }
  instance.hypergraph = ds::Hypergraph(static_cast<VertexID>(instance.edges.size()),
                                       net_pins, vertex_weights, {});
  return instance;
}

// Plain block-id partition file: one block per line in vertex order.
inline std::vector<PartitionID> readPartition(std::istream& in, const VertexID n,
                                              const PartitionID k) {
  std::vector<PartitionID> blocks;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    auto values = internal::parseIntegers(line, line_number);
    if (values.size() != 1) {
      throw ParseError(line_number, "expected one block id per line");
    }
    if (values[0] < 0 || values[0] >= k) {
      throw ParseError(line_number, "block id " + std::to_string(values[0]) +
                       " out of range [0," + std::to_string(k) + ")");
    }
    blocks.push_back(static_cast<PartitionID>(values[0]));
  }
  if (blocks.size() != n) {
    throw ParseError(line_number, "expected " + std::to_string(n) +
                     " lines, got " + std::to_string(blocks.size()));
  }
  return blocks;
}

inline std::vector<PartitionID> readPartitionFile(const std::string& path,
                                                  const VertexID n, const PartitionID k) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open partition file: " + path);
  }
  return readPartition(in, n, k);
}

inline void writePartition(const std::vector<PartitionID>& blocks, std::ostream& out) {
  for (const PartitionID b : blocks) {
    out << b << "\n";
  }
}

inline void writePartitionFile(const std::vector<PartitionID>& blocks, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open partition file for writing: " + path);
  }
  writePartition(blocks, out);
}

// Result record emitted by the CLI.
struct ResultRecord {
  std::string instance;
  PartitionID k = 0;
  uint64_t seed = 0;
  std::string objective;
  Weight value = 0;
  double imbalance = 0.0;
  int64_t time_ms = 0;
  std::string config;
};

inline std::string csvHeader() {
  return "instance,k,seed,objective,value,imbalance,time_ms,config";
}

inline std::string toCsvRow(const ResultRecord& r) {
  std::ostringstream out;
  out << r.instance << "," << r.k << "," << r.seed << "," << r.objective << ","
      << r.value << "," << r.imbalance << "," << r.time_ms << ",\"" << r.config << "\"";
  return out.str();
}

}  // namespace hypar::io
