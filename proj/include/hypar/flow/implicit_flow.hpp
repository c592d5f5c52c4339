#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "hypar/definitions.hpp"
#include "hypar/flow/flow_problem.hpp"

namespace hypar {

// Maximum s-t flow computed directly on the hypergraph, viewed as an
// implicit representation of the Lawler network: two distance labels per
// net stand in for the e_in/e_out nodes, and each net keeps its pins
// partitioned into senders, no-flow pins and receivers so that scans
// over saturated nets touch only the pins that can still yield residual
// arcs. Terminal sides are sets, which lets FlowCutter grow them.
class ImplicitLawlerMaxFlow {
 public:
  enum class Side : uint8_t {
    none = 0,
    source,
    sink
  };

  explicit ImplicitLawlerMaxFlow(const FlowProblem& problem)
    : _problem(&problem),
      _side(problem.numVertices(), Side::none),
      _net_offset(problem.numNets() + 1, 0),
      _dist(problem.numVertices() + 2 * problem.numNets(),
            kUnreached) {
    _side[FlowProblem::kSource] = Side::source;
    _side[FlowProblem::kSink] = Side::sink;
    for (uint32_t e = 0; e < problem.numNets(); ++e) {
      _net_offset[e + 1] = _net_offset[e] + static_cast<uint32_t>(problem.net_pins[e].size());
    }
    const uint32_t total_pins = _net_offset.back();
    _pin_flow.assign(total_pins, 0);
    _net_flow.assign(problem.numNets(), 0);
    // Region order per net: [senders | no-flow | receivers].
    _region_slot.resize(total_pins);
    _slot_region_pos.resize(total_pins);
    for (uint32_t slot = 0; slot < total_pins; ++slot) {
      _region_slot[slot] = slot;
      _slot_region_pos[slot] = slot;
    }
    _senders_end.assign(_net_offset.begin(), _net_offset.end() - 1);
    _receivers_begin.resize(problem.numNets());
    for (uint32_t e = 0; e < problem.numNets(); ++e) {
      _receivers_begin[e] = _net_offset[e + 1];
    }
    buildVertexIncidence();
  }

  const FlowProblem& problem() const { return *_problem; }
  Side side(const uint32_t v) const { return _side[v]; }

  void setSide(const uint32_t v, const Side side) { _side[v] = side; }

  Weight flowValue() const { return _flow_value; }

  Weight netFlow(const uint32_t e) const { return _net_flow[e]; }

  Weight pinFlow(const uint32_t e, const uint32_t slot_in_net) const {
    return _pin_flow[_net_offset[e] + slot_in_net];
  }

  // Augments the current flow to a maximum flow for the current terminal
  // sides. Returns the added amount.
  Weight augmentToMaxFlow() {
    Weight added = 0;
    while (buildLevels()) {
      while (true) {
        const Weight pushed = findAndAugmentPath();
        if (pushed == 0) {
          break;
        }
        added += pushed;
      }
    }
    _flow_value += added;
    return added;
  }

  // Residual reachability from the source side; valid for the current
  // flow (call after augmentToMaxFlow for min-cut sides).
  std::vector<uint8_t> sourceReachableNodes() const {
    return reach(false);
  }

  // Nodes from which the sink side is residually reachable.
  std::vector<uint8_t> sinkReachingNodes() const {
    return reach(true);
  }

  uint32_t netInNode(const uint32_t e) const { return _problem->numVertices() + 2 * e; }
  uint32_t netOutNode(const uint32_t e) const { return _problem->numVertices() + 2 * e + 1; }

  // Bipartition induced by the source-side min cut (side 0 = reachable)
  // or the sink-side min cut (side 1 = co-reachable).
  std::vector<uint8_t> inducedSides(const std::vector<uint8_t>& reachable,
                                    const bool source_side) const {
    std::vector<uint8_t> side(_problem->numVertices(), 0);
    for (uint32_t v = 0; v < _problem->numVertices(); ++v) {
      if (source_side) {
        side[v] = reachable[v] ? 0 : 1;
      } else {
        side[v] = reachable[v] ? 1 : 0;
      }
    }
    return side;
  }

  std::vector<uint32_t> cutNets(const std::vector<uint8_t>& reachable,
                                const bool source_side) const {
    std::vector<uint32_t> cut;
    for (uint32_t e = 0; e < _problem->numNets(); ++e) {
      if (source_side) {
        if (reachable[netInNode(e)] && !reachable[netOutNode(e)]) {
          cut.push_back(e);
        }
      } else {
        if (reachable[netOutNode(e)] && !reachable[netInNode(e)]) {
          cut.push_back(e);
        }
      }
    }
    return cut;
  }

  // Snapshot of the mutable flow state (for most-balanced repetitions).
  struct Snapshot {
    std::vector<Weight> pin_flow;
    std::vector<Weight> net_flow;
    std::vector<uint32_t> region_slot;
    std::vector<uint32_t> slot_region_pos;
    std::vector<uint32_t> senders_end;
    std::vector<uint32_t> receivers_begin;
    std::vector<Side> side;
    Weight flow_value;
  };

  Snapshot snapshot() const {
    return Snapshot{ _pin_flow, _net_flow, _region_slot, _slot_region_pos,
                     _senders_end, _receivers_begin, _side, _flow_value };
  }

  void restore(const Snapshot& snap) {
    _pin_flow = snap.pin_flow;
    _net_flow = snap.net_flow;
    _region_slot = snap.region_slot;
    _slot_region_pos = snap.slot_region_pos;
    _senders_end = snap.senders_end;
    _receivers_begin = snap.receivers_begin;
    _side = snap.side;
    _flow_value = snap.flow_value;
  }

 private:
  static constexpr uint32_t kUnreached = std::numeric_limits<uint32_t>::max();
  static constexpr Weight kInfinite = std::numeric_limits<Weight>::max() / 4;

  uint32_t numNodes() const {
    return _problem->numVertices() + 2 * _problem->numNets();
  }

  uint32_t slotOf(const uint32_t e, const uint32_t pin) const {
    const auto& pins = _problem->net_pins[e];
    for (uint32_t i = 0; i < pins.size(); ++i) {
      if (pins[i] == pin) {
        return _net_offset[e] + i;
      }
    }
    HYPAR_ASSERT(false);
    return 0;
  }

  uint32_t pinOfSlot(const uint32_t e, const uint32_t slot) const {
    return _problem->net_pins[e][slot - _net_offset[e]];
  }

  void applyPinDelta(const uint32_t e, const uint32_t slot, const Weight delta) {
    const Weight old_flow = _pin_flow[slot];
    const Weight new_flow = old_flow + delta;
    _pin_flow[slot] = new_flow;
    _net_flow[e] += std::max<Weight>(0, new_flow) - std::max<Weight>(0, old_flow);
    moveToRegion(e, slot, new_flow);
  }

  // Keeps the per-net position ranges [senders | no-flow | receivers]
  // intact by swapping the slot across region borders.
  void moveToRegion(const uint32_t e, const uint32_t slot, const Weight flow) {
    const int target = flow > 0 ? 0 : (flow < 0 ? 2 : 1);
    while (true) {
      const int current = regionOfPos(e, _slot_region_pos[slot]);
      if (current == target) {
        return;
      }
      if (current == 0) {           // sender -> no-flow
        swapPositions(_slot_region_pos[slot], _senders_end[e] - 1);
        --_senders_end[e];
      } else if (current == 2) {    // receiver -> no-flow
        swapPositions(_slot_region_pos[slot], _receivers_begin[e]);
        ++_receivers_begin[e];
      } else if (target == 0) {     // no-flow -> sender
        swapPositions(_slot_region_pos[slot], _senders_end[e]);
        ++_senders_end[e];
      } else {                      // no-flow -> receiver
        swapPositions(_slot_region_pos[slot], _receivers_begin[e] - 1);
        --_receivers_begin[e];
      }
    }
  }

  int regionOfPos(const uint32_t e, const uint32_t pos) const {
    if (pos < _senders_end[e]) {
      return 0;
    }
    return pos < _receivers_begin[e] ? 1 : 2;
  }

  void swapPositions(const uint32_t pos_a, const uint32_t pos_b) {
    const uint32_t slot_a = _region_slot[pos_a];
    const uint32_t slot_b = _region_slot[pos_b];
    std::swap(_region_slot[pos_a], _region_slot[pos_b]);
    _slot_region_pos[slot_a] = pos_b;
    _slot_region_pos[slot_b] = pos_a;
  }

  template <typename F>
  void forResidualArcs(const uint32_t node, const bool reverse, F&& f) const {
    const uint32_t n = _problem->numVertices();
    if (node < n) {
      if (!reverse && _side[node] == Side::sink) {
        return;  // absorbing
      }
      if (reverse && _side[node] == Side::source) {
        return;
      }
      // Incident nets of a flow vertex are scanned from the pin lists
      // lazily via the net adjacency below.
      for (const auto& [e, slot] : _vertex_incidence[node]) {
        if (!reverse) {
          f(netInNode(e));  // infinite pin arc
          if (_pin_flow[slot] < 0) {
            f(netOutNode(e));  // push back received flow
          }
        } else {
          f(netOutNode(e));  // reverse of infinite arc e_out -> v
          if (_pin_flow[slot] > 0) {
            f(netInNode(e));  // reverse of residual arc e_in -> v
          }
        }
      }
      return;
    }
    const uint32_t e = (node - n) / 2;
    const bool is_in = ((node - n) % 2) == 0;
    if (!reverse) {
      if (is_in) {
        if (_net_flow[e] < _problem->net_capacity[e]) {
          f(netOutNode(e));
        }
        for (uint32_t pos = _net_offset[e]; pos < _senders_end[e]; ++pos) {
          f(pinOfSlot(e, _region_slot[pos]));  // only pins sending flow
        }
      } else {
        if (_net_flow[e] > 0) {
          f(netInNode(e));
        }
        for (const uint32_t pin : _problem->net_pins[e]) {
          f(pin);
        }
      }
    } else {
      if (is_in) {
        for (const uint32_t pin : _problem->net_pins[e]) {
          f(pin);  // reverse of v -> e_in
        }
        if (_net_flow[e] > 0) {
          f(netOutNode(e));
        }
      } else {
        if (_net_flow[e] < _problem->net_capacity[e]) {
          f(netInNode(e));
        }
        for (uint32_t pos = _receivers_begin[e]; pos < _net_offset[e + 1]; ++pos) {
          f(pinOfSlot(e, _region_slot[pos]));  // reverse of v -> e_out
        }
      }
    }
  }

  std::vector<uint8_t> reach(const bool reverse) const {
    std::vector<uint8_t> reachable(numNodes(), 0);
    std::vector<uint32_t> queue;
    for (uint32_t v = 0; v < _problem->numVertices(); ++v) {
      if ((!reverse && _side[v] == Side::source) || (reverse && _side[v] == Side::sink)) {
        reachable[v] = 1;
        queue.push_back(v);
      }
    }
    for (size_t head = 0; head < queue.size(); ++head) {
      forResidualArcs(queue[head], reverse, [&](const uint32_t next) {
        if (!reachable[next]) {
          reachable[next] = 1;
          queue.push_back(next);
        }
      });
    }
    return reachable;
  }

  bool buildLevels() {
    buildVertexIncidence();
    std::fill(_dist.begin(), _dist.end(), kUnreached);
    std::vector<uint32_t> queue;
    for (uint32_t v = 0; v < _problem->numVertices(); ++v) {
      if (_side[v] == Side::source) {
        _dist[v] = 0;
        queue.push_back(v);
      }
    }
    bool sink_reached = false;
    for (size_t head = 0; head < queue.size(); ++head) {
      const uint32_t node = queue[head];
      forResidualArcs(node, false, [&](const uint32_t next) {
        if (_dist[next] == kUnreached) {
          _dist[next] = _dist[node] + 1;
          if (next < _problem->numVertices() && _side[next] == Side::sink) {
            sink_reached = true;
            return;  // no need to expand past a sink
          }
          queue.push_back(next);
        }
      });
    }
    return sink_reached;
  }

  // One shortest augmenting path along the level graph; returns the
  // pushed amount (0 if none found).
  Weight findAndAugmentPath() {
    std::vector<uint32_t> path;
    std::vector<uint8_t> on_path(numNodes(), 0);
    uint32_t found_sink = kUnreached;

    const std::function<bool(uint32_t)> dfs = [&](const uint32_t node) -> bool {
      if (node < _problem->numVertices() && _side[node] == Side::sink) {
        found_sink = node;
        return true;
      }
      bool done = false;
      forResidualArcs(node, false, [&](const uint32_t next) {
        if (done || _dist[next] != _dist[node] + 1 || on_path[next]) {
          return;
        }
        path.push_back(next);
        on_path[next] = 1;
        if (dfs(next)) {
          done = true;
          return;
        }
        on_path[next] = 0;
        path.pop_back();
        // Dead end: take the node out of this phase.
        _dist[next] = kUnreached;
      });
      return done;
    };

    for (uint32_t v = 0; v < _problem->numVertices() && found_sink == kUnreached; ++v) {
      if (_side[v] == Side::source) {
        path.clear();
        std::fill(on_path.begin(), on_path.end(), 0);
        path.push_back(v);
        on_path[v] = 1;
        if (dfs(v)) {
          break;
        }
        path.clear();
      }
    }
    if (found_sink == kUnreached || path.size() < 2) {
      return 0;
    }

    // Bottleneck over the finite residual capacities along the path.
    Weight bottleneck = kInfinite;
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      bottleneck = std::min(bottleneck, residualOf(path[i], path[i + 1]));
    }
    HYPAR_ASSERT(bottleneck > 0);
    for (size_t i = 0; i + 1 < path.size(); ++i) {
      applyArc(path[i], path[i + 1], bottleneck);
    }
    return bottleneck;
  }

  Weight residualOf(const uint32_t from, const uint32_t to) const {
    const uint32_t n = _problem->numVertices();
    if (from < n) {  // vertex -> net node
      const uint32_t e = (to - n) / 2;
      const bool to_in = ((to - n) % 2) == 0;
      if (to_in) {
        return kInfinite;
      }
      return -_pin_flow[slotOf(e, from)];  // receive cancellation
    }
    const uint32_t e = (from - n) / 2;
    const bool from_in = ((from - n) % 2) == 0;
    if (to >= n) {  // bridge arcs
      return from_in ? _problem->net_capacity[e] - _net_flow[e] : _net_flow[e];
    }
    if (from_in) {
      return _pin_flow[slotOf(e, to)];  // cancel a sender
    }
    return kInfinite;  // e_out -> vertex
  }

  void applyArc(const uint32_t from, const uint32_t to, const Weight delta) {
    const uint32_t n = _problem->numVertices();
    if (from < n && to >= n) {
      const uint32_t e = (to - n) / 2;
      applyPinDelta(e, slotOf(e, from), delta);
    } else if (from >= n && to < n) {
      const uint32_t e = (from - n) / 2;
      applyPinDelta(e, slotOf(e, to), -delta);
    }
    // net <-> net arcs carry no state of their own
  }

  void buildVertexIncidence() {
    _vertex_incidence.resize(_problem->numVertices());
    for (uint32_t e = 0; e < _problem->numNets(); ++e) {
      const auto& pins = _problem->net_pins[e];
      for (uint32_t i = 0; i < pins.size(); ++i) {
        _vertex_incidence[pins[i]].push_back({ e, _net_offset[e] + i });
      }
    }
  }

  const FlowProblem* _problem;
  std::vector<Side> _side;
  std::vector<uint32_t> _net_offset;
  std::vector<Weight> _pin_flow;   // signed flow per pin slot
  std::vector<Weight> _net_flow;   // throughput per net
  std::vector<uint32_t> _region_slot;      // region-ordered slot ids per net
  std::vector<uint32_t> _slot_region_pos;  // inverse permutation
  std::vector<uint32_t> _senders_end;      // first no-flow position per net
  std::vector<uint32_t> _receivers_begin;  // first receiver position per net
  std::vector<uint32_t> _dist;
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> _vertex_incidence;
  Weight _flow_value = 0;
};

}  // namespace hypar
