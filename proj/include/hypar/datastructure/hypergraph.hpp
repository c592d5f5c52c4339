#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "hypar/datastructure/fast_reset_flag_array.hpp"
#include "hypar/definitions.hpp"

namespace hypar::ds {

// Records one contraction (v merged into u) for exact reversal.
// u_incidence_size is the length of I(u) at contraction time; every
// entry appended beyond it belongs to a relink of this contraction.
struct Memento {
  VertexID u = kInvalidVertex;
  VertexID v = kInvalidVertex;
  size_t u_incidence_size = 0;
};

// Semi-dynamic hypergraph: supports contractions, net removals and the
// exact reversal of both, but no insertions. Vertices and nets keep
// their storage when disabled so that uncontraction is cheap.
//
// Pins of net e live in _pins[_nets[e].first .. _nets[e].first + _nets[e].size).
// A sentinel entry at index m makes _nets[e + 1].first valid for every net,
// which bounds the original pin range of e during uncontraction. Incident
// nets of a vertex are stored in a growable per-vertex list whose order
// carries no meaning.
class Hypergraph {
 public:
  Hypergraph() = default;

  // net_pins uses 0-based vertex ids; all weights default to one.
  Hypergraph(const VertexID num_vertices,
             const std::vector<std::vector<VertexID>>& net_pins,
             const std::vector<Weight>& vertex_weights = {},
             const std::vector<Weight>& net_weights = {}) {
    const NetID num_nets = static_cast<NetID>(net_pins.size());
    _vertex_weight = vertex_weights.empty()
                     ? std::vector<Weight>(num_vertices, 1) : vertex_weights;
    _net_weight = net_weights.empty()
                  ? std::vector<Weight>(num_nets, 1) : net_weights;
    HYPAR_ASSERT(_vertex_weight.size() == num_vertices);
    HYPAR_ASSERT(_net_weight.size() == num_nets);

    _vertex_enabled.assign(num_vertices, true);
    _net_enabled.assign(num_nets, true);
    _incidence.assign(num_vertices, {});
    _nets.reserve(num_nets + 1);
    _fingerprint.assign(num_nets, 0);

    size_t offset = 0;
    for (NetID e = 0; e < num_nets; ++e) {
      _nets.push_back(NetHandle{ offset, net_pins[e].size() });
      for (const VertexID v : net_pins[e]) {
        HYPAR_ASSERT(v < num_vertices);
        _pins.push_back(v);
        _incidence[v].push_back(e);
        _fingerprint[e] += square(v);
      }
      offset += net_pins[e].size();
    }
    _nets.push_back(NetHandle{ offset, 0 });  // sentinel

    _current_num_vertices = num_vertices;
    _current_num_nets = num_nets;
    _current_num_pins = _pins.size();
    _relevant.setSize(num_nets);
  }

  VertexID initialNumVertices() const { return static_cast<VertexID>(_vertex_enabled.size()); }
  NetID initialNumNets() const { return static_cast<NetID>(_net_enabled.size()); }
  VertexID currentNumVertices() const { return _current_num_vertices; }
  NetID currentNumNets() const { return _current_num_nets; }
  size_t currentNumPins() const { return _current_num_pins; }

  bool vertexIsEnabled(const VertexID v) const { return _vertex_enabled[v]; }
  bool netIsEnabled(const NetID e) const { return _net_enabled[e]; }

  Weight vertexWeight(const VertexID v) const { return _vertex_weight[v]; }
  void setVertexWeight(const VertexID v, const Weight w) { _vertex_weight[v] = w; }
  Weight netWeight(const NetID e) const { return _net_weight[e]; }
  void setNetWeight(const NetID e, const Weight w) { _net_weight[e] = w; }

  Weight totalWeight() const {
    Weight total = 0;
    for (VertexID v = 0; v < initialNumVertices(); ++v) {
      if (_vertex_enabled[v]) {
        total += _vertex_weight[v];
      }
    }
    return total;
  }

  size_t netSize(const NetID e) const { return _nets[e].size; }
  size_t vertexDegree(const VertexID v) const { return _incidence[v].size(); }
  Fingerprint netFingerprint(const NetID e) const { return _fingerprint[e]; }

  std::span<const VertexID> pins(const NetID e) const {
    return { _pins.data() + _nets[e].first, _nets[e].size };
  }

  std::span<const NetID> incidentNets(const VertexID v) const {
    return { _incidence[v].data(), _incidence[v].size() };
  }

  // Enabled vertices in increasing id order.
  template <typename F>
  void forVertices(F&& f) const {
    for (VertexID v = 0; v < initialNumVertices(); ++v) {
      if (_vertex_enabled[v]) {
        f(v);
      }
    }
  }

  template <typename F>
  void forNets(F&& f) const {
    for (NetID e = 0; e < initialNumNets(); ++e) {
      if (_net_enabled[e]) {
        f(e);
      }
    }
  }

  std::vector<VertexID> vertices() const {
    std::vector<VertexID> result;
    result.reserve(_current_num_vertices);
    forVertices([&](const VertexID v) { result.push_back(v); });
    return result;
  }

  std::vector<NetID> nets() const {
    std::vector<NetID> result;
    result.reserve(_current_num_nets);
    forNets([&](const NetID e) { result.push_back(e); });
    return result;
  }

  // Merges v into u. u keeps v's weight and inherits v's nets: if u is
  // already a pin of e, v is swapped to the end of e's pin range and the
  // size decremented (delete case); otherwise v's pin slot is rewritten
  // to u and e is appended to I(u) (relink case). Fingerprints follow
  // incrementally. Contraction of non-adjacent pairs is legal.
  Memento contract(const VertexID u, const VertexID v) {
    if (u == v || u >= initialNumVertices() || v >= initialNumVertices() ||
        !_vertex_enabled[u] || !_vertex_enabled[v]) {
      throw PreconditionError("contract: invalid or disabled vertex pair");
    }
    Memento memento{ u, v, _incidence[u].size() };
    _vertex_weight[u] += _vertex_weight[v];

    for (const NetID e : _incidence[v]) {
      NetHandle& handle = _nets[e];
      VertexID* const pin_begin = _pins.data() + handle.first;
      size_t v_slot = 0;
      bool found_u = false;
      for (size_t i = 0; i < handle.size; ++i) {
        if (pin_begin[i] == v) {
          v_slot = i;
        } else if (pin_begin[i] == u) {
          found_u = true;
        }
      }
      if (found_u) {
        // Delete case: park v one past the shrunken pin range so that
        // uncontraction can recognize it there.
        std::swap(pin_begin[v_slot], pin_begin[handle.size - 1]);
        --handle.size;
        --_current_num_pins;
        _fingerprint[e] -= square(v);
      } else {
        // Relink case.
        pin_begin[v_slot] = u;
        _incidence[u].push_back(e);
        _fingerprint[e] -= square(v);
        _fingerprint[e] += square(u);
      }
    }
    _vertex_enabled[v] = false;
    --_current_num_vertices;
    return memento;
  }

  struct UncontractionEffects {
    // Nets in which v reappeared as an additional pin (reverted deletes).
    std::vector<NetID> restored_pin_nets;
    // Nets whose pin slot switched back from u to v (reverted relinks).
    std::vector<NetID> relinked_nets;

    void clear() {
      restored_pin_nets.clear();
      relinked_nets.clear();
    }
  };

  void uncontract(const Memento& memento) {
    UncontractionEffects effects;
    uncontract(memento, effects);
  }

  // Reverses the most recent un-reversed contraction (strict LIFO).
  // Delete and relink reversals are told apart by peeking one slot past
  // the current pin range: the parked pin is v iff the range is still
  // inside the net's original extent.
  void uncontract(const Memento& memento, UncontractionEffects& effects) {
    const VertexID u = memento.u;
    const VertexID v = memento.v;
    if (v >= initialNumVertices() || _vertex_enabled[v] || !_vertex_enabled[u]) {
      throw PreconditionError("uncontract: memento out of order");
    }
    effects.clear();

    _vertex_enabled[v] = true;
    ++_current_num_vertices;
    _vertex_weight[u] -= _vertex_weight[v];

    _relevant.reset();
    for (const NetID e : _incidence[v]) {
      _relevant.set(e);
    }

    size_t i = 0;
    while (i < _incidence[u].size()) {
      const NetID e = _incidence[u][i];
      if (_relevant[e]) {
        NetHandle& handle = _nets[e];
        const size_t original_size = _nets[e + 1].first - handle.first;
        VertexID* const pin_begin = _pins.data() + handle.first;
        if (handle.size < original_size && pin_begin[handle.size] == v) {
          // Revert delete: v reappears at the end of the pin range.
          ++handle.size;
          ++_current_num_pins;
          _fingerprint[e] += square(v);
          effects.restored_pin_nets.push_back(e);
          ++i;
        } else {
          // Revert relink: u's slot goes back to v, e leaves I(u).
          for (size_t slot = 0; slot < handle.size; ++slot) {
            if (pin_begin[slot] == u) {
              pin_begin[slot] = v;
              break;
            }
          }
          _fingerprint[e] -= square(u);
          _fingerprint[e] += square(v);
          _incidence[u][i] = _incidence[u].back();
          _incidence[u].pop_back();
          effects.relinked_nets.push_back(e);
        }
      } else {
        ++i;
      }
    }
  }

  // Disables a net and removes it from the incidence lists of its pins.
  void removeNet(const NetID e) {
    HYPAR_ASSERT(_net_enabled[e]);
    for (const VertexID pin : pins(e)) {
      removeIncidentNet(pin, e);
    }
    _net_enabled[e] = false;
    --_current_num_nets;
    _current_num_pins -= _nets[e].size;
  }

  // Re-enables a net removed by removeNet. The pin range is untouched by
  // removal, so re-adding the incidence entries restores the net exactly.
  void restoreNet(const NetID e) {
    HYPAR_ASSERT(!_net_enabled[e]);
    _net_enabled[e] = true;
    ++_current_num_nets;
    _current_num_pins += _nets[e].size;
    for (const VertexID pin : pins(e)) {
      _incidence[pin].push_back(e);
    }
  }

  bool containsPin(const NetID e, const VertexID v) const {
    const auto ps = pins(e);
    return std::find(ps.begin(), ps.end(), v) != ps.end();
  }

  // Neighbors of v (all co-pins over incident nets), deduplicated.
  std::vector<VertexID> neighbors(const VertexID v) const {
    std::vector<VertexID> result;
    for (const NetID e : incidentNets(v)) {
      for (const VertexID pin : pins(e)) {
        if (pin != v) {
          result.push_back(pin);
        }
      }
    }
    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
  }

  // Full scan of the incidence symmetry and fingerprint invariants.
  bool isConsistent() const {
    size_t pin_count = 0;
    for (NetID e = 0; e < initialNumNets(); ++e) {
      if (!_net_enabled[e]) {
        continue;
      }
      pin_count += _nets[e].size;
      Fingerprint fp = 0;
      std::vector<VertexID> seen;
      for (const VertexID pin : pins(e)) {
        if (pin >= initialNumVertices() || !_vertex_enabled[pin]) {
          return false;
        }
        const auto nets_of_pin = incidentNets(pin);
        if (std::find(nets_of_pin.begin(), nets_of_pin.end(), e) == nets_of_pin.end()) {
          return false;
        }
        seen.push_back(pin);
        fp += square(pin);
      }
      std::sort(seen.begin(), seen.end());
      if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
        return false;
      }
      if (fp != _fingerprint[e]) {
        return false;
      }
    }
    for (VertexID v = 0; v < initialNumVertices(); ++v) {
      if (!_vertex_enabled[v]) {
        continue;
      }
      for (const NetID e : incidentNets(v)) {
        if (!_net_enabled[e] || !containsPin(e, v)) {
          return false;
        }
      }
    }
    return pin_count == _current_num_pins;
  }

  bool operator== (const Hypergraph& other) const {
    if (initialNumVertices() != other.initialNumVertices() ||
        initialNumNets() != other.initialNumNets() ||
        _current_num_pins != other._current_num_pins ||
        _vertex_enabled != other._vertex_enabled ||
        _net_enabled != other._net_enabled ||
        _vertex_weight != other._vertex_weight ||
        _net_weight != other._net_weight ||
        _fingerprint != other._fingerprint) {
      return false;
    }
    for (NetID e = 0; e < initialNumNets(); ++e) {
      auto lhs = pins(e);
      auto rhs = other.pins(e);
      if (!std::is_permutation(lhs.begin(), lhs.end(), rhs.begin(), rhs.end())) {
        return false;
      }
    }
    for (VertexID v = 0; v < initialNumVertices(); ++v) {
      auto lhs = incidentNets(v);
      auto rhs = other.incidentNets(v);
      if (!std::is_permutation(lhs.begin(), lhs.end(), rhs.begin(), rhs.end())) {
        return false;
      }
    }
    return true;
  }

 private:
  struct NetHandle {
    size_t first = 0;
    size_t size = 0;
  };

  static Fingerprint square(const VertexID v) {
    return static_cast<Fingerprint>(v) * static_cast<Fingerprint>(v);
  }

  void removeIncidentNet(const VertexID v, const NetID e) {
    auto& list = _incidence[v];
    for (size_t i = 0; i < list.size(); ++i) {
      if (list[i] == e) {
        list[i] = list.back();
        list.pop_back();
        return;
      }
    }
    HYPAR_ASSERT(false);
  }

  std::vector<Weight> _vertex_weight;
  std::vector<Weight> _net_weight;
  std::vector<std::vector<NetID>> _incidence;
  std::vector<VertexID> _pins;
  std::vector<NetHandle> _nets;  // one sentinel entry past the last net
  std::vector<uint8_t> _vertex_enabled;
  std::vector<uint8_t> _net_enabled;
  std::vector<Fingerprint> _fingerprint;
  VertexID _current_num_vertices = 0;
  NetID _current_num_nets = 0;
  size_t _current_num_pins = 0;
  FastResetFlagArray _relevant;
};

}  // namespace hypar::ds
