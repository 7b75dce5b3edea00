#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sgplan/ltl.hpp"

namespace sgplan {

inline constexpr double kInfDist = std::numeric_limits<double>::infinity();

using NodeId = uint32_t;

enum class AttrKind { Object, Room, Floor, Custom };

std::string attr_kind_name(AttrKind k);

struct SceneNode {
  NodeId id = 0;
  std::array<double, 3> xyz{0, 0, 0};
  int floor = 0;
};

struct SceneEdge {
  NodeId u = 0, v = 0;
  double cost = 0;
};

struct Attribute {
  int id = 0;
  std::string name;
  AttrKind kind = AttrKind::Object;
  std::string custom_kind;           // set when kind == Custom
  std::vector<NodeId> region;        // V_a, node ids
  std::array<double, 3> center{0, 0, 0};
  std::vector<int> connections;      // same-level attribute ids (rooms)
  std::optional<int> parent;         // attribute id on the level above

  std::string prop_id() const { return "p" + std::to_string(id); }
  std::string token() const { return name + "_" + std::to_string(id); }
};

class SceneError : public std::runtime_error {
 public:
  explicit SceneError(const std::string& what) : std::runtime_error(what) {}
};
class SceneParseError : public SceneError {
 public:
  using SceneError::SceneError;
};
class InvariantViolation : public SceneError {
 public:
  using SceneError::SceneError;
};
class UnknownNodeError : public SceneError {
 public:
  using SceneError::SceneError;
};

struct AttributeLevel {
  AttrKind kind = AttrKind::Object;
  std::string custom_kind;
  std::vector<int> attr_indices;  // indices into SceneGraph::attributes
};

/// Immutable after load/generate/finalize; all queries are read-only.
class SceneGraph {
 public:
  std::vector<SceneNode> nodes;
  std::vector<SceneEdge> edges;
  std::vector<Attribute> attributes;

  /// Validates invariants and builds the adjacency, label, and level caches.
  /// Must be called after the public fields are filled in.
  void finalize();

  size_t node_index(NodeId id) const;
  bool has_node(NodeId id) const { return node_pos_.count(id) != 0; }
  const Attribute* find_attribute(int attr_id) const;
  const Attribute& attribute(int attr_id) const;

  /// Levels ordered Object, Room, Floor, then Customs; only kinds present.
  const std::vector<AttributeLevel>& levels() const { return levels_; }

  /// Propositions true at node s (canonical "p<ID>" tokens, sorted).
  const std::vector<std::string>& label(NodeId s) const;
  LabelSet label_set(NodeId s) const;
  /// Attribute indices whose region contains s.
  const std::vector<int>& attributes_at(NodeId s) const;

  const std::vector<std::pair<size_t, double>>& neighbors(size_t node_idx) const {
    return adjacency_[node_idx];
  }

  /// Dijkstra distance from s to the nearest node in targets; (inf, s) when
  /// unreachable. Unreachability is a value, not an error.
  std::pair<double, NodeId> shortest_dist(NodeId s, const std::vector<NodeId>& targets) const;

  /// Full single-source field over node indices. parents (optional) receives
  /// the predecessor index per node (ties broken toward the smaller node id,
  /// for deterministic path reconstruction), or SIZE_MAX at sources/unreached.
  std::vector<double> dijkstra_from(size_t source_idx,
                                    std::vector<size_t>* parents = nullptr) const;
  std::vector<double> dijkstra_multi(const std::vector<size_t>& sources,
                                     const std::vector<double>& source_potentials) const;

  /// Combinatorial interior: nodes of the region all of whose neighbors are
  /// also in the region. Boundary is region minus interior.
  std::vector<NodeId> region_interior(const Attribute& a) const;
  std::vector<NodeId> region_boundary(const Attribute& a) const;

  /// Parse/print alphabet: canonical "p<ID>" plus "name_<ID>" aliases.
  Alphabet alphabet() const;

  double euclidean(const std::array<double, 3>& a, const std::array<double, 3>& b) const;

 private:
  std::unordered_map<NodeId, size_t> node_pos_;
  std::vector<std::vector<std::pair<size_t, double>>> adjacency_;
  std::vector<std::vector<int>> node_attrs_;
  std::vector<std::vector<std::string>> node_labels_;
  std::vector<AttributeLevel> levels_;
  std::unordered_map<int, size_t> attr_pos_;

  void validate() const;
};

SceneGraph load_scene(const std::string& path);
void save_scene(const SceneGraph& g, const std::string& path);
SceneGraph scene_from_json_text(const std::string& text);
std::string scene_to_json_text(const SceneGraph& g);

class MissingLevelError : public SceneError {
 public:
  using SceneError::SceneError;
};

/// Nested floors -> rooms (with `(id)` tags and `[connections]`) -> objects
/// text document, deterministically ordered by id.
std::string attribute_hierarchy(const SceneGraph& g);

struct SceneGenSpec {
  int floors = 1;
  int rooms_x = 2;        // rooms-per-floor grid
  int rooms_y = 2;
  int room_cells = 5;     // room is room_cells x room_cells occupancy cells
  int objects_per_room = 2;
  double pitch = 1.0;     // cell pitch in meters (keep dyadic for exact sums)
  int staircase_room = 0; // room grid index hosting the staircase
};

class InvalidSpecError : public SceneError {
 public:
  using SceneError::SceneError;
};

/// Deterministic seeded multi-floor grid scene. Adjacent rooms connect
/// through single door cells; adjacent floors connect through staircase
/// attribute pairs.
SceneGraph generate_scene(const SceneGenSpec& spec, uint64_t seed);

}  // namespace sgplan
