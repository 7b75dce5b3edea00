#include "sgplan/scene_graph.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sgplan {

using nlohmann::json;

std::string attr_kind_name(AttrKind k) {
  switch (k) {
    case AttrKind::Object: return "object";
    case AttrKind::Room: return "room";
    case AttrKind::Floor: return "floor";
    case AttrKind::Custom: return "custom";
  }
  return "?";
}

static AttrKind attr_kind_from(const std::string& s) {
  if (s == "object") return AttrKind::Object;
  if (s == "room") return AttrKind::Room;
  if (s == "floor") return AttrKind::Floor;
  return AttrKind::Custom;
}

size_t SceneGraph::node_index(NodeId id) const {
  auto it = node_pos_.find(id);
  if (it == node_pos_.end())
    throw UnknownNodeError("unknown node id " + std::to_string(id));
  return it->second;
}

const Attribute* SceneGraph::find_attribute(int attr_id) const {
  auto it = attr_pos_.find(attr_id);
  return it == attr_pos_.end() ? nullptr : &attributes[it->second];
}

const Attribute& SceneGraph::attribute(int attr_id) const {
  const Attribute* a = find_attribute(attr_id);
  if (!a) throw SceneError("unknown attribute id " + std::to_string(attr_id));
  return *a;
}

const std::vector<std::string>& SceneGraph::label(NodeId s) const {
  return node_labels_[node_index(s)];
}

LabelSet SceneGraph::label_set(NodeId s) const {
  const auto& l = label(s);
  return LabelSet(l.begin(), l.end());
}

const std::vector<int>& SceneGraph::attributes_at(NodeId s) const {
  return node_attrs_[node_index(s)];
}

void SceneGraph::finalize() {
  node_pos_.clear();
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (!node_pos_.emplace(nodes[i].id, i).second)
      throw InvariantViolation("duplicate node id " + std::to_string(nodes[i].id));
  }
  attr_pos_.clear();
  for (size_t i = 0; i < attributes.size(); ++i) {
    if (!attr_pos_.emplace(attributes[i].id, i).second)
      throw InvariantViolation("duplicate attribute id " + std::to_string(attributes[i].id));
  }

  adjacency_.assign(nodes.size(), {});
  for (const SceneEdge& e : edges) {
    if (!(e.cost > 0))
      throw InvariantViolation("non-positive edge cost on edge " + std::to_string(e.u) +
                               "-" + std::to_string(e.v));
    size_t ui = node_index(e.u), vi = node_index(e.v);
    adjacency_[ui].push_back({vi, e.cost});
    adjacency_[vi].push_back({ui, e.cost});
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());

  node_attrs_.assign(nodes.size(), {});
  for (size_t ai = 0; ai < attributes.size(); ++ai) {
    for (NodeId s : attributes[ai].region) {
      if (!has_node(s))
        throw InvariantViolation("attribute " + std::to_string(attributes[ai].id) +
                                 " references unknown node " + std::to_string(s));
      node_attrs_[node_index(s)].push_back(static_cast<int>(ai));
    }
  }
  node_labels_.assign(nodes.size(), {});
  for (size_t ni = 0; ni < nodes.size(); ++ni) {
    std::vector<std::string> l;
    for (int ai : node_attrs_[ni]) l.push_back(attributes[static_cast<size_t>(ai)].prop_id());
    std::sort(l.begin(), l.end(), prop_less);
    node_labels_[ni] = std::move(l);
  }

  // Level grouping: Object, Room, Floor, then customs by first appearance.
  levels_.clear();
  auto add_level = [&](AttrKind k, const std::string& custom) {
    AttributeLevel lvl;
    lvl.kind = k;
    lvl.custom_kind = custom;
    for (size_t i = 0; i < attributes.size(); ++i)
      if (attributes[i].kind == k && (k != AttrKind::Custom || attributes[i].custom_kind == custom))
        lvl.attr_indices.push_back(static_cast<int>(i));
    if (!lvl.attr_indices.empty()) levels_.push_back(std::move(lvl));
  };
  add_level(AttrKind::Object, "");
  add_level(AttrKind::Room, "");
  add_level(AttrKind::Floor, "");
  std::vector<std::string> customs;
  for (const Attribute& a : attributes)
    if (a.kind == AttrKind::Custom &&
        std::find(customs.begin(), customs.end(), a.custom_kind) == customs.end())
      customs.push_back(a.custom_kind);
  for (const std::string& c : customs) add_level(AttrKind::Custom, c);

  validate();
}

void SceneGraph::validate() const {
  for (const Attribute& a : attributes) {
    if (a.region.empty())
      throw InvariantViolation("attribute " + std::to_string(a.id) + " has an empty region");
    for (NodeId s : a.region)
      if (!has_node(s))
        throw InvariantViolation("attribute " + std::to_string(a.id) +
                                 " references unknown node " + std::to_string(s));
    if (a.parent) {
      const Attribute* p = find_attribute(*a.parent);
      if (!p)
        throw InvariantViolation("attribute " + std::to_string(a.id) +
                                 " references unknown parent " + std::to_string(*a.parent));
      std::set<NodeId> parent_region(p->region.begin(), p->region.end());
      for (NodeId s : a.region)
        if (!parent_region.count(s))
          throw InvariantViolation("attribute " + std::to_string(a.id) + " (" + a.name +
                                   ") region is not contained in parent " +
                                   std::to_string(*a.parent));
    }
    for (int c : a.connections)
      if (!find_attribute(c))
        throw InvariantViolation("attribute " + std::to_string(a.id) +
                                 " connects to unknown attribute " + std::to_string(c));
  }

  // Rooms and floors must have pairwise disjoint interiors on their level.
  for (const AttributeLevel& lvl : levels_) {
    if (lvl.kind != AttrKind::Room && lvl.kind != AttrKind::Floor) continue;
    std::vector<std::set<NodeId>> interiors;
    for (int ai : lvl.attr_indices) {
      auto in = region_interior(attributes[static_cast<size_t>(ai)]);
      interiors.emplace_back(in.begin(), in.end());
    }
    for (size_t i = 0; i < interiors.size(); ++i)
      for (size_t j = i + 1; j < interiors.size(); ++j)
        for (NodeId s : interiors[i])
          if (interiors[j].count(s))
            throw InvariantViolation(
                "attributes " +
                std::to_string(attributes[static_cast<size_t>(lvl.attr_indices[i])].id) + " and " +
                std::to_string(attributes[static_cast<size_t>(lvl.attr_indices[j])].id) +
                " have overlapping interiors");
  }
}

std::vector<NodeId> SceneGraph::region_interior(const Attribute& a) const {
  std::set<NodeId> region(a.region.begin(), a.region.end());
  std::vector<NodeId> interior;
  for (NodeId s : a.region) {
    bool inside = true;
    for (const auto& [nb, cost] : adjacency_[node_index(s)]) {
      (void)cost;
      if (!region.count(nodes[nb].id)) {
        inside = false;
        break;
      }
    }
    if (inside) interior.push_back(s);
  }
  return interior;
}

std::vector<NodeId> SceneGraph::region_boundary(const Attribute& a) const {
  auto interior = region_interior(a);
  std::set<NodeId> in(interior.begin(), interior.end());
  std::vector<NodeId> boundary;
  for (NodeId s : a.region)
    if (!in.count(s)) boundary.push_back(s);
  return boundary;
}

std::vector<double> SceneGraph::dijkstra_multi(const std::vector<size_t>& sources,
                                               const std::vector<double>& potentials) const {
  std::vector<double> dist(nodes.size(), kInfDist);
  using Item = std::pair<double, size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  for (size_t i = 0; i < sources.size(); ++i) {
    double p = potentials.empty() ? 0.0 : potentials[i];
    if (p == kInfDist) continue;
    if (p < dist[sources[i]]) {
      dist[sources[i]] = p;
      open.push({p, sources[i]});
    }
  }
  while (!open.empty()) {
    auto [d, u] = open.top();
    open.pop();
    if (d > dist[u]) continue;
    for (const auto& [v, c] : adjacency_[u]) {
      if (d + c < dist[v]) {
        dist[v] = d + c;
        open.push({d + c, v});
      }
    }
  }
  return dist;
}

std::vector<double> SceneGraph::dijkstra_from(size_t source_idx,
                                              std::vector<size_t>* parents) const {
  std::vector<double> dist(nodes.size(), kInfDist);
  if (parents) parents->assign(nodes.size(), SIZE_MAX);
  using Item = std::pair<double, size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[source_idx] = 0;
  open.push({0, source_idx});
  while (!open.empty()) {
    auto [d, u] = open.top();
    open.pop();
    if (d > dist[u]) continue;
    for (const auto& [v, c] : adjacency_[u]) {
      double nd = d + c;
      if (nd < dist[v]) {
        dist[v] = nd;
        if (parents) (*parents)[v] = u;
        open.push({nd, v});
      } else if (parents && nd == dist[v] && (*parents)[v] != SIZE_MAX &&
                 nodes[u].id < nodes[(*parents)[v]].id) {
        (*parents)[v] = u;  // deterministic tie-break toward smaller node id
      }
    }
  }
  return dist;
}

std::pair<double, NodeId> SceneGraph::shortest_dist(NodeId s,
                                                    const std::vector<NodeId>& targets) const {
  size_t src = node_index(s);
  std::set<size_t> target_idx;
  for (NodeId t : targets) target_idx.insert(node_index(t));
  if (target_idx.count(src)) return {0.0, s};

  std::vector<double> dist(nodes.size(), kInfDist);
  using Item = std::pair<double, size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  dist[src] = 0;
  open.push({0, src});
  while (!open.empty()) {
    auto [d, u] = open.top();
    open.pop();
    if (d > dist[u]) continue;
    if (target_idx.count(u)) return {d, nodes[u].id};
    for (const auto& [v, c] : adjacency_[u]) {
      if (d + c < dist[v]) {
        dist[v] = d + c;
        open.push({d + c, v});
      }
    }
  }
  return {kInfDist, s};
}

double SceneGraph::euclidean(const std::array<double, 3>& a,
                             const std::array<double, 3>& b) const {
  double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

Alphabet SceneGraph::alphabet() const {
  Alphabet ab;
  for (const Attribute& a : attributes) {
    ab.add({a.prop_id(), a.name + " " + std::to_string(a.id)});
    ab.add_alias(a.token(), a.prop_id());
  }
  return ab;
}

// ---------------------------------------------------------------------------
// JSON scene format

std::string scene_to_json_text(const SceneGraph& g) {
  json j;
  j["nodes"] = json::array();
  for (const SceneNode& n : g.nodes)
    j["nodes"].push_back({{"id", n.id}, {"xyz", n.xyz}, {"floor", n.floor}});
  j["edges"] = json::array();
  for (const SceneEdge& e : g.edges)
    j["edges"].push_back({{"u", e.u}, {"v", e.v}, {"cost", e.cost}});
  j["attributes"] = json::array();
  for (const Attribute& a : g.attributes) {
    json ja = {{"id", a.id},
               {"name", a.name},
               {"kind", a.kind == AttrKind::Custom ? a.custom_kind : attr_kind_name(a.kind)},
               {"node_ids", a.region},
               {"center", a.center},
               {"connections", a.connections}};
    if (a.parent) ja["parent"] = *a.parent;
    j["attributes"].push_back(std::move(ja));
  }
  return j.dump(2) + "\n";
}

SceneGraph scene_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SceneParseError(std::string("scene JSON parse failure: ") + e.what());
  }
  SceneGraph g;
  try {
    for (const auto& jn : j.at("nodes")) {
      SceneNode n;
      n.id = jn.at("id").get<NodeId>();
      auto xyz = jn.at("xyz");
      n.xyz = {xyz.at(0).get<double>(), xyz.at(1).get<double>(), xyz.at(2).get<double>()};
      n.floor = jn.value("floor", 0);
      g.nodes.push_back(n);
    }
    for (const auto& je : j.at("edges")) {
      g.edges.push_back({je.at("u").get<NodeId>(), je.at("v").get<NodeId>(),
                         je.at("cost").get<double>()});
    }
    for (const auto& ja : j.value("attributes", json::array())) {
      Attribute a;
      a.id = ja.at("id").get<int>();
      a.name = ja.at("name").get<std::string>();
      std::string kind = ja.at("kind").get<std::string>();
      a.kind = attr_kind_from(kind);
      if (a.kind == AttrKind::Custom) a.custom_kind = kind;
      a.region = ja.at("node_ids").get<std::vector<NodeId>>();
      auto c = ja.at("center");
      a.center = {c.at(0).get<double>(), c.at(1).get<double>(), c.at(2).get<double>()};
      a.connections = ja.value("connections", std::vector<int>{});
      if (ja.contains("parent")) a.parent = ja.at("parent").get<int>();
      g.attributes.push_back(std::move(a));
    }
  } catch (const json::exception& e) {
    throw SceneParseError(std::string("scene JSON schema failure: ") + e.what());
  }
  g.finalize();
  return g;
}

SceneGraph load_scene(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SceneParseError("cannot open scene file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return scene_from_json_text(buf.str());
}

void save_scene(const SceneGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw SceneError("cannot write scene file: " + path);
  out << scene_to_json_text(g);
}

// ---------------------------------------------------------------------------
// Attribute hierarchy export

std::string attribute_hierarchy(const SceneGraph& g) {
  const AttributeLevel* floors = nullptr;
  const AttributeLevel* rooms = nullptr;
  const AttributeLevel* objects = nullptr;
  for (const AttributeLevel& lvl : g.levels()) {
    if (lvl.kind == AttrKind::Floor) floors = &lvl;
    if (lvl.kind == AttrKind::Room) rooms = &lvl;
    if (lvl.kind == AttrKind::Object) objects = &lvl;
  }
  if (!floors || !rooms || !objects)
    throw MissingLevelError("attribute hierarchy requires floor, room and object levels");

  auto sorted_by_id = [&](const std::vector<int>& idxs) {
    std::vector<int> v = idxs;
    std::sort(v.begin(), v.end(), [&](int a, int b) {
      return g.attributes[static_cast<size_t>(a)].id < g.attributes[static_cast<size_t>(b)].id;
    });
    return v;
  };

  // A room owns an object when it is the object's declared parent, or (when
  // no parent is set) when the room's region contains the object's node
  // nearest to the object center.
  auto room_of_object = [&](const Attribute& obj) -> int {
    if (obj.parent) {
      const Attribute* p = g.find_attribute(*obj.parent);
      if (p && p->kind == AttrKind::Room) return *obj.parent;
    }
    NodeId best = obj.region.front();
    double best_d = kInfDist;
    for (NodeId s : obj.region) {
      double d = g.euclidean(g.nodes[g.node_index(s)].xyz, obj.center);
      if (d < best_d || (d == best_d && s < best)) {
        best_d = d;
        best = s;
      }
    }
    for (int ri : sorted_by_id(rooms->attr_indices)) {
      const Attribute& r = g.attributes[static_cast<size_t>(ri)];
      if (std::find(r.region.begin(), r.region.end(), best) != r.region.end()) return r.id;
    }
    return -1;
  };

  auto floor_of_room = [&](const Attribute& room) -> int {
    if (room.parent) return *room.parent;
    std::set<NodeId> region(room.region.begin(), room.region.end());
    for (int fi : sorted_by_id(floors->attr_indices)) {
      const Attribute& f = g.attributes[static_cast<size_t>(fi)];
      std::set<NodeId> fr(f.region.begin(), f.region.end());
      if (std::includes(fr.begin(), fr.end(), region.begin(), region.end())) return f.id;
    }
    return -1;
  };

  std::ostringstream out;
  for (int fi : sorted_by_id(floors->attr_indices)) {
    const Attribute& f = g.attributes[static_cast<size_t>(fi)];
    out << f.name << " (" << f.id << "):\n";
    for (int ri : sorted_by_id(rooms->attr_indices)) {
      const Attribute& r = g.attributes[static_cast<size_t>(ri)];
      if (floor_of_room(r) != f.id) continue;
      std::vector<int> conns = r.connections;
      std::sort(conns.begin(), conns.end());
      out << "  " << r.name << " (" << r.id << ") [";
      for (size_t i = 0; i < conns.size(); ++i) out << (i ? ", " : "") << conns[i];
      out << "]:\n";
      for (int oi : sorted_by_id(objects->attr_indices)) {
        const Attribute& o = g.attributes[static_cast<size_t>(oi)];
        if (room_of_object(o) != r.id) continue;
        out << "    " << o.name << " (" << o.id << ")\n";
      }
    }
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Synthetic scene generator

SceneGraph generate_scene(const SceneGenSpec& spec, uint64_t seed) {
  if (spec.floors < 1 || spec.rooms_x < 1 || spec.rooms_y < 1 || spec.room_cells < 1 ||
      spec.objects_per_room < 0 || !(spec.pitch > 0) ||
      spec.staircase_room >= spec.rooms_x * spec.rooms_y || spec.staircase_room < 0)
    throw InvalidSpecError("invalid scene generator parameters");

  static const char* kObjectNames[] = {"oven",  "tv",    "couch", "bed",   "sink",
                                       "chair", "table", "plant", "vase",  "lamp",
                                       "desk",  "shelf", "piano", "stove", "mirror"};
  static const char* kRoomNames[] = {"bedroom", "kitchen", "living_room", "bathroom",
                                     "dining_room", "corridor", "office", "pantry"};

  std::mt19937_64 rng(seed);
  SceneGraph g;

  const int rc = spec.room_cells;
  const int fw = spec.rooms_x * rc;  // floor width in cells
  const int fh = spec.rooms_y * rc;
  const double floor_height = 2.0;  // dyadic, keeps vertical costs exact

  auto node_id = [&](int f, int x, int y) {
    return static_cast<NodeId>(f * fw * fh + y * fw + x);
  };

  for (int f = 0; f < spec.floors; ++f) {
    for (int y = 0; y < fh; ++y) {
      for (int x = 0; x < fw; ++x) {
        g.nodes.push_back({node_id(f, x, y),
                           {x * spec.pitch, y * spec.pitch, f * floor_height},
                           f});
      }
    }
  }

  auto same_room = [&](int x1, int y1, int x2, int y2) {
    return x1 / rc == x2 / rc && y1 / rc == y2 / rc;
  };

  // In-room 4-connected edges plus one door cell pair per adjacent room wall.
  for (int f = 0; f < spec.floors; ++f) {
    for (int y = 0; y < fh; ++y) {
      for (int x = 0; x < fw; ++x) {
        if (x + 1 < fw && (same_room(x, y, x + 1, y) || y % rc == rc / 2))
          g.edges.push_back({node_id(f, x, y), node_id(f, x + 1, y), spec.pitch});
        if (y + 1 < fh && (same_room(x, y, x, y + 1) || x % rc == rc / 2))
          g.edges.push_back({node_id(f, x, y), node_id(f, x, y + 1), spec.pitch});
      }
    }
  }

  int next_attr_id = 1;

  // Floors.
  std::vector<int> floor_ids;
  for (int f = 0; f < spec.floors; ++f) {
    Attribute a;
    a.id = next_attr_id++;
    a.name = "floor";
    a.kind = AttrKind::Floor;
    for (int y = 0; y < fh; ++y)
      for (int x = 0; x < fw; ++x) a.region.push_back(node_id(f, x, y));
    a.center = {(fw - 1) * spec.pitch / 2, (fh - 1) * spec.pitch / 2, f * floor_height};
    floor_ids.push_back(a.id);
    g.attributes.push_back(std::move(a));
  }

  // Rooms, row-major per floor; adjacent rooms are connected (door exists).
  std::vector<std::vector<int>> room_ids(static_cast<size_t>(spec.floors));
  for (int f = 0; f < spec.floors; ++f) {
    for (int ry = 0; ry < spec.rooms_y; ++ry) {
      for (int rx = 0; rx < spec.rooms_x; ++rx) {
        Attribute a;
        a.id = next_attr_id++;
        a.name = kRoomNames[(static_cast<size_t>(ry) * static_cast<size_t>(spec.rooms_x) + static_cast<size_t>(rx)) %
                            (sizeof(kRoomNames) / sizeof(kRoomNames[0]))];
        a.kind = AttrKind::Room;
        a.parent = floor_ids[static_cast<size_t>(f)];
        for (int y = ry * rc; y < (ry + 1) * rc; ++y)
          for (int x = rx * rc; x < (rx + 1) * rc; ++x) a.region.push_back(node_id(f, x, y));
        a.center = {(rx * rc + (rc - 1) / 2.0) * spec.pitch,
                    (ry * rc + (rc - 1) / 2.0) * spec.pitch, f * floor_height};
        room_ids[static_cast<size_t>(f)].push_back(a.id);
        g.attributes.push_back(std::move(a));
      }
    }
  }
  for (int f = 0; f < spec.floors; ++f) {
    auto room_at = [&](int rx, int ry) {
      return room_ids[static_cast<size_t>(f)][static_cast<size_t>(ry * spec.rooms_x + rx)];
    };
    for (int ry = 0; ry < spec.rooms_y; ++ry)
      for (int rx = 0; rx < spec.rooms_x; ++rx) {
        auto& attr = g.attributes[static_cast<size_t>(room_at(rx, ry) - 1)];
        if (rx + 1 < spec.rooms_x) {
          attr.connections.push_back(room_at(rx + 1, ry));
          g.attributes[static_cast<size_t>(room_at(rx + 1, ry) - 1)].connections.push_back(attr.id);
        }
        if (ry + 1 < spec.rooms_y) {
          attr.connections.push_back(room_at(rx, ry + 1));
          g.attributes[static_cast<size_t>(room_at(rx, ry + 1) - 1)].connections.push_back(attr.id);
        }
      }
  }

  // Staircases: one attribute pair per adjacent floor pair, in the corner of
  // the chosen room, plus the vertical edge.
  for (int f = 0; f + 1 < spec.floors; ++f) {
    int srx = spec.staircase_room % spec.rooms_x;
    int sry = spec.staircase_room / spec.rooms_x;
    int sx = srx * rc, sy = sry * rc;
    g.edges.push_back({node_id(f, sx, sy), node_id(f + 1, sx, sy), floor_height});
    for (int side = 0; side < 2; ++side) {
      Attribute a;
      a.id = next_attr_id++;
      a.name = "staircase";
      a.kind = AttrKind::Object;
      int ff = f + side;
      a.region = {node_id(ff, sx, sy)};
      if (sx + 1 < fw && same_room(sx, sy, sx + 1, sy)) a.region.push_back(node_id(ff, sx + 1, sy));
      a.center = {sx * spec.pitch, sy * spec.pitch, ff * floor_height};
      a.parent = room_ids[static_cast<size_t>(ff)][static_cast<size_t>(spec.staircase_room)];
      g.attributes.push_back(std::move(a));
    }
  }

  // Objects: seeded placement at distinct cells away from doors/stairs.
  for (int f = 0; f < spec.floors; ++f) {
    for (int ry = 0; ry < spec.rooms_y; ++ry) {
      for (int rx = 0; rx < spec.rooms_x; ++rx) {
        std::set<std::pair<int, int>> used;
        for (int k = 0; k < spec.objects_per_room; ++k) {
          std::uniform_int_distribution<int> cell(1, rc - 2 >= 1 ? rc - 2 : rc - 1);
          int ox = 0, oy = 0;
          for (int tries = 0; tries < 64; ++tries) {
            ox = rx * rc + (rc > 2 ? cell(rng) : 0);
            oy = ry * rc + (rc > 2 ? cell(rng) : 0);
            if (!used.count({ox, oy})) break;
          }
          if (used.count({ox, oy})) continue;  // room too small for more objects
          used.insert({ox, oy});
          Attribute a;
          a.id = next_attr_id++;
          a.name = kObjectNames[static_cast<size_t>(
              std::uniform_int_distribution<int>(0, sizeof(kObjectNames) / sizeof(kObjectNames[0]) - 1)(rng))];
          a.kind = AttrKind::Object;
          a.region = {node_id(f, ox, oy)};
          for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}}) {
            int nx = ox + dx, ny = oy + dy;
            if (nx >= rx * rc && nx < (rx + 1) * rc && ny >= ry * rc && ny < (ry + 1) * rc)
              a.region.push_back(node_id(f, nx, ny));
          }
          a.center = {ox * spec.pitch, oy * spec.pitch, f * floor_height};
          a.parent = room_ids[static_cast<size_t>(f)][static_cast<size_t>(ry * spec.rooms_x + rx)];
          g.attributes.push_back(std::move(a));
        }
      }
    }
  }

  g.finalize();
  return g;
}

}  // namespace sgplan
