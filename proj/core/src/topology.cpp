#include "sdmp/topology.hpp"

#include <json.hpp>

#include "sdmp/error.hpp"

namespace sdmp::topo {

using nlohmann::json;

std::string_view to_string(NodeKind kind) noexcept {
  return kind == NodeKind::AccessPoint ? "ACCESS_POINT" : "STATION";
}

namespace {

std::string derive_medium(const Node* a, const Node* b) {
  if (a == nullptr || b == nullptr) return "";
  if (a->kind == NodeKind::AccessPoint && b->kind == NodeKind::AccessPoint) {
    return std::string(kDistributionMedium);
  }
  return a->kind == NodeKind::Station ? a->bss : b->bss;
}

std::pair<NodeId, NodeId> ordered(const NodeId& a, const NodeId& b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

}  // namespace

Topology::Topology(std::vector<Node> nodes, std::vector<Link> links)
    : nodes_(std::move(nodes)), links_(std::move(links)) {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    index_.emplace(nodes_[i].id, i);
    adjacency_[nodes_[i].id];
  }
  for (std::size_t i = 0; i < links_.size(); ++i) {
    auto& link = links_[i];
    if (link.medium.empty()) link.medium = derive_medium(find(link.a), find(link.b));
    if (link.a == link.b || !contains(link.a) || !contains(link.b)) continue;
    adjacency_[link.a].insert(link.b);
    adjacency_[link.b].insert(link.a);
    link_index_.emplace(ordered(link.a, link.b), i);
  }
}

const Node* Topology::find(const NodeId& id) const {
  const auto it = index_.find(id);
  return it == index_.end() ? nullptr : &nodes_[it->second];
}

const Node& Topology::node(const NodeId& id) const {
  const Node* n = find(id);
  if (n == nullptr) throw Error(ErrorCode::UnknownNode, id.str());
  return *n;
}

std::set<NodeId> Topology::neighbors(const NodeId& id) const {
  const auto it = adjacency_.find(id);
  if (it == adjacency_.end()) throw Error(ErrorCode::UnknownNode, id.str());
  return it->second;
}

const Link* Topology::link_between(const NodeId& a, const NodeId& b) const {
  const auto it = link_index_.find(ordered(a, b));
  return it == link_index_.end() ? nullptr : &links_[it->second];
}

std::map<std::string, BssCell> Topology::bss_map() const {
  std::map<std::string, BssCell> cells;
  for (const auto& n : nodes_) {
    if (n.bss.empty()) continue;
    auto& cell = cells[n.bss];
    (n.kind == NodeKind::AccessPoint ? cell.access_points : cell.stations).push_back(n.id);
  }
  return cells;
}

std::map<NodeId, double> Topology::compromise_probs() const {
  std::map<NodeId, double> probs;
  for (const auto& n : nodes_) probs.emplace(n.id, n.compromise_prob);
  return probs;
}

std::vector<Violation> validate(const Topology& topo) {
  std::vector<Violation> out;
  auto report = [&out](std::string rule, std::string subject, std::string message) {
    out.push_back({std::move(rule), std::move(subject), std::move(message)});
  };

  std::set<NodeId> seen;
  for (const auto& n : topo.nodes()) {
    if (n.id.str().empty()) report("empty-id", "", "node id must be non-empty");
    if (!seen.insert(n.id).second) report("unique-id", n.id.str(), "node id appears more than once");
    if (!(n.compromise_prob >= 0.0 && n.compromise_prob <= 1.0)) {
      report("prob-range", n.id.str(), "p = " + std::to_string(n.compromise_prob) + " outside [0,1]");
    }
    if (n.bss.empty()) report("bss-membership", n.id.str(), "node belongs to no BSS");
  }

  for (const auto& [bss, cell] : topo.bss_map()) {
    if (cell.access_points.size() != 1) {
      report("one-ap-per-bss", bss,
             "BSS has " + std::to_string(cell.access_points.size()) + " access points");
    }
  }

  for (const auto& link : topo.links()) {
    const std::string name = link.a.str() + "-" + link.b.str();
    const Node* a = topo.find(link.a);
    const Node* b = topo.find(link.b);
    if (a == nullptr || b == nullptr || link.a == link.b) {
      report("link-endpoints", name, "endpoints must be two distinct known nodes");
      continue;
    }
    if (link.latency < 1) report("latency-positive", name, "latency must be >= 1");
    const bool a_sta = a->kind == NodeKind::Station;
    const bool b_sta = b->kind == NodeKind::Station;
    if (a_sta && b_sta) {
      report("infrastructure-mode", name, "station-to-station link");
    } else if ((a_sta || b_sta) && a->bss != b->bss) {
      report("infrastructure-mode", name, "station linked outside its BSS");
    }
  }
  return out;
}

namespace {

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing field \"") + key + "\"");
  return *it;
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_string()) schema_error(where + "." + key, "expected string");
  return v.get<std::string>();
}

NodeKind parse_kind(const std::string& text, const std::string& where) {
  if (text == "STATION") return NodeKind::Station;
  if (text == "ACCESS_POINT") return NodeKind::AccessPoint;
  schema_error(where + ".kind", "expected STATION or ACCESS_POINT, got \"" + text + "\"");
}

}  // namespace

Topology parse_topology(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) schema_error("$", "expected object");
  const auto& jnodes = require(doc, "nodes", "$");
  if (!jnodes.is_array()) schema_error("$.nodes", "expected array");

  std::vector<Node> nodes;
  for (std::size_t i = 0; i < jnodes.size(); ++i) {
    const std::string where = "$.nodes[" + std::to_string(i) + "]";
    const auto& jn = jnodes[i];
    if (!jn.is_object()) schema_error(where, "expected object");
    Node n;
    n.id = require_string(jn, "id", where);
    n.kind = parse_kind(require_string(jn, "kind", where), where);
    n.bss = require_string(jn, "bss", where);
    const auto& p = require(jn, "p", where);
    if (!p.is_number()) schema_error(where + ".p", "expected number");
    n.compromise_prob = p.get<double>();
    n.relay_allowed = default_relay_allowed(n.kind);
    if (const auto it = jn.find("relay_allowed"); it != jn.end()) {
      if (!it->is_boolean()) schema_error(where + ".relay_allowed", "expected boolean");
      n.relay_allowed = it->get<bool>();
    }
    nodes.push_back(std::move(n));
  }

  std::vector<Link> links;
  if (const auto it = doc.find("links"); it != doc.end()) {
    if (!it->is_array()) schema_error("$.links", "expected array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string where = "$.links[" + std::to_string(i) + "]";
      const auto& jl = (*it)[i];
      if (!jl.is_object()) schema_error(where, "expected object");
      Link l;
      l.a = require_string(jl, "a", where);
      l.b = require_string(jl, "b", where);
      if (const auto lat = jl.find("latency"); lat != jl.end()) {
        if (!lat->is_number_integer()) schema_error(where + ".latency", "expected integer");
        l.latency = lat->get<std::int64_t>();
      }
      if (const auto med = jl.find("medium"); med != jl.end()) {
        if (!med->is_string()) schema_error(where + ".medium", "expected string");
        l.medium = med->get<std::string>();
      }
      links.push_back(std::move(l));
    }
  }
  return Topology(std::move(nodes), std::move(links));
}

Topology load_topology(std::string_view json_text) {
  Topology topo = parse_topology(json_text);
  const auto violations = validate(topo);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw Error(ErrorCode::ValidationError, v.rule + " (" + v.subject + "): " + v.message);
  }
  return topo;
}

std::string serialize_topology(const Topology& topo) {
  json doc;
  doc["nodes"] = json::array();
  for (const auto& n : topo.nodes()) {
    doc["nodes"].push_back({{"id", n.id.str()},
                            {"kind", std::string(to_string(n.kind))},
                            {"bss", n.bss},
                            {"p", n.compromise_prob},
                            {"relay_allowed", n.relay_allowed}});
  }
  doc["links"] = json::array();
  for (const auto& l : topo.links()) {
    doc["links"].push_back(
        {{"a", l.a.str()}, {"b", l.b.str()}, {"latency", l.latency}, {"medium", l.medium}});
  }
  return doc.dump(2);
}

}  // namespace sdmp::topo
