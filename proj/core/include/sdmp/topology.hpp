#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sdmp::topo {

struct NodeId {
  std::string value;

  NodeId() = default;
  NodeId(std::string v) : value(std::move(v)) {}  // NOLINT(google-explicit-constructor)
  NodeId(const char* v) : value(v) {}             // NOLINT(google-explicit-constructor)

  [[nodiscard]] const std::string& str() const noexcept { return value; }
  friend auto operator<=>(const NodeId&, const NodeId&) = default;
  friend bool operator==(const NodeId&, const NodeId&) = default;
};

enum class NodeKind { Station, AccessPoint };

std::string_view to_string(NodeKind kind) noexcept;

struct Node {
  NodeId id;
  NodeKind kind = NodeKind::Station;
  std::string bss;
  double compromise_prob = 0.0;
  bool relay_allowed = false;

  friend bool operator==(const Node&, const Node&) = default;
};

/// Sensible relay default: access points forward, stations do not.
inline bool default_relay_allowed(NodeKind kind) noexcept {
  return kind == NodeKind::AccessPoint;
}

inline constexpr std::string_view kDistributionMedium = "ds";

struct Link {
  NodeId a;
  NodeId b;
  std::int64_t latency = 1;
  std::string medium;  // empty means "derive from endpoints"

  friend bool operator==(const Link&, const Link&) = default;
};

struct BssCell {
  std::vector<NodeId> access_points;
  std::vector<NodeId> stations;
};

struct Violation {
  std::string rule;
  std::string subject;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Immutable node/link graph. Construction indexes but does not validate, so
/// deliberately broken topologies can be built and passed to validate().
class Topology {
 public:
  Topology() = default;
  Topology(std::vector<Node> nodes, std::vector<Link> links);

  [[nodiscard]] const std::vector<Node>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] const std::vector<Link>& links() const noexcept { return links_; }

  [[nodiscard]] bool contains(const NodeId& id) const { return index_.contains(id); }
  [[nodiscard]] const Node* find(const NodeId& id) const;
  /// Throws UnknownNode.
  [[nodiscard]] const Node& node(const NodeId& id) const;
  [[nodiscard]] std::set<NodeId> neighbors(const NodeId& id) const;
  /// First link (in file order) joining a and b, or nullptr.
  [[nodiscard]] const Link* link_between(const NodeId& a, const NodeId& b) const;

  [[nodiscard]] std::map<std::string, BssCell> bss_map() const;
  [[nodiscard]] std::map<NodeId, double> compromise_probs() const;

  friend bool operator==(const Topology& lhs, const Topology& rhs) {
    return lhs.nodes_ == rhs.nodes_ && lhs.links_ == rhs.links_;
  }

 private:
  std::vector<Node> nodes_;
  std::vector<Link> links_;
  std::map<NodeId, std::size_t> index_;
  std::map<NodeId, std::set<NodeId>> adjacency_;
  std::map<std::pair<NodeId, NodeId>, std::size_t> link_index_;
};

/// Empty iff every structural rule holds. Rule names: unique-id, empty-id,
/// prob-range, bss-membership, one-ap-per-bss, link-endpoints,
/// latency-positive, infrastructure-mode.
std::vector<Violation> validate(const Topology& topo);

/// Parses the scenario JSON without structural validation. Throws ParseError.
Topology parse_topology(std::string_view json_text);
/// parse_topology + validate. Throws ParseError or ValidationError.
Topology load_topology(std::string_view json_text);

/// Canonical JSON with every optional field spelled out.
std::string serialize_topology(const Topology& topo);

}  // namespace sdmp::topo
