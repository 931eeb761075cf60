#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "sdmp/topology.hpp"

namespace sdmp::routing {

using topo::NodeId;
using topo::Topology;

struct Path {
  std::vector<NodeId> nodes;

  [[nodiscard]] const NodeId& source() const { return nodes.front(); }
  [[nodiscard]] const NodeId& destination() const { return nodes.back(); }
  /// Nodes strictly between the endpoints.
  [[nodiscard]] std::span<const NodeId> interior() const {
    if (nodes.size() < 2) return {};
    return std::span<const NodeId>(nodes).subspan(1, nodes.size() - 2);
  }
  [[nodiscard]] std::size_t hop_count() const noexcept {
    return nodes.empty() ? 0 : nodes.size() - 1;
  }

  friend auto operator<=>(const Path&, const Path&) = default;
  friend bool operator==(const Path&, const Path&) = default;
};

struct PathSet {
  std::vector<Path> paths;
  bool disjoint = true;

  [[nodiscard]] std::size_t size() const noexcept { return paths.size(); }
  friend bool operator==(const PathSet&, const PathSet&) = default;
};

struct SecurityCost {
  double value = 0.0;

  friend auto operator<=>(const SecurityCost&, const SecurityCost&) = default;
};

using ProbabilityMap = std::map<NodeId, double>;

inline constexpr std::size_t kUnlimited = std::numeric_limits<std::size_t>::max();

/// Up to k_max pairwise interior-disjoint s-t paths, maximal up to k_max.
/// Interior nodes must be relay_allowed; a direct s-t link is a path with an
/// empty interior. Paths are returned in lexicographic node order.
/// Throws UnknownNode, ConfigError (s == t) or NoPath.
PathSet max_disjoint_paths(const Topology& topo, const NodeId& s, const NodeId& t,
                           std::size_t k_max = kUnlimited);

/// 1 - prod(1 - p_v) over the interior. Throws MissingProbability.
SecurityCost security_cost(const Path& path, const ProbabilityMap& probs);

/// The min(m, |ps|) cheapest paths, ascending cost then node sequence.
PathSet select_paths(const PathSet& ps, std::size_t m, const ProbabilityMap& probs);

[[nodiscard]] bool interiors_disjoint(std::span<const Path> paths);
/// Consecutive nodes linked, no repeats, interior relay_allowed.
[[nodiscard]] bool is_valid_path(const Topology& topo, const Path& path);

}  // namespace sdmp::routing
