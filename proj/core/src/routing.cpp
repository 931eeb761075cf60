#include "sdmp/routing.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "sdmp/error.hpp"

namespace sdmp::routing {

namespace {

// Residual network over split vertices: in(v) = 2i, out(v) = 2i + 1.
class UnitFlowNetwork {
 public:
  struct Arc {
    std::size_t to;
    int cap;
    std::size_t rev;
    bool forward;
  };

  explicit UnitFlowNetwork(std::size_t vertices) : adj_(vertices) {}

  void add_arc(std::size_t from, std::size_t to) {
    adj_[from].push_back({to, 1, adj_[to].size(), true});
    adj_[to].push_back({from, 0, adj_[from].size() - 1, false});
  }

  // One BFS augmentation; arcs are explored in insertion order.
  bool augment(std::size_t source, std::size_t sink) {
    std::vector<std::ptrdiff_t> parent_vertex(adj_.size(), -1);
    std::vector<std::size_t> parent_arc(adj_.size(), 0);
    std::deque<std::size_t> queue{source};
    parent_vertex[source] = static_cast<std::ptrdiff_t>(source);
    while (!queue.empty() && parent_vertex[sink] < 0) {
      const auto u = queue.front();
      queue.pop_front();
      for (std::size_t i = 0; i < adj_[u].size(); ++i) {
        const auto& arc = adj_[u][i];
        if (arc.cap > 0 && parent_vertex[arc.to] < 0) {
          parent_vertex[arc.to] = static_cast<std::ptrdiff_t>(u);
          parent_arc[arc.to] = i;
          queue.push_back(arc.to);
        }
      }
    }
    if (parent_vertex[sink] < 0) return false;
    for (auto v = sink; v != source;) {
      const auto u = static_cast<std::size_t>(parent_vertex[v]);
      auto& arc = adj_[u][parent_arc[v]];
      arc.cap -= 1;
      adj_[v][arc.rev].cap += 1;
      v = u;
    }
    return true;
  }

  std::vector<Arc>& arcs(std::size_t v) { return adj_[v]; }

 private:
  std::vector<std::vector<Arc>> adj_;
};

}  // namespace

PathSet max_disjoint_paths(const Topology& topo, const NodeId& s, const NodeId& t,
                           std::size_t k_max) {
  if (!topo.contains(s)) throw Error(ErrorCode::UnknownNode, s.str());
  if (!topo.contains(t)) throw Error(ErrorCode::UnknownNode, t.str());
  if (s == t) throw Error(ErrorCode::ConfigError, "source and destination coincide");

  std::vector<NodeId> ids;
  ids.reserve(topo.nodes().size());
  for (const auto& n : topo.nodes()) ids.push_back(n.id);
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::map<NodeId, std::size_t> slot;
  for (std::size_t i = 0; i < ids.size(); ++i) slot.emplace(ids[i], i);
  auto in_of = [](std::size_t i) { return 2 * i; };
  auto out_of = [](std::size_t i) { return 2 * i + 1; };

  UnitFlowNetwork net(2 * ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const auto& id = ids[i];
    if (id == t) continue;
    if (id != s) {
      if (!topo.node(id).relay_allowed) continue;
      net.add_arc(in_of(i), out_of(i));
    }
    for (const auto& w : topo.neighbors(id)) {
      if (w == s) continue;
      net.add_arc(out_of(i), in_of(slot.at(w)));
    }
  }

  const auto source = out_of(slot.at(s));
  const auto sink = in_of(slot.at(t));
  std::size_t flow = 0;
  while (flow < k_max && net.augment(source, sink)) ++flow;
  if (flow == 0) throw Error(ErrorCode::NoPath, s.str() + " -> " + t.str());

  // Flow decomposition. Each interior vertex carries at most one unit, so
  // following saturated forward arcs from the source gives simple paths.
  PathSet out;
  for (std::size_t p = 0; p < flow; ++p) {
    Path path{{s}};
    auto at = source;
    while (true) {
      UnitFlowNetwork::Arc* next = nullptr;
      for (auto& arc : net.arcs(at)) {
        if (arc.forward && arc.cap == 0 && arc.to % 2 == 0) {
          if (next == nullptr || arc.to < next->to) next = &arc;
        }
      }
      next->cap = 1;  // consume
      const auto w = next->to / 2;
      path.nodes.push_back(ids[w]);
      if (next->to == sink) break;
      at = out_of(w);
    }
    out.paths.push_back(std::move(path));
  }
  std::sort(out.paths.begin(), out.paths.end());
  out.disjoint = true;
  return out;
}

SecurityCost security_cost(const Path& path, const ProbabilityMap& probs) {
  double survive = 1.0;
  for (const auto& v : path.interior()) {
    const auto it = probs.find(v);
    if (it == probs.end()) throw Error(ErrorCode::MissingProbability, v.str());
    survive *= 1.0 - it->second;
  }
  return SecurityCost{1.0 - survive};
}

PathSet select_paths(const PathSet& ps, std::size_t m, const ProbabilityMap& probs) {
  std::vector<std::pair<SecurityCost, const Path*>> ranked;
  ranked.reserve(ps.paths.size());
  for (const auto& p : ps.paths) ranked.emplace_back(security_cost(p, probs), &p);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first.value != b.first.value) return a.first.value < b.first.value;
    return *a.second < *b.second;
  });
  PathSet out;
  out.disjoint = ps.disjoint;
  const auto keep = std::min(m, ranked.size());
  for (std::size_t i = 0; i < keep; ++i) out.paths.push_back(*ranked[i].second);
  return out;
}

bool interiors_disjoint(std::span<const Path> paths) {
  std::set<NodeId> used;
  for (const auto& p : paths) {
    for (const auto& v : p.interior()) {
      if (!used.insert(v).second) return false;
    }
  }
  return true;
}

bool is_valid_path(const Topology& topo, const Path& path) {
  if (path.nodes.size() < 2) return false;
  std::set<NodeId> seen;
  for (const auto& v : path.nodes) {
    if (!topo.contains(v) || !seen.insert(v).second) return false;
  }
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
    if (topo.link_between(path.nodes[i], path.nodes[i + 1]) == nullptr) return false;
  }
  for (const auto& v : path.interior()) {
    if (!topo.node(v).relay_allowed) return false;
  }
  return true;
}

}  // namespace sdmp::routing
