#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "oracles/oracles.hpp"
#include "sdmp/keystream.hpp"
#include "sdmp/topology.hpp"

namespace fixtures {

using sdmp::topo::Link;
using sdmp::topo::Node;
using sdmp::topo::NodeKind;
using sdmp::topo::Topology;

inline Node ap(const std::string& id, double p = 0.0) {
  return Node{id, NodeKind::AccessPoint, "bss-" + id, p, true};
}

inline Node station(const std::string& id, const std::string& bss, double p = 0.0) {
  return Node{id, NodeKind::Station, bss, p, false};
}

inline Link link(const std::string& a, const std::string& b, std::int64_t latency = 1) {
  return Link{a, b, latency, ""};
}

// s-a-t and s-b-t over the distribution system; every node is an AP.
inline Topology diamond(double pa = 0.0, double pb = 0.0) {
  return Topology({ap("s"), ap("a", pa), ap("b", pb), ap("t")},
                  {link("s", "a"), link("a", "t"), link("s", "b"), link("b", "t")});
}

inline Topology chain(double pa = 0.0) {
  return Topology({ap("s"), ap("a", pa), ap("t")}, {link("s", "a"), link("a", "t")});
}

inline Topology k4() {
  return Topology({ap("s"), ap("a"), ap("b"), ap("t")},
                  {link("s", "a"), link("s", "b"), link("s", "t"), link("a", "b"),
                   link("a", "t"), link("b", "t")});
}

// m parallel single-relay paths s - r<i> - t, every relay with probability p.
inline Topology parallel_relays(std::size_t m, double p) {
  std::vector<Node> nodes{ap("s"), ap("t")};
  std::vector<Link> links;
  for (std::size_t i = 0; i < m; ++i) {
    const std::string r = "r" + std::to_string(i);
    nodes.push_back(ap(r, p));
    links.push_back(link("s", r));
    links.push_back(link(r, "t"));
  }
  return Topology(std::move(nodes), std::move(links));
}

// Single BSS: AP plus two stations.
inline Topology single_bss() {
  return Topology({Node{"ap1", NodeKind::AccessPoint, "bss1", 0.1, true},
                   station("sta1", "bss1", 0.2), station("sta2", "bss1", 0.3)},
                  {link("ap1", "sta1"), link("ap1", "sta2")});
}

// Random distribution-system graph on n <= 7 APs named v0..v{n-1}, with
// random relay permissions. Also returned as an oracle::SmallGraph.
inline std::pair<Topology, oracle::SmallGraph> random_small_graph(sdmp::Keystream& rng, int n,
                                                                  double edge_prob) {
  oracle::SmallGraph g;
  g.n = n;
  g.adj.resize(n);
  g.relay.resize(n);
  std::vector<Node> nodes;
  std::vector<Link> links;
  for (int i = 0; i < n; ++i) {
    g.relay[i] = rng.unit() < 0.8;
    Node node = ap("v" + std::to_string(i));
    node.relay_allowed = g.relay[i];
    nodes.push_back(node);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.unit() < edge_prob) {
        g.adj[i].insert(j);
        g.adj[j].insert(i);
        links.push_back(link("v" + std::to_string(i), "v" + std::to_string(j)));
      }
    }
  }
  return {Topology(std::move(nodes), std::move(links)), g};
}

// Random ESS: k BSS cells, each with an AP and a few stations; APs joined
// by random distribution links plus a spanning chain. Stations sometimes
// allowed to relay. Latencies in 1..3.
inline Topology random_ess(sdmp::Keystream& rng, std::size_t cells) {
  std::vector<Node> nodes;
  std::vector<Link> links;
  for (std::size_t c = 0; c < cells; ++c) {
    const std::string bss = "bss" + std::to_string(c);
    const std::string apid = "ap" + std::to_string(c);
    nodes.push_back(Node{apid, NodeKind::AccessPoint, bss, rng.unit() * 0.5, true});
    const auto stations = 1 + rng.below(4);
    for (std::uint64_t k = 0; k < stations; ++k) {
      Node st = station("st" + std::to_string(c) + "_" + std::to_string(k), bss, rng.unit() * 0.5);
      st.relay_allowed = rng.unit() < 0.2;
      links.push_back(Link{apid, st.id, static_cast<std::int64_t>(1 + rng.below(3)), ""});
      nodes.push_back(std::move(st));
    }
    if (c > 0) {
      links.push_back(Link{"ap" + std::to_string(c - 1), apid,
                           static_cast<std::int64_t>(1 + rng.below(3)), ""});
    }
  }
  for (std::size_t a = 0; a < cells; ++a) {
    for (std::size_t b = a + 2; b < cells; ++b) {
      if (rng.unit() < 0.4) {
        links.push_back(Link{"ap" + std::to_string(a), "ap" + std::to_string(b),
                             static_cast<std::int64_t>(1 + rng.below(3)), ""});
      }
    }
  }
  return Topology(std::move(nodes), std::move(links));
}

}  // namespace fixtures
