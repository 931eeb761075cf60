#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "sdmp/gf2.hpp"
#include "sdmp/routing.hpp"
#include "sdmp/topology.hpp"

namespace sdmp::leakage {

using routing::Path;
using topo::NodeId;

struct AdversaryModel {
  enum class Mode { Fixed, Independent };

  Mode mode = Mode::Fixed;
  std::set<NodeId> compromised;             // Fixed
  routing::ProbabilityMap probabilities;    // Independent; gaps fall back to the topology
  bool cipher_broken = true;
  bool endpoints_trusted = true;

  static AdversaryModel fixed(std::set<NodeId> nodes) {
    AdversaryModel m;
    m.mode = Mode::Fixed;
    m.compromised = std::move(nodes);
    return m;
  }
  static AdversaryModel independent(routing::ProbabilityMap probs = {}) {
    AdversaryModel m;
    m.mode = Mode::Independent;
    m.probabilities = std::move(probs);
    return m;
  }
};

/// 1-based combination indices seen by the adversary.
struct InterceptRecord {
  std::set<std::size_t> intercepted;

  friend bool operator==(const InterceptRecord&, const InterceptRecord&) = default;
};

struct LeakageResult {
  std::set<std::size_t> recoverable_parts;  // 1-based part indices
  bool full_reconstruction = false;

  friend bool operator==(const LeakageResult&, const LeakageResult&) = default;
};

/// assignment[i] is the path carrying combination i + 1.
using Assignment = std::vector<Path>;

/// Part j is recoverable iff e_j lies in the span of the intercepted rows.
LeakageResult recoverable_parts(const InterceptRecord& intercepted,
                                std::span<const gf2::BitVector> coefficient_rows,
                                bool cipher_broken = true);
/// Same, for the chain scheme over n parts; builds only the intercepted rows.
LeakageResult recoverable_parts_chain(const InterceptRecord& intercepted, std::size_t n,
                                      bool cipher_broken = true);

InterceptRecord interception_of(const Assignment& assignment,
                                const std::set<NodeId>& compromised,
                                bool endpoints_trusted = true);

inline constexpr std::size_t kMaxExactRelays = 20;

/// Nodes whose compromise can matter: assigned-path interiors, plus the
/// endpoints when they are not trusted.
std::set<NodeId> relevant_nodes(const Assignment& assignment, bool endpoints_trusted);

/// Sums the weight of every compromise pattern of the relevant nodes that
/// leads to full reconstruction. Chain scheme over assignment.size() parts.
/// Throws TooManyRelays when more than kMaxExactRelays nodes are relevant.
double exact_reconstruction_prob(const topo::Topology& topo, const Assignment& assignment,
                                 const AdversaryModel& adversary);
double exact_reconstruction_prob(const topo::Topology& topo, const Assignment& assignment,
                                 const AdversaryModel& adversary,
                                 std::span<const gf2::BitVector> coefficient_rows);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t successes = 0;
  std::uint64_t trials = 0;
};

/// Trial i samples every relevant node from Keystream(seed, i). Results do
/// not depend on `threads`.
MonteCarloEstimate monte_carlo_reconstruction_prob(const topo::Topology& topo,
                                                   const Assignment& assignment,
                                                   const AdversaryModel& adversary,
                                                   std::uint64_t trials, std::uint64_t seed,
                                                   unsigned threads = 1);

}  // namespace sdmp::leakage
