#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sdmp/codec.hpp"
#include "sdmp/keystream.hpp"
#include "sdmp/leakage.hpp"
#include "sdmp/mac.hpp"
#include "sdmp/routing.hpp"
#include "sdmp/topology.hpp"

namespace sdmp::engine {

using mac::SimTime;
using topo::NodeId;

/// Topology plus the MAC policy from the optional "mac" section.
struct Scenario {
  topo::Topology topology;
  mac::BackoffPolicy policy;
};

/// Throws ParseError, ValidationError or ConfigError.
Scenario load_scenario(std::string_view json_text);

struct DispatchMode {
  enum class Kind { Unipath, Multipath };

  Kind kind = Kind::Multipath;
  std::size_t paths = 2;

  static DispatchMode unipath() { return {Kind::Unipath, 1}; }
  static DispatchMode multipath(std::size_t m) { return {Kind::Multipath, m}; }

  friend bool operator==(const DispatchMode&, const DispatchMode&) = default;
};

std::string to_string(const DispatchMode& mode);

struct TransferConfig {
  std::size_t parts = 4;
  DispatchMode mode;
  CipherKey key;
  std::uint64_t seed = 0;
  std::optional<leakage::AdversaryModel> adversary;
  std::uint32_t msg_id = 1;
  std::optional<SimTime> horizon;  // events after this time are not processed
  bool record_trace = false;
};

struct DispatchPlan {
  routing::PathSet selected;          // ascending security cost
  std::vector<double> costs;          // parallel to selected.paths
  leakage::Assignment assignment;     // combination i + 1 -> path
  std::vector<std::size_t> path_of;   // combination i + 1 -> index into selected
};

/// Disjoint-path discovery, cost-ranked selection and round-robin assignment
/// of `parts` combinations (unipath: everything on the cheapest path).
DispatchPlan plan_dispatch(const topo::Topology& topo, const NodeId& src, const NodeId& dst,
                           std::size_t parts, const DispatchMode& mode);

enum class EventKind { HopStart, HopEnd, Arrival };

std::string_view to_string(EventKind kind) noexcept;

struct TraceEvent {
  SimTime time = 0;
  EventKind kind = EventKind::HopStart;
  std::uint32_t msg_id = 0;
  std::uint16_t combo_index = 0;
  NodeId from;
  NodeId to;
  std::string medium;
};

/// time, kind, msg_id, combo_index, "a->b", medium; tab separated.
std::string format_trace_line(const TraceEvent& event);

struct PathUsage {
  routing::Path path;
  double cost = 0.0;
  std::vector<std::size_t> combos;
};

struct SimReport {
  bool delivered = false;
  bool reconstructed_ok = false;
  SimTime completion_time = 0;
  std::size_t frames_sent = 0;
  std::size_t frames_delivered = 0;
  std::size_t frames_dropped = 0;
  std::size_t frames_in_flight = 0;
  std::size_t frames_intercepted = 0;
  leakage::InterceptRecord intercept;
  leakage::LeakageResult leakage;
  std::set<NodeId> compromised;
  std::vector<PathUsage> paths;
  DispatchMode mode;
  std::size_t parts = 0;
  std::uint64_t seed = 0;
  std::string failure;  // first delivery or reconstruction error, if any
  std::size_t events = 0;
  std::uint64_t trace_digest = 0;  // FNV-1a 64 over the trace lines
  std::vector<TraceEvent> trace;   // only with TransferConfig::record_trace
};

/// One transfer end to end: split, combine, encrypt, shuffle, dispatch over
/// MAC-gated hops, intercept, reassemble. Throws NoPath / UnknownNode /
/// ConfigError; channel failures are reported, never thrown.
SimReport run_transfer(const Scenario& scenario, const NodeId& src, const NodeId& dst,
                       const codec::PlainMessage& msg, const TransferConfig& config);

struct BatchReport {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t delivered = 0;
  std::uint64_t reconstructed_ok = 0;
  std::uint64_t intercepted_any = 0;
  std::uint64_t full_reconstruction = 0;
  std::uint64_t frames_sent = 0;
  std::uint64_t frames_intercepted = 0;
  double mean_completion_time = 0.0;

  [[nodiscard]] double delivery_rate() const noexcept;
  [[nodiscard]] double interception_rate() const noexcept;
  [[nodiscard]] double reconstruction_rate() const noexcept;
  [[nodiscard]] double reconstruction_stderr() const noexcept;
};

/// Seed of batch trial i; trial 0 runs with the batch seed itself.
std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) noexcept;

/// Repeats run_transfer with trial_seed(config.seed, i). Aggregates are
/// independent of `threads`.
BatchReport run_batch(const Scenario& scenario, const NodeId& src, const NodeId& dst,
                      const codec::PlainMessage& msg, const TransferConfig& config,
                      std::uint64_t trials, unsigned threads = 1);

// Machine-readable output. JSON keys are emitted in sorted order.
std::string to_json(const SimReport& report);
std::string to_json(const BatchReport& report);
std::string csv_header_transfer();
std::string to_csv_row(const SimReport& report);
std::string csv_header_batch();
std::string to_csv_row(const BatchReport& report);

std::string hex64(std::uint64_t value);

}  // namespace sdmp::engine
