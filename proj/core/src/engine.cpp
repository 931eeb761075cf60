#include "sdmp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <queue>
#include <thread>

#include "sdmp/error.hpp"

namespace sdmp::engine {

namespace {

// Stream ids separating the generator uses that share one seed. Stream 0
// belongs to the frame shuffle.
constexpr std::uint64_t kMacStream = 0x4D41430000000000ULL;
constexpr std::uint64_t kAdversaryStream = 0x4144560000000000ULL;

constexpr std::uint64_t kFnvOffset = 0xCBF29CE484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001B3ULL;

void fnv1a(std::uint64_t& h, std::string_view bytes) {
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
}

struct Event {
  SimTime time;
  std::uint64_t seq;
  EventKind kind;
  std::size_t flight;
  std::size_t hop;  // index of the hop's first node in the path

  bool operator>(const Event& other) const {
    return time != other.time ? time > other.time : seq > other.seq;
  }
};

struct Flight {
  codec::Bytes wire;
  std::uint16_t combo_index = 0;
  std::size_t path_slot = 0;
  std::size_t hop = 0;
};

struct NodeRadio {
  std::deque<std::size_t> queue;
  bool busy = false;
};

std::set<NodeId> sample_adversary(const topo::Topology& topo,
                                  const leakage::AdversaryModel& adversary,
                                  std::uint64_t seed, const NodeId& src, const NodeId& dst) {
  if (adversary.mode == leakage::AdversaryModel::Mode::Fixed) return adversary.compromised;
  std::vector<NodeId> ids;
  for (const auto& n : topo.nodes()) ids.push_back(n.id);
  std::sort(ids.begin(), ids.end());
  Keystream gen(seed, kAdversaryStream);
  std::set<NodeId> out;
  for (const auto& id : ids) {
    if (adversary.endpoints_trusted && (id == src || id == dst)) continue;
    const auto it = adversary.probabilities.find(id);
    const double p = it != adversary.probabilities.end() ? it->second
                                                         : topo.node(id).compromise_prob;
    if (gen.unit() < p) out.insert(id);
  }
  return out;
}

class Simulation {
 public:
  Simulation(const Scenario& scenario, const DispatchPlan& plan, const TransferConfig& config,
             std::set<NodeId> compromised, bool endpoints_trusted, SimReport& report)
      : scenario_(scenario),
        plan_(plan),
        config_(config),
        compromised_(std::move(compromised)),
        endpoints_trusted_(endpoints_trusted),
        report_(report),
        mac_rng_(config.seed, kMacStream) {}

  std::vector<codec::Frame> run(const std::vector<codec::Frame>& shuffled) {
    const auto& first_path = plan_.selected.paths.front();
    const NodeId& src = first_path.source();
    for (const auto& frame : shuffled) {
      Flight f;
      f.wire = codec::encode_frame(frame);
      f.combo_index = frame.combo_index;
      f.path_slot = plan_.path_of[frame.combo_index - 1u];
      flights_.push_back(std::move(f));
      const auto id = flights_.size() - 1;
      if (!endpoints_trusted_ && compromised_.contains(src)) observe(id);
      radios_[src].queue.push_back(id);
    }
    report_.frames_sent = flights_.size();
    service(src, 0);

    while (!events_.empty()) {
      const Event ev = events_.top();
      if (config_.horizon && ev.time > *config_.horizon) break;
      events_.pop();
      ++report_.events;
      handle(ev);
    }
    report_.frames_in_flight =
        report_.frames_sent - report_.frames_delivered - report_.frames_dropped;
    return std::move(received_);
  }

 private:
  const routing::Path& path_of(const Flight& f) const { return plan_.selected.paths[f.path_slot]; }

  void push(SimTime time, EventKind kind, std::size_t flight, std::size_t hop) {
    events_.push(Event{time, next_seq_++, kind, flight, hop});
  }

  void observe(std::size_t flight) { report_.intercept.intercepted.insert(flights_[flight].combo_index); }

  void trace(const Event& ev) {
    const auto& f = flights_[ev.flight];
    const auto& path = path_of(f);
    const auto* link = scenario_.topology.link_between(path.nodes[ev.hop], path.nodes[ev.hop + 1]);
    TraceEvent te{ev.time, ev.kind, config_.msg_id, f.combo_index,
                  path.nodes[ev.hop], path.nodes[ev.hop + 1], link->medium};
    auto line = format_trace_line(te);
    line.push_back('\n');
    fnv1a(report_.trace_digest, line);
    if (config_.record_trace) report_.trace.push_back(std::move(te));
  }

  // Starts the next queued transmission of `node` if its radio is idle.
  void service(const NodeId& node, SimTime now) {
    auto& radio = radios_[node];
    while (!radio.busy && !radio.queue.empty()) {
      const auto id = radio.queue.front();
      radio.queue.pop_front();
      const auto& f = flights_[id];
      const auto& path = path_of(f);
      const auto* link = scenario_.topology.link_between(path.nodes[f.hop], path.nodes[f.hop + 1]);
      auto& medium = media_[link->medium];
      medium.id = link->medium;
      try {
        const auto got = mac::acquire(medium, now, link->latency, mac_rng_, scenario_.policy);
        radio.busy = true;
        push(got.start, EventKind::HopStart, id, f.hop);
        push(got.start + link->latency, EventKind::HopEnd, id, f.hop);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ChannelBusy) throw;
        ++report_.frames_dropped;
        if (report_.failure.empty()) report_.failure = e.what();
      }
    }
  }

  void handle(const Event& ev) {
    trace(ev);
    auto& f = flights_[ev.flight];
    const auto& path = path_of(f);
    switch (ev.kind) {
      case EventKind::HopStart:
        break;
      case EventKind::HopEnd: {
        const NodeId& sender = path.nodes[ev.hop];
        const NodeId& receiver = path.nodes[ev.hop + 1];
        radios_[sender].busy = false;
        const bool at_destination = ev.hop + 2 == path.nodes.size();
        if (compromised_.contains(receiver) && (!at_destination || !endpoints_trusted_)) {
          observe(ev.flight);
        }
        if (at_destination) {
          push(ev.time, EventKind::Arrival, ev.flight, ev.hop);
        } else {
          f.hop = ev.hop + 1;
          radios_[receiver].queue.push_back(ev.flight);
          service(receiver, ev.time);
        }
        service(sender, ev.time);
        break;
      }
      case EventKind::Arrival:
        received_.push_back(codec::decode_frame(f.wire));
        ++report_.frames_delivered;
        report_.completion_time = ev.time;
        break;
    }
  }

  const Scenario& scenario_;
  const DispatchPlan& plan_;
  const TransferConfig& config_;
  std::set<NodeId> compromised_;
  bool endpoints_trusted_;
  SimReport& report_;
  Keystream mac_rng_;

  std::vector<Flight> flights_;
  std::map<NodeId, NodeRadio> radios_;
  std::map<std::string, mac::MediumState> media_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  std::uint64_t next_seq_ = 0;
  std::vector<codec::Frame> received_;
};

}  // namespace

std::string to_string(const DispatchMode& mode) {
  return mode.kind == DispatchMode::Kind::Unipath ? "unipath" : "multipath";
}

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::HopStart: return "HOP_START";
    case EventKind::HopEnd: return "HOP_END";
    case EventKind::Arrival: return "ARRIVAL";
  }
  return "?";
}

std::string format_trace_line(const TraceEvent& e) {
  std::string line = std::to_string(e.time);
  line += '\t';
  line += to_string(e.kind);
  line += '\t';
  line += std::to_string(e.msg_id);
  line += '\t';
  line += std::to_string(e.combo_index);
  line += '\t';
  line += e.from.str() + "->" + e.to.str();
  line += '\t';
  line += e.medium;
  return line;
}

DispatchPlan plan_dispatch(const topo::Topology& topo, const NodeId& src, const NodeId& dst,
                           std::size_t parts, const DispatchMode& mode) {
  if (mode.kind == DispatchMode::Kind::Multipath && mode.paths < 1) {
    throw Error(ErrorCode::ConfigError, "multipath needs m >= 1");
  }
  const auto probs = topo.compromise_probs();
  const auto all = routing::max_disjoint_paths(topo, src, dst);
  const std::size_t want = mode.kind == DispatchMode::Kind::Unipath ? 1 : mode.paths;

  DispatchPlan plan;
  plan.selected = routing::select_paths(all, want, probs);
  for (const auto& p : plan.selected.paths) plan.costs.push_back(routing::security_cost(p, probs).value);
  const std::size_t m = plan.selected.size();
  for (std::size_t i = 0; i < parts; ++i) {
    const std::size_t slot = mode.kind == DispatchMode::Kind::Unipath ? 0 : i % m;
    plan.path_of.push_back(slot);
    plan.assignment.push_back(plan.selected.paths[slot]);
  }
  return plan;
}

SimReport run_transfer(const Scenario& scenario, const NodeId& src, const NodeId& dst,
                       const codec::PlainMessage& msg, const TransferConfig& config) {
  const auto& topo = scenario.topology;
  if (!topo.contains(src)) throw Error(ErrorCode::UnknownNode, src.str());
  if (!topo.contains(dst)) throw Error(ErrorCode::UnknownNode, dst.str());

  const auto parts = codec::pad_and_split(msg, config.parts);
  const auto combos = codec::chain_combine(parts);
  const auto frames = codec::encrypt_combos(combos, config.key, config.msg_id);
  const auto shuffled = codec::shuffle_frames(frames, config.seed);
  const auto plan = plan_dispatch(topo, src, dst, config.parts, config.mode);

  SimReport report;
  report.mode = config.mode;
  report.parts = config.parts;
  report.seed = config.seed;
  report.trace_digest = kFnvOffset;
  for (std::size_t i = 0; i < plan.selected.size(); ++i) {
    report.paths.push_back({plan.selected.paths[i], plan.costs[i], {}});
  }
  for (std::size_t i = 0; i < plan.path_of.size(); ++i) {
    report.paths[plan.path_of[i]].combos.push_back(i + 1);
  }

  bool endpoints_trusted = true;
  bool cipher_broken = true;
  if (config.adversary) {
    endpoints_trusted = config.adversary->endpoints_trusted;
    cipher_broken = config.adversary->cipher_broken;
    report.compromised = sample_adversary(topo, *config.adversary, config.seed, src, dst);
  }

  Simulation sim(scenario, plan, config, report.compromised, endpoints_trusted, report);
  const auto received = sim.run(shuffled);
  report.frames_intercepted = report.intercept.intercepted.size();
  report.leakage =
      leakage::recoverable_parts_chain(report.intercept, config.parts, cipher_broken);

  report.delivered = report.frames_delivered == report.frames_sent;
  if (report.delivered) {
    try {
      const auto rebuilt =
          codec::unsplit(codec::chain_reconstruct(codec::decrypt_frames(received, config.key)));
      report.reconstructed_ok = rebuilt == msg;
      if (!report.reconstructed_ok && report.failure.empty()) {
        report.failure = "reconstructed message differs from the original";
      }
    } catch (const Error& e) {
      if (report.failure.empty()) report.failure = e.what();
    }
  }
  return report;
}

double BatchReport::delivery_rate() const noexcept {
  return trials == 0 ? 0.0 : static_cast<double>(delivered) / static_cast<double>(trials);
}

double BatchReport::interception_rate() const noexcept {
  return trials == 0 ? 0.0 : static_cast<double>(intercepted_any) / static_cast<double>(trials);
}

double BatchReport::reconstruction_rate() const noexcept {
  return trials == 0 ? 0.0
                     : static_cast<double>(full_reconstruction) / static_cast<double>(trials);
}

double BatchReport::reconstruction_stderr() const noexcept {
  if (trials == 0) return 0.0;
  const double p = reconstruction_rate();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) noexcept {
  return trial == 0 ? seed : Keystream(seed, trial).next();
}

BatchReport run_batch(const Scenario& scenario, const NodeId& src, const NodeId& dst,
                      const codec::PlainMessage& msg, const TransferConfig& config,
                      std::uint64_t trials, unsigned threads) {
  if (trials == 0) throw Error(ErrorCode::ConfigError, "trials must be >= 1");
  struct Outcome {
    bool delivered, reconstructed, intercepted, full;
    std::size_t sent, frames_intercepted;
    SimTime completion;
  };
  std::vector<Outcome> outcomes(trials);

  auto run_range = [&](std::uint64_t first, std::uint64_t last) {
    TransferConfig trial_config = config;
    trial_config.record_trace = false;
    for (std::uint64_t i = first; i < last; ++i) {
      trial_config.seed = trial_seed(config.seed, i);
      const auto r = run_transfer(scenario, src, dst, msg, trial_config);
      outcomes[i] = {r.delivered,         r.reconstructed_ok,
                     !r.intercept.intercepted.empty(), r.leakage.full_reconstruction,
                     r.frames_sent,       r.frames_intercepted,
                     r.completion_time};
    }
  };

  threads = std::max(1U, threads);
  if (threads == 1) {
    run_range(0, trials);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (trials + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const auto first = std::min(trials, t * chunk);
      const auto last = std::min(trials, first + chunk);
      pool.emplace_back(run_range, first, last);
    }
    for (auto& th : pool) th.join();
  }

  BatchReport out;
  out.trials = trials;
  out.seed = config.seed;
  long double completion = 0.0L;
  for (const auto& o : outcomes) {
    out.delivered += o.delivered;
    out.reconstructed_ok += o.reconstructed;
    out.intercepted_any += o.intercepted;
    out.full_reconstruction += o.full;
    out.frames_sent += o.sent;
    out.frames_intercepted += o.frames_intercepted;
    completion += static_cast<long double>(o.completion);
  }
  out.mean_completion_time = static_cast<double>(completion / static_cast<long double>(trials));
  return out;
}

}  // namespace sdmp::engine
