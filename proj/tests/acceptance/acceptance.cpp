// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli/cli.hpp"
#include "fixtures.hpp"
#include "oracles/oracles.hpp"
#include "sdmp/codec.hpp"
#include "sdmp/engine.hpp"
#include "sdmp/error.hpp"
#include "sdmp/leakage.hpp"
#include "sdmp/mac.hpp"
#include "sdmp/routing.hpp"

using namespace sdmp;

namespace {

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;  // 0: no runtime bound
  std::function<bool(std::string&)> check;
};

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

codec::Bytes random_bytes(Keystream& rng, std::size_t n) {
  codec::Bytes out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng.next());
  return out;
}

oracle::SmallGraph to_small_graph(const topo::Topology& t) {
  std::map<topo::NodeId, int> index;
  for (const auto& n : t.nodes()) index.emplace(n.id, static_cast<int>(index.size()));
  oracle::SmallGraph g{static_cast<int>(index.size()), std::vector<std::set<int>>(index.size()), {}};
  for (const auto& n : t.nodes()) g.relay.push_back(n.relay_allowed);
  for (const auto& l : t.links()) {
    g.adj[index[l.a]].insert(index[l.b]);
    g.adj[index[l.b]].insert(index[l.a]);
  }
  return g;
}

int disjoint_count(const topo::Topology& t, const topo::NodeId& s, const topo::NodeId& d) {
  try {
    const auto ps = routing::max_disjoint_paths(t, s, d);
    if (!routing::interiors_disjoint(ps.paths)) return -1;
    for (const auto& p : ps.paths) {
      if (!routing::is_valid_path(t, p)) return -1;
    }
    return static_cast<int>(ps.size());
  } catch (const Error& e) {
    return e.code() == ErrorCode::NoPath ? 0 : -1;
  }
}

bool codec_round_trip(std::string& detail) {
  Keystream rng(0xA11CE, 1);
  int failures = 0;
  for (int i = 0; i < 1000; ++i) {
    const codec::PlainMessage msg{random_bytes(rng, rng.below(4097))};
    const std::size_t n = 2 + rng.below(15);
    const CipherKey key{rng.next()};
    const std::uint64_t seed = rng.next();

    // Pure codec pipeline.
    const auto frames = codec::encrypt_combos(codec::chain_combine(codec::pad_and_split(msg, n)), key, 7);
    const auto shuffled = codec::shuffle_frames(frames, seed);
    std::vector<codec::Frame> received;
    for (const auto& f : shuffled) received.push_back(codec::decode_frame(codec::encode_frame(f)));
    const bool direct = codec::unsplit(codec::chain_reconstruct(codec::decrypt_frames(received, key))) == msg;

    // Through the engine in both dispatch modes.
    const std::vector<topo::Topology> topologies{fixtures::diamond(), fixtures::k4(),
                                                 fixtures::parallel_relays(1 + rng.below(5), 0.0)};
    const auto& t = topologies[rng.below(topologies.size())];
    engine::TransferConfig c;
    c.parts = n;
    c.mode = i % 2 == 0 ? engine::DispatchMode::unipath() : engine::DispatchMode::multipath(1 + rng.below(5));
    c.key = key;
    c.seed = seed;
    const auto r = engine::run_transfer(engine::Scenario{t, {}}, "s", "t", msg, c);
    if (!direct || !r.delivered || !r.reconstructed_ok) ++failures;
  }
  detail = fmt("%d/1000 cases failed", failures);
  return failures == 0;
}

bool leakage_oracle(std::string& detail) {
  Keystream rng(0x1EA4, 2);
  int mismatches = 0;
  int subsets = 0;
  for (std::size_t n = 2; n <= 6; ++n) {
    const auto parts = random_bytes(rng, n);
    std::vector<gf2::BitVector> rows;
    for (std::size_t i = 1; i <= n; ++i) rows.push_back(codec::chain_coefficient_row(n, i));
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
      leakage::InterceptRecord rec;
      for (std::size_t i = 1; i <= n; ++i) {
        if ((mask >> (i - 1)) & 1U) rec.intercepted.insert(i);
      }
      const auto expected = oracle::chain_recoverable(n, rec.intercepted, parts);
      const auto general = leakage::recoverable_parts(rec, rows);
      const auto chain = leakage::recoverable_parts_chain(rec, n);
      const bool ok = general.recoverable_parts == expected && chain == general &&
                      general.full_reconstruction == (expected.size() == n);
      if (!ok) ++mismatches;
      ++subsets;
    }
  }
  detail = fmt("%d subsets, %d mismatches", subsets, mismatches);
  return mismatches == 0;
}

bool menger(std::string& detail) {
  int mismatches = 0;
  int graphs = 0;
  const std::vector<topo::Topology> named{fixtures::diamond(), fixtures::chain(), fixtures::k4()};
  for (const auto& t : named) {
    const auto g = to_small_graph(t);
    int s = 0;
    int d = 0;
    for (std::size_t i = 0; i < t.nodes().size(); ++i) {
      if (t.nodes()[i].id == "s") s = static_cast<int>(i);
      if (t.nodes()[i].id == "t") d = static_cast<int>(i);
    }
    if (disjoint_count(t, "s", "t") != oracle::min_vertex_cut(g, s, d)) ++mismatches;
    ++graphs;
  }
  Keystream rng(0x3E96E8, 3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(6));
    auto [t, g] = fixtures::random_small_graph(rng, n, 0.2 + 0.6 * rng.unit());
    const int expected = oracle::min_vertex_cut(g, 0, n - 1);
    const int got = disjoint_count(t, "v0", "v" + std::to_string(n - 1));
    if (got != expected || oracle::max_disjoint_by_enumeration(g, 0, n - 1) != expected) ++mismatches;
    ++graphs;
  }
  detail = fmt("%d graphs, %d mismatches", graphs, mismatches);
  return mismatches == 0;
}

double planned_exact(const topo::Topology& t, std::size_t n, const engine::DispatchMode& mode) {
  const auto plan = engine::plan_dispatch(t, "s", "t", n, mode);
  return leakage::exact_reconstruction_prob(t, plan.assignment, leakage::AdversaryModel::independent());
}

bool exact_fixtures(std::string& detail) {
  const double uni = planned_exact(fixtures::chain(0.5), 2, engine::DispatchMode::unipath());
  const double two = planned_exact(fixtures::diamond(0.5, 0.5), 2, engine::DispatchMode::multipath(2));
  const double skew = planned_exact(fixtures::diamond(0.3, 0.2), 2, engine::DispatchMode::multipath(2));
  detail = fmt("%.17g %.17g %.17g", uni, two, skew);
  return std::abs(uni - 0.5) <= 1e-12 && std::abs(two - 0.25) <= 1e-12 && std::abs(skew - 0.06) <= 1e-12;
}

bool monte_carlo(std::string& detail) {
  const auto t = fixtures::diamond(0.5, 0.5);
  const auto plan = engine::plan_dispatch(t, "s", "t", 2, engine::DispatchMode::multipath(2));
  int within = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto est = leakage::monte_carlo_reconstruction_prob(t, plan.assignment,
                                                              leakage::AdversaryModel::independent(), 100000, seed);
    if (std::abs(est.estimate - 0.25) <= 3 * est.std_error) ++within;
  }
  detail = fmt("%d/100 seeds within 3 stderr", within);
  return within >= 99;
}

bool multipath_dominance(std::string& detail) {
  double worst = 0.0;
  bool monotone = true;
  for (const double p : {0.05, 0.2, 0.5, 0.8, 0.95}) {
    double previous = 1.0;
    for (std::size_t m = 1; m <= 5; ++m) {
      const double got = planned_exact(fixtures::parallel_relays(m, p), m, engine::DispatchMode::multipath(m));
      // Direct enumeration: only the all-compromised pattern exposes every path.
      double expected = 0.0;
      for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
        double w = 1.0;
        for (std::size_t i = 0; i < m; ++i) w *= ((mask >> i) & 1U) ? p : 1.0 - p;
        if (mask == (1U << m) - 1) expected += w;
      }
      worst = std::max({worst, std::abs(got - expected), std::abs(got - std::pow(p, static_cast<double>(m)))});
      if (got > previous + 1e-12) monotone = false;
      previous = got;
    }
  }
  detail = fmt("max deviation %.3g%s", worst, monotone ? "" : ", not monotone");
  return worst <= 1e-12 && monotone;
}

bool engine_agreement(std::string& detail) {
  Keystream rng(0xE119, 7);
  int scenarios = 0;
  int mismatches = 0;
  while (scenarios < 200) {
    const auto t = fixtures::random_ess(rng, 2 + rng.below(6));
    const auto& nodes = t.nodes();
    const auto src = nodes[rng.below(nodes.size())].id;
    const auto dst = nodes[rng.below(nodes.size())].id;
    if (src == dst) continue;
    std::set<topo::NodeId> fixed;
    for (const auto& node : nodes) {
      if (rng.unit() < 0.35) fixed.insert(node.id);
    }
    engine::TransferConfig c;
    c.parts = 2 + rng.below(12);
    c.mode = rng.below(3) == 0 ? engine::DispatchMode::unipath() : engine::DispatchMode::multipath(1 + rng.below(4));
    c.key = CipherKey{rng.next()};
    c.seed = rng.next();
    c.adversary = leakage::AdversaryModel::fixed(fixed);
    c.adversary->endpoints_trusted = rng.below(4) != 0;
    const auto msg = codec::PlainMessage{random_bytes(rng, rng.below(200))};
    engine::SimReport r;
    try {
      r = engine::run_transfer(engine::Scenario{t, {}}, src, dst, msg, c);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NoPath) continue;
      throw;
    }
    const auto plan = engine::plan_dispatch(t, src, dst, c.parts, c.mode);
    const auto expected = leakage::interception_of(plan.assignment, fixed, c.adversary->endpoints_trusted);
    if (!(r.intercept == expected) || !r.delivered) ++mismatches;
    ++scenarios;
  }
  detail = fmt("%d scenarios, %d mismatches", scenarios, mismatches);
  return mismatches == 0;
}

bool mac_safety(std::string& detail) {
  Keystream meta(0x3AC, 8);
  int violations = 0;
  int busy = 0;
  for (int seq = 0; seq < 1000; ++seq) {
    mac::BackoffPolicy policy;
    policy.cw_min = 1 + static_cast<std::uint32_t>(meta.below(8));
    policy.cw_max = policy.cw_min * (1U << meta.below(5));
    policy.max_retries = static_cast<std::uint32_t>(meta.below(8));
    mac::MediumState m{"m", 0, {}};
    Keystream rng(meta.next(), 0);
    mac::SimTime now = 0;
    for (int call = 0; call < 60; ++call) {
      now += static_cast<mac::SimTime>(meta.below(5));
      const mac::SimTime ready = now + static_cast<mac::SimTime>(meta.below(8));
      const mac::SimTime duration = 1 + static_cast<mac::SimTime>(meta.below(6));
      try {
        const auto got = mac::acquire(m, ready, duration, rng, policy);
        if (got.start < ready) ++violations;
        if (std::find(m.schedule.begin(), m.schedule.end(), mac::Interval{got.start, got.start + duration}) ==
            m.schedule.end()) {
          ++violations;
        }
      } catch (const Error& e) {
        if (e.code() != ErrorCode::ChannelBusy) throw;
        ++busy;
      }
    }
    for (std::size_t i = 1; i < m.schedule.size(); ++i) {
      if (m.schedule[i - 1].end > m.schedule[i].start) ++violations;
    }
  }
  detail = fmt("1000 sequences, %d violations, %d ChannelBusy", violations, busy);
  return violations == 0;
}

bool shamir(std::string& detail) {
  Keystream rng(0x54A, 9);
  int failures = 0;
  int subsets = 0;
  for (std::size_t n = 2; n <= 6; ++n) {
    for (std::size_t k = 2; k <= n; ++k) {
      const codec::PlainMessage msg{random_bytes(rng, rng.below(64))};
      const auto shares = codec::shamir_share(msg, k, n, CipherKey{rng.next()});
      for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
        std::vector<codec::ShamirShare> picked;
        for (std::size_t i = 0; i < n; ++i) {
          if ((mask >> i) & 1U) picked.push_back(shares[i]);
        }
        if (!(codec::shamir_reconstruct(picked, k) == msg)) ++failures;
        ++subsets;
      }
    }
  }
  // k = 2: every (secret, a_1) pair; each observed share value must be
  // produced by all 256 secrets.
  int inconsistent = 0;
  for (std::size_t x = 1; x <= 6; ++x) {
    std::vector<std::set<unsigned>> secrets_for(256);
    for (unsigned secret = 0; secret < 256; ++secret) {
      for (unsigned a1 = 0; a1 < 256; ++a1) {
        const auto shares = codec::shamir_share_bytes(
            codec::Bytes{static_cast<std::uint8_t>(secret)}, 2, 6,
            [a1](std::size_t, std::size_t count) { return codec::Bytes(count, static_cast<std::uint8_t>(a1)); });
        secrets_for[shares[x - 1].y[0]].insert(secret);
      }
    }
    for (const auto& s : secrets_for) {
      if (s.size() != 256) ++inconsistent;
    }
  }
  detail = fmt("%d subsets, %d failures, %d inconsistent share values", subsets, failures, inconsistent);
  return failures == 0 && inconsistent == 0;
}

std::string cli_stdout(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  sdmp::cli::run(args, out, err);
  return out.str();
}

bool determinism(std::string& detail) {
  const std::string data = SDMP_TEST_DATA_DIR;
  const std::vector<std::vector<std::string>> commands{
      {"--seed", "0x1234abcd", "send", data + "/ess.json", "--src", "alice", "--dst", "bob", "-n", "6",
       "--adversary", "independent"},
      {"--seed", "0x99", "--format", "csv", "send", data + "/diamond.json", "--src", "s", "--dst", "t", "-n", "8"},
      {"--seed", "0x77", "analyze", data + "/diamond_skewed.json", "--src", "s", "--dst", "t", "-n", "3"},
      {"--seed", "0x77", "analyze", data + "/wide25.json", "--src", "s", "--dst", "t", "-n", "25", "-m", "25",
       "--trials", "20000"},
  };
  int differing = 0;
  for (const auto& args : commands) {
    const auto first = cli_stdout(args);
    if (first.empty() || first != cli_stdout(args)) ++differing;
  }
  detail = fmt("%zu command lines, %d differing", commands.size(), differing);
  return differing == 0;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "codec round trip", 10.0, codec_round_trip},
      {2, "chain leakage oracle", 5.0, leakage_oracle},
      {3, "disjoint paths equal minimum vertex cut", 30.0, menger},
      {4, "exact probability fixtures", 0.0, exact_fixtures},
      {5, "monte carlo convergence", 60.0, monte_carlo},
      {6, "multipath dominance", 0.0, multipath_dominance},
      {7, "engine and analysis agree on interception", 0.0, engine_agreement},
      {8, "mac reservations never overlap", 0.0, mac_safety},
      {9, "shamir threshold reconstruction and secrecy", 0.0, shamir},
      {10, "cli output determinism", 0.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    std::string detail;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && seconds >= c.limit_seconds) {
      ok = false;
      detail += fmt(", over the %.0f s limit", c.limit_seconds);
    }
    if (!ok) ++failed;
    std::printf("%s [%d] %s (%.2f s): %s\n", ok ? "PASS" : "FAIL", c.id, c.name.c_str(), seconds, detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
