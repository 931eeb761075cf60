#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "sdmp/codec.hpp"
#include "sdmp/engine.hpp"
#include "sdmp/leakage.hpp"
#include "sdmp/routing.hpp"

using namespace sdmp;

namespace {

topo::Node ap(const std::string& id, double p) { return {id, topo::NodeKind::AccessPoint, "bss-" + id, p, true}; }

// s and t joined by m two-hop relays r0..r{m-1}.
topo::Topology parallel(std::size_t m, double p) {
  std::vector<topo::Node> nodes{ap("s", 0), ap("t", 0)};
  std::vector<topo::Link> links;
  for (std::size_t i = 0; i < m; ++i) {
    const std::string r = "r" + std::to_string(i);
    nodes.push_back(ap(r, p));
    links.push_back({"s", r, 1, ""});
    links.push_back({r, "t", 1, ""});
  }
  return {nodes, links};
}

// w x h grid of access points, source top-left, destination bottom-right.
topo::Topology grid(int w, int h) {
  std::vector<topo::Node> nodes;
  std::vector<topo::Link> links;
  auto id = [](int x, int y) { return "g" + std::to_string(x) + "_" + std::to_string(y); };
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      nodes.push_back(ap(id(x, y), 0.1));
      if (x > 0) links.push_back({id(x - 1, y), id(x, y), 1, ""});
      if (y > 0) links.push_back({id(x, y - 1), id(x, y), 1, ""});
    }
  }
  return {nodes, links};
}

void BM_CodecRoundTrip(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const codec::PlainMessage msg{codec::Bytes(4096, 0x5A)};
  const CipherKey key{0x1234};
  for (auto _ : state) {
    const auto frames = codec::encrypt_combos(codec::chain_combine(codec::pad_and_split(msg, n)), key, 1);
    const auto back = codec::unsplit(codec::chain_reconstruct(codec::decrypt_frames(frames, key)));
    benchmark::DoNotOptimize(back.bytes.data());
  }
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * 4096);
}
BENCHMARK(BM_CodecRoundTrip)->Arg(2)->Arg(16)->Arg(256);

void BM_MaxDisjointPaths(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const auto t = grid(side, side);
  const topo::NodeId dst = "g" + std::to_string(side - 1) + "_" + std::to_string(side - 1);
  for (auto _ : state) benchmark::DoNotOptimize(routing::max_disjoint_paths(t, "g0_0", dst));
}
BENCHMARK(BM_MaxDisjointPaths)->Arg(5)->Arg(10)->Arg(20);

void BM_ExactProbability(benchmark::State& state) {
  const auto m = static_cast<std::size_t>(state.range(0));
  const auto t = parallel(m, 0.5);
  const auto plan = engine::plan_dispatch(t, "s", "t", m, engine::DispatchMode::multipath(m));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        leakage::exact_reconstruction_prob(t, plan.assignment, leakage::AdversaryModel::independent()));
  }
}
BENCHMARK(BM_ExactProbability)->Arg(4)->Arg(12)->Arg(20);

void BM_MonteCarlo(benchmark::State& state) {
  const auto t = parallel(25, 0.9);
  const auto plan = engine::plan_dispatch(t, "s", "t", 25, engine::DispatchMode::multipath(25));
  for (auto _ : state) {
    benchmark::DoNotOptimize(leakage::monte_carlo_reconstruction_prob(
        t, plan.assignment, leakage::AdversaryModel::independent(), 10000, 1));
  }
}
BENCHMARK(BM_MonteCarlo);

void BM_RunTransfer(benchmark::State& state) {
  const engine::Scenario sc{grid(6, 6), {}};
  engine::TransferConfig c;
  c.parts = static_cast<std::size_t>(state.range(0));
  c.mode = engine::DispatchMode::multipath(2);
  c.adversary = leakage::AdversaryModel::independent();
  const codec::PlainMessage msg{codec::Bytes(1024, 0x33)};
  std::uint64_t seed = 0;
  for (auto _ : state) {
    c.seed = ++seed;
    benchmark::DoNotOptimize(engine::run_transfer(sc, "g0_0", "g5_5", msg, c));
  }
}
BENCHMARK(BM_RunTransfer)->Arg(4)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
