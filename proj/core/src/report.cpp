#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "sdmp/engine.hpp"

namespace sdmp::engine {

using nlohmann::json;

std::string hex64(std::uint64_t value) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(value));
  return buf;
}

namespace {

json node_list(const std::vector<NodeId>& nodes) {
  json out = json::array();
  for (const auto& n : nodes) out.push_back(n.str());
  return out;
}

std::string join_indices(const std::set<std::size_t>& values) {
  std::string out;
  for (const auto v : values) {
    if (!out.empty()) out += ' ';
    out += std::to_string(v);
  }
  return out;
}

std::string join_nodes(const std::set<NodeId>& values) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += ' ';
    out += v.str();
  }
  return out;
}

}  // namespace

std::string to_json(const SimReport& r) {
  json paths = json::array();
  for (const auto& p : r.paths) {
    paths.push_back({{"nodes", node_list(p.path.nodes)}, {"cost", p.cost}, {"combos", p.combos}});
  }
  json compromised = json::array();
  for (const auto& n : r.compromised) compromised.push_back(n.str());
  const json doc = {
      {"delivered", r.delivered},
      {"reconstructed_ok", r.reconstructed_ok},
      {"completion_time", r.completion_time},
      {"frames_sent", r.frames_sent},
      {"frames_delivered", r.frames_delivered},
      {"frames_dropped", r.frames_dropped},
      {"frames_in_flight", r.frames_in_flight},
      {"frames_intercepted", r.frames_intercepted},
      {"intercepted", r.intercept.intercepted},
      {"recoverable_parts", r.leakage.recoverable_parts},
      {"full_reconstruction", r.leakage.full_reconstruction},
      {"compromised", compromised},
      {"paths", paths},
      {"mode", to_string(r.mode)},
      {"m", r.mode.kind == DispatchMode::Kind::Unipath ? 1 : r.mode.paths},
      {"n", r.parts},
      {"seed", hex64(r.seed)},
      {"events", r.events},
      {"trace_digest", hex64(r.trace_digest)},
      {"failure", r.failure},
  };
  return doc.dump();
}

std::string to_json(const BatchReport& r) {
  const json doc = {
      {"trials", r.trials},
      {"seed", hex64(r.seed)},
      {"delivered", r.delivered},
      {"reconstructed_ok", r.reconstructed_ok},
      {"intercepted_any", r.intercepted_any},
      {"full_reconstruction", r.full_reconstruction},
      {"frames_sent", r.frames_sent},
      {"frames_intercepted", r.frames_intercepted},
      {"delivery_rate", r.delivery_rate()},
      {"interception_rate", r.interception_rate()},
      {"reconstruction_rate", r.reconstruction_rate()},
      {"reconstruction_stderr", r.reconstruction_stderr()},
      {"mean_completion_time", r.mean_completion_time},
  };
  return doc.dump();
}

std::string csv_header_transfer() {
  return "mode,m,n,seed,delivered,reconstructed_ok,completion_time,frames_sent,"
         "frames_delivered,frames_dropped,frames_intercepted,intercepted,recoverable_parts,"
         "full_reconstruction,compromised,trace_digest";
}

std::string to_csv_row(const SimReport& r) {
  std::ostringstream os;
  os << to_string(r.mode) << ','
     << (r.mode.kind == DispatchMode::Kind::Unipath ? 1 : r.mode.paths) << ',' << r.parts << ','
     << hex64(r.seed) << ',' << (r.delivered ? 1 : 0) << ',' << (r.reconstructed_ok ? 1 : 0)
     << ',' << r.completion_time << ',' << r.frames_sent << ',' << r.frames_delivered << ','
     << r.frames_dropped << ',' << r.frames_intercepted << ','
     << join_indices(r.intercept.intercepted) << ',' << join_indices(r.leakage.recoverable_parts)
     << ',' << (r.leakage.full_reconstruction ? 1 : 0) << ',' << join_nodes(r.compromised) << ','
     << hex64(r.trace_digest);
  return os.str();
}

std::string csv_header_batch() {
  return "trials,seed,delivered,reconstructed_ok,intercepted_any,full_reconstruction,"
         "frames_sent,frames_intercepted,delivery_rate,interception_rate,reconstruction_rate,"
         "reconstruction_stderr,mean_completion_time";
}

std::string to_csv_row(const BatchReport& r) {
  // json's number formatting is the shortest round-trip form; reuse it.
  auto num = [](double v) { return json(v).dump(); };
  std::ostringstream os;
  os << r.trials << ',' << hex64(r.seed) << ',' << r.delivered << ',' << r.reconstructed_ok << ','
     << r.intercepted_any << ',' << r.full_reconstruction << ',' << r.frames_sent << ','
     << r.frames_intercepted << ',' << num(r.delivery_rate()) << ','
     << num(r.interception_rate()) << ',' << num(r.reconstruction_rate()) << ','
     << num(r.reconstruction_stderr()) << ',' << num(r.mean_completion_time);
  return os.str();
}

}  // namespace sdmp::engine
