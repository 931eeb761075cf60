#include "cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

#include "sdmp/engine.hpp"
#include "sdmp/error.hpp"
#include "sdmp/leakage.hpp"
#include "sdmp/routing.hpp"
#include "sdmp/topology.hpp"

namespace sdmp::cli {
namespace {

using nlohmann::json;

constexpr const char* kDefaultMessage = "The quick brown fox jumps over the lazy dog";

struct Globals {
  std::string seed = "0";
  std::string format;  // empty: text for validate/paths, json otherwise
  std::string trace_file;
};

struct RunOptions {
  std::string topology;
  std::string src;
  std::string dst;
  std::size_t parts = 4;
  std::string mode = "multipath";
  std::optional<std::size_t> m;
  std::string key = "0";
  std::string adversary;
  std::string message;
  std::string message_file;
  bool cipher_intact = false;
  bool untrusted_endpoints = false;
  std::uint64_t trials = 0;
  unsigned threads = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::uint64_t parse_hex64(const std::string& text, const char* what) {
  std::string digits = text;
  if (digits.starts_with("0x") || digits.starts_with("0X")) digits = digits.substr(2);
  const bool ok = !digits.empty() && digits.size() <= 16 &&
                  std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isxdigit(c); });
  if (!ok) throw Error(ErrorCode::ConfigError, std::string(what) + " must be a 64-bit hex value, got '" + text + "'");
  return std::stoull(digits, nullptr, 16);
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string join_nodes(const routing::Path& p, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    if (i > 0) out += sep;
    out += p.nodes[i].str();
  }
  return out;
}

json path_json(const routing::Path& p, double cost) {
  json nodes = json::array();
  for (const auto& id : p.nodes) nodes.push_back(id.str());
  return json{{"nodes", nodes}, {"cost", cost}};
}

void check_node(const topo::Topology& topo, const std::string& id, const char* what) {
  if (id.empty()) throw Error(ErrorCode::ConfigError, std::string(what) + " is required");
  if (!topo.contains(id)) throw Error(ErrorCode::UnknownNode, std::string(what) + " '" + id + "' is not in the topology");
}

engine::DispatchMode dispatch_mode(const RunOptions& o) {
  if (o.mode == "unipath") {
    if (o.m) throw Error(ErrorCode::ConfigError, "-m applies only to multipath");
    return engine::DispatchMode::unipath();
  }
  const std::size_t m = o.m.value_or(2);
  if (m < 1) throw Error(ErrorCode::ConfigError, "-m must be at least 1");
  return engine::DispatchMode::multipath(m);
}

std::optional<leakage::AdversaryModel> adversary_model(const topo::Topology& topo, const RunOptions& o) {
  std::optional<leakage::AdversaryModel> model;
  if (o.adversary.empty() || o.adversary == "none") {
    if (o.cipher_intact || o.untrusted_endpoints) {
      throw Error(ErrorCode::ConfigError, "adversary flags given without --adversary");
    }
    return model;
  }
  if (o.adversary == "independent") {
    model = leakage::AdversaryModel::independent();
  } else if (o.adversary.starts_with("fixed:")) {
    std::set<topo::NodeId> nodes;
    std::stringstream list(o.adversary.substr(6));
    for (std::string id; std::getline(list, id, ',');) {
      if (id.empty()) continue;
      check_node(topo, id, "compromised node");
      nodes.insert(id);
    }
    model = leakage::AdversaryModel::fixed(std::move(nodes));
  } else {
    throw Error(ErrorCode::ConfigError, "--adversary must be none, independent or fixed:<id,...>");
  }
  model->cipher_broken = !o.cipher_intact;
  model->endpoints_trusted = !o.untrusted_endpoints;
  return model;
}

struct Prepared {
  engine::Scenario scenario;
  engine::TransferConfig config;
  codec::PlainMessage message;
};

Prepared prepare(const RunOptions& o, const Globals& g) {
  Prepared p{engine::load_scenario(read_file(o.topology)), {}, {}};
  check_node(p.scenario.topology, o.src, "--src");
  check_node(p.scenario.topology, o.dst, "--dst");
  p.config.parts = o.parts;
  p.config.mode = dispatch_mode(o);
  p.config.key = CipherKey{parse_hex64(o.key, "--key")};
  p.config.seed = parse_hex64(g.seed, "--seed");
  p.config.adversary = adversary_model(p.scenario.topology, o);
  p.config.record_trace = !g.trace_file.empty();
  if (!o.message_file.empty() && !o.message.empty()) {
    throw Error(ErrorCode::ConfigError, "--message and --message-file are exclusive");
  }
  if (!o.message_file.empty()) {
    const auto text = read_file(o.message_file);
    p.message.bytes.assign(text.begin(), text.end());
  } else {
    p.message = codec::PlainMessage::from_text(o.message.empty() ? kDefaultMessage : o.message);
  }
  return p;
}

void write_trace(const std::string& path, const engine::SimReport& report) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ConfigError, "cannot write " + path);
  for (const auto& e : report.trace) out << engine::format_trace_line(e) << '\n';
}

int cmd_validate(const std::string& file, const Globals& g, std::ostream& out) {
  const auto topo = topo::parse_topology(read_file(file));
  const auto violations = topo::validate(topo);
  if (g.format == "json") {
    json list = json::array();
    for (const auto& v : violations) {
      list.push_back({{"rule", v.rule}, {"subject", v.subject}, {"message", v.message}});
    }
    out << json{{"valid", violations.empty()}, {"violations", list}}.dump() << '\n';
  } else if (g.format == "csv") {
    out << "rule,subject,message\n";
    for (const auto& v : violations) out << v.rule << ',' << v.subject << ",\"" << v.message << "\"\n";
  } else {
    for (const auto& v : violations) out << v.rule << ": " << v.subject << ": " << v.message << '\n';
  }
  return violations.empty() ? kOk : kRejected;
}

int cmd_paths(const RunOptions& o, std::optional<std::size_t> max, const Globals& g, std::ostream& out) {
  const auto sc = engine::load_scenario(read_file(o.topology));
  check_node(sc.topology, o.src, "--src");
  check_node(sc.topology, o.dst, "--dst");
  const auto probs = sc.topology.compromise_probs();
  const auto all = routing::max_disjoint_paths(sc.topology, o.src, o.dst);
  const auto chosen = routing::select_paths(all, max.value_or(all.size()), probs);
  if (g.format == "json") {
    json list = json::array();
    for (const auto& p : chosen.paths) list.push_back(path_json(p, routing::security_cost(p, probs).value));
    out << json{{"paths", list}}.dump() << '\n';
  } else if (g.format == "csv") {
    out << "cost,nodes\n";
    for (const auto& p : chosen.paths) {
      out << format_double(routing::security_cost(p, probs).value) << ',' << join_nodes(p, " ") << '\n';
    }
  } else {
    for (const auto& p : chosen.paths) {
      out << join_nodes(p, " -> ") << "  cost " << format_double(routing::security_cost(p, probs).value) << '\n';
    }
  }
  return kOk;
}

int cmd_send(const RunOptions& o, const Globals& g, std::ostream& out) {
  const auto p = prepare(o, g);
  const auto report = engine::run_transfer(p.scenario, o.src, o.dst, p.message, p.config);
  if (!g.trace_file.empty()) write_trace(g.trace_file, report);
  if (g.format == "csv") {
    out << engine::csv_header_transfer() << '\n' << engine::to_csv_row(report) << '\n';
  } else {
    out << engine::to_json(report) << '\n';
  }
  return report.reconstructed_ok ? kOk : kTransferFailed;
}

int cmd_analyze(RunOptions o, const Globals& g, std::ostream& out) {
  if (o.adversary.empty()) o.adversary = "independent";
  if (o.adversary != "independent") throw Error(ErrorCode::ConfigError, "analyze needs --adversary independent");
  const auto p = prepare(o, g);
  const auto& topo = p.scenario.topology;
  const auto plan = engine::plan_dispatch(topo, o.src, o.dst, p.config.parts, p.config.mode);
  const auto& adversary = *p.config.adversary;
  const auto relevant = leakage::relevant_nodes(plan.assignment, adversary.endpoints_trusted);

  std::string method;
  std::optional<double> exact;
  leakage::MonteCarloEstimate mc;
  if (relevant.size() <= leakage::kMaxExactRelays) {
    method = "exact";
    exact = leakage::exact_reconstruction_prob(topo, plan.assignment, adversary);
    mc.estimate = *exact;
  } else {
    method = "monte_carlo";
    if (o.trials == 0) throw Error(ErrorCode::ConfigError, "--trials must be positive");
    mc = leakage::monte_carlo_reconstruction_prob(topo, plan.assignment, adversary, o.trials, p.config.seed,
                                                  o.threads);
  }

  std::vector<std::vector<std::size_t>> combos(plan.selected.size());
  for (std::size_t i = 0; i < plan.path_of.size(); ++i) combos[plan.path_of[i]].push_back(i + 1);

  if (g.format == "csv") {
    std::string costs;
    for (std::size_t i = 0; i < plan.costs.size(); ++i) costs += (i ? ";" : "") + format_double(plan.costs[i]);
    out << "method,exact,estimate,stderr,trials,relays,mode,m,n,seed,path_costs\n"
        << method << ',' << (exact ? format_double(*exact) : "") << ',' << format_double(mc.estimate) << ','
        << format_double(mc.std_error) << ',' << mc.trials << ',' << relevant.size() << ','
        << engine::to_string(p.config.mode) << ',' << plan.selected.size() << ',' << p.config.parts << ','
        << engine::hex64(p.config.seed) << ',' << costs << '\n';
    return kOk;
  }
  json paths = json::array();
  for (std::size_t i = 0; i < plan.selected.size(); ++i) {
    auto entry = path_json(plan.selected.paths[i], plan.costs[i]);
    entry["combos"] = combos[i];
    paths.push_back(entry);
  }
  json doc{{"method", method},
           {"exact", exact ? json(*exact) : json(nullptr)},
           {"estimate", mc.estimate},
           {"stderr", mc.std_error},
           {"trials", mc.trials},
           {"relays", relevant.size()},
           {"mode", engine::to_string(p.config.mode)},
           {"m", plan.selected.size()},
           {"n", p.config.parts},
           {"seed", engine::hex64(p.config.seed)},
           {"paths", paths}};
  out << doc.dump() << '\n';
  return kOk;
}

int cmd_batch(const RunOptions& o, const Globals& g, std::ostream& out) {
  const auto p = prepare(o, g);
  if (o.trials == 0) throw Error(ErrorCode::ConfigError, "--trials must be positive");
  auto config = p.config;
  config.record_trace = false;
  const auto report = engine::run_batch(p.scenario, o.src, o.dst, p.message, config, o.trials, o.threads);
  if (!g.trace_file.empty()) {
    write_trace(g.trace_file, engine::run_transfer(p.scenario, o.src, o.dst, p.message, p.config));
  }
  if (g.format == "csv") {
    out << engine::csv_header_batch() << '\n' << engine::to_csv_row(report) << '\n';
  } else {
    out << engine::to_json(report) << '\n';
  }
  return kOk;
}

void add_run_options(CLI::App* sub, RunOptions& o, bool transfer) {
  sub->add_option("topology", o.topology, "Scenario JSON file")->required();
  sub->add_option("--src", o.src, "Source node id")->required();
  sub->add_option("--dst", o.dst, "Destination node id")->required();
  if (!transfer) return;
  sub->add_option("-n,--parts", o.parts, "Number of parts N")->capture_default_str()->check(CLI::Range(2, 65535));
  sub->add_option("--mode", o.mode, "Dispatch mode")
      ->capture_default_str()
      ->check(CLI::IsMember({"unipath", "multipath"}));
  sub->add_option("-m,--paths", o.m, "Path count for multipath (default 2)");
  sub->add_option("--key", o.key, "Cipher key, 64-bit hex")->capture_default_str();
  sub->add_option("--message", o.message, "Message text")->default_str(kDefaultMessage);
  sub->add_option("--message-file", o.message_file, "Read the message bytes from a file");
  sub->add_flag("--cipher-intact", o.cipher_intact, "Adversary cannot decrypt intercepted frames");
  sub->add_flag("--untrusted-endpoints", o.untrusted_endpoints, "Source and destination may be compromised");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secure data transfer over multiple disjoint paths: simulation and analysis", "sdmp"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "Simulation seed, 64-bit hex")->capture_default_str();
  app.add_option("--format", g.format, "Output format (default text for validate and paths, json otherwise)")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_option("--trace", g.trace_file, "Write the event trace of the transfer to a file");

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "Check a topology file; exit 1 on rule violations");
  validate->add_option("topology", validate_file, "Topology JSON file")->required();

  RunOptions paths_opts;
  std::optional<std::size_t> max_paths;
  auto* paths = app.add_subcommand("paths", "List the cheapest node-disjoint paths");
  add_run_options(paths, paths_opts, false);
  paths->add_option("--max", max_paths, "At most this many paths (default all)");

  RunOptions send_opts;
  auto* send = app.add_subcommand("send", "Run one transfer; exit 3 when the message is not reconstructed");
  add_run_options(send, send_opts, true);
  send->add_option("--adversary", send_opts.adversary, "none, independent or fixed:<id,...>")
      ->default_str("none");

  RunOptions analyze_opts;
  analyze_opts.trials = 100000;
  auto* analyze = app.add_subcommand("analyze", "Probability that an independent adversary reconstructs the message");
  add_run_options(analyze, analyze_opts, true);
  analyze->add_option("--adversary", analyze_opts.adversary, "Only independent is accepted")
      ->default_str("independent");
  analyze->add_option("--trials", analyze_opts.trials, "Monte Carlo trials when exact enumeration is too large")
      ->capture_default_str();
  analyze->add_option("--threads", analyze_opts.threads, "Monte Carlo worker threads")->capture_default_str();

  RunOptions batch_opts;
  batch_opts.trials = 1000;
  auto* batch = app.add_subcommand("batch", "Repeat a transfer over derived seeds and aggregate");
  add_run_options(batch, batch_opts, true);
  batch->add_option("--adversary", batch_opts.adversary, "none, independent or fixed:<id,...>")
      ->default_str("none");
  batch->add_option("--trials", batch_opts.trials, "Number of transfers")->capture_default_str();
  batch->add_option("--threads", batch_opts.threads, "Worker threads")->capture_default_str();

  for (auto* sub : {validate, paths, send, analyze, batch}) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*validate) return cmd_validate(validate_file, g, out);
    if (*paths) return cmd_paths(paths_opts, max_paths, g, out);
    if (*send) return cmd_send(send_opts, g, out);
    if (*analyze) return cmd_analyze(analyze_opts, g, out);
    return cmd_batch(batch_opts, g, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::NoPath ? kRejected : kBadInput;
  }
}

}  // namespace sdmp::cli
