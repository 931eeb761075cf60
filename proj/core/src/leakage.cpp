#include "sdmp/leakage.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

#include "sdmp/codec.hpp"
#include "sdmp/error.hpp"
#include "sdmp/keystream.hpp"

namespace sdmp::leakage {

namespace {

bool path_exposed(const Path& path, const std::set<NodeId>& compromised, bool endpoints_trusted) {
  for (const auto& v : path.interior()) {
    if (compromised.contains(v)) return true;
  }
  if (!endpoints_trusted && !path.nodes.empty()) {
    return compromised.contains(path.source()) || compromised.contains(path.destination());
  }
  return false;
}

using PathMask = std::vector<std::uint64_t>;

// Distinct assigned paths, the relevant nodes that expose each one, and a
// memo from exposed-path set to "adversary reconstructs everything".
class ExposureModel {
 public:
  ExposureModel(const topo::Topology& topo, const Assignment& assignment,
                const AdversaryModel& adversary, std::span<const gf2::BitVector> rows)
      : rows_(rows.begin(), rows.end()) {
    if (rows_.size() != assignment.size()) {
      throw Error(ErrorCode::MissingCombination, "assignment does not cover every combination");
    }
    std::map<Path, std::size_t> path_slot;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      const auto [it, inserted] = path_slot.emplace(assignment[i], path_slot.size());
      if (inserted) combos_on_path_.emplace_back();
      combos_on_path_[it->second].push_back(i);
    }
    words_ = (combos_on_path_.size() + 63) / 64;

    for (const auto& v : relevant_nodes(assignment, adversary.endpoints_trusted)) {
      PathMask mask(words_, 0);
      for (const auto& [path, slot] : path_slot) {
        if (path_exposed(path, {v}, adversary.endpoints_trusted)) {
          mask[slot / 64] |= std::uint64_t{1} << (slot % 64);
        }
      }
      double p = 0.0;
      if (const auto it = adversary.probabilities.find(v); it != adversary.probabilities.end()) {
        p = it->second;
      } else {
        const auto* node = topo.find(v);
        if (node == nullptr) throw Error(ErrorCode::MissingProbability, v.str());
        p = node->compromise_prob;
      }
      nodes_.push_back(v);
      probs_.push_back(p);
      masks_.push_back(std::move(mask));
    }
  }

  [[nodiscard]] std::size_t relevant_count() const noexcept { return nodes_.size(); }
  [[nodiscard]] double prob(std::size_t i) const noexcept { return probs_[i]; }

  void expose(PathMask& acc, std::size_t node) const {
    for (std::size_t w = 0; w < words_; ++w) acc[w] |= masks_[node][w];
  }
  [[nodiscard]] PathMask empty_mask() const { return PathMask(words_, 0); }

  bool full_reconstruction(const PathMask& exposed) {
    if (const auto it = memo_.find(exposed); it != memo_.end()) return it->second;
    gf2::Basis basis(rows_.empty() ? 0 : rows_.front().width());
    for (std::size_t slot = 0; slot < combos_on_path_.size(); ++slot) {
      if ((exposed[slot / 64] >> (slot % 64)) & 1U) {
        for (const auto combo : combos_on_path_[slot]) basis.insert(rows_[combo]);
      }
    }
    const bool full = basis.rank() == basis.width();
    memo_.emplace(exposed, full);
    return full;
  }

 private:
  std::vector<gf2::BitVector> rows_;
  std::vector<std::vector<std::size_t>> combos_on_path_;
  std::size_t words_ = 0;
  std::vector<NodeId> nodes_;
  std::vector<double> probs_;
  std::vector<PathMask> masks_;
  std::map<PathMask, bool> memo_;
};

std::vector<gf2::BitVector> chain_rows(std::size_t n) {
  std::vector<gf2::BitVector> rows;
  rows.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) rows.push_back(codec::chain_coefficient_row(n, i));
  return rows;
}

LeakageResult from_basis(const gf2::Basis& basis, std::size_t n) {
  LeakageResult out;
  for (std::size_t j = 0; j < n; ++j) {
    if (basis.contains_unit(j)) out.recoverable_parts.insert(j + 1);
  }
  out.full_reconstruction = n > 0 && out.recoverable_parts.size() == n;
  return out;
}

}  // namespace

LeakageResult recoverable_parts(const InterceptRecord& intercepted,
                                std::span<const gf2::BitVector> coefficient_rows,
                                bool cipher_broken) {
  const std::size_t n = coefficient_rows.size();
  if (!cipher_broken || n == 0) return {};
  gf2::Basis basis(coefficient_rows.front().width());
  for (const auto i : intercepted.intercepted) {
    if (i >= 1 && i <= n) basis.insert(coefficient_rows[i - 1]);
  }
  return from_basis(basis, basis.width());
}

LeakageResult recoverable_parts_chain(const InterceptRecord& intercepted, std::size_t n,
                                      bool cipher_broken) {
  if (!cipher_broken || n == 0) return {};
  gf2::Basis basis(n);
  for (const auto i : intercepted.intercepted) {
    if (i >= 1 && i <= n) basis.insert(codec::chain_coefficient_row(n, i));
  }
  return from_basis(basis, n);
}

InterceptRecord interception_of(const Assignment& assignment,
                                const std::set<NodeId>& compromised, bool endpoints_trusted) {
  InterceptRecord out;
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (path_exposed(assignment[i], compromised, endpoints_trusted)) out.intercepted.insert(i + 1);
  }
  return out;
}

std::set<NodeId> relevant_nodes(const Assignment& assignment, bool endpoints_trusted) {
  std::set<NodeId> out;
  for (const auto& path : assignment) {
    out.insert(path.interior().begin(), path.interior().end());
    if (!endpoints_trusted && !path.nodes.empty()) {
      out.insert(path.source());
      out.insert(path.destination());
    }
  }
  return out;
}

double exact_reconstruction_prob(const topo::Topology& topo, const Assignment& assignment,
                                 const AdversaryModel& adversary) {
  const auto rows = chain_rows(assignment.size());
  return exact_reconstruction_prob(topo, assignment, adversary, rows);
}

double exact_reconstruction_prob(const topo::Topology& topo, const Assignment& assignment,
                                 const AdversaryModel& adversary,
                                 std::span<const gf2::BitVector> coefficient_rows) {
  const auto relevant = relevant_nodes(assignment, adversary.endpoints_trusted);
  if (relevant.size() > kMaxExactRelays) {
    throw Error(ErrorCode::TooManyRelays, std::to_string(relevant.size()) + " relevant nodes");
  }
  if (!adversary.cipher_broken || assignment.empty()) return 0.0;

  ExposureModel model(topo, assignment, adversary, coefficient_rows);
  const std::size_t r = model.relevant_count();
  long double sum = 0.0L;
  long double carry = 0.0L;  // Kahan compensation
  for (std::uint64_t subset = 0; subset < (std::uint64_t{1} << r); ++subset) {
    long double weight = 1.0L;
    auto exposed = model.empty_mask();
    for (std::size_t i = 0; i < r; ++i) {
      const long double p = model.prob(i);
      if ((subset >> i) & 1U) {
        weight *= p;
        model.expose(exposed, i);
      } else {
        weight *= 1.0L - p;
      }
    }
    if (weight == 0.0L || !model.full_reconstruction(exposed)) continue;
    const long double y = weight - carry;
    const long double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return static_cast<double>(std::clamp(sum, 0.0L, 1.0L));
}

MonteCarloEstimate monte_carlo_reconstruction_prob(const topo::Topology& topo,
                                                   const Assignment& assignment,
                                                   const AdversaryModel& adversary,
                                                   std::uint64_t trials, std::uint64_t seed,
                                                   unsigned threads) {
  if (trials == 0) throw Error(ErrorCode::ConfigError, "trials must be >= 1");
  MonteCarloEstimate out;
  out.trials = trials;
  if (adversary.cipher_broken && !assignment.empty()) {
    const auto rows = chain_rows(assignment.size());
    threads = std::max(1U, threads);

    auto run_range = [&](std::uint64_t first, std::uint64_t last) {
      ExposureModel model(topo, assignment, adversary, rows);
      std::uint64_t hits = 0;
      for (std::uint64_t trial = first; trial < last; ++trial) {
        Keystream gen(seed, trial);
        auto exposed = model.empty_mask();
        for (std::size_t i = 0; i < model.relevant_count(); ++i) {
          if (gen.unit() < model.prob(i)) model.expose(exposed, i);
        }
        if (model.full_reconstruction(exposed)) ++hits;
      }
      return hits;
    };

    if (threads == 1) {
      out.successes = run_range(0, trials);
    } else {
      std::vector<std::uint64_t> partial(threads, 0);
      std::vector<std::thread> pool;
      const std::uint64_t chunk = (trials + threads - 1) / threads;
      for (unsigned t = 0; t < threads; ++t) {
        const auto first = std::min(trials, t * chunk);
        const auto last = std::min(trials, first + chunk);
        pool.emplace_back([&, t, first, last] { partial[t] = run_range(first, last); });
      }
      for (auto& th : pool) th.join();
      for (const auto h : partial) out.successes += h;
    }
  }
  out.estimate = static_cast<double>(out.successes) / static_cast<double>(trials);
  out.std_error = std::sqrt(out.estimate * (1.0 - out.estimate) / static_cast<double>(trials));
  return out;
}

}  // namespace sdmp::leakage
