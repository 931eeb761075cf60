#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "sdmp/error.hpp"
#include "sdmp/codec.hpp"
#include "sdmp/leakage.hpp"

using namespace sdmp;
using namespace sdmp::leakage;

namespace {

Path P(std::initializer_list<const char*> ids) {
  Path p;
  for (const auto* id : ids) p.nodes.emplace_back(id);
  return p;
}

std::set<std::size_t> from_mask(std::uint32_t mask, std::size_t n) {
  std::set<std::size_t> out;
  for (std::size_t i = 1; i <= n; ++i) {
    if ((mask >> (i - 1)) & 1U) out.insert(i);
  }
  return out;
}

}  // namespace

TEST_CASE("chain N=3 recoverable parts") {
  CHECK(recoverable_parts_chain({{1}}, 3).recoverable_parts == std::set<std::size_t>{1});
  CHECK(recoverable_parts_chain({{2}}, 3).recoverable_parts.empty());
  CHECK(recoverable_parts_chain({{2, 3}}, 3).recoverable_parts.empty());
  CHECK(recoverable_parts_chain({{1, 3}}, 3).recoverable_parts == std::set<std::size_t>{1});
  CHECK(recoverable_parts_chain({{1, 2}}, 3).recoverable_parts == std::set<std::size_t>{1, 2});
  const auto all = recoverable_parts_chain({{1, 2, 3}}, 3);
  CHECK(all.full_reconstruction);
  CHECK_FALSE(recoverable_parts_chain({{1, 2, 3}}, 3, false).full_reconstruction);
  CHECK(recoverable_parts_chain({{1, 2, 3}}, 3, false).recoverable_parts.empty());
}

TEST_CASE("recoverable parts agree with the per-bit consistency oracle") {
  Keystream rng(6, 6);
  for (std::size_t n = 2; n <= 6; ++n) {
    std::vector<std::uint8_t> parts(n);
    for (auto& b : parts) b = static_cast<std::uint8_t>(rng.next());
    std::vector<gf2::BitVector> rows;
    for (std::size_t i = 1; i <= n; ++i) rows.push_back(codec::chain_coefficient_row(n, i));
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
      const InterceptRecord rec{from_mask(mask, n)};
      const auto expected = oracle::chain_recoverable(n, rec.intercepted, parts);
      const auto got = recoverable_parts(rec, rows);
      CHECK(got.recoverable_parts == expected);
      CHECK(recoverable_parts_chain(rec, n) == got);
      CHECK(got.full_reconstruction == (expected.size() == n));
    }
  }
}

TEST_CASE("more interception never shrinks what is recoverable") {
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::uint32_t mask = 0; mask < (1U << n); ++mask) {
      const auto base = recoverable_parts_chain({from_mask(mask, n)}, n).recoverable_parts;
      for (std::size_t extra = 0; extra < n; ++extra) {
        const auto more = recoverable_parts_chain({from_mask(mask | (1U << extra), n)}, n).recoverable_parts;
        CHECK(std::includes(more.begin(), more.end(), base.begin(), base.end()));
      }
    }
  }
}

TEST_CASE("interception_of") {
  const Assignment two{P({"s", "a", "t"}), P({"s", "b", "t"})};
  CHECK(interception_of(two, {"a"}).intercepted == std::set<std::size_t>{1});
  CHECK(interception_of(two, {}).intercepted.empty());
  CHECK(interception_of(two, {"s"}).intercepted.empty());
  CHECK(interception_of(two, {"s"}, false).intercepted == std::set<std::size_t>{1, 2});

  const Assignment uni(4, P({"s", "a", "t"}));
  CHECK(interception_of(uni, {"a"}).intercepted == std::set<std::size_t>{1, 2, 3, 4});
}

TEST_CASE("exact reconstruction probability fixtures") {
  const auto chain = fixtures::chain(0.5);
  const Assignment uni(2, P({"s", "a", "t"}));
  CHECK(std::abs(exact_reconstruction_prob(chain, uni, AdversaryModel::independent()) - 0.5) < 1e-12);

  const auto diamond = fixtures::diamond(0.5, 0.5);
  const Assignment rr{P({"s", "a", "t"}), P({"s", "b", "t"})};
  CHECK(std::abs(exact_reconstruction_prob(diamond, rr, AdversaryModel::independent()) - 0.25) < 1e-12);

  const auto skewed = fixtures::diamond(0.3, 0.2);
  CHECK(std::abs(exact_reconstruction_prob(skewed, rr, AdversaryModel::independent()) - 0.06) < 1e-12);

  // Explicit probabilities override the topology.
  const auto overridden = AdversaryModel::independent({{"a", 1.0}, {"b", 0.25}});
  CHECK(std::abs(exact_reconstruction_prob(diamond, rr, overridden) - 0.25) < 1e-12);

  auto intact = AdversaryModel::independent();
  intact.cipher_broken = false;
  CHECK(exact_reconstruction_prob(diamond, rr, intact) == 0.0);
}

TEST_CASE("exact probability against direct subset enumeration") {
  Keystream rng(10, 1);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 1 + rng.below(4);
    const std::size_t n = 2 + rng.below(6);
    std::vector<topo::Node> nodes{fixtures::ap("s"), fixtures::ap("t")};
    std::vector<topo::Link> links;
    std::vector<Path> paths;
    std::vector<double> probs;
    for (std::size_t i = 0; i < m; ++i) {
      const std::string r = "r" + std::to_string(i);
      probs.push_back(rng.unit());
      nodes.push_back(fixtures::ap(r, probs.back()));
      links.push_back(fixtures::link("s", r));
      links.push_back(fixtures::link(r, "t"));
      paths.push_back(Path{{"s", r, "t"}});
    }
    const topo::Topology topo(nodes, links);
    Assignment assignment;
    for (std::size_t i = 0; i < n; ++i) assignment.push_back(paths[i % m]);

    // Full reconstruction iff every path carrying a combination is exposed.
    double expected = 0.0;
    for (std::uint32_t mask = 0; mask < (1U << m); ++mask) {
      double w = 1.0;
      for (std::size_t i = 0; i < m; ++i) w *= ((mask >> i) & 1U) ? probs[i] : 1.0 - probs[i];
      bool full = true;
      for (std::size_t i = 0; i < std::min(n, m); ++i) full = full && ((mask >> i) & 1U);
      if (full) expected += w;
    }
    CHECK(std::abs(exact_reconstruction_prob(topo, assignment, AdversaryModel::independent()) - expected) <
          1e-12);
  }
}

TEST_CASE("untrusted endpoints add the endpoints to the exposure set") {
  const auto diamond = fixtures::diamond(0.0, 0.0);
  const Assignment rr{P({"s", "a", "t"}), P({"s", "b", "t"})};
  auto adv = AdversaryModel::independent({{"s", 0.5}, {"t", 0.0}});
  adv.endpoints_trusted = false;
  CHECK(std::abs(exact_reconstruction_prob(diamond, rr, adv) - 0.5) < 1e-12);
}

TEST_CASE("too many relays for exact enumeration") {
  const auto wide = fixtures::parallel_relays(21, 0.1);
  Assignment a;
  for (int i = 0; i < 21; ++i) a.push_back(Path{{"s", "r" + std::to_string(i), "t"}});
  try {
    exact_reconstruction_prob(wide, a, AdversaryModel::independent());
    FAIL("expected TooManyRelays");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooManyRelays);
  }
}

TEST_CASE("monte carlo estimator") {
  const auto diamond = fixtures::diamond(0.5, 0.5);
  const Assignment rr{P({"s", "a", "t"}), P({"s", "b", "t"})};
  const auto est = monte_carlo_reconstruction_prob(diamond, rr, AdversaryModel::independent(), 100000, 1);
  CHECK(std::abs(est.estimate - 0.25) <= 3 * est.std_error);
  CHECK(est.std_error == doctest::Approx(std::sqrt(est.estimate * (1 - est.estimate) / 100000)));

  const auto zero = fixtures::diamond(0.0, 0.0);
  const auto none = monte_carlo_reconstruction_prob(zero, rr, AdversaryModel::independent(), 5000, 3);
  CHECK(none.estimate == 0.0);
  CHECK(none.std_error == 0.0);

  const auto sure = fixtures::chain(1.0);
  const Assignment uni(3, P({"s", "a", "t"}));
  CHECK(monte_carlo_reconstruction_prob(sure, uni, AdversaryModel::independent(), 5000, 3).estimate == 1.0);
}

TEST_CASE("monte carlo is deterministic and thread-count independent") {
  const auto diamond = fixtures::diamond(0.3, 0.6);
  const Assignment rr{P({"s", "a", "t"}), P({"s", "b", "t"})};
  const auto adv = AdversaryModel::independent();
  const auto one = monte_carlo_reconstruction_prob(diamond, rr, adv, 20001, 42, 1);
  const auto again = monte_carlo_reconstruction_prob(diamond, rr, adv, 20001, 42, 1);
  const auto four = monte_carlo_reconstruction_prob(diamond, rr, adv, 20001, 42, 4);
  CHECK(one.successes == again.successes);
  CHECK(one.successes == four.successes);
  CHECK(one.estimate == four.estimate);
}

TEST_CASE("equal-probability disjoint relays give p^m") {
  for (std::size_t m = 1; m <= 5; ++m) {
    const double p = 0.4;
    const auto topo = fixtures::parallel_relays(m, p);
    Assignment a;
    for (std::size_t i = 0; i < m; ++i) a.push_back(Path{{"s", "r" + std::to_string(i), "t"}});
    CHECK(std::abs(exact_reconstruction_prob(topo, a, AdversaryModel::independent()) - std::pow(p, m)) < 1e-12);
  }
}
