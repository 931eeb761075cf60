#include <set>
#include <string>

#include "sdmp/codec.hpp"
#include "sdmp/error.hpp"
#include "sdmp/gf256.hpp"

namespace sdmp::codec {

namespace {

void check_threshold(std::size_t k, std::size_t n) {
  if (k < 2 || k > n || n > 255) {
    throw Error(ErrorCode::BadThreshold,
                "need 2 <= k <= n <= 255, got k=" + std::to_string(k) + " n=" + std::to_string(n));
  }
}

// Horner evaluation of secret + a_1 x + ... + a_{k-1} x^{k-1}.
std::uint8_t evaluate(std::uint8_t secret, std::span<const std::uint8_t> coefficients,
                      std::uint8_t x) {
  std::uint8_t acc = 0;
  for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
    acc = gf256::add(gf256::mul(acc, x), *it);
  }
  return gf256::add(gf256::mul(acc, x), secret);
}

}  // namespace

std::vector<ShamirShare> shamir_share_bytes(std::span<const std::uint8_t> secret,
                                            std::size_t k, std::size_t n,
                                            const CoefficientSource& coefficients) {
  check_threshold(k, n);
  std::vector<ShamirShare> shares(n);
  for (std::size_t t = 0; t < n; ++t) {
    shares[t].x = static_cast<std::uint8_t>(t + 1);
    shares[t].y.resize(secret.size());
  }
  for (std::size_t j = 0; j < secret.size(); ++j) {
    const Bytes a = coefficients(j, k - 1);
    if (a.size() != k - 1) {
      throw Error(ErrorCode::BadThreshold, "coefficient source returned wrong count");
    }
    for (auto& share : shares) share.y[j] = evaluate(secret[j], a, share.x);
  }
  return shares;
}

std::vector<ShamirShare> shamir_share(const PlainMessage& msg, std::size_t k,
                                      std::size_t n, CipherKey key) {
  check_threshold(k, n);
  const Bytes padded = length_prefixed(msg);
  return shamir_share_bytes(padded, k, n, [key](std::size_t position, std::size_t count) {
    return keystream(key, position, count);
  });
}

Bytes shamir_interpolate(std::span<const ShamirShare> shares, std::size_t k) {
  if (k < 1 || shares.size() < k) {
    throw Error(ErrorCode::NotEnoughShares,
                std::to_string(shares.size()) + " shares for threshold " + std::to_string(k));
  }
  std::set<std::uint8_t> seen;
  for (const auto& s : shares) {
    if (s.x == 0) throw Error(ErrorCode::DuplicateShareX, "share abscissa 0 is reserved");
    if (!seen.insert(s.x).second) {
      throw Error(ErrorCode::DuplicateShareX, "x = " + std::to_string(s.x));
    }
  }
  const auto used = shares.first(k);
  const std::size_t len = used.front().y.size();
  for (const auto& s : used) {
    if (s.y.size() != len) throw Error(ErrorCode::NotEnoughShares, "share lengths differ");
  }

  // Lagrange basis at zero: l_i(0) = prod_{m != i} x_m / (x_m - x_i).
  std::vector<std::uint8_t> basis(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::uint8_t num = 1;
    std::uint8_t den = 1;
    for (std::size_t m = 0; m < k; ++m) {
      if (m == i) continue;
      num = gf256::mul(num, used[m].x);
      den = gf256::mul(den, gf256::add(used[m].x, used[i].x));
    }
    basis[i] = gf256::div(num, den);
  }

  Bytes secret(len, 0);
  for (std::size_t j = 0; j < len; ++j) {
    std::uint8_t acc = 0;
    for (std::size_t i = 0; i < k; ++i) acc ^= gf256::mul(basis[i], used[i].y[j]);
    secret[j] = acc;
  }
  return secret;
}

PlainMessage shamir_reconstruct(std::span<const ShamirShare> shares, std::size_t k) {
  return strip_length_prefix(shamir_interpolate(shares, k));
}

}  // namespace sdmp::codec
