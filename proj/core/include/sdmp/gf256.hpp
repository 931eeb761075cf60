#pragma once

#include <cstdint>

// Arithmetic in GF(2^8) with reducing polynomial x^8 + x^4 + x^3 + x + 1.
namespace sdmp::gf256 {

constexpr std::uint8_t add(std::uint8_t a, std::uint8_t b) noexcept {
  return static_cast<std::uint8_t>(a ^ b);
}

std::uint8_t mul(std::uint8_t a, std::uint8_t b) noexcept;
/// Multiplicative inverse; a must be non-zero.
std::uint8_t inv(std::uint8_t a);
std::uint8_t div(std::uint8_t a, std::uint8_t b);
std::uint8_t pow(std::uint8_t a, unsigned e) noexcept;

}  // namespace sdmp::gf256
