#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "sdmp/gf2.hpp"
#include "sdmp/keystream.hpp"

namespace sdmp::codec {

using Bytes = std::vector<std::uint8_t>;

inline constexpr std::size_t kLengthPrefixBytes = 4;
inline constexpr std::size_t kMaxPartCount = 65535;

struct PlainMessage {
  Bytes bytes;

  static PlainMessage from_text(std::string_view text) {
    return PlainMessage{Bytes(text.begin(), text.end())};
  }
  friend bool operator==(const PlainMessage&, const PlainMessage&) = default;
};

/// Equal-length blocks of the length-prefixed, zero-filled message.
struct MessageParts {
  std::vector<Bytes> parts;
  std::size_t block_len = 0;

  [[nodiscard]] std::size_t part_count() const noexcept { return parts.size(); }
  friend bool operator==(const MessageParts&, const MessageParts&) = default;
};

/// Chain combinations C_1 = P_1, C_i = P_{i-1} xor P_i. An absent
/// combination (lost in transit) is an empty block.
struct CombinationSet {
  std::vector<Bytes> combos;
  std::size_t block_len = 0;

  [[nodiscard]] std::size_t part_count() const noexcept { return combos.size(); }
  [[nodiscard]] std::vector<gf2::BitVector> coefficient_rows() const;
  friend bool operator==(const CombinationSet&, const CombinationSet&) = default;
};

/// Coefficient row of chain combination `index` (1-based) among n.
gf2::BitVector chain_coefficient_row(std::size_t n, std::size_t index);

struct Frame {
  std::uint32_t msg_id = 0;
  std::uint16_t combo_index = 0;  // 1-based
  std::uint16_t combo_total = 0;
  Bytes payload;

  [[nodiscard]] std::uint16_t payload_len() const noexcept {
    return static_cast<std::uint16_t>(payload.size());
  }
  friend bool operator==(const Frame&, const Frame&) = default;
};

inline constexpr std::size_t kFrameHeaderBytes = 10;

/// Big-endian wire layout: msg_id:4 | combo_index:2 | combo_total:2 |
/// payload_len:2 | payload.
Bytes encode_frame(const Frame& frame);
Frame decode_frame(std::span<const std::uint8_t> wire);

MessageParts pad_and_split(const PlainMessage& msg, std::size_t n);
PlainMessage unsplit(const MessageParts& parts);

CombinationSet chain_combine(const MessageParts& parts);
MessageParts chain_reconstruct(const CombinationSet& combos);

inline std::uint64_t frame_stream_id(std::uint32_t msg_id, std::uint16_t index) noexcept {
  return (static_cast<std::uint64_t>(msg_id) << 16) | index;
}

std::vector<Frame> encrypt_combos(const CombinationSet& combos, CipherKey key,
                                  std::uint32_t msg_id);

/// Decrypts and reorders received frames by combo_index. Indices that never
/// arrived come back as empty blocks; chain_reconstruct rejects them.
CombinationSet decrypt_frames(std::span<const Frame> frames, CipherKey key);

/// Fisher-Yates driven by Keystream(seed, 0): for i = n-1 down to 1 swap
/// position i with position (word mod (i+1)).
std::vector<Frame> shuffle_frames(std::vector<Frame> frames, std::uint64_t seed);

// Threshold sharing over GF(256).

struct ShamirShare {
  std::uint8_t x = 0;
  Bytes y;

  friend bool operator==(const ShamirShare&, const ShamirShare&) = default;
};

/// Supplies the k-1 polynomial coefficients for byte position `position`.
using CoefficientSource = std::function<Bytes(std::size_t position, std::size_t count)>;

/// 4-byte big-endian length followed by the message bytes.
Bytes length_prefixed(const PlainMessage& msg);
/// Inverse of length_prefixed; trailing fill after the message is allowed.
PlainMessage strip_length_prefix(std::span<const std::uint8_t> padded);

std::vector<ShamirShare> shamir_share(const PlainMessage& msg, std::size_t k,
                                      std::size_t n, CipherKey key);
std::vector<ShamirShare> shamir_share_bytes(std::span<const std::uint8_t> secret,
                                            std::size_t k, std::size_t n,
                                            const CoefficientSource& coefficients);

/// Lagrange interpolation at x = 0 from the first k shares.
Bytes shamir_interpolate(std::span<const ShamirShare> shares, std::size_t k);
PlainMessage shamir_reconstruct(std::span<const ShamirShare> shares, std::size_t k);

}  // namespace sdmp::codec
