#include "sdmp/codec.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "sdmp/error.hpp"

namespace sdmp::codec {

namespace {

void put_be(Bytes& out, std::uint64_t value, int width) {
  for (int shift = (width - 1) * 8; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(value >> shift));
  }
}

std::uint64_t get_be(std::span<const std::uint8_t> in, std::size_t offset, int width) {
  std::uint64_t value = 0;
  for (int i = 0; i < width; ++i) value = (value << 8) | in[offset + static_cast<std::size_t>(i)];
  return value;
}

void xor_into(Bytes& dst, std::span<const std::uint8_t> src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

}  // namespace

gf2::BitVector chain_coefficient_row(std::size_t n, std::size_t index) {
  if (index < 1 || index > n) throw Error(ErrorCode::MissingCombination, "row index out of range");
  auto row = gf2::BitVector::unit(n, index - 1);
  if (index >= 2) row.set(index - 2);
  return row;
}

std::vector<gf2::BitVector> CombinationSet::coefficient_rows() const {
  std::vector<gf2::BitVector> rows;
  rows.reserve(combos.size());
  for (std::size_t i = 1; i <= combos.size(); ++i) {
    rows.push_back(chain_coefficient_row(combos.size(), i));
  }
  return rows;
}

Bytes encode_frame(const Frame& frame) {
  if (frame.payload.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorCode::PayloadTooLarge, std::to_string(frame.payload.size()) + " bytes");
  }
  Bytes out;
  out.reserve(kFrameHeaderBytes + frame.payload.size());
  put_be(out, frame.msg_id, 4);
  put_be(out, frame.combo_index, 2);
  put_be(out, frame.combo_total, 2);
  put_be(out, frame.payload.size(), 2);
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  return out;
}

Frame decode_frame(std::span<const std::uint8_t> wire) {
  if (wire.size() < kFrameHeaderBytes) {
    throw Error(ErrorCode::MalformedFrame, "truncated header");
  }
  Frame frame;
  frame.msg_id = static_cast<std::uint32_t>(get_be(wire, 0, 4));
  frame.combo_index = static_cast<std::uint16_t>(get_be(wire, 4, 2));
  frame.combo_total = static_cast<std::uint16_t>(get_be(wire, 6, 2));
  const auto payload_len = static_cast<std::size_t>(get_be(wire, 8, 2));
  if (wire.size() != kFrameHeaderBytes + payload_len) {
    throw Error(ErrorCode::MalformedFrame, "payload_len does not match frame size");
  }
  if (frame.combo_index < 1 || frame.combo_index > frame.combo_total) {
    throw Error(ErrorCode::MalformedFrame, "combo_index outside 1..combo_total");
  }
  frame.payload.assign(wire.begin() + kFrameHeaderBytes, wire.end());
  return frame;
}

MessageParts pad_and_split(const PlainMessage& msg, std::size_t n) {
  if (n < 2) throw Error(ErrorCode::PartCountTooSmall, "n = " + std::to_string(n));
  if (n > kMaxPartCount) throw Error(ErrorCode::PartCountTooLarge, "n = " + std::to_string(n));
  Bytes padded = length_prefixed(msg);
  const std::size_t block_len = (padded.size() + n - 1) / n;
  padded.resize(block_len * n, 0);

  MessageParts out;
  out.block_len = block_len;
  out.parts.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto first = padded.begin() + static_cast<std::ptrdiff_t>(i * block_len);
    out.parts.emplace_back(first, first + static_cast<std::ptrdiff_t>(block_len));
  }
  return out;
}

PlainMessage unsplit(const MessageParts& parts) {
  Bytes joined;
  joined.reserve(parts.part_count() * parts.block_len);
  for (const auto& p : parts.parts) joined.insert(joined.end(), p.begin(), p.end());
  return strip_length_prefix(joined);
}

Bytes length_prefixed(const PlainMessage& msg) {
  if (msg.bytes.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::MessageTooLarge, std::to_string(msg.bytes.size()) + " bytes");
  }
  Bytes out;
  out.reserve(kLengthPrefixBytes + msg.bytes.size());
  put_be(out, msg.bytes.size(), 4);
  out.insert(out.end(), msg.bytes.begin(), msg.bytes.end());
  return out;
}

PlainMessage strip_length_prefix(std::span<const std::uint8_t> padded) {
  if (padded.size() < kLengthPrefixBytes) {
    throw Error(ErrorCode::CorruptLengthPrefix, "shorter than the length prefix");
  }
  const auto length = get_be(padded, 0, 4);
  if (length > padded.size() - kLengthPrefixBytes) {
    throw Error(ErrorCode::CorruptLengthPrefix,
                "prefix " + std::to_string(length) + " exceeds " +
                    std::to_string(padded.size() - kLengthPrefixBytes) + " available bytes");
  }
  const auto first = padded.begin() + kLengthPrefixBytes;
  return PlainMessage{Bytes(first, first + static_cast<std::ptrdiff_t>(length))};
}

CombinationSet chain_combine(const MessageParts& parts) {
  if (parts.part_count() < 2) {
    throw Error(ErrorCode::PartCountTooSmall, "chain needs at least two parts");
  }
  CombinationSet out;
  out.block_len = parts.block_len;
  out.combos.reserve(parts.part_count());
  out.combos.push_back(parts.parts.front());
  for (std::size_t i = 1; i < parts.part_count(); ++i) {
    Bytes c = parts.parts[i - 1];
    xor_into(c, parts.parts[i]);
    out.combos.push_back(std::move(c));
  }
  return out;
}

MessageParts chain_reconstruct(const CombinationSet& combos) {
  if (combos.part_count() < 2) {
    throw Error(ErrorCode::PartCountTooSmall, "chain needs at least two combinations");
  }
  for (std::size_t i = 0; i < combos.part_count(); ++i) {
    if (combos.combos[i].size() != combos.block_len || combos.block_len == 0) {
      throw Error(ErrorCode::MissingCombination, "C_" + std::to_string(i + 1));
    }
  }
  MessageParts out;
  out.block_len = combos.block_len;
  out.parts.reserve(combos.part_count());
  out.parts.push_back(combos.combos.front());
  for (std::size_t i = 1; i < combos.part_count(); ++i) {
    Bytes p = combos.combos[i];
    xor_into(p, out.parts[i - 1]);
    out.parts.push_back(std::move(p));
  }
  return out;
}

std::vector<Frame> encrypt_combos(const CombinationSet& combos, CipherKey key,
                                  std::uint32_t msg_id) {
  if (combos.part_count() > kMaxPartCount) {
    throw Error(ErrorCode::PartCountTooLarge, std::to_string(combos.part_count()));
  }
  if (combos.block_len > std::numeric_limits<std::uint16_t>::max()) {
    throw Error(ErrorCode::PayloadTooLarge, "block length " + std::to_string(combos.block_len));
  }
  const auto total = static_cast<std::uint16_t>(combos.part_count());
  std::vector<Frame> frames;
  frames.reserve(total);
  for (std::uint16_t i = 1; i <= total; ++i) {
    Frame f{msg_id, i, total, combos.combos[i - 1u]};
    xor_into(f.payload, keystream(key, frame_stream_id(msg_id, i), f.payload.size()));
    frames.push_back(std::move(f));
  }
  return frames;
}

CombinationSet decrypt_frames(std::span<const Frame> frames, CipherKey key) {
  if (frames.empty()) throw Error(ErrorCode::MissingCombination, "no frames");
  const auto total = frames.front().combo_total;
  CombinationSet out;
  out.combos.resize(total);
  for (const auto& f : frames) {
    if (f.combo_total != total || f.combo_index < 1 || f.combo_index > total) {
      throw Error(ErrorCode::MalformedFrame, "inconsistent combo numbering");
    }
    if (out.block_len != 0 && f.payload.size() != out.block_len) {
      throw Error(ErrorCode::MalformedFrame, "payload lengths differ");
    }
    auto& slot = out.combos[f.combo_index - 1u];
    if (!slot.empty()) {
      throw Error(ErrorCode::MalformedFrame, "duplicate combo_index " + std::to_string(f.combo_index));
    }
    out.block_len = f.payload.size();
    slot = f.payload;
    xor_into(slot, keystream(key, frame_stream_id(f.msg_id, f.combo_index), slot.size()));
  }
  return out;
}

std::vector<Frame> shuffle_frames(std::vector<Frame> frames, std::uint64_t seed) {
  Keystream gen(seed, 0);
  for (std::size_t i = frames.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(gen.below(i));
    std::swap(frames[i - 1], frames[j]);
  }
  return frames;
}

}  // namespace sdmp::codec
