#include "sdmp/keystream.hpp"

namespace sdmp {

std::uint64_t Keystream::next() noexcept {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Keystream::unit() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::vector<std::uint8_t> keystream(CipherKey key, std::uint64_t stream_id,
                                    std::size_t nbytes) {
  std::vector<std::uint8_t> out;
  out.reserve(nbytes);
  Keystream gen(key.value, stream_id);
  while (out.size() < nbytes) {
    const std::uint64_t word = gen.next();
    for (int shift = 56; shift >= 0 && out.size() < nbytes; shift -= 8) {
      out.push_back(static_cast<std::uint8_t>(word >> shift));
    }
  }
  return out;
}

}  // namespace sdmp
