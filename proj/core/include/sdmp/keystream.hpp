#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace sdmp {

struct CipherKey {
  std::uint64_t value = 0;

  friend bool operator==(const CipherKey&, const CipherKey&) = default;
};

/// Counter-based 64-bit mixing generator. The state is seeded with
/// key XOR stream_id and advanced by the golden-ratio increment; each step
/// yields one mixed word. The same generator backs the cipher, the frame
/// shuffle, MAC backoff draws and adversary sampling.
class Keystream {
 public:
  Keystream(std::uint64_t key, std::uint64_t stream_id) noexcept
      : state_(key ^ stream_id) {}

  std::uint64_t next() noexcept;

  /// Uniform in [0, bound) by plain modulo reduction; bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept { return next() % bound; }

  /// Uniform double in [0, 1) from the top 53 bits.
  double unit() noexcept;

 private:
  std::uint64_t state_;
};

/// First nbytes of the generator output, each word emitted big-endian.
std::vector<std::uint8_t> keystream(CipherKey key, std::uint64_t stream_id,
                                    std::size_t nbytes);

}  // namespace sdmp
