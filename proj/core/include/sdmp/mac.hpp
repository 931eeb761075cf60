#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sdmp/keystream.hpp"

namespace sdmp::mac {

using SimTime = std::int64_t;

struct Interval {
  SimTime start = 0;
  SimTime end = 0;  // exclusive

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Reservation book of one shared medium, intervals sorted by start.
struct MediumState {
  std::string id;
  SimTime busy_until = 0;
  std::vector<Interval> schedule;

  /// No reservation intersects [start, start + duration).
  [[nodiscard]] bool is_free(SimTime start, SimTime duration) const;
  /// Earliest instant >= t not covered by a reservation.
  [[nodiscard]] SimTime next_idle(SimTime t) const;
  void reserve(SimTime start, SimTime duration);
};

struct BackoffPolicy {
  SimTime slot = 1;
  std::uint32_t cw_min = 4;
  std::uint32_t cw_max = 64;
  std::uint32_t max_retries = 7;

  /// Contention window (slots) for retry r >= 1.
  [[nodiscard]] std::uint64_t window(std::uint32_t retry) const noexcept;
  /// Throws ConfigError unless 0 < cw_min <= cw_max and slot > 0.
  void check() const;
};

struct Acquisition {
  SimTime start = 0;
  std::uint32_t retries = 0;
};

/// Carrier sense with bounded exponential backoff. Transmits at ready_at when
/// the medium is free for the whole duration; otherwise, for retry r, waits
/// for the medium to go idle, defers a uniform [0, window(r)) slot count and
/// tries again. Reserves the chosen interval in `medium`.
/// Throws ChannelBusy after max_retries failed retries.
Acquisition acquire(MediumState& medium, SimTime ready_at, SimTime duration, Keystream& rng,
                    const BackoffPolicy& policy = {});

}  // namespace sdmp::mac
