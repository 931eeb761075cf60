#include "sdmp/mac.hpp"

#include <algorithm>

#include "sdmp/error.hpp"

namespace sdmp::mac {

bool MediumState::is_free(SimTime start, SimTime duration) const {
  const SimTime end = start + duration;
  // First reservation ending after `start` is the only candidate overlap
  // among the ones starting before `end`.
  auto it = std::lower_bound(schedule.begin(), schedule.end(), start,
                             [](const Interval& iv, SimTime t) { return iv.end <= t; });
  return it == schedule.end() || it->start >= end;
}

SimTime MediumState::next_idle(SimTime t) const {
  auto it = std::lower_bound(schedule.begin(), schedule.end(), t,
                             [](const Interval& iv, SimTime x) { return iv.end <= x; });
  while (it != schedule.end() && it->start <= t) {
    t = it->end;
    ++it;
  }
  return t;
}

void MediumState::reserve(SimTime start, SimTime duration) {
  const Interval iv{start, start + duration};
  auto pos = std::upper_bound(schedule.begin(), schedule.end(), iv,
                              [](const Interval& a, const Interval& b) { return a.start < b.start; });
  schedule.insert(pos, iv);
  busy_until = std::max(busy_until, iv.end);
}

std::uint64_t BackoffPolicy::window(std::uint32_t retry) const noexcept {
  const std::uint32_t shift = std::min<std::uint32_t>(retry - 1, 32);
  const std::uint64_t grown = static_cast<std::uint64_t>(cw_min) << shift;
  return std::min<std::uint64_t>(grown, cw_max);
}

void BackoffPolicy::check() const {
  if (slot < 1 || cw_min < 1 || cw_max < cw_min) {
    throw Error(ErrorCode::ConfigError, "backoff policy needs slot >= 1 and 1 <= cw_min <= cw_max");
  }
}

Acquisition acquire(MediumState& medium, SimTime ready_at, SimTime duration, Keystream& rng,
                    const BackoffPolicy& policy) {
  if (duration < 1) throw Error(ErrorCode::ConfigError, "transmission duration must be >= 1");
  SimTime t = ready_at;
  if (medium.is_free(t, duration)) {
    medium.reserve(t, duration);
    return {t, 0};
  }
  for (std::uint32_t retry = 1; retry <= policy.max_retries; ++retry) {
    t = medium.next_idle(t);
    t += static_cast<SimTime>(rng.below(policy.window(retry))) * policy.slot;
    if (medium.is_free(t, duration)) {
      medium.reserve(t, duration);
      return {t, retry};
    }
  }
  throw Error(ErrorCode::ChannelBusy,
              medium.id + " busy after " + std::to_string(policy.max_retries) + " retries");
}

}  // namespace sdmp::mac
