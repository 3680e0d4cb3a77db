#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ranging/rng.hpp"

namespace ranging {

/// Frame each station arrived in (frames are 1-based; 0 = not yet arrived).
/// A station arrives exactly once and never re-enters the pending pool.
struct ArrivalSchedule {
  static constexpr std::uint32_t kNotArrived = 0;

  std::vector<std::uint32_t> arrival_frame;

  explicit ArrivalSchedule(std::uint32_t n_stations)
      : arrival_frame(n_stations, kNotArrived) {}

  bool has_arrived(std::uint32_t station_id) const {
    return arrival_frame[station_id] != kNotArrived;
  }
};

/// One frame of the geometric arrival process: every pending station
/// independently arrives with probability p_a. Draws happen in ascending
/// station id order, arrived ids are removed from `pending` and returned
/// (ascending as well).
inline std::vector<std::uint32_t> step_arrivals(std::uint32_t frame,
                                                std::vector<std::uint32_t>& pending,
                                                double p_a, Rng& rng,
                                                ArrivalSchedule* schedule = nullptr) {
  std::vector<std::uint32_t> arrived;
  std::vector<std::uint32_t> still_pending;
  still_pending.reserve(pending.size());
  for (const std::uint32_t id : pending) {
    if (bernoulli(rng, p_a)) {
      arrived.push_back(id);
      if (schedule) schedule->arrival_frame[id] = frame;
    } else {
      still_pending.push_back(id);
    }
  }
  pending.swap(still_pending);
  return arrived;
}

/// Expected cumulative arrivals by frame i: U * (1 - (1 - p_a)^i).
inline double expected_cumulative(std::uint32_t total_stations, double p_a,
                                  std::uint32_t frame) {
  return static_cast<double>(total_stations) *
         (1.0 - std::pow(1.0 - p_a, static_cast<double>(frame)));
}

}  // namespace ranging
