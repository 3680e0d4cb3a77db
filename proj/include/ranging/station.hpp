#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "ranging/core.hpp"
#include "ranging/rng.hpp"

namespace ranging {

struct EmptyCodeSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Contention lifecycle of one mobile station. Succeeded and Aborted are
/// terminal; Aborted is reachable only with a finite retry cap.
enum class Phase : std::uint8_t {
  NotArrived,
  Deferring,          // counting down ranging opportunities
  AwaitingResponse,   // T3 running, counted in frames
  Succeeded,
  Aborted,
};

struct Station {
  std::uint32_t id = 0;
  Priority priority = Priority::Low;
  Phase phase = Phase::NotArrived;
  std::uint32_t current_window = 1;    // in ranging opportunities
  std::uint32_t slots_remaining = 0;   // meaningful while Deferring
  std::uint32_t frames_remaining = 0;  // meaningful while AwaitingResponse
  std::uint32_t retry_count = 0;
  std::uint32_t arrival_frame = 0;
  std::uint32_t completion_frame = 0;  // frame of Succeeded / Aborted
};

/// Uniform defer draw from {0, ..., window-1} ranging opportunities.
inline std::uint32_t draw_defer(std::uint32_t window, Rng& rng) {
  return static_cast<std::uint32_t>(uniform_below(rng, window));
}

/// Uniform code pick from the station's class set: HP stations draw from the
/// reserved prefix, LP stations from the remainder. Disjoint sets make
/// inter-class collisions impossible.
inline std::uint32_t select_code(Priority priority, const CodePartition& partition,
                                 Rng& rng) {
  if (priority == Priority::High) {
    if (partition.hp_size() == 0) throw EmptyCodeSet("no codes reserved for high priority");
    return static_cast<std::uint32_t>(uniform_below(rng, partition.hp_size()));
  }
  if (partition.lp_size() == 0) throw EmptyCodeSet("no codes left for low priority");
  return partition.reserved +
         static_cast<std::uint32_t>(uniform_below(rng, partition.lp_size()));
}

/// Truncated binary exponential backoff after a failed attempt (T3 expired):
/// one more retry is charged; past the cap the station aborts, otherwise the
/// window doubles (truncated at rssw_end) and a fresh defer is drawn.
inline Station on_failure(Station s, std::uint32_t rssw_end,
                          std::optional<std::uint32_t> max_retries,
                          std::uint32_t frame, Rng& rng) {
  s.retry_count += 1;
  if (max_retries && s.retry_count > *max_retries) {
    s.phase = Phase::Aborted;
    s.completion_frame = frame;
    return s;
  }
  s.current_window = std::min(s.current_window * 2, rssw_end);
  s.phase = Phase::Deferring;
  s.slots_remaining = draw_defer(s.current_window, rng);
  return s;
}

/// Detection by the BS. retry_count is kept for statistics.
inline Station on_success(Station s, std::uint32_t frame) {
  s.phase = Phase::Succeeded;
  s.completion_frame = frame;
  return s;
}

}  // namespace ranging
