#include <doctest.h>

#include <array>
#include <cmath>

#include "ranging/station.hpp"

using namespace ranging;

namespace {

// Upper-tail 1% critical values; stat below the bound means p > 0.01.
constexpr double kChi2Crit15 = 30.578;
constexpr double kChi2Crit7 = 18.475;

}  // namespace

TEST_CASE("draw_defer with window 1 is always zero") {
  Rng rng = make_rng(3);
  for (int i = 0; i < 1000; ++i) CHECK(draw_defer(1, rng) == 0);
}

TEST_CASE("draw_defer is uniform over a window of 16") {
  Rng rng = make_rng(4);
  const int n = 100000;
  std::array<int, 16> counts{};
  for (int i = 0; i < n; ++i) {
    const std::uint32_t d = draw_defer(16, rng);
    REQUIRE(d < 16);
    ++counts[d];
  }
  const double expected = n / 16.0;
  double stat = 0.0;
  for (const int c : counts) stat += (c - expected) * (c - expected) / expected;
  CHECK(stat < kChi2Crit15);
}

TEST_CASE("draw_defer stays inside a window of 128") {
  Rng rng = make_rng(5);
  for (int i = 0; i < 100000; ++i) CHECK(draw_defer(128, rng) < 128);
}

TEST_CASE("select_code draws from the class set only") {
  const CodePartition p = partition_codes(32, 0.25);
  Rng rng = make_rng(6);
  std::array<int, 8> hp_counts{};
  for (int i = 0; i < 80000; ++i) {
    const std::uint32_t hp_code = select_code(Priority::High, p, rng);
    REQUIRE(hp_code < 8);
    ++hp_counts[hp_code];
    const std::uint32_t lp_code = select_code(Priority::Low, p, rng);
    REQUIRE(lp_code >= 8);
    REQUIRE(lp_code < 32);
  }
  const double expected = 80000 / 8.0;
  double stat = 0.0;
  for (const int c : hp_counts) stat += (c - expected) * (c - expected) / expected;
  CHECK(stat < kChi2Crit7);
}

TEST_CASE("select_code rejects an empty class set") {
  Rng rng = make_rng(7);
  CHECK_THROWS_AS(select_code(Priority::Low, partition_codes(32, 1.0), rng), EmptyCodeSet);
  CHECK_THROWS_AS(select_code(Priority::High, partition_codes(32, 0.0), rng), EmptyCodeSet);
}

TEST_CASE("on_failure doubles the window up to the truncation cap") {
  Rng rng = make_rng(8);
  Station s;
  s.phase = Phase::AwaitingResponse;
  s.current_window = 512;

  s = on_failure(s, 1024, std::nullopt, 10, rng);
  CHECK(s.phase == Phase::Deferring);
  CHECK(s.current_window == 1024);
  CHECK(s.retry_count == 1);
  CHECK(s.slots_remaining < 1024);

  s.phase = Phase::AwaitingResponse;
  s = on_failure(s, 1024, std::nullopt, 14, rng);
  CHECK(s.current_window == 1024);  // truncated
  CHECK(s.retry_count == 2);
}

TEST_CASE("the window sequence is min(start * 2^k, end)") {
  Rng rng = make_rng(9);
  Station s;
  s.current_window = 16;
  std::uint32_t expected = 16;
  for (int k = 1; k <= 12; ++k) {
    s.phase = Phase::AwaitingResponse;
    s = on_failure(s, 1024, std::nullopt, k, rng);
    expected = std::min<std::uint32_t>(expected * 2, 1024);
    CHECK(s.current_window == expected);
  }
}

TEST_CASE("exceeding max_retries aborts the station") {
  Rng rng = make_rng(10);
  Station s;
  s.phase = Phase::AwaitingResponse;
  s.current_window = 16;
  s.retry_count = 3;  // at the cap: the next failure exceeds it

  s = on_failure(s, 1024, 3u, 21, rng);
  CHECK(s.phase == Phase::Aborted);
  CHECK(s.completion_frame == 21);
}

TEST_CASE("on_success is terminal and keeps the retry count") {
  Station s;
  s.phase = Phase::Deferring;
  s.retry_count = 2;
  s = on_success(s, 7);
  CHECK(s.phase == Phase::Succeeded);
  CHECK(s.completion_frame == 7);
  CHECK(s.retry_count == 2);
}
