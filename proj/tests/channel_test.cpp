#include <doctest.h>

#include <algorithm>
#include <array>
#include <set>
#include <vector>

#include "ranging/channel.hpp"
#include "ranging/station.hpp"

using namespace ranging;

TEST_CASE("an empty opportunity resolves to empty sets") {
  Rng rng = make_rng(1);
  const auto out = resolve_opportunity({}, 4u, OverflowPolicy::Uniform, rng);
  CHECK(out.detected.empty());
  CHECK(out.collided.empty());
  CHECK(out.overflow_dropped.empty());
}

TEST_CASE("two transmissions on the same code both collide") {
  Rng rng = make_rng(2);
  const std::vector<Transmission> txs = {{1, 5, 0}, {2, 5, 0}};
  const auto out = resolve_opportunity(txs, 4u, OverflowPolicy::Uniform, rng);
  CHECK(out.detected.empty());
  CHECK(out.collided == std::vector<std::uint32_t>({1, 2}));
  CHECK(out.overflow_dropped.empty());
}

TEST_CASE("five unique codes against beta 4 drop a uniform victim") {
  // With 5 candidates and beta 4, the detected set is determined by which
  // single station gets dropped; each of the 5 must be equally likely.
  const int n = 100000;
  std::array<int, 5> dropped_counts{};
  Rng rng = make_rng(3);
  for (int trial = 0; trial < n; ++trial) {
    std::vector<Transmission> txs;
    for (std::uint32_t id = 0; id < 5; ++id) txs.push_back({id, id, 0});
    const auto out = resolve_opportunity(txs, 4u, OverflowPolicy::Uniform, rng);
    REQUIRE(out.detected.size() == 4);
    REQUIRE(out.overflow_dropped.size() == 1);
    REQUIRE(out.collided.empty());
    ++dropped_counts[out.overflow_dropped[0]];
  }
  const double expected = n / 5.0;
  double stat = 0.0;
  for (const int c : dropped_counts) stat += (c - expected) * (c - expected) / expected;
  CHECK(stat < 13.277);  // chi-square df=4 at the 1% level
}

TEST_CASE("unbounded beta accepts every unique code") {
  Rng rng = make_rng(4);
  std::vector<Transmission> txs;
  for (std::uint32_t id = 0; id < 20; ++id) txs.push_back({id, id, 0});
  const auto out = resolve_opportunity(txs, std::nullopt, OverflowPolicy::Uniform, rng);
  CHECK(out.detected.size() == 20);
  CHECK(out.overflow_dropped.empty());
}

TEST_CASE("first-k overflow policy keeps the lowest code indices") {
  Rng rng = make_rng(5);
  const std::vector<Transmission> txs = {{10, 9, 0}, {11, 2, 0}, {12, 30, 0}, {13, 4, 0}, {14, 17, 0}};
  const auto out = resolve_opportunity(txs, 3u, OverflowPolicy::FirstKByCodeIndex, rng);
  // Stations 11, 13, 10 carry the three lowest codes (2, 4, 9); outcome sets
  // come back sorted by station id.
  CHECK(out.detected == std::vector<std::uint32_t>({10, 11, 13}));
  CHECK(out.overflow_dropped == std::vector<std::uint32_t>({12, 14}));
}

TEST_CASE("resolution is deterministic for a fixed stream and input order") {
  std::vector<Transmission> txs;
  for (std::uint32_t id = 0; id < 8; ++id) txs.push_back({id, id % 6, 0});
  Rng a = make_rng(77), b = make_rng(77);
  const auto out_a = resolve_opportunity(txs, 3u, OverflowPolicy::Uniform, a);
  const auto out_b = resolve_opportunity(txs, 3u, OverflowPolicy::Uniform, b);
  CHECK(out_a.detected == out_b.detected);
  CHECK(out_a.collided == out_b.collided);
  CHECK(out_a.overflow_dropped == out_b.overflow_dropped);
}

TEST_CASE("outcome sets partition the transmitters") {
  Rng rng = make_rng(6);
  Rng draw_rng = make_rng(7);
  const CodePartition partition = partition_codes(32, 0.25);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::uint32_t n_tx = 1 + static_cast<std::uint32_t>(uniform_below(draw_rng, 12));
    std::vector<Transmission> txs;
    std::vector<std::uint32_t> code_of(n_tx);
    std::vector<Priority> class_of(n_tx);
    for (std::uint32_t id = 0; id < n_tx; ++id) {
      const Priority p = uniform_below(draw_rng, 2) == 0 ? Priority::High : Priority::Low;
      const std::uint32_t code = select_code(p, partition, draw_rng);
      txs.push_back({id, code, 0});
      code_of[id] = code;
      class_of[id] = p;
    }
    const auto out = resolve_opportunity(txs, 4u, OverflowPolicy::Uniform, rng);

    std::set<std::uint32_t> seen;
    for (const auto& v : {out.detected, out.collided, out.overflow_dropped})
      for (const auto id : v) CHECK(seen.insert(id).second);  // disjoint
    CHECK(seen.size() == n_tx);  // exhaustive
    CHECK(out.detected.size() <= 4u);

    // Disjoint class code sets: collided stations only ever share a code
    // with stations of their own class.
    for (const auto id : out.collided) {
      for (std::uint32_t other = 0; other < n_tx; ++other) {
        if (other != id && code_of[other] == code_of[id])
          CHECK(class_of[other] == class_of[id]);
      }
    }
  }
}
