#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace ranging {

/// Contention priority class of a mobile station. The mechanism is defined
/// for exactly two classes.
enum class Priority { High, Low };

/// Tie-breaking when more unique-code transmitters than beta show up in one
/// ranging opportunity.
enum class OverflowPolicy { Uniform, FirstKByCodeIndex };

/// Frame a detected station is credited to in the metrics: the frame it
/// transmitted in, or the frame its ranging response arrives (modelled as
/// T3 frames later).
enum class SuccessTiming { TransmitFrame, ResponseFrame };

/// Whether the T3 countdown includes the frame the code was transmitted in.
enum class T3Counting { Exclusive, Inclusive };

/// First attempt after arrival: random defer drawn from the start window,
/// or transmit at the next opportunity.
enum class InitialDefer { Windowed, Immediate };

struct InvalidConfig : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Full experiment parameterization: the cell/contention parameters plus the
/// engine policy knobs. Field names double as the config-file keys.
///
/// Defaults describe a single-class (all high-priority) cell with the
/// standard ranging resources; `table1_preset()` switches to the mixed
/// 200-station population used by the reference experiments.
struct SimConfig {
  std::uint32_t total_stations = 200;        // U
  double arrival_prob = 0.1;                 // p_a, per frame per pending MS
  double hp_fraction = 1.0;                  // share of stations that are HP
  std::uint32_t opportunities_per_frame = 5; // ranging opportunities per frame
  std::uint32_t n_codes = 32;                // N initial-ranging CDMA codes
  double alpha = 0.25;                       // fraction of codes reserved to HP
  std::uint32_t rssw_start_hp = 16;          // initial RSSW, HP (opportunities)
  std::uint32_t rssw_start_lp = 128;         // initial RSSW, LP
  std::uint32_t rssw_end = 1024;             // truncation window
  double frame_duration_ms = 5.0;
  double t3_ms = 20.0;
  std::optional<std::uint32_t> beta = 4;     // detection cap; nullopt = unbounded
  std::uint32_t n_frames = 100;              // simulated horizon
  std::optional<std::uint32_t> max_retries{};// nullopt = unlimited
  std::uint64_t seed = 1;

  OverflowPolicy overflow_policy = OverflowPolicy::Uniform;
  SuccessTiming success_timing = SuccessTiming::TransmitFrame;
  T3Counting t3_counting = T3Counting::Exclusive;
  InitialDefer initial_defer = InitialDefer::Windowed;

  // Derived by validate().
  std::uint32_t t3_frames = 0;  // t3_ms / frame_duration_ms
  std::uint32_t hp_count = 0;   // round(total_stations * hp_fraction)

  bool operator==(const SimConfig&) const = default;
};

/// The 200-station mixed-priority parameter set used throughout the
/// reference experiments (window pair defaults to the p_a = 0.1 operating
/// point; sweeps override it).
inline SimConfig table1_preset() {
  SimConfig cfg;
  cfg.total_stations = 200;
  cfg.arrival_prob = 0.1;
  cfg.hp_fraction = 0.2;
  cfg.opportunities_per_frame = 5;
  cfg.n_codes = 32;
  cfg.alpha = 0.25;
  cfg.rssw_start_hp = 16;
  cfg.rssw_start_lp = 128;
  cfg.rssw_end = 1024;
  cfg.frame_duration_ms = 5.0;
  cfg.t3_ms = 20.0;
  cfg.beta = 4;
  cfg.n_frames = 100;
  return cfg;
}

/// Disjoint split of the N initial-ranging code indices: the first
/// `reserved` codes are HP-only, the rest LP-only.
struct CodePartition {
  std::uint32_t n_codes = 0;
  std::uint32_t reserved = 0;

  std::uint32_t hp_size() const { return reserved; }
  std::uint32_t lp_size() const { return n_codes - reserved; }
  bool is_hp_code(std::uint32_t code) const { return code < reserved; }

  bool operator==(const CodePartition&) const = default;
};

/// ceil(n_codes * alpha), with a guard against FP slop on products that are
/// mathematically integral (e.g. 10 * 0.3).
inline std::uint32_t reserved_code_count(std::uint32_t n_codes, double alpha) {
  const double raw = static_cast<double>(n_codes) * alpha;
  double r = std::ceil(raw - 1e-9);
  if (r < 0.0) r = 0.0;
  if (r > static_cast<double>(n_codes)) r = static_cast<double>(n_codes);
  return static_cast<std::uint32_t>(r);
}

inline CodePartition partition_codes(std::uint32_t n_codes, double alpha) {
  return CodePartition{n_codes, reserved_code_count(n_codes, alpha)};
}

inline bool is_power_of_two(std::uint32_t v) { return v != 0 && (v & (v - 1)) == 0; }

namespace detail {
inline void check(bool ok, const std::string& what) {
  if (!ok) throw InvalidConfig(what);
}
}  // namespace detail

/// Checks every config invariant and fills the derived fields (t3_frames,
/// hp_count). Throws InvalidConfig naming the first violated invariant.
/// Idempotent: validating an already-validated config is a no-op.
inline SimConfig validate(SimConfig cfg) {
  using detail::check;
  check(cfg.total_stations >= 1, "total_stations must be >= 1");
  check(cfg.arrival_prob > 0.0 && cfg.arrival_prob <= 1.0,
        "arrival_prob must be in (0, 1]");
  check(cfg.hp_fraction >= 0.0 && cfg.hp_fraction <= 1.0,
        "hp_fraction must be in [0, 1]");
  check(cfg.alpha >= 0.0 && cfg.alpha <= 1.0, "alpha must be in [0, 1]");
  check(cfg.opportunities_per_frame >= 1, "opportunities_per_frame must be >= 1");
  check(cfg.n_codes >= 1, "n_codes must be >= 1");
  check(is_power_of_two(cfg.rssw_start_hp), "rssw_start_hp must be a power of two >= 1");
  check(is_power_of_two(cfg.rssw_start_lp), "rssw_start_lp must be a power of two >= 1");
  check(is_power_of_two(cfg.rssw_end), "rssw_end must be a power of two >= 1");
  check(cfg.rssw_start_hp <= cfg.rssw_end, "rssw_start_hp exceeds rssw_end");
  check(cfg.rssw_start_lp <= cfg.rssw_end, "rssw_start_lp exceeds rssw_end");
  check(cfg.rssw_start_hp <= cfg.rssw_start_lp,
        "rssw_start_hp must not exceed rssw_start_lp");
  check(cfg.frame_duration_ms > 0.0, "frame_duration_ms must be > 0");
  check(cfg.t3_ms >= 0.0, "t3_ms must be >= 0");

  const double ratio = cfg.t3_ms / cfg.frame_duration_ms;
  const double rounded = std::round(ratio);
  check(std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio),
        "t3_ms must be an integer multiple of frame_duration_ms");
  cfg.t3_frames = static_cast<std::uint32_t>(rounded);

  if (cfg.beta) {
    check(*cfg.beta >= 1 && *cfg.beta <= cfg.n_codes,
          "beta must satisfy 1 <= beta <= n_codes");
  }
  check(cfg.n_frames >= 1, "n_frames must be >= 1");

  const std::uint32_t reserved = reserved_code_count(cfg.n_codes, cfg.alpha);
  check(!(cfg.hp_fraction > 0.0 && reserved == 0),
        "alpha reserves no codes but hp_fraction > 0");
  check(!(cfg.hp_fraction < 1.0 && cfg.n_codes - reserved == 0),
        "alpha reserves every code but hp_fraction < 1");

  double hp = std::round(static_cast<double>(cfg.total_stations) * cfg.hp_fraction);
  if (hp < 0.0) hp = 0.0;
  if (hp > static_cast<double>(cfg.total_stations)) hp = static_cast<double>(cfg.total_stations);
  cfg.hp_count = static_cast<std::uint32_t>(hp);

  return cfg;
}

/// Stations 0 .. hp_count-1 are high priority (deterministic assignment).
inline Priority station_priority(const SimConfig& cfg, std::uint32_t station_id) {
  return station_id < cfg.hp_count ? Priority::High : Priority::Low;
}

}  // namespace ranging
