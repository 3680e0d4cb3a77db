#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "ranging/core.hpp"

namespace ranging {

/// A simulation request as read from a config file: the experiment
/// parameters plus how many seed replications to aggregate.
struct RunSpec {
  SimConfig config;
  std::uint32_t n_seeds = 1;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::uint64_t parse_u64(std::string_view v, const std::string& key) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size())
    throw InvalidConfig("bad integer for " + key + ": '" + std::string(v) + "'");
  return out;
}

inline std::uint32_t parse_u32(std::string_view v, const std::string& key) {
  const std::uint64_t x = parse_u64(v, key);
  if (x > 0xFFFFFFFFull) throw InvalidConfig(key + " out of range");
  return static_cast<std::uint32_t>(x);
}

inline double parse_f64(std::string_view v, const std::string& key) {
  // strtod via a NUL-terminated copy; from_chars<double> is fine too but
  // this also accepts "1e-3" uniformly across libstdc++ versions.
  const std::string s(v);
  char* end = nullptr;
  const double out = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || s.empty())
    throw InvalidConfig("bad number for " + key + ": '" + s + "'");
  return out;
}

inline std::string format_double(double v) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);  // shortest representation that round-trips
}

}  // namespace detail

inline const char* to_string(OverflowPolicy p) {
  return p == OverflowPolicy::Uniform ? "uniform" : "first_k_by_code_index";
}
inline const char* to_string(SuccessTiming t) {
  return t == SuccessTiming::TransmitFrame ? "transmit_frame" : "response_frame";
}
inline const char* to_string(T3Counting t) {
  return t == T3Counting::Exclusive ? "exclusive" : "inclusive";
}
inline const char* to_string(InitialDefer d) {
  return d == InitialDefer::Windowed ? "windowed" : "immediate";
}

/// Applies one `key = value` pair onto a RunSpec. Throws InvalidConfig on an
/// unknown key or a malformed value.
inline void apply_config_entry(RunSpec& spec, std::string_view key, std::string_view value) {
  using namespace detail;
  SimConfig& c = spec.config;
  const std::string k(key);
  if (key == "total_stations") c.total_stations = parse_u32(value, k);
  else if (key == "arrival_prob") c.arrival_prob = parse_f64(value, k);
  else if (key == "hp_fraction") c.hp_fraction = parse_f64(value, k);
  else if (key == "opportunities_per_frame") c.opportunities_per_frame = parse_u32(value, k);
  else if (key == "n_codes") c.n_codes = parse_u32(value, k);
  else if (key == "alpha") c.alpha = parse_f64(value, k);
  else if (key == "rssw_start_hp") c.rssw_start_hp = parse_u32(value, k);
  else if (key == "rssw_start_lp") c.rssw_start_lp = parse_u32(value, k);
  else if (key == "rssw_end") c.rssw_end = parse_u32(value, k);
  else if (key == "frame_duration_ms") c.frame_duration_ms = parse_f64(value, k);
  else if (key == "t3_ms") c.t3_ms = parse_f64(value, k);
  else if (key == "beta") {
    if (value == "unbounded") c.beta.reset();
    else c.beta = parse_u32(value, k);
  } else if (key == "n_frames") c.n_frames = parse_u32(value, k);
  else if (key == "max_retries") {
    if (value == "unlimited") c.max_retries.reset();
    else c.max_retries = parse_u32(value, k);
  } else if (key == "seed") c.seed = parse_u64(value, k);
  else if (key == "overflow_policy") {
    if (value == "uniform") c.overflow_policy = OverflowPolicy::Uniform;
    else if (value == "first_k_by_code_index") c.overflow_policy = OverflowPolicy::FirstKByCodeIndex;
    else throw InvalidConfig("bad overflow_policy: '" + std::string(value) + "'");
  } else if (key == "success_timing") {
    if (value == "transmit_frame") c.success_timing = SuccessTiming::TransmitFrame;
    else if (value == "response_frame") c.success_timing = SuccessTiming::ResponseFrame;
    else throw InvalidConfig("bad success_timing: '" + std::string(value) + "'");
  } else if (key == "t3_counting") {
    if (value == "exclusive") c.t3_counting = T3Counting::Exclusive;
    else if (value == "inclusive") c.t3_counting = T3Counting::Inclusive;
    else throw InvalidConfig("bad t3_counting: '" + std::string(value) + "'");
  } else if (key == "initial_defer") {
    if (value == "windowed") c.initial_defer = InitialDefer::Windowed;
    else if (value == "immediate") c.initial_defer = InitialDefer::Immediate;
    else throw InvalidConfig("bad initial_defer: '" + std::string(value) + "'");
  } else if (key == "n_seeds") {
    spec.n_seeds = parse_u32(value, k);
    if (spec.n_seeds == 0) throw InvalidConfig("n_seeds must be >= 1");
  } else {
    throw InvalidConfig("unknown config key: '" + k + "'");
  }
}

/// Applies the flat `key = value` text format onto an existing spec. `#`
/// starts a comment, blank lines are ignored. Unknown keys are errors. The
/// result is not yet validated; callers run validate() when they are done
/// layering flags.
inline void apply_config_text(RunSpec& spec, std::string_view text) {
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;

    if (const auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos)
      throw InvalidConfig("malformed config line: '" + std::string(line) + "'");
    apply_config_entry(spec, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
}

inline RunSpec parse_config_text(std::string_view text) {
  RunSpec spec;
  apply_config_text(spec, text);
  return spec;
}

inline void apply_config_file(RunSpec& spec, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_text(spec, ss.str());
}

inline RunSpec load_config_file(const std::string& path) {
  RunSpec spec;
  apply_config_file(spec, path);
  return spec;
}

/// Serializes a spec in the same format parse_config_text() reads, with
/// round-trip-exact number formatting. Derived fields are omitted (they are
/// recomputed by validate()).
inline std::string serialize_config(const SimConfig& c, std::uint32_t n_seeds = 1) {
  using detail::format_double;
  std::ostringstream out;
  out << "total_stations = " << c.total_stations << '\n'
      << "arrival_prob = " << format_double(c.arrival_prob) << '\n'
      << "hp_fraction = " << format_double(c.hp_fraction) << '\n'
      << "opportunities_per_frame = " << c.opportunities_per_frame << '\n'
      << "n_codes = " << c.n_codes << '\n'
      << "alpha = " << format_double(c.alpha) << '\n'
      << "rssw_start_hp = " << c.rssw_start_hp << '\n'
      << "rssw_start_lp = " << c.rssw_start_lp << '\n'
      << "rssw_end = " << c.rssw_end << '\n'
      << "frame_duration_ms = " << format_double(c.frame_duration_ms) << '\n'
      << "t3_ms = " << format_double(c.t3_ms) << '\n';
  if (c.beta) out << "beta = " << *c.beta << '\n';
  else out << "beta = unbounded\n";
  out << "n_frames = " << c.n_frames << '\n';
  if (c.max_retries) out << "max_retries = " << *c.max_retries << '\n';
  else out << "max_retries = unlimited\n";
  out << "seed = " << c.seed << '\n'
      << "overflow_policy = " << to_string(c.overflow_policy) << '\n'
      << "success_timing = " << to_string(c.success_timing) << '\n'
      << "t3_counting = " << to_string(c.t3_counting) << '\n'
      << "initial_defer = " << to_string(c.initial_defer) << '\n'
      << "n_seeds = " << n_seeds << '\n';
  return out.str();
}

}  // namespace ranging
