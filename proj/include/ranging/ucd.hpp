#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ranging/core.hpp"

namespace ranging {

struct BadLength : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ReservedBitsSet : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidField : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The UCD contention fields carried for priority-differentiated ranging.
/// Backoff fields are exponents: a value v stands for a window of 2^v
/// ranging opportunities. The conventional Ranging Backoff Start/End pair is
/// the low-priority window; the *_hp pair and the 2-bit reservation fraction
/// are the added fields. The request backoff pair is carried unchanged and
/// ignored by the simulator.
struct UcdMessage {
  std::uint8_t config_change_count = 0;
  std::uint8_t ranging_backoff_start = 0;     // LP start exponent
  std::uint8_t ranging_backoff_end = 0;       // LP end exponent
  std::uint8_t request_backoff_start = 0;
  std::uint8_t request_backoff_end = 0;
  std::uint8_t ranging_backoff_start_hp = 0;  // HP start exponent
  std::uint8_t ranging_backoff_end_hp = 0;    // HP end exponent
  std::uint8_t cdma_code_reservation_fraction_hp = 0;  // 2-bit: alpha = v/4

  bool operator==(const UcdMessage&) const = default;
};

inline constexpr std::size_t kUcdMessageSize = 8;

namespace detail {
inline void check_fields(const UcdMessage& m) {
  if (m.cdma_code_reservation_fraction_hp > 3)
    throw InvalidField("cdma_code_reservation_fraction_hp must be in {0..3}");
  if (m.ranging_backoff_start > m.ranging_backoff_end)
    throw InvalidField("ranging_backoff_start exceeds ranging_backoff_end");
  if (m.request_backoff_start > m.request_backoff_end)
    throw InvalidField("request_backoff_start exceeds request_backoff_end");
  if (m.ranging_backoff_start_hp > m.ranging_backoff_end_hp)
    throw InvalidField("ranging_backoff_start_hp exceeds ranging_backoff_end_hp");
}
}  // namespace detail

/// Fixed 8-octet layout, fields in declaration order, one octet each. The
/// 2-bit fraction sits in the two most significant bits of the last octet;
/// the remaining six bits are reserved and must be zero.
inline std::array<std::uint8_t, kUcdMessageSize> encode_ucd(const UcdMessage& m) {
  detail::check_fields(m);
  return {m.config_change_count,
          m.ranging_backoff_start,
          m.ranging_backoff_end,
          m.request_backoff_start,
          m.request_backoff_end,
          m.ranging_backoff_start_hp,
          m.ranging_backoff_end_hp,
          static_cast<std::uint8_t>(m.cdma_code_reservation_fraction_hp << 6)};
}

/// Inverse of encode_ucd. Rejects wrong lengths, nonzero reserved bits, and
/// field combinations encode_ucd would not produce.
inline UcdMessage decode_ucd(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kUcdMessageSize)
    throw BadLength("UCD message must be exactly 8 octets, got " +
                    std::to_string(bytes.size()));
  if ((bytes[7] & 0x3F) != 0)
    throw ReservedBitsSet("reserved bits of the fraction octet must be zero");
  UcdMessage m;
  m.config_change_count = bytes[0];
  m.ranging_backoff_start = bytes[1];
  m.ranging_backoff_end = bytes[2];
  m.request_backoff_start = bytes[3];
  m.request_backoff_end = bytes[4];
  m.ranging_backoff_start_hp = bytes[5];
  m.ranging_backoff_end_hp = bytes[6];
  m.cdma_code_reservation_fraction_hp = bytes[7] >> 6;
  detail::check_fields(m);
  return m;
}

/// Contention parameters a station derives from the UCD broadcast.
struct ContentionParams {
  std::uint32_t rssw_start_hp = 1;
  std::uint32_t rssw_start_lp = 1;
  std::uint32_t rssw_end = 1;  // min of the two end windows
  double alpha = 0.0;          // fraction_hp / 4
  std::uint32_t reserved_codes = 0;  // ceil(n_codes * alpha), exact

  bool operator==(const ContentionParams&) const = default;
};

/// Maps wire fields to simulator parameters. The simulator runs one shared
/// truncation window, so the smaller of the two end windows wins. Exponents
/// above 31 have no 32-bit window and are rejected.
inline ContentionParams params_from_ucd(const UcdMessage& m, std::uint32_t n_codes) {
  detail::check_fields(m);
  const auto window = [](std::uint8_t exponent, const char* field) -> std::uint32_t {
    if (exponent > 31)
      throw InvalidField(std::string(field) + " exponent too large for a 32-bit window");
    return std::uint32_t{1} << exponent;
  };
  ContentionParams p;
  p.rssw_start_hp = window(m.ranging_backoff_start_hp, "ranging_backoff_start_hp");
  p.rssw_start_lp = window(m.ranging_backoff_start, "ranging_backoff_start");
  const std::uint32_t end_lp = window(m.ranging_backoff_end, "ranging_backoff_end");
  const std::uint32_t end_hp = window(m.ranging_backoff_end_hp, "ranging_backoff_end_hp");
  p.rssw_end = end_lp < end_hp ? end_lp : end_hp;
  const std::uint32_t v = m.cdma_code_reservation_fraction_hp;
  p.alpha = static_cast<double>(v) / 4.0;
  p.reserved_codes = (n_codes * v + 3) / 4;  // ceil(n * v/4) in integers
  return p;
}

/// Nearest 2-bit fraction code for a real reservation fraction; v/4 maps
/// back to v for every legal v.
inline std::uint8_t fraction_code_for_alpha(double alpha) {
  long v = std::lround(alpha * 4.0);
  if (v < 0) v = 0;
  if (v > 3) v = 3;
  return static_cast<std::uint8_t>(v);
}

inline std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char digits[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (const std::uint8_t b : bytes) {
    out.push_back(digits[b >> 4]);
    out.push_back(digits[b & 0xF]);
  }
  return out;
}

inline std::vector<std::uint8_t> from_hex(std::string_view hex) {
  const auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) throw BadLength("hex string must have even length");
  std::vector<std::uint8_t> out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    const int hi = nibble(hex[i]);
    const int lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0)
      throw std::invalid_argument("invalid hex digit in '" + std::string(hex) + "'");
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

}  // namespace ranging
