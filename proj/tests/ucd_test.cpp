#include <doctest.h>

#include <array>
#include <cstdint>
#include <vector>

#include "ranging/rng.hpp"
#include "ranging/ucd.hpp"

using namespace ranging;

namespace {

// Independent packing path for cross-checking encode_ucd: accumulate the
// eight octets into one big-endian word, then spill it out MSB-first.
std::array<std::uint8_t, 8> oracle_pack(const UcdMessage& m) {
  std::uint64_t word = 0;
  const std::uint8_t fields[8] = {
      m.config_change_count,     m.ranging_backoff_start,
      m.ranging_backoff_end,     m.request_backoff_start,
      m.request_backoff_end,     m.ranging_backoff_start_hp,
      m.ranging_backoff_end_hp,  static_cast<std::uint8_t>(m.cdma_code_reservation_fraction_hp << 6)};
  for (const std::uint8_t f : fields) word = (word << 8) | f;
  std::array<std::uint8_t, 8> out{};
  for (int i = 7; i >= 0; --i) {
    out[i] = static_cast<std::uint8_t>(word & 0xFF);
    word >>= 8;
  }
  return out;
}

UcdMessage random_valid_message(Rng& rng) {
  const auto exponent_pair = [&rng](std::uint8_t& start, std::uint8_t& end) {
    start = static_cast<std::uint8_t>(uniform_below(rng, 256));
    end = static_cast<std::uint8_t>(start + uniform_below(rng, 256 - start));
  };
  UcdMessage m;
  m.config_change_count = static_cast<std::uint8_t>(uniform_below(rng, 256));
  exponent_pair(m.ranging_backoff_start, m.ranging_backoff_end);
  exponent_pair(m.request_backoff_start, m.request_backoff_end);
  exponent_pair(m.ranging_backoff_start_hp, m.ranging_backoff_end_hp);
  m.cdma_code_reservation_fraction_hp = static_cast<std::uint8_t>(uniform_below(rng, 4));
  return m;
}

}  // namespace

TEST_CASE("all-zero message encodes to eight zero octets") {
  const auto bytes = encode_ucd(UcdMessage{});
  for (const auto b : bytes) CHECK(b == 0);
}

TEST_CASE("hand-packed vector 00070A0000040A40") {
  UcdMessage m;
  m.ranging_backoff_start = 7;
  m.ranging_backoff_end = 10;
  m.ranging_backoff_start_hp = 4;
  m.ranging_backoff_end_hp = 10;
  m.cdma_code_reservation_fraction_hp = 1;

  const auto bytes = encode_ucd(m);
  CHECK(to_hex(bytes) == "00070A0000040A40");
  CHECK(bytes == oracle_pack(m));
  CHECK(decode_ucd(bytes) == m);

  const ContentionParams p = params_from_ucd(m, 32);
  CHECK(p.reserved_codes == 8);  // v=1 over 32 codes
}

TEST_CASE("round trip holds for random valid messages and matches the oracle") {
  Rng rng = make_rng(0x5EEDu);
  for (int i = 0; i < 20000; ++i) {
    const UcdMessage m = random_valid_message(rng);
    const auto bytes = encode_ucd(m);
    CHECK(bytes == oracle_pack(m));
    CHECK(decode_ucd(bytes) == m);
  }
}

TEST_CASE("exhaustive 2-bit fraction sweep") {
  for (std::uint8_t v = 0; v <= 3; ++v) {
    UcdMessage m;
    m.cdma_code_reservation_fraction_hp = v;
    const auto bytes = encode_ucd(m);
    CHECK(bytes[7] == static_cast<std::uint8_t>(v << 6));
    CHECK(decode_ucd(bytes).cdma_code_reservation_fraction_hp == v);
    CHECK(fraction_code_for_alpha(v / 4.0) == v);  // quantization identity
  }
}

TEST_CASE("decode rejects malformed input") {
  const std::vector<std::uint8_t> short_msg(7, 0);
  CHECK_THROWS_AS(decode_ucd(short_msg), BadLength);

  std::vector<std::uint8_t> reserved(8, 0);
  reserved[7] = 0x41;  // fraction bits 01 plus a reserved bit
  CHECK_THROWS_AS(decode_ucd(reserved), ReservedBitsSet);

  std::vector<std::uint8_t> bad_order(8, 0);
  bad_order[1] = 9;  // lp start 9 > lp end 0
  CHECK_THROWS_AS(decode_ucd(bad_order), InvalidField);
}

TEST_CASE("encode rejects invalid fields") {
  UcdMessage m;
  m.cdma_code_reservation_fraction_hp = 4;
  CHECK_THROWS_AS(encode_ucd(m), InvalidField);

  m = UcdMessage{};
  m.ranging_backoff_start_hp = 5;
  m.ranging_backoff_end_hp = 4;
  CHECK_THROWS_AS(encode_ucd(m), InvalidField);
}

TEST_CASE("params_from_ucd maps exponents to windows") {
  UcdMessage m;
  m.ranging_backoff_start = 7;
  m.ranging_backoff_end = 10;
  m.ranging_backoff_start_hp = 4;
  m.ranging_backoff_end_hp = 10;
  m.cdma_code_reservation_fraction_hp = 1;

  SUBCASE("the (16, 128) operating point") {
    const ContentionParams p = params_from_ucd(m, 32);
    CHECK(p.rssw_start_hp == 16);
    CHECK(p.rssw_start_lp == 128);
    CHECK(p.rssw_end == 1024);
    CHECK(p.alpha == doctest::Approx(0.25));
  }
  SUBCASE("half reservation") {
    m.cdma_code_reservation_fraction_hp = 2;
    CHECK(params_from_ucd(m, 32).reserved_codes == 16);
  }
  SUBCASE("zero reservation decodes but reserves nothing") {
    m.cdma_code_reservation_fraction_hp = 0;
    const ContentionParams p = params_from_ucd(m, 32);
    CHECK(p.alpha == 0.0);
    CHECK(p.reserved_codes == 0);
  }
  SUBCASE("mismatched end windows take the minimum") {
    m.ranging_backoff_end = 10;
    m.ranging_backoff_end_hp = 8;
    CHECK(params_from_ucd(m, 32).rssw_end == 256);
  }
  SUBCASE("oversized exponents are rejected") {
    m.ranging_backoff_start = 40;
    m.ranging_backoff_end = 41;
    CHECK_THROWS_AS(params_from_ucd(m, 32), InvalidField);
  }
}

TEST_CASE("hex helpers") {
  CHECK(to_hex(std::vector<std::uint8_t>{0x00, 0xAB, 0x4F}) == "00AB4F");
  CHECK(from_hex("00ab4f") == std::vector<std::uint8_t>({0x00, 0xAB, 0x4F}));
  CHECK_THROWS_AS(from_hex("0"), BadLength);
  CHECK_THROWS_AS(from_hex("zz"), std::invalid_argument);
}
