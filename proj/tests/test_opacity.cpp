#include "doctest.h"
#include "imtriage/store/opacity.hpp"
#include "imtriage/util.hpp"

#include <cmath>
#include <cstring>

using namespace imtriage;
using namespace imtriage::store;

namespace {

// Independent entropy oracle: straight histogram arithmetic, no shared code
// with the probe under test.
double oracle_entropy(const std::vector<uint8_t>& bytes) {
    if (bytes.empty()) return 0.0;
    double counts[256] = {0};
    for (uint8_t b : bytes) counts[b] += 1.0;
    double h = 0.0;
    for (double c : counts) {
        if (c > 0) {
            double p = c / static_cast<double>(bytes.size());
            h -= p * (std::log(p) / std::log(2.0));
        }
    }
    return h;
}

std::vector<uint8_t> ascii_bytes(const char* s) {
    return std::vector<uint8_t>(s, s + std::strlen(s));
}

}  // namespace

TEST_CASE("entropy matches analytic values") {
    // all one symbol -> 0 bits/byte
    std::vector<uint8_t> zeros(256, 0);
    CHECK(shannon_entropy_bits_per_byte(zeros) == 0.0);

    // perfectly uniform 0..255 -> exactly 8 bits/byte
    std::vector<uint8_t> uniform;
    for (int k = 0; k < 4; ++k)
        for (int i = 0; i < 256; ++i) uniform.push_back(static_cast<uint8_t>(i));
    CHECK(shannon_entropy_bits_per_byte(uniform) == doctest::Approx(8.0).epsilon(1e-12));

    // two equiprobable symbols -> exactly 1 bit/byte
    std::vector<uint8_t> ab;
    for (int i = 0; i < 128; ++i) {
        ab.push_back('a');
        ab.push_back('b');
    }
    CHECK(shannon_entropy_bits_per_byte(ab) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("cleartext chat body probes cleartext") {
    auto blob = ascii_bytes("hello world, this is a cleartext chat message body ok");
    auto v = opacity_probe(blob);
    CHECK(v.state == OpacityVerdict::State::cleartext);
    CHECK(v.utf8_valid);
    CHECK(v.entropy_bits_per_byte < 7.0);
}

TEST_CASE("empty blob probes cleartext with zero entropy") {
    auto v = opacity_probe(std::span<const uint8_t>{});
    CHECK(v.state == OpacityVerdict::State::cleartext);
    CHECK(v.utf8_valid);
    CHECK(v.entropy_bits_per_byte == 0.0);
}

TEST_CASE("256 seeded random bytes probe opaque") {
    util::DetRng rng(20140301);
    auto blob = rng.bytes(256);
    auto v = opacity_probe(blob);
    CHECK(v.state == OpacityVerdict::State::opaque);
    // cross-check the probe's entropy against the independent oracle
    CHECK(v.entropy_bits_per_byte ==
          doctest::Approx(oracle_entropy(blob)).epsilon(1e-12));
    CHECK(oracle_entropy(blob) >= 7.0);
}

TEST_CASE("verdict honors the stated rule exactly") {
    // valid UTF-8 but high entropy, below the 64-byte floor -> cleartext
    std::vector<uint8_t> short_varied;
    for (int i = 33; i < 90; ++i) short_varied.push_back(static_cast<uint8_t>(i));
    REQUIRE(short_varied.size() < kOpaqueMinLength);
    auto v = opacity_probe(short_varied);
    CHECK(v.utf8_valid);
    CHECK(v.state == OpacityVerdict::State::cleartext);

    // invalid UTF-8 is opaque regardless of entropy
    std::vector<uint8_t> bad = {'h', 'i', 0xff, 0xfe};
    CHECK(opacity_probe(bad).state == OpacityVerdict::State::opaque);

    // valid UTF-8, >= 64 bytes, entropy >= 7.0 -> opaque
    std::vector<uint8_t> dense;
    for (int i = 0; i < 128; ++i) dense.push_back(static_cast<uint8_t>(i));
    REQUIRE(is_valid_utf8(dense));
    REQUIRE(shannon_entropy_bits_per_byte(dense) == doctest::Approx(7.0));
    CHECK(opacity_probe(dense).state == OpacityVerdict::State::opaque);
}

TEST_CASE("utf8 validation rejects malformed sequences") {
    CHECK(is_valid_utf8(ascii_bytes("plain ascii")));
    CHECK(is_valid_utf8(ascii_bytes("caf\xc3\xa9")));
    CHECK(is_valid_utf8(ascii_bytes("\xe2\x9c\x93")));          // U+2713
    CHECK(is_valid_utf8(ascii_bytes("\xf0\x9f\x98\x80")));      // U+1F600
    CHECK_FALSE(is_valid_utf8(ascii_bytes("\xc0\xaf")));        // overlong
    CHECK_FALSE(is_valid_utf8(ascii_bytes("\xed\xa0\x80")));    // surrogate
    CHECK_FALSE(is_valid_utf8(ascii_bytes("\xf5\x80\x80\x84")));// > U+10FFFF
    CHECK_FALSE(is_valid_utf8(ascii_bytes("\xc3")));            // truncated
    std::vector<uint8_t> stray = {0x80};
    CHECK_FALSE(is_valid_utf8(stray));
}

TEST_CASE("probe is a pure function of the bytes") {
    util::DetRng rng(7);
    auto blob = rng.bytes(100);
    auto a = opacity_probe(blob);
    auto b = opacity_probe(blob);
    CHECK(a.state == b.state);
    CHECK(a.entropy_bits_per_byte == b.entropy_bits_per_byte);
    CHECK(a.utf8_valid == b.utf8_valid);
}
