#include "imtriage/store/opacity.hpp"

#include <array>
#include <cmath>

namespace imtriage::store {

bool is_valid_utf8(std::span<const uint8_t> bytes) {
    const size_t n = bytes.size();
    size_t i = 0;
    while (i < n) {
        uint8_t c = bytes[i];
        if (c < 0x80) {
            ++i;
            continue;
        }
        size_t extra;
        uint32_t cp;
        if ((c & 0xe0) == 0xc0) {
            if (c < 0xc2) return false;  // overlong two-byte form
            extra = 1;
            cp = c & 0x1f;
        } else if ((c & 0xf0) == 0xe0) {
            extra = 2;
            cp = c & 0x0f;
        } else if ((c & 0xf8) == 0xf0) {
            if (c > 0xf4) return false;  // beyond U+10FFFF
            extra = 3;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + extra >= n) return false;
        for (size_t k = 1; k <= extra; ++k) {
            uint8_t cc = bytes[i + k];
            if ((cc & 0xc0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3f);
        }
        // overlong encodings and surrogates
        if (extra == 2 && cp < 0x800) return false;
        if (extra == 3 && (cp < 0x10000 || cp > 0x10ffff)) return false;
        if (cp >= 0xd800 && cp <= 0xdfff) return false;
        i += extra + 1;
    }
    return true;
}

double shannon_entropy_bits_per_byte(std::span<const uint8_t> bytes) {
    if (bytes.empty()) return 0.0;
    std::array<uint64_t, 256> counts{};
    for (uint8_t b : bytes) ++counts[b];
    double h = 0.0;
    double n = static_cast<double>(bytes.size());
    for (uint64_t c : counts) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

OpacityVerdict opacity_probe(std::span<const uint8_t> blob) {
    OpacityVerdict v;
    v.utf8_valid = is_valid_utf8(blob);
    v.entropy_bits_per_byte = shannon_entropy_bits_per_byte(blob);
    bool high_entropy = v.entropy_bits_per_byte >= kOpaqueEntropyThreshold &&
                        blob.size() >= kOpaqueMinLength;
    v.state = (!v.utf8_valid || high_entropy) ? OpacityVerdict::State::opaque
                                              : OpacityVerdict::State::cleartext;
    return v;
}

}  // namespace imtriage::store
