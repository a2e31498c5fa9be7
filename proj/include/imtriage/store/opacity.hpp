#pragma once

#include <cstdint>
#include <span>

namespace imtriage::store {

/// Heuristic verdict on a stored value: readable text or an opaque
/// (likely encrypted/compressed) payload.
struct OpacityVerdict {
    enum class State { cleartext, opaque };
    State state = State::cleartext;
    double entropy_bits_per_byte = 0.0;  // Shannon entropy over byte frequencies
    bool utf8_valid = true;
};

/// Thresholds for the entropy branch of the verdict. UTF-8 validity alone
/// clears short human text; the entropy gate catches values that happen to
/// decode but look like key material. Tunable constants, not doctrine.
inline constexpr double kOpaqueEntropyThreshold = 7.0;
inline constexpr size_t kOpaqueMinLength = 64;

/// state = opaque iff !utf8_valid, or entropy >= 7.0 with length >= 64.
OpacityVerdict opacity_probe(std::span<const uint8_t> blob);

bool is_valid_utf8(std::span<const uint8_t> bytes);
double shannon_entropy_bits_per_byte(std::span<const uint8_t> bytes);

}  // namespace imtriage::store
