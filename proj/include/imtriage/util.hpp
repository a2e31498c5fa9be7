#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace imtriage::util {

std::string to_hex(std::span<const uint8_t> bytes);
std::optional<std::vector<uint8_t>> from_hex(std::string_view hex);

/// Shortest decimal string that round-trips back to the same double.
std::string shortest_double(double v);

/// "2014-03-01T12:00:00.000Z" from unix epoch milliseconds.
std::string iso8601_utc_ms(int64_t unix_ms);

/// True for image-relative paths: no leading separator, no "..", non-empty.
bool is_safe_relative_path(std::string_view path);

std::string lowercase(std::string_view s);
bool iequals(std::string_view a, std::string_view b);

/// Extension of the final component, lowercased, without the dot ("jpg").
std::string lower_extension(const std::filesystem::path& p);

/// All regular files below root, as generic image-relative paths, sorted.
std::vector<std::string> list_files_sorted(const std::filesystem::path& root);

std::vector<uint8_t> read_file_bytes(const std::filesystem::path& p);
void write_file_bytes(const std::filesystem::path& p, std::span<const uint8_t> bytes);

/// Deterministic RNG used by the fixture forge. Raw mt19937_64 draws are
/// portable across platforms; bounded draws avoid std distributions, whose
/// output is implementation-defined.
class DetRng {
public:
    explicit DetRng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }

    /// Uniform in [0, n). n must be > 0.
    uint64_t below(uint64_t n);

    /// Uniform in [lo, hi] inclusive.
    int64_t in_range(int64_t lo, int64_t hi);

    std::vector<uint8_t> bytes(size_t n);

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[below(v.size())];
    }

private:
    std::mt19937_64 gen_;
};

/// Stable 64-bit mix for deriving per-stream seeds (FNV-1a over the tag).
uint64_t mix_seed(uint64_t seed, std::string_view tag);

}  // namespace imtriage::util
