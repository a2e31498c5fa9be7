#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace imtriage::store {

struct NotAPlist : std::runtime_error {
    explicit NotAPlist(const std::string& what) : std::runtime_error(what) {}
};

struct PlistValue;

/// Absolute instant, kept in the plist's native epoch (seconds since
/// 2001-01-01T00:00:00Z) so nothing is lost in transit.
struct PlistDate {
    double seconds_since_2001 = 0.0;
    bool operator==(const PlistDate&) const = default;
};

using PlistDict = std::map<std::string, PlistValue>;
using PlistArray = std::vector<PlistValue>;

struct PlistValue {
    using Storage = std::variant<std::monostate, bool, int64_t, double, std::string,
                                 std::vector<uint8_t>, PlistDate, PlistArray, PlistDict>;
    Storage v;

    PlistValue() = default;
    template <typename T>
    PlistValue(T&& x) : v(std::forward<T>(x)) {}

    bool operator==(const PlistValue&) const = default;

    const PlistDict* as_dict() const { return std::get_if<PlistDict>(&v); }
    const PlistArray* as_array() const { return std::get_if<PlistArray>(&v); }
    const std::string* as_string() const { return std::get_if<std::string>(&v); }
    const int64_t* as_int() const { return std::get_if<int64_t>(&v); }
    const double* as_real() const { return std::get_if<double>(&v); }
    const bool* as_bool() const { return std::get_if<bool>(&v); }
};

/// Parses a binary ("bplist00") or XML property list. Throws NotAPlist when
/// the bytes are neither.
PlistValue parse_plist(std::span<const uint8_t> bytes);
PlistValue open_plist(const std::filesystem::path& file);

/// Dotted key-path lookup over nested dicts; array indices as decimal.
/// Returns nullptr when any segment is missing.
const PlistValue* plist_lookup(const PlistValue& root, std::string_view dotted_keypath);

/// Serializes to the binary plist format (used by the fixture forge; the
/// evidence path only ever reads). Deterministic: dict keys are emitted in
/// sorted order.
std::vector<uint8_t> write_bplist(const PlistValue& root);

}  // namespace imtriage::store
