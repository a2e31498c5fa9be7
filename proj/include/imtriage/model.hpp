#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "imtriage/sha256.hpp"

namespace imtriage::model {

using util::Digest;

enum class AppId { skype, tango, viber, whatsapp };
enum class Os { ios, android, unknown };

const char* to_string(AppId app);
const char* to_string(Os os);
std::optional<AppId> app_from_string(std::string_view s);
std::optional<Os> os_from_string(std::string_view s);

/// The eight artifact classes every record maps into.
enum class TaxonomyCategory {
    InstallationData,
    TrafficData,
    ContentData,
    UserProfileData,
    UserAuthenticationData,
    ContactDatabase,
    AttachmentFile,
    LocationData,
};
inline constexpr int kTaxonomyCategoryCount = 8;
const char* to_string(TaxonomyCategory c);
std::optional<TaxonomyCategory> category_from_string(std::string_view s);

enum class StoreKind { sqlite, plist, media, directory };
const char* to_string(StoreKind k);

/// Chain-of-custody pointer: which bytes a record came from.
struct SourceAnchor {
    std::string image_relative_path;
    Digest file_digest{};
    StoreKind store_kind = StoreKind::sqlite;
    std::optional<std::string> locator;  // "table=<name>;rowid=<n>" or "keypath=<dotted>"

    bool operator==(const SourceAnchor&) const = default;
};

enum class Direction { incoming, outgoing, missed, unknown };
const char* to_string(Direction d);

enum class BodyState { cleartext, opaque, absent };
const char* to_string(BodyState s);

enum class MediaKind { image, video, audio, sticker, file, unknown };
const char* to_string(MediaKind k);
/// Kind by filename extension; `unknown` when the extension is unrecognized.
MediaKind media_kind_from_extension(const std::string& ext);

enum class CallKind { audio, video, voicemail };
const char* to_string(CallKind k);

enum class TokenKind { password, session_key, cookie, unknown };
const char* to_string(TokenKind k);

enum class ValueState { cleartext, opaque };
const char* to_string(ValueState s);

/// Phone number, E.164-normalized when a country code was derivable,
/// otherwise kept verbatim with raw=true.
struct PhoneNumber {
    std::string value;
    bool raw = false;

    bool operator==(const PhoneNumber&) const = default;
};
PhoneNumber normalize_phone(std::string_view input);

struct MessageRecord {
    AppId app = AppId::skype;
    std::string message_id;
    Direction direction = Direction::unknown;
    std::string conversation_id;
    std::string peer_id;
    std::optional<int64_t> timestamp_utc_ms;  // absent when nothing cleartext carries a time
    std::optional<std::string> body;
    BodyState body_state = BodyState::absent;
    std::vector<std::string> attachment_refs;
    std::optional<std::string> location_ref;
    SourceAnchor anchor;

    bool operator==(const MessageRecord&) const = default;
};

struct CallRecord {
    AppId app = AppId::skype;
    Direction direction = Direction::unknown;
    std::string peer_id;
    int64_t start_utc_ms = 0;
    int64_t duration_s = 0;
    CallKind kind = CallKind::audio;
    SourceAnchor anchor;

    bool operator==(const CallRecord&) const = default;
};

struct ContactRecord {
    AppId app = AppId::skype;
    std::string contact_key;
    std::optional<std::string> display_name;
    std::vector<PhoneNumber> phone_numbers;
    std::optional<std::string> avatar_ref;
    SourceAnchor anchor;

    bool operator==(const ContactRecord&) const = default;
};

struct UserProfileRecord {
    AppId app = AppId::skype;
    std::string account_id;
    std::optional<std::string> display_name;
    std::optional<PhoneNumber> phone;
    std::optional<std::string> avatar_ref;
    SourceAnchor anchor;

    bool operator==(const UserProfileRecord&) const = default;
};

struct AttachmentRecord {
    AppId app = AppId::skype;
    std::string attachment_id;
    MediaKind media_kind = MediaKind::unknown;
    std::optional<std::string> media_path;  // image-relative; must exist when present
    std::optional<int64_t> size_bytes;
    std::optional<std::string> linked_message;
    SourceAnchor anchor;

    bool operator==(const AttachmentRecord&) const = default;
};

struct LocationFix {
    AppId app = AppId::viber;
    std::string location_id;
    double latitude_deg = 0.0;
    double longitude_deg = 0.0;
    std::string linked_message;
    SourceAnchor anchor;

    bool operator==(const LocationFix&) const = default;
};

struct InstallationRecord {
    AppId app = AppId::skype;
    Os os = Os::ios;
    std::string install_root;  // image-relative
    std::optional<std::string> version_hint;
    SourceAnchor anchor;

    bool operator==(const InstallationRecord&) const = default;
};

struct AuthTokenRecord {
    AppId app = AppId::skype;
    TokenKind token_kind = TokenKind::unknown;
    ValueState value_state = ValueState::opaque;
    std::optional<std::string> value;  // only when cleartext
    SourceAnchor anchor;

    bool operator==(const AuthTokenRecord&) const = default;
};

using ArtifactRecord = std::variant<MessageRecord, CallRecord, ContactRecord,
                                    UserProfileRecord, AttachmentRecord, LocationFix,
                                    InstallationRecord, AuthTokenRecord>;

/// Total mapping from record variant to its artifact class.
TaxonomyCategory category_of(const ArtifactRecord& record);

AppId app_of(const ArtifactRecord& record);
const SourceAnchor& anchor_of(const ArtifactRecord& record);

/// Shape-level invariant check; empty result means well-formed. Existence
/// checks (media paths, install roots) need the image and run only when
/// image_root is supplied.
std::vector<std::string> validate(const ArtifactRecord& record);
std::vector<std::string> validate(const ArtifactRecord& record,
                                  const std::filesystem::path& image_root);

// Epoch conversions used by the extractors. Each store family keeps its own
// native epoch on disk; the model timeline is unix milliseconds throughout.
inline constexpr int64_t kAppleEpochOffsetSeconds = 978307200;  // 2001-01-01T00:00:00Z

inline int64_t apple_seconds_to_unix_ms(int64_t secs) {
    return (secs + kAppleEpochOffsetSeconds) * 1000;
}
inline int64_t unix_seconds_to_unix_ms(int64_t secs) { return secs * 1000; }
inline int64_t unix_ms_passthrough(int64_t ms) { return ms; }

}  // namespace imtriage::model
