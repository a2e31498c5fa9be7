#include "imtriage/model.hpp"

#include <cctype>

#include "imtriage/util.hpp"

namespace imtriage::model {

namespace fs = std::filesystem;

const char* to_string(AppId app) {
    switch (app) {
        case AppId::skype: return "skype";
        case AppId::tango: return "tango";
        case AppId::viber: return "viber";
        case AppId::whatsapp: return "whatsapp";
    }
    return "?";
}

const char* to_string(Os os) {
    switch (os) {
        case Os::ios: return "ios";
        case Os::android: return "android";
        case Os::unknown: return "unknown";
    }
    return "?";
}

std::optional<AppId> app_from_string(std::string_view s) {
    if (s == "skype") return AppId::skype;
    if (s == "tango") return AppId::tango;
    if (s == "viber") return AppId::viber;
    if (s == "whatsapp") return AppId::whatsapp;
    return std::nullopt;
}

std::optional<Os> os_from_string(std::string_view s) {
    if (s == "ios") return Os::ios;
    if (s == "android") return Os::android;
    if (s == "unknown") return Os::unknown;
    return std::nullopt;
}

const char* to_string(TaxonomyCategory c) {
    switch (c) {
        case TaxonomyCategory::InstallationData: return "installation";
        case TaxonomyCategory::TrafficData: return "traffic";
        case TaxonomyCategory::ContentData: return "content";
        case TaxonomyCategory::UserProfileData: return "profile";
        case TaxonomyCategory::UserAuthenticationData: return "authentication";
        case TaxonomyCategory::ContactDatabase: return "contacts";
        case TaxonomyCategory::AttachmentFile: return "attachments";
        case TaxonomyCategory::LocationData: return "location";
    }
    return "?";
}

std::optional<TaxonomyCategory> category_from_string(std::string_view s) {
    for (int i = 0; i < kTaxonomyCategoryCount; ++i) {
        auto c = static_cast<TaxonomyCategory>(i);
        if (s == to_string(c)) return c;
    }
    return std::nullopt;
}

const char* to_string(StoreKind k) {
    switch (k) {
        case StoreKind::sqlite: return "sqlite";
        case StoreKind::plist: return "plist";
        case StoreKind::media: return "media";
        case StoreKind::directory: return "directory";
    }
    return "?";
}

const char* to_string(Direction d) {
    switch (d) {
        case Direction::incoming: return "incoming";
        case Direction::outgoing: return "outgoing";
        case Direction::missed: return "missed";
        case Direction::unknown: return "unknown";
    }
    return "?";
}

const char* to_string(BodyState s) {
    switch (s) {
        case BodyState::cleartext: return "cleartext";
        case BodyState::opaque: return "opaque";
        case BodyState::absent: return "absent";
    }
    return "?";
}

const char* to_string(MediaKind k) {
    switch (k) {
        case MediaKind::image: return "image";
        case MediaKind::video: return "video";
        case MediaKind::audio: return "audio";
        case MediaKind::sticker: return "sticker";
        case MediaKind::file: return "file";
        case MediaKind::unknown: return "unknown";
    }
    return "?";
}

MediaKind media_kind_from_extension(const std::string& ext) {
    std::string e = util::lowercase(ext);
    if (e == "jpg" || e == "jpeg" || e == "png" || e == "gif" || e == "bmp" || e == "webp")
        return MediaKind::image;
    if (e == "mp4" || e == "3gp" || e == "mov" || e == "avi") return MediaKind::video;
    if (e == "m4a" || e == "aac" || e == "amr" || e == "mp3" || e == "wav" || e == "opus")
        return MediaKind::audio;
    if (e.empty()) return MediaKind::unknown;
    return MediaKind::file;
}

const char* to_string(CallKind k) {
    switch (k) {
        case CallKind::audio: return "audio";
        case CallKind::video: return "video";
        case CallKind::voicemail: return "voicemail";
    }
    return "?";
}

const char* to_string(TokenKind k) {
    switch (k) {
        case TokenKind::password: return "password";
        case TokenKind::session_key: return "session_key";
        case TokenKind::cookie: return "cookie";
        case TokenKind::unknown: return "unknown";
    }
    return "?";
}

const char* to_string(ValueState s) {
    switch (s) {
        case ValueState::cleartext: return "cleartext";
        case ValueState::opaque: return "opaque";
    }
    return "?";
}

PhoneNumber normalize_phone(std::string_view input) {
    // Strip common separators; accept "+<8..15 digits>" as E.164, keep
    // everything else verbatim. Evidential fidelity over prettiness.
    std::string compact;
    for (char c : input) {
        if (c == ' ' || c == '-' || c == '(' || c == ')' || c == '.') continue;
        compact.push_back(c);
    }
    if (compact.size() >= 9 && compact.size() <= 16 && compact.front() == '+') {
        bool digits = true;
        for (size_t i = 1; i < compact.size(); ++i) {
            if (!std::isdigit(static_cast<unsigned char>(compact[i]))) {
                digits = false;
                break;
            }
        }
        if (digits) return PhoneNumber{compact, false};
    }
    return PhoneNumber{std::string(input), true};
}

TaxonomyCategory category_of(const ArtifactRecord& record) {
    struct Visitor {
        TaxonomyCategory operator()(const MessageRecord&) const { return TaxonomyCategory::ContentData; }
        TaxonomyCategory operator()(const CallRecord&) const { return TaxonomyCategory::TrafficData; }
        TaxonomyCategory operator()(const ContactRecord&) const { return TaxonomyCategory::ContactDatabase; }
        TaxonomyCategory operator()(const UserProfileRecord&) const { return TaxonomyCategory::UserProfileData; }
        TaxonomyCategory operator()(const AttachmentRecord&) const { return TaxonomyCategory::AttachmentFile; }
        TaxonomyCategory operator()(const LocationFix&) const { return TaxonomyCategory::LocationData; }
        TaxonomyCategory operator()(const InstallationRecord&) const { return TaxonomyCategory::InstallationData; }
        TaxonomyCategory operator()(const AuthTokenRecord&) const { return TaxonomyCategory::UserAuthenticationData; }
    };
    return std::visit(Visitor{}, record);
}

AppId app_of(const ArtifactRecord& record) {
    return std::visit([](const auto& r) { return r.app; }, record);
}

const SourceAnchor& anchor_of(const ArtifactRecord& record) {
    return std::visit([](const auto& r) -> const SourceAnchor& { return r.anchor; }, record);
}

namespace {

void check_anchor(const SourceAnchor& a, std::vector<std::string>& out) {
    if (!util::is_safe_relative_path(a.image_relative_path)) {
        out.push_back("anchor path not image-relative: " + a.image_relative_path);
    }
}

struct ValidateVisitor {
    std::vector<std::string>& out;
    const fs::path* image_root;  // null when existence checks are skipped

    bool exists_in_image(const std::string& rel) const {
        if (!image_root) return true;
        std::error_code ec;
        return fs::exists(*image_root / fs::path(rel), ec);
    }

    void operator()(const MessageRecord& r) const {
        check_anchor(r.anchor, out);
        if (r.body_state == BodyState::opaque && r.body.has_value())
            out.push_back("opaque body must be absent");
        if (r.body_state == BodyState::absent && r.body.has_value())
            out.push_back("absent body state but body present");
        if (r.timestamp_utc_ms && *r.timestamp_utc_ms < 0)
            out.push_back("timestamp before epoch");
        if (r.message_id.empty()) out.push_back("empty message id");
    }
    void operator()(const CallRecord& r) const {
        check_anchor(r.anchor, out);
        if (r.start_utc_ms < 0) out.push_back("call start before epoch");
        if (r.duration_s < 0) out.push_back("negative call duration");
    }
    void operator()(const ContactRecord& r) const {
        check_anchor(r.anchor, out);
        if (r.contact_key.empty() && !r.display_name && r.phone_numbers.empty())
            out.push_back("contact has no key, name or number");
    }
    void operator()(const UserProfileRecord& r) const {
        check_anchor(r.anchor, out);
        if (r.account_id.empty()) out.push_back("empty account id");
    }
    void operator()(const AttachmentRecord& r) const {
        check_anchor(r.anchor, out);
        if (r.attachment_id.empty()) out.push_back("empty attachment id");
        if (r.size_bytes && *r.size_bytes < 0) out.push_back("negative size");
        if (r.media_path) {
            if (!util::is_safe_relative_path(*r.media_path))
                out.push_back("media path not image-relative: " + *r.media_path);
            else if (!exists_in_image(*r.media_path))
                out.push_back("media path missing from image: " + *r.media_path);
        }
    }
    void operator()(const LocationFix& r) const {
        check_anchor(r.anchor, out);
        if (r.latitude_deg < -90.0 || r.latitude_deg > 90.0)
            out.push_back("latitude out of range");
        if (r.longitude_deg < -180.0 || r.longitude_deg > 180.0)
            out.push_back("longitude out of range");
        if (r.linked_message.empty()) out.push_back("location without linked message");
    }
    void operator()(const InstallationRecord& r) const {
        check_anchor(r.anchor, out);
        if (!util::is_safe_relative_path(r.install_root))
            out.push_back("install root not image-relative: " + r.install_root);
        else if (!exists_in_image(r.install_root))
            out.push_back("install root missing from image: " + r.install_root);
    }
    void operator()(const AuthTokenRecord& r) const {
        check_anchor(r.anchor, out);
        if (r.value_state == ValueState::opaque && r.value.has_value())
            out.push_back("opaque token must not carry a value");
    }
};

}  // namespace

std::vector<std::string> validate(const ArtifactRecord& record) {
    std::vector<std::string> out;
    std::visit(ValidateVisitor{out, nullptr}, record);
    return out;
}

std::vector<std::string> validate(const ArtifactRecord& record, const fs::path& image_root) {
    std::vector<std::string> out;
    std::visit(ValidateVisitor{out, &image_root}, record);
    return out;
}

}  // namespace imtriage::model
