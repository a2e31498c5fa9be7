#include "imtriage/report.hpp"

#include <algorithm>

#include "imtriage/util.hpp"

namespace imtriage::report {

using model::AttachmentRecord;
using model::AuthTokenRecord;
using model::BodyState;
using model::CallRecord;
using model::ContactRecord;
using model::InstallationRecord;
using model::LocationFix;
using model::MessageRecord;
using model::SourceAnchor;
using model::UserProfileRecord;

namespace {

ordered_json anchor_to_json(const SourceAnchor& a) {
    ordered_json j;
    j["path"] = a.image_relative_path;
    j["sha256"] = util::to_hex(a.file_digest);
    j["store_kind"] = model::to_string(a.store_kind);
    if (a.locator) {
        j["locator"] = *a.locator;
    } else {
        j["locator"] = nullptr;
    }
    return j;
}

SourceAnchor anchor_from_json(const nlohmann::json& j) {
    SourceAnchor a;
    a.image_relative_path = j.at("path").get<std::string>();
    auto bytes = util::from_hex(j.at("sha256").get<std::string>());
    if (bytes && bytes->size() == a.file_digest.size()) {
        std::copy(bytes->begin(), bytes->end(), a.file_digest.begin());
    }
    std::string kind = j.at("store_kind").get<std::string>();
    if (kind == "sqlite") a.store_kind = model::StoreKind::sqlite;
    else if (kind == "plist") a.store_kind = model::StoreKind::plist;
    else if (kind == "media") a.store_kind = model::StoreKind::media;
    else a.store_kind = model::StoreKind::directory;
    if (j.contains("locator") && !j.at("locator").is_null()) {
        a.locator = j.at("locator").get<std::string>();
    }
    return a;
}

ordered_json phone_to_json(const model::PhoneNumber& p) {
    ordered_json j;
    j["value"] = p.value;
    j["raw"] = p.raw;
    return j;
}

model::PhoneNumber phone_from_json(const nlohmann::json& j) {
    return model::PhoneNumber{j.at("value").get<std::string>(), j.at("raw").get<bool>()};
}

template <typename T>
void put_optional(ordered_json& j, const char* key, const std::optional<T>& v) {
    if (v) {
        j[key] = *v;
    } else {
        j[key] = nullptr;
    }
}

template <typename T>
std::optional<T> get_optional(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

struct ToJson {
    bool with_anchor;

    ordered_json operator()(const MessageRecord& r) const {
        ordered_json j;
        j["kind"] = "message";
        j["app"] = model::to_string(r.app);
        j["message_id"] = r.message_id;
        j["direction"] = model::to_string(r.direction);
        j["conversation_id"] = r.conversation_id;
        j["peer_id"] = r.peer_id;
        put_optional(j, "timestamp_utc_ms", r.timestamp_utc_ms);
        put_optional(j, "body", r.body);
        j["body_state"] = model::to_string(r.body_state);
        j["attachment_refs"] = r.attachment_refs;
        put_optional(j, "location_ref", r.location_ref);
        if (with_anchor) j["anchor"] = anchor_to_json(r.anchor);
        return j;
    }
    ordered_json operator()(const CallRecord& r) const {
        ordered_json j;
        j["kind"] = "call";
        j["app"] = model::to_string(r.app);
        j["direction"] = model::to_string(r.direction);
        j["peer_id"] = r.peer_id;
        j["start_utc_ms"] = r.start_utc_ms;
        j["duration_s"] = r.duration_s;
        j["call_kind"] = model::to_string(r.kind);
        if (with_anchor) j["anchor"] = anchor_to_json(r.anchor);
        return j;
    }
    ordered_json operator()(const ContactRecord& r) const {
        ordered_json j;
        j["kind"] = "contact";
        j["app"] = model::to_string(r.app);
        j["contact_key"] = r.contact_key;
        put_optional(j, "display_name", r.display_name);
        ordered_json phones = ordered_json::array();
        for (const auto& p : r.phone_numbers) phones.push_back(phone_to_json(p));
        j["phone_numbers"] = phones;
        put_optional(j, "avatar_ref", r.avatar_ref);
        if (with_anchor) j["anchor"] = anchor_to_json(r.anchor);
        return j;
    }
    ordered_json operator()(const UserProfileRecord& r) const {
        ordered_json j;
        j["kind"] = "profile";
        j["app"] = model::to_string(r.app);
        j["account_id"] = r.account_id;
        put_optional(j, "display_name", r.display_name);
        if (r.phone) {
            j["phone"] = phone_to_json(*r.phone);
        } else {
            j["phone"] = nullptr;
        }
        put_optional(j, "avatar_ref", r.avatar_ref);
        if (with_anchor) j["anchor"] = anchor_to_json(r.anchor);
        return j;
    }
    ordered_json operator()(const AttachmentRecord& r) const {
        ordered_json j;
        j["kind"] = "attachment";
        j["app"] = model::to_string(r.app);
        j["attachment_id"] = r.attachment_id;
        j["media_kind"] = model::to_string(r.media_kind);
        put_optional(j, "media_path", r.media_path);
        put_optional(j, "size_bytes", r.size_bytes);
        put_optional(j, "linked_message", r.linked_message);
        if (with_anchor) j["anchor"] = anchor_to_json(r.anchor);
        return j;
    }
    ordered_json operator()(const LocationFix& r) const {
        ordered_json j;
        j["kind"] = "location";
        j["app"] = model::to_string(r.app);
        j["location_id"] = r.location_id;
        j["latitude_deg"] = r.latitude_deg;
        j["longitude_deg"] = r.longitude_deg;
        j["linked_message"] = r.linked_message;
        if (with_anchor) j["anchor"] = anchor_to_json(r.anchor);
        return j;
    }
    ordered_json operator()(const InstallationRecord& r) const {
        ordered_json j;
        j["kind"] = "installation";
        j["app"] = model::to_string(r.app);
        j["os"] = model::to_string(r.os);
        j["install_root"] = r.install_root;
        put_optional(j, "version_hint", r.version_hint);
        if (with_anchor) j["anchor"] = anchor_to_json(r.anchor);
        return j;
    }
    ordered_json operator()(const AuthTokenRecord& r) const {
        ordered_json j;
        j["kind"] = "auth_token";
        j["app"] = model::to_string(r.app);
        j["token_kind"] = model::to_string(r.token_kind);
        j["value_state"] = model::to_string(r.value_state);
        put_optional(j, "value", r.value);
        if (with_anchor) j["anchor"] = anchor_to_json(r.anchor);
        return j;
    }
};

model::Direction direction_from_string(const std::string& s) {
    if (s == "incoming") return model::Direction::incoming;
    if (s == "outgoing") return model::Direction::outgoing;
    if (s == "missed") return model::Direction::missed;
    return model::Direction::unknown;
}

}  // namespace

ordered_json record_to_json(const ArtifactRecord& r, bool include_anchor) {
    return std::visit(ToJson{include_anchor}, r);
}

ArtifactRecord record_from_json(const nlohmann::json& j) {
    std::string kind = j.at("kind").get<std::string>();
    AppId app = model::app_from_string(j.at("app").get<std::string>()).value_or(AppId::skype);
    SourceAnchor anchor;
    if (j.contains("anchor")) anchor = anchor_from_json(j.at("anchor"));

    if (kind == "message") {
        MessageRecord r;
        r.app = app;
        r.message_id = j.at("message_id").get<std::string>();
        r.direction = direction_from_string(j.at("direction").get<std::string>());
        r.conversation_id = j.at("conversation_id").get<std::string>();
        r.peer_id = j.at("peer_id").get<std::string>();
        r.timestamp_utc_ms = get_optional<int64_t>(j, "timestamp_utc_ms");
        r.body = get_optional<std::string>(j, "body");
        std::string bs = j.at("body_state").get<std::string>();
        r.body_state = bs == "cleartext" ? BodyState::cleartext
                       : bs == "opaque"  ? BodyState::opaque
                                         : BodyState::absent;
        r.attachment_refs = j.at("attachment_refs").get<std::vector<std::string>>();
        r.location_ref = get_optional<std::string>(j, "location_ref");
        r.anchor = anchor;
        return r;
    }
    if (kind == "call") {
        CallRecord r;
        r.app = app;
        r.direction = direction_from_string(j.at("direction").get<std::string>());
        r.peer_id = j.at("peer_id").get<std::string>();
        r.start_utc_ms = j.at("start_utc_ms").get<int64_t>();
        r.duration_s = j.at("duration_s").get<int64_t>();
        std::string ck = j.at("call_kind").get<std::string>();
        r.kind = ck == "video" ? model::CallKind::video
                 : ck == "voicemail" ? model::CallKind::voicemail
                                     : model::CallKind::audio;
        r.anchor = anchor;
        return r;
    }
    if (kind == "contact") {
        ContactRecord r;
        r.app = app;
        r.contact_key = j.at("contact_key").get<std::string>();
        r.display_name = get_optional<std::string>(j, "display_name");
        for (const auto& p : j.at("phone_numbers")) r.phone_numbers.push_back(phone_from_json(p));
        r.avatar_ref = get_optional<std::string>(j, "avatar_ref");
        r.anchor = anchor;
        return r;
    }
    if (kind == "profile") {
        UserProfileRecord r;
        r.app = app;
        r.account_id = j.at("account_id").get<std::string>();
        r.display_name = get_optional<std::string>(j, "display_name");
        if (j.contains("phone") && !j.at("phone").is_null()) {
            r.phone = phone_from_json(j.at("phone"));
        }
        r.avatar_ref = get_optional<std::string>(j, "avatar_ref");
        r.anchor = anchor;
        return r;
    }
    if (kind == "attachment") {
        AttachmentRecord r;
        r.app = app;
        r.attachment_id = j.at("attachment_id").get<std::string>();
        std::string mk = j.at("media_kind").get<std::string>();
        r.media_kind = mk == "image"     ? model::MediaKind::image
                       : mk == "video"   ? model::MediaKind::video
                       : mk == "audio"   ? model::MediaKind::audio
                       : mk == "sticker" ? model::MediaKind::sticker
                       : mk == "file"    ? model::MediaKind::file
                                         : model::MediaKind::unknown;
        r.media_path = get_optional<std::string>(j, "media_path");
        r.size_bytes = get_optional<int64_t>(j, "size_bytes");
        r.linked_message = get_optional<std::string>(j, "linked_message");
        r.anchor = anchor;
        return r;
    }
    if (kind == "location") {
        LocationFix r;
        r.app = app;
        r.location_id = j.at("location_id").get<std::string>();
        r.latitude_deg = j.at("latitude_deg").get<double>();
        r.longitude_deg = j.at("longitude_deg").get<double>();
        r.linked_message = j.at("linked_message").get<std::string>();
        r.anchor = anchor;
        return r;
    }
    if (kind == "installation") {
        InstallationRecord r;
        r.app = app;
        r.os = model::os_from_string(j.at("os").get<std::string>()).value_or(model::Os::unknown);
        r.install_root = j.at("install_root").get<std::string>();
        r.version_hint = get_optional<std::string>(j, "version_hint");
        r.anchor = anchor;
        return r;
    }
    if (kind == "auth_token") {
        AuthTokenRecord r;
        r.app = app;
        std::string tk = j.at("token_kind").get<std::string>();
        r.token_kind = tk == "password"      ? model::TokenKind::password
                       : tk == "session_key" ? model::TokenKind::session_key
                       : tk == "cookie"      ? model::TokenKind::cookie
                                             : model::TokenKind::unknown;
        r.value_state = j.at("value_state").get<std::string>() == std::string("cleartext")
                            ? model::ValueState::cleartext
                            : model::ValueState::opaque;
        r.value = get_optional<std::string>(j, "value");
        r.anchor = anchor;
        return r;
    }
    throw std::runtime_error("unknown record kind: " + kind);
}

void sort_records_canonical(std::vector<ArtifactRecord>& records) {
    auto key = [](const ArtifactRecord& r) {
        const auto& a = model::anchor_of(r);
        return std::tuple<std::string, int, std::string, std::string, std::string>(
            model::to_string(model::app_of(r)), static_cast<int>(model::category_of(r)),
            a.image_relative_path, a.locator.value_or(""),
            record_to_json(r, false).dump());
    };
    std::stable_sort(records.begin(), records.end(),
                     [&](const ArtifactRecord& x, const ArtifactRecord& y) {
                         return key(x) < key(y);
                     });
}

CaseReport merge(const std::vector<extract::AppResult>& results) {
    std::set<std::pair<AppId, model::Os>> seen;
    for (const auto& r : results) {
        if (!seen.insert({r.app, r.os}).second) {
            throw DuplicateApp(std::string("duplicate result for ") + model::to_string(r.app));
        }
    }

    CaseReport report;
    std::vector<const extract::AppResult*> ordered;
    for (const auto& r : results) ordered.push_back(&r);
    std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
        return std::string(model::to_string(a->app)) < model::to_string(b->app);
    });

    for (const auto* r : ordered) {
        report.apps.push_back(r->app);
        for (const auto& rec : r->records) report.records.push_back(rec);
        for (const auto& w : r->warnings) {
            report.warnings.push_back(std::string(model::to_string(r->app)) + ": " + w);
        }
        for (const auto& e : r->errors) {
            report.errors.push_back({r->app, e.store_path, e.reason});
        }
    }
    sort_records_canonical(report.records);
    return report;
}

// ------------------------------------------------------------------ timeline

namespace {

std::string event_summary(const ArtifactRecord& rec) {
    if (const auto* m = std::get_if<MessageRecord>(&rec)) {
        std::string s = std::string("message ") + model::to_string(m->direction);
        if (!m->peer_id.empty()) s += " peer=" + m->peer_id;
        if (!m->conversation_id.empty()) s += " conv=" + m->conversation_id;
        if (!m->attachment_refs.empty())
            s += " attachments=" + std::to_string(m->attachment_refs.size());
        return s;
    }
    if (const auto* c = std::get_if<CallRecord>(&rec)) {
        return std::string("call ") + model::to_string(c->kind) + " " +
               model::to_string(c->direction) + " peer=" + c->peer_id +
               " duration=" + std::to_string(c->duration_s) + "s";
    }
    if (const auto* l = std::get_if<LocationFix>(&rec)) {
        return "location " + util::shortest_double(l->latitude_deg) + "," +
               util::shortest_double(l->longitude_deg) + " message=" + l->linked_message;
    }
    return {};
}

}  // namespace

Timeline build_timeline(const CaseReport& report) {
    // located fixes take the instant of their linked message
    std::map<std::pair<AppId, std::string>, std::optional<int64_t>> message_times;
    for (const auto& rec : report.records) {
        if (const auto* m = std::get_if<MessageRecord>(&rec)) {
            message_times[{m->app, m->message_id}] = m->timestamp_utc_ms;
        }
    }

    Timeline tl;
    for (const auto& rec : report.records) {
        std::optional<int64_t> ts;
        bool timestamped_category = false;
        if (const auto* m = std::get_if<MessageRecord>(&rec)) {
            timestamped_category = true;
            ts = m->timestamp_utc_ms;
        } else if (const auto* c = std::get_if<CallRecord>(&rec)) {
            timestamped_category = true;
            ts = c->start_utc_ms;
        } else if (const auto* l = std::get_if<LocationFix>(&rec)) {
            timestamped_category = true;
            auto it = message_times.find({l->app, l->linked_message});
            if (it != message_times.end()) ts = it->second;
        }
        if (!timestamped_category) continue;
        if (!ts) {
            ++tl.excluded_untimed;
            continue;
        }
        TimelineEvent ev;
        ev.timestamp_utc_ms = *ts;
        ev.app = model::app_of(rec);
        ev.category = model::category_of(rec);
        ev.summary = event_summary(rec);
        ev.anchor = model::anchor_of(rec);
        tl.events.push_back(std::move(ev));
    }

    std::sort(tl.events.begin(), tl.events.end(),
              [](const TimelineEvent& a, const TimelineEvent& b) {
                  return std::tuple(a.timestamp_utc_ms, std::string(model::to_string(a.app)),
                                    static_cast<int>(a.category), a.anchor.image_relative_path,
                                    a.anchor.locator.value_or("")) <
                         std::tuple(b.timestamp_utc_ms, std::string(model::to_string(b.app)),
                                    static_cast<int>(b.category), b.anchor.image_relative_path,
                                    b.anchor.locator.value_or(""));
              });
    return tl;
}

// -------------------------------------------------------------------- matrix

const char* to_string(CellState s) {
    switch (s) {
        case CellState::none: return "none";
        case CellState::unknown: return "unknown";
        case CellState::found: return "found";
    }
    return "?";
}

const char* to_string(Tag t) {
    switch (t) {
        case Tag::chats: return "chats";
        case Tag::calls: return "calls";
        case Tag::text: return "text";
        case Tag::image: return "image";
        case Tag::video: return "video";
        case Tag::audio: return "audio";
    }
    return "?";
}

const MatrixCell& RecoverabilityMatrix::cell(AppId app, TaxonomyCategory cat) const {
    static const MatrixCell kNone{};
    auto it = cells.find({app, cat});
    return it == cells.end() ? kNone : it->second;
}

RecoverabilityMatrix build_matrix(const CaseReport& report) {
    RecoverabilityMatrix m;
    static const AppId kApps[] = {AppId::skype, AppId::tango, AppId::viber, AppId::whatsapp};
    for (AppId app : kApps) {
        for (int c = 0; c < model::kTaxonomyCategoryCount; ++c) {
            m.cells[{app, static_cast<TaxonomyCategory>(c)}] = MatrixCell{};
        }
    }

    auto found = [&](AppId app, TaxonomyCategory cat) -> MatrixCell& {
        MatrixCell& cell = m.cells[{app, cat}];
        cell.state = CellState::found;
        return cell;
    };

    for (const auto& rec : report.records) {
        AppId app = model::app_of(rec);
        if (const auto* msg = std::get_if<MessageRecord>(&rec)) {
            // chat *history* needs recoverable conveyance metadata; a fully
            // opaque row proves content existed but yields no traffic data
            bool conveyance = msg->timestamp_utc_ms.has_value() || !msg->peer_id.empty() ||
                              !msg->conversation_id.empty();
            if (conveyance) found(app, TaxonomyCategory::TrafficData).tags.insert(Tag::chats);
            if (msg->body_state == BodyState::cleartext && msg->body && !msg->body->empty()) {
                found(app, TaxonomyCategory::ContentData).tags.insert(Tag::text);
            }
        } else if (std::get_if<CallRecord>(&rec)) {
            found(app, TaxonomyCategory::TrafficData).tags.insert(Tag::calls);
        } else if (const auto* att = std::get_if<AttachmentRecord>(&rec)) {
            found(app, TaxonomyCategory::AttachmentFile);
            switch (att->media_kind) {
                case model::MediaKind::image:
                case model::MediaKind::sticker:   // stickers are raster images
                    found(app, TaxonomyCategory::ContentData).tags.insert(Tag::image);
                    break;
                case model::MediaKind::video:
                    found(app, TaxonomyCategory::ContentData).tags.insert(Tag::video);
                    break;
                case model::MediaKind::audio:
                    found(app, TaxonomyCategory::ContentData).tags.insert(Tag::audio);
                    break;
                default:
                    break;
            }
        } else if (std::get_if<ContactRecord>(&rec)) {
            found(app, TaxonomyCategory::ContactDatabase);
        } else if (std::get_if<UserProfileRecord>(&rec)) {
            found(app, TaxonomyCategory::UserProfileData);
        } else if (std::get_if<InstallationRecord>(&rec)) {
            found(app, TaxonomyCategory::InstallationData);
        } else if (std::get_if<LocationFix>(&rec)) {
            found(app, TaxonomyCategory::LocationData);
        } else if (std::get_if<AuthTokenRecord>(&rec)) {
            found(app, TaxonomyCategory::UserAuthenticationData);
        }
    }
    return m;
}

bool covers_reference(const RecoverabilityMatrix& computed, const RecoverabilityMatrix& reference,
                      std::vector<std::string>* gaps) {
    bool ok = true;
    for (const auto& [key, ref] : reference.cells) {
        if (ref.state != CellState::found) continue;  // blank or none impose nothing
        const MatrixCell& got = computed.cell(key.first, key.second);
        bool covered = got.state == CellState::found &&
                       std::includes(got.tags.begin(), got.tags.end(), ref.tags.begin(),
                                     ref.tags.end());
        if (!covered) {
            ok = false;
            if (gaps) {
                std::string g = std::string(model::to_string(key.first)) + "/" +
                                model::to_string(key.second) + " expected";
                for (Tag t : ref.tags) g += std::string(" ") + to_string(t);
                gaps->push_back(g);
            }
        }
    }
    return ok;
}

// ------------------------------------------------------------- serialization

ordered_json matrix_to_json(const RecoverabilityMatrix& m) {
    ordered_json out;
    static const AppId kApps[] = {AppId::skype, AppId::tango, AppId::viber, AppId::whatsapp};
    for (AppId app : kApps) {
        ordered_json row;
        for (int c = 0; c < model::kTaxonomyCategoryCount; ++c) {
            auto cat = static_cast<TaxonomyCategory>(c);
            const MatrixCell& cell = m.cell(app, cat);
            ordered_json jc;
            jc["state"] = to_string(cell.state);
            ordered_json tags = ordered_json::array();
            for (Tag t : cell.tags) tags.push_back(to_string(t));
            jc["tags"] = tags;
            row[model::to_string(cat)] = jc;
        }
        out[model::to_string(app)] = row;
    }
    return out;
}

namespace {

ordered_json report_to_json(const CaseReport& report) {
    Timeline tl = build_timeline(report);
    RecoverabilityMatrix matrix = build_matrix(report);

    ordered_json meta;
    meta["tool"] = kToolName;
    meta["version"] = kToolVersion;
    meta["image"] = report.image_path;
    meta["os"] = model::to_string(report.os);
    meta["file_count"] = report.file_count;
    ordered_json apps = ordered_json::array();
    for (AppId a : report.apps) apps.push_back(model::to_string(a));
    meta["apps"] = apps;
    ordered_json counts;
    for (int c = 0; c < model::kTaxonomyCategoryCount; ++c) {
        auto cat = static_cast<TaxonomyCategory>(c);
        size_t n = 0;
        for (const auto& r : report.records) {
            if (model::category_of(r) == cat) ++n;
        }
        counts[model::to_string(cat)] = n;
    }
    meta["record_counts"] = counts;
    meta["warnings"] = report.warnings;

    ordered_json records = ordered_json::array();
    for (const auto& r : report.records) records.push_back(record_to_json(r, true));

    ordered_json events = ordered_json::array();
    for (const auto& ev : tl.events) {
        ordered_json je;
        je["timestamp_utc_ms"] = ev.timestamp_utc_ms;
        je["timestamp_iso"] = util::iso8601_utc_ms(ev.timestamp_utc_ms);
        je["app"] = model::to_string(ev.app);
        je["category"] = model::to_string(ev.category);
        je["summary"] = ev.summary;
        je["anchor"] = anchor_to_json(ev.anchor);
        events.push_back(je);
    }
    ordered_json timeline;
    timeline["events"] = events;
    timeline["excluded_untimed"] = tl.excluded_untimed;

    ordered_json errors = ordered_json::array();
    for (const auto& e : report.errors) {
        ordered_json je;
        je["app"] = model::to_string(e.app);
        je["store"] = e.store_path;
        je["reason"] = e.reason;
        errors.push_back(je);
    }

    ordered_json top;
    top["meta"] = meta;
    top["records"] = records;
    top["matrix"] = matrix_to_json(matrix);
    top["timeline"] = timeline;
    top["errors"] = errors;
    return top;
}

std::string csv_quote(const std::string& field) {
    bool needs = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += "\"";
    return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
    std::string out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ",";
        out += csv_quote(fields[i]);
    }
    out += "\n";
    return out;
}

std::string phones_csv(const std::vector<model::PhoneNumber>& phones) {
    std::string out;
    for (size_t i = 0; i < phones.size(); ++i) {
        if (i) out += ";";
        if (phones[i].raw) out += "raw:";
        out += phones[i].value;
    }
    return out;
}

std::string opt_str(const std::optional<std::string>& v) { return v.value_or(""); }
std::string opt_int(const std::optional<int64_t>& v) {
    return v ? std::to_string(*v) : "";
}

}  // namespace

std::string serialize_json(const CaseReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

std::map<std::string, std::string> serialize_csv(const CaseReport& report) {
    std::map<std::string, std::string> files;
    auto anchor_cols = [](const SourceAnchor& a) {
        return std::vector<std::string>{a.image_relative_path, a.locator.value_or(""),
                                        util::to_hex(a.file_digest)};
    };
    auto append = [&](std::string& out, std::vector<std::string> fields,
                      const SourceAnchor& a) {
        auto tail = anchor_cols(a);
        fields.insert(fields.end(), tail.begin(), tail.end());
        out += csv_row(fields);
    };

    std::string messages = csv_row({"app", "message_id", "direction", "conversation_id",
                                    "peer_id", "timestamp_utc_ms", "timestamp_iso",
                                    "body_state", "body", "attachment_refs", "location_ref",
                                    "anchor_path", "anchor_locator", "anchor_sha256"});
    std::string calls = csv_row({"app", "direction", "call_kind", "peer_id", "start_utc_ms",
                                 "start_iso", "duration_s", "anchor_path", "anchor_locator",
                                 "anchor_sha256"});
    std::string contacts = csv_row({"app", "contact_key", "display_name", "phone_numbers",
                                    "avatar_ref", "anchor_path", "anchor_locator",
                                    "anchor_sha256"});
    std::string profiles = csv_row({"app", "account_id", "display_name", "phone", "avatar_ref",
                                    "anchor_path", "anchor_locator", "anchor_sha256"});
    std::string attachments = csv_row({"app", "attachment_id", "media_kind", "media_path",
                                       "size_bytes", "linked_message", "anchor_path",
                                       "anchor_locator", "anchor_sha256"});
    std::string locations = csv_row({"app", "location_id", "latitude_deg", "longitude_deg",
                                     "linked_message", "anchor_path", "anchor_locator",
                                     "anchor_sha256"});
    std::string installations = csv_row({"app", "os", "install_root", "version_hint",
                                         "anchor_path", "anchor_locator", "anchor_sha256"});
    std::string tokens = csv_row({"app", "token_kind", "value_state", "value", "anchor_path",
                                  "anchor_locator", "anchor_sha256"});

    for (const auto& rec : report.records) {
        if (const auto* m = std::get_if<MessageRecord>(&rec)) {
            std::string refs;
            for (size_t i = 0; i < m->attachment_refs.size(); ++i) {
                if (i) refs += ";";
                refs += m->attachment_refs[i];
            }
            append(messages,
                   {model::to_string(m->app), m->message_id, model::to_string(m->direction),
                    m->conversation_id, m->peer_id, opt_int(m->timestamp_utc_ms),
                    m->timestamp_utc_ms ? util::iso8601_utc_ms(*m->timestamp_utc_ms) : "",
                    model::to_string(m->body_state), opt_str(m->body), refs,
                    opt_str(m->location_ref)},
                   m->anchor);
        } else if (const auto* c = std::get_if<CallRecord>(&rec)) {
            append(calls,
                   {model::to_string(c->app), model::to_string(c->direction),
                    model::to_string(c->kind), c->peer_id, std::to_string(c->start_utc_ms),
                    util::iso8601_utc_ms(c->start_utc_ms), std::to_string(c->duration_s)},
                   c->anchor);
        } else if (const auto* ct = std::get_if<ContactRecord>(&rec)) {
            append(contacts,
                   {model::to_string(ct->app), ct->contact_key, opt_str(ct->display_name),
                    phones_csv(ct->phone_numbers), opt_str(ct->avatar_ref)},
                   ct->anchor);
        } else if (const auto* p = std::get_if<UserProfileRecord>(&rec)) {
            append(profiles,
                   {model::to_string(p->app), p->account_id, opt_str(p->display_name),
                    p->phone ? (p->phone->raw ? "raw:" + p->phone->value : p->phone->value)
                             : "",
                    opt_str(p->avatar_ref)},
                   p->anchor);
        } else if (const auto* a = std::get_if<AttachmentRecord>(&rec)) {
            append(attachments,
                   {model::to_string(a->app), a->attachment_id, model::to_string(a->media_kind),
                    opt_str(a->media_path), opt_int(a->size_bytes), opt_str(a->linked_message)},
                   a->anchor);
        } else if (const auto* l = std::get_if<LocationFix>(&rec)) {
            append(locations,
                   {model::to_string(l->app), l->location_id,
                    util::shortest_double(l->latitude_deg),
                    util::shortest_double(l->longitude_deg), l->linked_message},
                   l->anchor);
        } else if (const auto* ins = std::get_if<InstallationRecord>(&rec)) {
            append(installations,
                   {model::to_string(ins->app), model::to_string(ins->os), ins->install_root,
                    opt_str(ins->version_hint)},
                   ins->anchor);
        } else if (const auto* t = std::get_if<AuthTokenRecord>(&rec)) {
            append(tokens,
                   {model::to_string(t->app), model::to_string(t->token_kind),
                    model::to_string(t->value_state), opt_str(t->value)},
                   t->anchor);
        }
    }

    files["messages.csv"] = messages;
    files["calls.csv"] = calls;
    files["contacts.csv"] = contacts;
    files["profiles.csv"] = profiles;
    files["attachments.csv"] = attachments;
    files["locations.csv"] = locations;
    files["installations.csv"] = installations;
    files["auth_tokens.csv"] = tokens;
    return files;
}

std::string serialize_timeline_text(const CaseReport& report) {
    Timeline tl = build_timeline(report);
    std::string out;
    for (const auto& ev : tl.events) {
        out += util::iso8601_utc_ms(ev.timestamp_utc_ms);
        out += "\t";
        out += model::to_string(ev.app);
        out += "\t";
        out += model::to_string(ev.category);
        out += "\t";
        out += ev.summary;
        out += "\n";
    }
    return out;
}

}  // namespace imtriage::report
