#include "imtriage/ingest.hpp"

#include <algorithm>
#include <set>

#include "imtriage/util.hpp"

namespace imtriage::ingest {

namespace fs = std::filesystem;
using util::iequals;
using util::lowercase;

std::string AppHome::store(const std::string& role) const {
    for (const auto& [r, p] : stores) {
        if (r == role) return p;
    }
    return {};
}

namespace {

bool dir_exists(const fs::path& p) {
    std::error_code ec;
    return fs::is_directory(p, ec);
}

bool file_exists(const fs::path& p) {
    std::error_code ec;
    return fs::is_regular_file(p, ec);
}

std::string rel(const fs::path& root, const fs::path& p) {
    return fs::relative(p, root).generic_string();
}

/// Final path component equals `name`, ignoring case and a leading dot.
bool component_matches(const fs::path& p, std::string_view name) {
    std::string base = p.filename().generic_string();
    if (!base.empty() && base.front() == '.') base.erase(0, 1);
    return iequals(base, name);
}

bool component_contains(const fs::path& p, std::string_view needle) {
    std::string base = lowercase(p.filename().generic_string());
    return base.find(lowercase(needle)) != std::string::npos;
}

/// Case-insensitive lookup of a direct child; returns empty path when absent.
fs::path find_child(const fs::path& dir, std::string_view name) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) return {};
    for (const auto& e : fs::directory_iterator(dir, ec)) {
        if (component_matches(e.path(), name)) return e.path();
    }
    return {};
}

/// First file named `name` (case-insensitive) anywhere under dir, sorted walk.
fs::path find_file_recursive(const fs::path& dir, std::string_view name) {
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) return {};
    std::vector<fs::path> hits;
    for (auto it = fs::recursive_directory_iterator(dir, ec);
         it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) break;
        if (it->is_regular_file() && component_matches(it->path(), name)) {
            hits.push_back(it->path());
        }
    }
    if (hits.empty()) return {};
    std::sort(hits.begin(), hits.end());
    return hits.front();
}

fs::path find_dir_recursive(const fs::path& dir, std::string_view name_contains) {
    std::error_code ec;
    std::vector<fs::path> hits;
    for (auto it = fs::recursive_directory_iterator(dir, ec);
         it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) break;
        if (it->is_directory() && component_contains(it->path(), name_contains)) {
            hits.push_back(it->path());
        }
    }
    if (hits.empty()) return {};
    std::sort(hits.begin(), hits.end());
    return hits.front();
}

void add_store(AppHome& home, const fs::path& root, const std::string& role,
               const fs::path& p) {
    if (!p.empty() && file_exists(p)) home.stores.emplace_back(role, rel(root, p));
}

void add_root(AppHome& home, const fs::path& root, const fs::path& p) {
    if (!p.empty() && dir_exists(p)) home.roots.push_back(rel(root, p));
}

// ------------------------------------------------------------------ Android

/// Android external storage shows up as mnt/sdcard or sdcard depending on
/// how the mount point was captured.
fs::path sdcard_path(const fs::path& root, const std::string& tail) {
    fs::path a = root / "mnt" / "sdcard" / tail;
    if (dir_exists(a)) return a;
    fs::path b = root / "sdcard" / tail;
    if (dir_exists(b)) return b;
    return {};
}

std::vector<AppHome> discover_android(const ImageRoot& image) {
    const fs::path& root = image.root_path;
    fs::path data = root / "data" / "data";
    std::vector<AppHome> homes;
    if (!dir_exists(data)) return homes;

    // Skype
    if (fs::path pkg = find_child(data, "com.skype.raider"); !pkg.empty()) {
        AppHome h;
        h.app = AppId::skype;
        h.os = Os::android;
        h.signature = "pkg:com.skype.raider";
        add_root(h, root, pkg);
        // main.db sits under files/<username>/
        add_store(h, root, "main_db", find_file_recursive(pkg / "files", "main.db"));
        add_store(h, root, "embedded_db", find_file_recursive(pkg / "files", "main.db.EMBEDDED"));
        add_root(h, root, sdcard_path(root, "Android/data/com.skype.raider/cache"));
        homes.push_back(std::move(h));
    }

    // Viber
    if (fs::path pkg = find_child(data, "com.viber.voip"); !pkg.empty()) {
        AppHome h;
        h.app = AppId::viber;
        h.os = Os::android;
        h.signature = "pkg:com.viber.voip";
        add_root(h, root, pkg);
        add_store(h, root, "messages_db", find_file_recursive(pkg, "viber_messages"));
        add_store(h, root, "data_db", find_file_recursive(pkg, "viber_data"));
        add_root(h, root, sdcard_path(root, "viber"));
        homes.push_back(std::move(h));
    }

    // Tango registers as "sgiggle"; the literal package name is not certain,
    // so any package containing the string matches.
    {
        std::error_code ec;
        fs::path pkg;
        for (const auto& e : fs::directory_iterator(data, ec)) {
            if (e.is_directory() && component_contains(e.path(), "sgiggle")) {
                pkg = e.path();
                break;
            }
        }
        if (!pkg.empty()) {
            AppHome h;
            h.app = AppId::tango;
            h.os = Os::android;
            std::string base = pkg.filename().generic_string();
            h.signature = "pkg:" + base;
            h.hidden = !base.empty() && base.front() == '.';
            add_root(h, root, pkg);
            add_store(h, root, "tc_db", find_file_recursive(pkg, "tc.db"));
            add_store(h, root, "cache_db", find_file_recursive(pkg, "TangoCache.db"));
            if (fs::path media = find_dir_recursive(pkg, "TCStorageManagerMediaCache");
                !media.empty()) {
                add_root(h, root, media);
            }
            homes.push_back(std::move(h));
        }
    }

    // WhatsApp
    if (fs::path pkg = find_child(data, "com.whatsapp"); !pkg.empty()) {
        AppHome h;
        h.app = AppId::whatsapp;
        h.os = Os::android;
        h.signature = "pkg:com.whatsapp";
        add_root(h, root, pkg);
        add_store(h, root, "chat_db", find_file_recursive(pkg / "databases", "msgstore.db"));
        add_store(h, root, "contacts_db", find_file_recursive(pkg / "databases", "wa.db"));
        add_root(h, root, sdcard_path(root, "WhatsApp"));
        homes.push_back(std::move(h));
    }

    return homes;
}

// ---------------------------------------------------------------------- iOS

std::vector<AppHome> discover_ios(const ImageRoot& image) {
    const fs::path& root = image.root_path;
    fs::path apps = root / "var" / "mobile" / "Applications";
    if (!dir_exists(apps)) apps = root / "private" / "var" / "mobile" / "Applications";
    std::vector<AppHome> homes;
    if (!dir_exists(apps)) return homes;

    std::error_code ec;
    std::vector<fs::path> containers;
    for (const auto& e : fs::directory_iterator(apps, ec)) {
        if (e.is_directory()) containers.push_back(e.path());
    }
    std::sort(containers.begin(), containers.end());

    for (const fs::path& container : containers) {
        // Skype: main.db under a Skype-named subtree
        if (fs::path skype_dir = find_dir_recursive(container, "skype"); !skype_dir.empty()) {
            fs::path main_db = find_file_recursive(skype_dir, "main.db");
            if (!main_db.empty()) {
                AppHome h;
                h.app = AppId::skype;
                h.os = Os::ios;
                h.signature = "content:main.db under Skype";
                add_root(h, root, container);
                add_store(h, root, "main_db", main_db);
                add_store(h, root, "embedded_db",
                          find_file_recursive(skype_dir, "main.db.EMBEDDED"));
                add_store(h, root, "info_plist", find_file_recursive(container, "Info.plist"));
                homes.push_back(std::move(h));
                continue;
            }
        }
        // Viber: Contacts.data at the core of the application
        if (fs::path cd = find_file_recursive(container / "Documents", "Contacts.data");
            !cd.empty()) {
            AppHome h;
            h.app = AppId::viber;
            h.os = Os::ios;
            h.signature = "content:Contacts.data";
            add_root(h, root, container);
            add_store(h, root, "contacts_data", cd);
            add_store(h, root, "info_plist", find_file_recursive(container, "Info.plist"));
            add_root(h, root, container / "Documents" / "Attachments");
            homes.push_back(std::move(h));
            continue;
        }
        // Tango: a folder named sgiggle (the only hidden one of the four)
        if (fs::path sg = find_dir_recursive(container, "sgiggle"); !sg.empty()) {
            AppHome h;
            h.app = AppId::tango;
            h.os = Os::ios;
            h.signature = "content:sgiggle folder";
            h.hidden = true;
            add_root(h, root, container);
            add_store(h, root, "tc_db", find_file_recursive(sg, "tc.db"));
            add_store(h, root, "cache_db", find_file_recursive(sg, "TangoCache.db"));
            add_store(h, root, "info_plist", find_file_recursive(container, "Info.plist"));
            homes.push_back(std::move(h));
            continue;
        }
        // WhatsApp: ChatStorage.sqlite + Contacts.sqlite in Documents
        if (fs::path cs = find_file_recursive(container / "Documents", "ChatStorage.sqlite");
            !cs.empty()) {
            AppHome h;
            h.app = AppId::whatsapp;
            h.os = Os::ios;
            h.signature = "content:ChatStorage.sqlite";
            add_root(h, root, container);
            add_store(h, root, "chat_db", cs);
            add_store(h, root, "contacts_db",
                      find_file_recursive(container / "Documents", "Contacts.sqlite"));
            add_store(h, root, "info_plist", find_file_recursive(container, "Info.plist"));
            add_root(h, root, container / "Library" / "Media");
            homes.push_back(std::move(h));
            continue;
        }
    }
    return homes;
}

}  // namespace

ImageRoot classify_image(const fs::path& root) {
    std::error_code ec;
    if (!fs::is_directory(root, ec)) {
        throw UnreadableRoot("not a readable directory: " + root.string());
    }

    ImageRoot image;
    image.root_path = root;

    uint64_t count = 0;
    fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied, ec);
    if (ec) throw UnreadableRoot("cannot traverse " + root.string() + ": " + ec.message());
    for (; it != fs::recursive_directory_iterator(); it.increment(ec)) {
        if (ec) throw UnreadableRoot("traversal failed under " + root.string());
        if (it->is_regular_file()) ++count;
    }
    image.file_count = count;

    bool android = dir_exists(root / "data" / "data");
    bool ios = dir_exists(root / "var" / "mobile" / "Applications") ||
               dir_exists(root / "private" / "var" / "mobile");
    if (android && ios) {
        image.warnings.push_back("both android and ios markers present; classifying as android");
    }
    image.os = android ? Os::android : (ios ? Os::ios : Os::unknown);
    return image;
}

std::vector<AppHome> discover_apps(const ImageRoot& image) {
    std::vector<AppHome> homes;
    if (image.os == Os::android) {
        homes = discover_android(image);
    } else if (image.os == Os::ios) {
        homes = discover_ios(image);
    }

    // never report a path that does not exist
    for (auto& h : homes) {
        std::erase_if(h.roots, [&](const std::string& r) {
            return !dir_exists(image.root_path / r);
        });
        std::erase_if(h.stores, [&](const auto& s) {
            return !file_exists(image.root_path / s.second);
        });
        std::sort(h.roots.begin(), h.roots.end());
        std::sort(h.stores.begin(), h.stores.end());
    }
    std::sort(homes.begin(), homes.end(), [](const AppHome& a, const AppHome& b) {
        return std::string(model::to_string(a.app)) < model::to_string(b.app);
    });
    return homes;
}

Digest hash_file(const fs::path& image_root, const std::string& relative_path) {
    return util::sha256_file(image_root / fs::path(relative_path));
}

Digest hash_directory_listing(const fs::path& image_root, const std::string& relative_dir) {
    auto files = util::list_files_sorted(image_root / fs::path(relative_dir));
    std::string joined;
    for (const auto& f : files) {
        joined += f;
        joined += '\n';
    }
    return util::sha256_string(joined);
}

TreeDigest digest_tree(const fs::path& root) {
    auto files = util::list_files_sorted(root);
    TreeDigest out(files.size());
    // independent per-file hashing; order restored by index
    #pragma omp parallel for schedule(dynamic)
    for (size_t i = 0; i < files.size(); ++i) {
        out[i] = {files[i], util::sha256_file(root / files[i])};
    }
    return out;
}

TreeDigest digest_tree_serial(const fs::path& root) {
    auto files = util::list_files_sorted(root);
    TreeDigest out;
    out.reserve(files.size());
    for (const auto& f : files) {
        out.emplace_back(f, util::sha256_file(root / f));
    }
    return out;
}

}  // namespace imtriage::ingest
