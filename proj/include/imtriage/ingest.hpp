#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "imtriage/model.hpp"
#include "imtriage/sha256.hpp"

namespace imtriage::ingest {

using model::AppId;
using model::Os;
using util::Digest;

struct UnreadableRoot : std::runtime_error {
    explicit UnreadableRoot(const std::string& what) : std::runtime_error(what) {}
};

struct ImageRoot {
    std::filesystem::path root_path;
    Os os = Os::unknown;
    uint64_t file_count = 0;
    std::vector<std::string> warnings;
};

/// A discovered per-app data home inside the image.
struct AppHome {
    AppId app = AppId::skype;
    Os os = Os::ios;
    std::vector<std::string> roots;   // image-relative directories
    std::vector<std::pair<std::string, std::string>> stores;  // (role, image-relative path)
    bool hidden = false;
    std::string signature;  // which discovery pattern fired

    /// Path of the store with the given role, empty when absent.
    std::string store(const std::string& role) const;
};

/// OS from filesystem markers: data/data -> android,
/// var/mobile/Applications (or private/var/mobile) -> ios. Android wins a
/// tie, with a warning.
ImageRoot classify_image(const std::filesystem::path& root);

/// Per-app data homes under the image, sorted by app. Android homes match by
/// package directory name; iOS containers are matched by content signature
/// because container GUIDs are random per install.
std::vector<AppHome> discover_apps(const ImageRoot& image);

Digest hash_file(const std::filesystem::path& image_root, const std::string& relative_path);

/// Digest of a directory anchor: SHA-256 over the newline-joined sorted list
/// of image-relative file paths below it.
Digest hash_directory_listing(const std::filesystem::path& image_root,
                              const std::string& relative_dir);

using TreeDigest = std::vector<std::pair<std::string, Digest>>;  // sorted by path

/// Hashes every regular file under root. The parallel kernel and the serial
/// reference must produce identical results; tests hold them to that.
TreeDigest digest_tree(const std::filesystem::path& root);
TreeDigest digest_tree_serial(const std::filesystem::path& root);

}  // namespace imtriage::ingest
