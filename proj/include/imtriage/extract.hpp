#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "imtriage/ingest.hpp"
#include "imtriage/model.hpp"
#include "imtriage/store/sqlite_reader.hpp"

namespace imtriage::extract {

using model::AppId;
using model::Os;

/// Canonical-to-actual name mapping for store tables and columns, so
/// real-device schema variants map through configuration instead of code.
/// Built-in defaults cover the canonical fixture schemas; extra aliases load
/// from a plain-text file of lines
///   <app>.<store_role>.table.<canonical> = alias[, alias...]
///   <app>.<store_role>.column.<table>.<canonical> = alias[, alias...]
class AliasTable {
public:
    static AliasTable defaults();
    /// defaults() plus the mappings in `file`. Throws std::runtime_error on
    /// unparseable lines.
    static AliasTable load(const std::filesystem::path& file);

    void add_table_alias(AppId app, const std::string& role, const std::string& canonical,
                         const std::string& alias);
    void add_column_alias(AppId app, const std::string& role, const std::string& table,
                          const std::string& canonical, const std::string& alias);

    /// Actual table name in `st` for a canonical name (the canonical itself,
    /// or the first alias present). Empty when nothing matches.
    std::string resolve_table(AppId app, const std::string& role, const std::string& canonical,
                              const store::TableStore& st) const;

    /// Actual column name within `actual_table` for a canonical column.
    std::string resolve_column(AppId app, const std::string& role,
                               const std::string& canonical_table,
                               const std::string& canonical_column,
                               const store::TableStore& st,
                               const std::string& actual_table) const;

private:
    // key: app|role|canonical  or  app|role|table|canonical
    std::map<std::string, std::vector<std::string>> table_aliases_;
    std::map<std::string, std::vector<std::string>> column_aliases_;
};

struct StoreError {
    std::string store_path;  // image-relative, or a role name when absent
    std::string reason;

    bool operator==(const StoreError&) const = default;
};

/// Everything one app's extraction produced. Store failures land in
/// `errors`; extraction never throws past this boundary.
struct AppResult {
    AppId app = AppId::skype;
    Os os = Os::ios;
    std::vector<model::ArtifactRecord> records;
    std::vector<std::string> warnings;
    std::vector<StoreError> errors;
    std::vector<std::pair<std::string, util::Digest>> stores_examined;
};

AppResult extract_skype(const std::filesystem::path& image_root, const ingest::AppHome& home,
                        const AliasTable& aliases);
AppResult extract_viber(const std::filesystem::path& image_root, const ingest::AppHome& home,
                        const AliasTable& aliases);
AppResult extract_tango(const std::filesystem::path& image_root, const ingest::AppHome& home,
                        const AliasTable& aliases);
AppResult extract_whatsapp(const std::filesystem::path& image_root, const ingest::AppHome& home,
                           const AliasTable& aliases);

/// Dispatch on home.app.
AppResult extract_app(const std::filesystem::path& image_root, const ingest::AppHome& home,
                      const AliasTable& aliases);

}  // namespace imtriage::extract
