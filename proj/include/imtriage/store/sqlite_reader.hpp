#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace imtriage::store {

/// File does not start with the SQLite magic.
struct NotASQLiteFile : std::runtime_error {
    explicit NotASQLiteFile(const std::string& what) : std::runtime_error(what) {}
};

/// Structural damage, or a structure this reader refuses to interpret
/// (virtual tables, non-UTF-8 encodings, WITHOUT ROWID trees).
struct CorruptStore : std::runtime_error {
    explicit CorruptStore(const std::string& what) : std::runtime_error(what) {}
};

struct TableMissing : std::runtime_error {
    explicit TableMissing(const std::string& table)
        : std::runtime_error("no such table: " + table), table_name(table) {}
    std::string table_name;
};

using Blob = std::vector<uint8_t>;
/// One cell value: NULL, integer, real, text or blob.
using Value = std::variant<std::monostate, int64_t, double, std::string, Blob>;

bool is_null(const Value& v);
std::optional<int64_t> as_int(const Value& v);
std::optional<double> as_real(const Value& v);        // promotes integers
std::optional<std::string> as_text(const Value& v);   // text only
const Blob* as_blob(const Value& v);

using Row = std::map<std::string, Value>;

struct ReadResult {
    std::vector<Row> rows;
    std::vector<std::string> warnings;
};

/// Read-only access to one SQLite-format database file. The whole file is
/// copied into memory on open; the evidence file is never written, locked or
/// mmapped, and journal/WAL sidecars are never replayed.
class TableStore {
public:
    static TableStore open(const std::filesystem::path& file);

    const std::filesystem::path& path() const { return path_; }
    uint32_t page_size() const { return page_size_; }

    /// Names of ordinary tables from the schema catalog, sorted.
    const std::vector<std::string>& tables() const { return table_names_; }
    bool has_table(const std::string& name) const;

    /// Declared column names of a table, in schema order.
    const std::vector<std::string>& columns(const std::string& table) const;

    /// Full scan of `table`, rowid-ascending. Requested columns missing from
    /// the schema come back NULL in every row, with one warning. The special
    /// name "_rowid_" requests the rowid itself.
    ReadResult read_rows(const std::string& table,
                         const std::vector<std::string>& columns) const;

private:
    TableStore() = default;

    struct TableInfo {
        uint32_t root_page = 0;
        std::vector<std::string> column_names;
        int ipk_index = -1;  // INTEGER PRIMARY KEY column (rowid alias), if any
        bool is_virtual = false;
    };

    std::span<const uint8_t> page(uint32_t pgno) const;
    void walk_table_btree(uint32_t pgno, int depth,
                          const std::function<void(int64_t rowid, const Blob& payload)>& fn) const;
    Blob assemble_payload(std::span<const uint8_t> pg, size_t cell_off,
                          uint64_t payload_len) const;
    void load_schema();

    std::filesystem::path path_;
    std::vector<uint8_t> buf_;
    uint32_t page_size_ = 0;
    uint32_t usable_size_ = 0;
    uint32_t page_count_ = 0;
    std::map<std::string, TableInfo> schema_;
    std::vector<std::string> table_names_;
};

}  // namespace imtriage::store
