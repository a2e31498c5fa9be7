// Read-only parser for the SQLite database file format (v3): big-endian
// header, table b-trees, serial-type records, overflow page chains. There is
// deliberately no SQL engine, no journal replay and no write path of any
// kind; the input is evidence.

#include "imtriage/store/sqlite_reader.hpp"

#include <algorithm>
#include <cctype>
#include <cstring>

#include "imtriage/util.hpp"

namespace imtriage::store {

namespace {

constexpr char kMagic[16] = "SQLite format 3";  // includes the trailing NUL
constexpr int kMaxTreeDepth = 32;

uint16_t be16(std::span<const uint8_t> b, size_t off) {
    return static_cast<uint16_t>(b[off] << 8 | b[off + 1]);
}

uint32_t be32(std::span<const uint8_t> b, size_t off) {
    return static_cast<uint32_t>(b[off]) << 24 | static_cast<uint32_t>(b[off + 1]) << 16 |
           static_cast<uint32_t>(b[off + 2]) << 8 | static_cast<uint32_t>(b[off + 3]);
}

// Huffman-style varint: 1..9 bytes, high bit continues, 9th byte keeps all 8 bits.
uint64_t parse_varint(std::span<const uint8_t> b, size_t& off) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) {
        if (off >= b.size()) throw CorruptStore("varint runs off the page");
        uint8_t byte = b[off++];
        v = (v << 7) | (byte & 0x7f);
        if (!(byte & 0x80)) return v;
    }
    if (off >= b.size()) throw CorruptStore("varint runs off the page");
    return (v << 8) | b[off++];
}

size_t serial_type_size(uint64_t t) {
    switch (t) {
        case 0: case 8: case 9: return 0;
        case 1: return 1;
        case 2: return 2;
        case 3: return 3;
        case 4: return 4;
        case 5: return 6;
        case 6: case 7: return 8;
        case 10: case 11: throw CorruptStore("reserved serial type in record");
        default: return (t - 12) / 2;
    }
}

Value decode_value(uint64_t t, std::span<const uint8_t> data) {
    auto read_signed = [&](size_t n) -> int64_t {
        int64_t v = (data[0] & 0x80) ? -1 : 0;  // sign-extend
        for (size_t i = 0; i < n; ++i) v = (v << 8) | data[i];
        return v;
    };
    switch (t) {
        case 0: return std::monostate{};
        case 1: return read_signed(1);
        case 2: return read_signed(2);
        case 3: return read_signed(3);
        case 4: return read_signed(4);
        case 5: return read_signed(6);
        case 6: return read_signed(8);
        case 7: {
            uint64_t bits = 0;
            for (int i = 0; i < 8; ++i) bits = (bits << 8) | data[i];
            double d;
            std::memcpy(&d, &bits, 8);
            return d;
        }
        case 8: return int64_t{0};
        case 9: return int64_t{1};
        default:
            if (t % 2 == 0) return Blob(data.begin(), data.end());
            return std::string(data.begin(), data.end());
    }
}

std::string trim(std::string_view s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

// First identifier of a column definition, unquoting "x", [x], `x`, 'x'.
std::string leading_identifier(std::string_view item, size_t& end) {
    if (item.empty()) return "";
    char q = item.front();
    if (q == '"' || q == '`' || q == '\'' || q == '[') {
        char close = (q == '[') ? ']' : q;
        size_t i = 1;
        std::string name;
        while (i < item.size()) {
            if (item[i] == close) {
                if (close != ']' && i + 1 < item.size() && item[i + 1] == close) {
                    name.push_back(close);  // doubled quote escape
                    i += 2;
                    continue;
                }
                break;
            }
            name.push_back(item[i]);
            ++i;
        }
        end = i + 1;
        return name;
    }
    size_t i = 0;
    while (i < item.size() && (std::isalnum(static_cast<unsigned char>(item[i])) ||
                               item[i] == '_' || item[i] == '$')) ++i;
    end = i;
    return std::string(item.substr(0, i));
}

bool contains_ci(std::string_view hay, std::string_view needle) {
    auto it = std::search(hay.begin(), hay.end(), needle.begin(), needle.end(),
                          [](char a, char b) {
                              return std::tolower(static_cast<unsigned char>(a)) ==
                                     std::tolower(static_cast<unsigned char>(b));
                          });
    return it != hay.end();
}

struct ParsedColumns {
    std::vector<std::string> names;
    int ipk = -1;
};

// Pulls declared column names (and the INTEGER PRIMARY KEY rowid alias, if
// any) out of the stored CREATE TABLE text. Tolerant by construction: table
// constraints are skipped, quoting styles accepted.
ParsedColumns parse_create_columns(const std::string& sql) {
    ParsedColumns out;
    size_t open = sql.find('(');
    size_t close = sql.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close <= open) return out;
    std::string body = sql.substr(open + 1, close - open - 1);

    std::vector<std::string> items;
    int depth = 0;
    bool in_quote = false;
    char quote = 0;
    size_t start = 0;
    for (size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (in_quote) {
            if (c == quote) in_quote = false;
            continue;
        }
        if (c == '\'' || c == '"' || c == '`') {
            in_quote = true;
            quote = c;
        } else if (c == '(') {
            ++depth;
        } else if (c == ')') {
            --depth;
        } else if (c == ',' && depth == 0) {
            items.push_back(trim(std::string_view(body).substr(start, i - start)));
            start = i + 1;
        }
    }
    items.push_back(trim(std::string_view(body).substr(start)));

    static const char* kTableConstraints[] = {"constraint", "primary", "unique",
                                              "check", "foreign"};
    for (const auto& item : items) {
        if (item.empty()) continue;
        size_t end = 0;
        std::string name = leading_identifier(item, end);
        if (name.empty()) continue;
        std::string lower = util::lowercase(name);
        bool is_constraint = false;
        for (const char* kw : kTableConstraints) {
            if (lower == kw) {
                is_constraint = true;
                break;
            }
        }
        if (is_constraint) continue;
        std::string rest = trim(std::string_view(item).substr(std::min(end, item.size())));
        // rowid alias: declared type exactly INTEGER plus PRIMARY KEY
        size_t type_end = 0;
        std::string type_tok = leading_identifier(rest, type_end);
        if (util::iequals(type_tok, "integer") && contains_ci(rest, "primary key")) {
            out.ipk = static_cast<int>(out.names.size());
        }
        out.names.push_back(name);
    }
    return out;
}

}  // namespace

bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }

std::optional<int64_t> as_int(const Value& v) {
    if (auto* i = std::get_if<int64_t>(&v)) return *i;
    return std::nullopt;
}

std::optional<double> as_real(const Value& v) {
    if (auto* d = std::get_if<double>(&v)) return *d;
    if (auto* i = std::get_if<int64_t>(&v)) return static_cast<double>(*i);
    return std::nullopt;
}

std::optional<std::string> as_text(const Value& v) {
    if (auto* s = std::get_if<std::string>(&v)) return *s;
    return std::nullopt;
}

const Blob* as_blob(const Value& v) { return std::get_if<Blob>(&v); }

TableStore TableStore::open(const std::filesystem::path& file) {
    TableStore st;
    st.path_ = file;
    st.buf_ = util::read_file_bytes(file);
    const auto& buf = st.buf_;

    if (buf.size() < 16 || std::memcmp(buf.data(), kMagic, 16) != 0) {
        throw NotASQLiteFile(file.filename().string() + ": no SQLite magic");
    }
    if (buf.size() < 100) throw CorruptStore("file shorter than the database header");

    std::span<const uint8_t> hdr(buf.data(), 100);
    uint32_t ps = be16(hdr, 16);
    if (ps == 1) ps = 65536;
    if (ps < 512 || ps > 65536 || (ps & (ps - 1)) != 0) {
        throw CorruptStore("invalid page size");
    }
    uint8_t reserved = hdr[20];
    if (reserved >= ps - 480) throw CorruptStore("invalid reserved byte count");
    uint32_t encoding = be32(hdr, 56);
    if (encoding != 0 && encoding != 1) {
        throw CorruptStore("unsupported text encoding (only UTF-8)");
    }

    st.page_size_ = ps;
    st.usable_size_ = ps - reserved;
    st.page_count_ = static_cast<uint32_t>(buf.size() / ps);
    if (st.page_count_ == 0) throw CorruptStore("truncated: no complete page");

    st.load_schema();
    return st;
}

std::span<const uint8_t> TableStore::page(uint32_t pgno) const {
    if (pgno == 0 || pgno > page_count_) {
        throw CorruptStore("page number out of range: " + std::to_string(pgno));
    }
    return std::span<const uint8_t>(buf_).subspan(static_cast<size_t>(pgno - 1) * page_size_,
                                                  page_size_);
}

Blob TableStore::assemble_payload(std::span<const uint8_t> pg, size_t cell_off,
                                  uint64_t payload_len) const {
    // Local/overflow split for table leaf cells.
    const uint64_t U = usable_size_;
    const uint64_t X = U - 35;
    uint64_t local = payload_len;
    if (payload_len > X) {
        const uint64_t M = (U - 12) * 32 / 255 - 23;
        const uint64_t K = M + (payload_len - M) % (U - 4);
        local = (K <= X) ? K : M;
    }
    if (cell_off + local > pg.size()) throw CorruptStore("cell payload overruns page");

    Blob out;
    out.reserve(payload_len);
    out.insert(out.end(), pg.begin() + cell_off, pg.begin() + cell_off + local);

    if (local < payload_len) {
        if (cell_off + local + 4 > pg.size()) throw CorruptStore("missing overflow pointer");
        uint32_t next = be32(pg, cell_off + local);
        uint64_t remaining = payload_len - local;
        uint32_t hops = 0;
        while (remaining > 0) {
            if (next == 0) throw CorruptStore("overflow chain ends early");
            if (++hops > page_count_ + 1) throw CorruptStore("overflow chain cycles");
            auto opg = page(next);
            next = be32(opg, 0);
            uint64_t take = std::min<uint64_t>(remaining, usable_size_ - 4);
            out.insert(out.end(), opg.begin() + 4, opg.begin() + 4 + take);
            remaining -= take;
        }
    }
    return out;
}

void TableStore::walk_table_btree(
    uint32_t pgno, int depth,
    const std::function<void(int64_t, const Blob&)>& fn) const {
    if (depth > kMaxTreeDepth) throw CorruptStore("b-tree too deep");
    auto pg = page(pgno);
    size_t hdr = (pgno == 1) ? 100 : 0;  // page 1 carries the file header
    if (hdr + 8 > pg.size()) throw CorruptStore("page too small for b-tree header");

    uint8_t type = pg[hdr];
    bool interior = (type == 0x05);
    bool leaf = (type == 0x0d);
    if (!interior && !leaf) {
        if (type == 0x02 || type == 0x0a) {
            throw CorruptStore("index b-tree where a table was expected");
        }
        throw CorruptStore("unrecognized b-tree page type");
    }

    uint16_t cell_count = be16(pg, hdr + 3);
    size_t header_len = interior ? 12 : 8;
    size_t ptr_array = hdr + header_len;
    if (ptr_array + size_t{cell_count} * 2 > pg.size()) {
        throw CorruptStore("cell pointer array overruns page");
    }

    for (uint16_t i = 0; i < cell_count; ++i) {
        size_t cell = be16(pg, ptr_array + size_t{i} * 2);
        if (cell >= pg.size()) throw CorruptStore("cell offset out of range");
        size_t off = cell;
        if (interior) {
            if (cell + 4 > pg.size()) throw CorruptStore("interior cell overruns page");
            uint32_t child = be32(pg, cell);
            off = cell + 4;
            parse_varint(pg, off);  // rowid key, unused
            walk_table_btree(child, depth + 1, fn);
        } else {
            uint64_t payload_len = parse_varint(pg, off);
            int64_t rowid = static_cast<int64_t>(parse_varint(pg, off));
            Blob payload = assemble_payload(pg, off, payload_len);
            fn(rowid, payload);
        }
    }
    if (interior) {
        uint32_t rightmost = be32(pg, hdr + 8);
        walk_table_btree(rightmost, depth + 1, fn);
    }
}

void TableStore::load_schema() {
    // sqlite_master columns: type, name, tbl_name, rootpage, sql
    walk_table_btree(1, 0, [&](int64_t, const Blob& payload) {
        std::span<const uint8_t> rec(payload);
        size_t off = 0;
        uint64_t header_len = parse_varint(rec, off);
        if (header_len > rec.size()) throw CorruptStore("record header overruns payload");
        std::vector<uint64_t> types;
        size_t hoff = off;
        while (hoff < header_len) types.push_back(parse_varint(rec, hoff));

        size_t body = header_len;
        std::vector<Value> vals;
        for (uint64_t t : types) {
            size_t n = serial_type_size(t);
            if (body + n > rec.size()) throw CorruptStore("record body overruns payload");
            vals.push_back(decode_value(t, rec.subspan(body, n)));
            body += n;
        }
        if (vals.size() < 5) return;

        auto type = as_text(vals[0]);
        auto name = as_text(vals[1]);
        auto rootpage = as_int(vals[3]);
        auto sql = as_text(vals[4]);
        if (!type || !name || *type != "table") return;

        TableInfo info;
        info.root_page = rootpage ? static_cast<uint32_t>(*rootpage) : 0;
        if (sql) {
            if (contains_ci(*sql, "create virtual table")) {
                info.is_virtual = true;
            } else {
                auto parsed = parse_create_columns(*sql);
                info.column_names = std::move(parsed.names);
                info.ipk_index = parsed.ipk;
                if (contains_ci(*sql, "without rowid")) info.is_virtual = true;
            }
        }
        schema_[*name] = std::move(info);
    });

    for (const auto& [name, info] : schema_) table_names_.push_back(name);
    std::sort(table_names_.begin(), table_names_.end());
}

bool TableStore::has_table(const std::string& name) const {
    return schema_.count(name) != 0;
}

const std::vector<std::string>& TableStore::columns(const std::string& table) const {
    auto it = schema_.find(table);
    if (it == schema_.end()) throw TableMissing(table);
    return it->second.column_names;
}

ReadResult TableStore::read_rows(const std::string& table,
                                 const std::vector<std::string>& columns) const {
    auto it = schema_.find(table);
    if (it == schema_.end()) throw TableMissing(table);
    const TableInfo& info = it->second;
    if (info.is_virtual) {
        throw CorruptStore(table + ": virtual or WITHOUT ROWID table is not readable here");
    }
    if (info.root_page == 0) throw CorruptStore(table + ": no root page");

    ReadResult result;

    // map requested name -> schema index (-1 missing, -2 rowid)
    std::vector<int> idx;
    for (const auto& want : columns) {
        if (want == "_rowid_") {
            idx.push_back(-2);
            continue;
        }
        int found = -1;
        for (size_t i = 0; i < info.column_names.size(); ++i) {
            if (util::iequals(info.column_names[i], want)) {
                found = static_cast<int>(i);
                break;
            }
        }
        if (found < 0) {
            result.warnings.push_back("column '" + want + "' not in table '" + table +
                                      "'; returning NULL");
        }
        idx.push_back(found);
    }

    walk_table_btree(info.root_page, 0, [&](int64_t rowid, const Blob& payload) {
        std::span<const uint8_t> rec(payload);
        size_t off = 0;
        uint64_t header_len = parse_varint(rec, off);
        if (header_len > rec.size()) throw CorruptStore("record header overruns payload");
        std::vector<uint64_t> types;
        size_t hoff = off;
        while (hoff < header_len) types.push_back(parse_varint(rec, hoff));

        std::vector<Value> vals;
        vals.reserve(types.size());
        size_t body = header_len;
        for (uint64_t t : types) {
            size_t n = serial_type_size(t);
            if (body + n > rec.size()) throw CorruptStore("record body overruns payload");
            vals.push_back(decode_value(t, rec.subspan(body, n)));
            body += n;
        }

        Row row;
        for (size_t c = 0; c < columns.size(); ++c) {
            Value v;  // NULL by default (missing column, or short legacy record)
            int i = idx[c];
            if (i == -2) {
                v = rowid;
            } else if (i >= 0) {
                if (static_cast<size_t>(i) < vals.size()) v = vals[i];
                if (i == info.ipk_index && is_null(v)) v = rowid;  // rowid alias
            }
            row[columns[c]] = std::move(v);
        }
        result.rows.push_back(std::move(row));
    });

    return result;
}

}  // namespace imtriage::store
