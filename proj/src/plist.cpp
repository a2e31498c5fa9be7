#include "imtriage/store/plist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstring>
#include <span>

#include "imtriage/util.hpp"

namespace imtriage::store {

namespace {

// ---------------------------------------------------------------- binary in

struct BinReader {
    std::span<const uint8_t> buf;
    uint8_t offset_int_size = 0;
    uint8_t object_ref_size = 0;
    uint64_t num_objects = 0;
    uint64_t top_object = 0;
    uint64_t offset_table = 0;

    uint64_t read_be(size_t off, size_t n) const {
        if (off + n > buf.size()) throw NotAPlist("binary plist truncated");
        uint64_t v = 0;
        for (size_t i = 0; i < n; ++i) v = (v << 8) | buf[off + i];
        return v;
    }

    uint64_t object_offset(uint64_t idx) const {
        if (idx >= num_objects) throw NotAPlist("object reference out of range");
        return read_be(offset_table + idx * offset_int_size, offset_int_size);
    }

    // marker length nibble, with 0x0F meaning "int object follows"
    uint64_t read_length(size_t& off, uint8_t low_nibble) const {
        if (low_nibble != 0x0f) return low_nibble;
        uint8_t marker = static_cast<uint8_t>(read_be(off, 1));
        off += 1;
        if ((marker & 0xf0) != 0x10) throw NotAPlist("bad extended length marker");
        size_t n = size_t{1} << (marker & 0x0f);
        uint64_t v = read_be(off, n);
        off += n;
        return v;
    }

    PlistValue parse_object(uint64_t idx, int depth) const {
        if (depth > 512) throw NotAPlist("plist nesting too deep");
        size_t off = object_offset(idx);
        uint8_t marker = static_cast<uint8_t>(read_be(off, 1));
        off += 1;
        uint8_t hi = marker >> 4, lo = marker & 0x0f;
        switch (hi) {
            case 0x0:
                if (marker == 0x00) return PlistValue{};          // null
                if (marker == 0x08) return PlistValue{false};
                if (marker == 0x09) return PlistValue{true};
                throw NotAPlist("unknown singleton marker");
            case 0x1: {  // int, 2^lo bytes
                size_t n = size_t{1} << lo;
                if (n > 8) throw NotAPlist("oversized integer");
                uint64_t raw = read_be(off, n);
                int64_t v;
                if (n == 8) {
                    std::memcpy(&v, &raw, 8);  // 8-byte ints are signed
                } else {
                    v = static_cast<int64_t>(raw);
                }
                return PlistValue{v};
            }
            case 0x2: {  // real
                size_t n = size_t{1} << lo;
                uint64_t raw = read_be(off, n);
                if (n == 4) {
                    uint32_t r32 = static_cast<uint32_t>(raw);
                    float f;
                    std::memcpy(&f, &r32, 4);
                    return PlistValue{static_cast<double>(f)};
                }
                if (n == 8) {
                    double d;
                    std::memcpy(&d, &raw, 8);
                    return PlistValue{d};
                }
                throw NotAPlist("unsupported real width");
            }
            case 0x3: {  // date: 8-byte big-endian double, 2001 epoch
                if (lo != 0x3) throw NotAPlist("bad date marker");
                uint64_t raw = read_be(off, 8);
                double d;
                std::memcpy(&d, &raw, 8);
                return PlistValue{PlistDate{d}};
            }
            case 0x4: {  // data
                uint64_t n = read_length(off, lo);
                if (off + n > buf.size()) throw NotAPlist("data object truncated");
                return PlistValue{std::vector<uint8_t>(buf.begin() + off, buf.begin() + off + n)};
            }
            case 0x5: {  // ASCII string
                uint64_t n = read_length(off, lo);
                if (off + n > buf.size()) throw NotAPlist("string object truncated");
                return PlistValue{std::string(buf.begin() + off, buf.begin() + off + n)};
            }
            case 0x6: {  // UTF-16BE string, n = code units
                uint64_t n = read_length(off, lo);
                if (off + n * 2 > buf.size()) throw NotAPlist("utf16 object truncated");
                std::string out;
                for (uint64_t i = 0; i < n; ++i) {
                    uint32_t cu = static_cast<uint32_t>(read_be(off + i * 2, 2));
                    uint32_t cp = cu;
                    if (cu >= 0xd800 && cu <= 0xdbff && i + 1 < n) {
                        uint32_t lo_cu = static_cast<uint32_t>(read_be(off + (i + 1) * 2, 2));
                        if (lo_cu >= 0xdc00 && lo_cu <= 0xdfff) {
                            cp = 0x10000 + ((cu - 0xd800) << 10) + (lo_cu - 0xdc00);
                            ++i;
                        }
                    }
                    if (cp < 0x80) {
                        out.push_back(static_cast<char>(cp));
                    } else if (cp < 0x800) {
                        out.push_back(static_cast<char>(0xc0 | (cp >> 6)));
                        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
                    } else if (cp < 0x10000) {
                        out.push_back(static_cast<char>(0xe0 | (cp >> 12)));
                        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
                        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
                    } else {
                        out.push_back(static_cast<char>(0xf0 | (cp >> 18)));
                        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3f)));
                        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3f)));
                        out.push_back(static_cast<char>(0x80 | (cp & 0x3f)));
                    }
                }
                return PlistValue{out};
            }
            case 0xa: {  // array
                uint64_t n = read_length(off, lo);
                PlistArray arr;
                arr.reserve(n);
                for (uint64_t i = 0; i < n; ++i) {
                    uint64_t ref = read_be(off + i * object_ref_size, object_ref_size);
                    arr.push_back(parse_object(ref, depth + 1));
                }
                return PlistValue{std::move(arr)};
            }
            case 0xd: {  // dict: n key refs then n value refs
                uint64_t n = read_length(off, lo);
                PlistDict dict;
                for (uint64_t i = 0; i < n; ++i) {
                    uint64_t kref = read_be(off + i * object_ref_size, object_ref_size);
                    uint64_t vref = read_be(off + (n + i) * object_ref_size, object_ref_size);
                    PlistValue key = parse_object(kref, depth + 1);
                    const std::string* ks = key.as_string();
                    if (!ks) throw NotAPlist("non-string dict key");
                    dict[*ks] = parse_object(vref, depth + 1);
                }
                return PlistValue{std::move(dict)};
            }
            default:
                throw NotAPlist("unknown object marker");
        }
    }
};

PlistValue parse_binary(std::span<const uint8_t> bytes) {
    if (bytes.size() < 8 + 32) throw NotAPlist("binary plist too short");
    BinReader r;
    r.buf = bytes;
    size_t t = bytes.size() - 32;
    r.offset_int_size = bytes[t + 6];
    r.object_ref_size = bytes[t + 7];
    r.num_objects = r.read_be(t + 8, 8);
    r.top_object = r.read_be(t + 16, 8);
    r.offset_table = r.read_be(t + 24, 8);
    if (r.offset_int_size == 0 || r.offset_int_size > 8 || r.object_ref_size == 0 ||
        r.object_ref_size > 8) {
        throw NotAPlist("bad trailer field widths");
    }
    if (r.offset_table >= bytes.size()) throw NotAPlist("offset table out of range");
    return r.parse_object(r.top_object, 0);
}

// ------------------------------------------------------------------- XML in

struct XmlParser {
    std::string_view s;
    size_t pos = 0;

    void skip_ws_and_misc() {
        while (pos < s.size()) {
            if (std::isspace(static_cast<unsigned char>(s[pos]))) {
                ++pos;
            } else if (s.compare(pos, 4, "<!--") == 0) {
                size_t e = s.find("-->", pos);
                if (e == std::string_view::npos) throw NotAPlist("unterminated comment");
                pos = e + 3;
            } else if (s.compare(pos, 2, "<?") == 0) {
                size_t e = s.find("?>", pos);
                if (e == std::string_view::npos) throw NotAPlist("unterminated declaration");
                pos = e + 2;
            } else if (s.compare(pos, 2, "<!") == 0) {  // DOCTYPE
                size_t e = s.find('>', pos);
                if (e == std::string_view::npos) throw NotAPlist("unterminated doctype");
                pos = e + 1;
            } else {
                break;
            }
        }
    }

    // at '<'; returns tag name; self_closing set for <tag/>
    std::string read_open_tag(bool& self_closing) {
        if (pos >= s.size() || s[pos] != '<') throw NotAPlist("expected tag");
        size_t e = s.find('>', pos);
        if (e == std::string_view::npos) throw NotAPlist("unterminated tag");
        std::string_view inner = s.substr(pos + 1, e - pos - 1);
        self_closing = !inner.empty() && inner.back() == '/';
        if (self_closing) inner.remove_suffix(1);
        size_t name_end = 0;
        while (name_end < inner.size() &&
               !std::isspace(static_cast<unsigned char>(inner[name_end]))) ++name_end;
        pos = e + 1;
        return std::string(inner.substr(0, name_end));
    }

    void expect_close_tag(const std::string& name) {
        skip_ws_and_misc();
        std::string want = "</" + name + ">";
        if (s.compare(pos, want.size(), want) != 0) {
            throw NotAPlist("expected closing tag " + want);
        }
        pos += want.size();
    }

    std::string read_text_until_close(const std::string& name) {
        std::string want = "</" + name + ">";
        size_t e = s.find(want, pos);
        if (e == std::string_view::npos) throw NotAPlist("unterminated element " + name);
        std::string raw(s.substr(pos, e - pos));
        pos = e + want.size();
        return decode_entities(raw);
    }

    static std::string decode_entities(const std::string& in) {
        std::string out;
        out.reserve(in.size());
        for (size_t i = 0; i < in.size();) {
            if (in[i] == '&') {
                auto take = [&](std::string_view ent, char c) {
                    if (in.compare(i, ent.size(), ent) == 0) {
                        out.push_back(c);
                        i += ent.size();
                        return true;
                    }
                    return false;
                };
                if (take("&amp;", '&') || take("&lt;", '<') || take("&gt;", '>') ||
                    take("&quot;", '"') || take("&apos;", '\'')) continue;
            }
            out.push_back(in[i++]);
        }
        return out;
    }

    PlistValue parse_value() {
        skip_ws_and_misc();
        bool selfclose = false;
        std::string tag = read_open_tag(selfclose);
        if (tag == "true") {
            if (!selfclose) expect_close_tag(tag);
            return PlistValue{true};
        }
        if (tag == "false") {
            if (!selfclose) expect_close_tag(tag);
            return PlistValue{false};
        }
        if (tag == "string" || tag == "key") {
            if (selfclose) return PlistValue{std::string{}};
            return PlistValue{read_text_until_close(tag)};
        }
        if (tag == "integer") {
            std::string text = selfclose ? "" : read_text_until_close(tag);
            int64_t v = 0;
            auto res = std::from_chars(text.data(), text.data() + text.size(), v);
            if (res.ec != std::errc{}) throw NotAPlist("bad integer: " + text);
            return PlistValue{v};
        }
        if (tag == "real") {
            std::string text = selfclose ? "" : read_text_until_close(tag);
            try {
                return PlistValue{std::stod(text)};
            } catch (...) {
                throw NotAPlist("bad real: " + text);
            }
        }
        if (tag == "data") {
            std::string text = selfclose ? "" : read_text_until_close(tag);
            return PlistValue{decode_base64(text)};
        }
        if (tag == "date") {
            std::string text = selfclose ? "" : read_text_until_close(tag);
            return PlistValue{PlistDate{iso_to_2001_seconds(text)}};
        }
        if (tag == "array") {
            PlistArray arr;
            if (selfclose) return PlistValue{std::move(arr)};
            while (true) {
                skip_ws_and_misc();
                if (s.compare(pos, 8, "</array>") == 0) {
                    pos += 8;
                    break;
                }
                arr.push_back(parse_value());
            }
            return PlistValue{std::move(arr)};
        }
        if (tag == "dict") {
            PlistDict dict;
            if (selfclose) return PlistValue{std::move(dict)};
            while (true) {
                skip_ws_and_misc();
                if (s.compare(pos, 7, "</dict>") == 0) {
                    pos += 7;
                    break;
                }
                bool sc = false;
                std::string ktag = read_open_tag(sc);
                if (ktag != "key") throw NotAPlist("expected <key> in dict");
                std::string key = sc ? "" : read_text_until_close("key");
                dict[key] = parse_value();
            }
            return PlistValue{std::move(dict)};
        }
        throw NotAPlist("unexpected element <" + tag + ">");
    }

    static std::vector<uint8_t> decode_base64(const std::string& text) {
        auto val = [](char c) -> int {
            if (c >= 'A' && c <= 'Z') return c - 'A';
            if (c >= 'a' && c <= 'z') return c - 'a' + 26;
            if (c >= '0' && c <= '9') return c - '0' + 52;
            if (c == '+') return 62;
            if (c == '/') return 63;
            return -1;
        };
        std::vector<uint8_t> out;
        int acc = 0, nbits = 0;
        for (char c : text) {
            if (std::isspace(static_cast<unsigned char>(c)) || c == '=') continue;
            int v = val(c);
            if (v < 0) throw NotAPlist("bad base64 in <data>");
            acc = (acc << 6) | v;
            nbits += 6;
            if (nbits >= 8) {
                nbits -= 8;
                out.push_back(static_cast<uint8_t>((acc >> nbits) & 0xff));
            }
        }
        return out;
    }

    static double iso_to_2001_seconds(const std::string& text) {
        // "YYYY-MM-DDTHH:MM:SSZ"
        std::tm tm{};
        if (text.size() < 20 || std::sscanf(text.c_str(), "%d-%d-%dT%d:%d:%d",
                                            &tm.tm_year, &tm.tm_mon, &tm.tm_mday,
                                            &tm.tm_hour, &tm.tm_min, &tm.tm_sec) != 6) {
            throw NotAPlist("bad date: " + text);
        }
        tm.tm_year -= 1900;
        tm.tm_mon -= 1;
        time_t unix_secs = timegm(&tm);
        return static_cast<double>(unix_secs - 978307200);
    }
};

PlistValue parse_xml(std::span<const uint8_t> bytes) {
    std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    XmlParser p{text};
    p.skip_ws_and_misc();
    bool sc = false;
    std::string root = p.read_open_tag(sc);
    if (root != "plist") throw NotAPlist("missing <plist> root");
    PlistValue v = p.parse_value();
    p.expect_close_tag("plist");
    return v;
}

// ---------------------------------------------------------------- binary out

struct BinWriter {
    std::vector<std::vector<uint8_t>> objects;

    static void push_be(std::vector<uint8_t>& out, uint64_t v, size_t n) {
        for (size_t i = 0; i < n; ++i) {
            out.push_back(static_cast<uint8_t>(v >> ((n - 1 - i) * 8)));
        }
    }

    static void push_marker_len(std::vector<uint8_t>& out, uint8_t hi, uint64_t len) {
        if (len < 15) {
            out.push_back(static_cast<uint8_t>(hi << 4 | len));
        } else {
            out.push_back(static_cast<uint8_t>(hi << 4 | 0x0f));
            // follow with a sized int object inline
            if (len <= 0xff) {
                out.push_back(0x10);
                push_be(out, len, 1);
            } else if (len <= 0xffff) {
                out.push_back(0x11);
                push_be(out, len, 2);
            } else {
                out.push_back(0x12);
                push_be(out, len, 4);
            }
        }
    }

    // returns object index; children are flattened first so refs are known
    uint64_t add(const PlistValue& v, uint8_t ref_size_guess);

    uint64_t add_leaf(std::vector<uint8_t> bytes) {
        objects.push_back(std::move(bytes));
        return objects.size() - 1;
    }
};

bool is_ascii(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return c < 0x80; });
}

std::vector<uint16_t> utf8_to_utf16(const std::string& s) {
    std::vector<uint16_t> out;
    size_t i = 0;
    while (i < s.size()) {
        uint8_t c = static_cast<uint8_t>(s[i]);
        uint32_t cp = 0;
        int extra = 0;
        if (c < 0x80) {
            cp = c;
        } else if ((c & 0xe0) == 0xc0) {
            cp = c & 0x1f;
            extra = 1;
        } else if ((c & 0xf0) == 0xe0) {
            cp = c & 0x0f;
            extra = 2;
        } else {
            cp = c & 0x07;
            extra = 3;
        }
        ++i;
        for (int k = 0; k < extra && i < s.size(); ++k, ++i) {
            cp = (cp << 6) | (static_cast<uint8_t>(s[i]) & 0x3f);
        }
        if (cp >= 0x10000) {
            cp -= 0x10000;
            out.push_back(static_cast<uint16_t>(0xd800 + (cp >> 10)));
            out.push_back(static_cast<uint16_t>(0xdc00 + (cp & 0x3ff)));
        } else {
            out.push_back(static_cast<uint16_t>(cp));
        }
    }
    return out;
}

uint64_t BinWriter::add(const PlistValue& v, uint8_t ref_size) {
    struct V {
        BinWriter& w;
        uint8_t ref_size;

        uint64_t operator()(const std::monostate&) { return w.add_leaf({0x00}); }
        uint64_t operator()(const bool& b) {
            return w.add_leaf({static_cast<uint8_t>(b ? 0x09 : 0x08)});
        }
        uint64_t operator()(const int64_t& i) {
            std::vector<uint8_t> out;
            if (i >= 0 && i <= 0xff) {
                out.push_back(0x10);
                push_be(out, static_cast<uint64_t>(i), 1);
            } else if (i >= 0 && i <= 0xffff) {
                out.push_back(0x11);
                push_be(out, static_cast<uint64_t>(i), 2);
            } else if (i >= 0 && i <= 0xffffffffLL) {
                out.push_back(0x12);
                push_be(out, static_cast<uint64_t>(i), 4);
            } else {
                out.push_back(0x13);
                uint64_t raw;
                std::memcpy(&raw, &i, 8);
                push_be(out, raw, 8);
            }
            return w.add_leaf(std::move(out));
        }
        uint64_t operator()(const double& d) {
            std::vector<uint8_t> out{0x23};
            uint64_t raw;
            std::memcpy(&raw, &d, 8);
            push_be(out, raw, 8);
            return w.add_leaf(std::move(out));
        }
        uint64_t operator()(const std::string& s) {
            std::vector<uint8_t> out;
            if (is_ascii(s)) {
                push_marker_len(out, 0x5, s.size());
                out.insert(out.end(), s.begin(), s.end());
            } else {
                auto u16 = utf8_to_utf16(s);
                push_marker_len(out, 0x6, u16.size());
                for (uint16_t cu : u16) push_be(out, cu, 2);
            }
            return w.add_leaf(std::move(out));
        }
        uint64_t operator()(const std::vector<uint8_t>& d) {
            std::vector<uint8_t> out;
            push_marker_len(out, 0x4, d.size());
            out.insert(out.end(), d.begin(), d.end());
            return w.add_leaf(std::move(out));
        }
        uint64_t operator()(const PlistDate& d) {
            std::vector<uint8_t> out{0x33};
            uint64_t raw;
            std::memcpy(&raw, &d.seconds_since_2001, 8);
            push_be(out, raw, 8);
            return w.add_leaf(std::move(out));
        }
        uint64_t operator()(const PlistArray& a) {
            std::vector<uint64_t> refs;
            refs.reserve(a.size());
            for (const auto& el : a) refs.push_back(w.add(el, ref_size));
            std::vector<uint8_t> out;
            push_marker_len(out, 0xa, a.size());
            for (uint64_t r : refs) push_be(out, r, ref_size);
            return w.add_leaf(std::move(out));
        }
        uint64_t operator()(const PlistDict& d) {
            std::vector<uint64_t> krefs, vrefs;
            for (const auto& [k, val] : d) {  // std::map: sorted, deterministic
                krefs.push_back(w.add(PlistValue{k}, ref_size));
                vrefs.push_back(w.add(val, ref_size));
            }
            std::vector<uint8_t> out;
            push_marker_len(out, 0xd, d.size());
            for (uint64_t r : krefs) push_be(out, r, ref_size);
            for (uint64_t r : vrefs) push_be(out, r, ref_size);
            return w.add_leaf(std::move(out));
        }
    };
    return std::visit(V{*this, ref_size}, v.v);
}

}  // namespace

PlistValue parse_plist(std::span<const uint8_t> bytes) {
    if (bytes.size() >= 8 && std::memcmp(bytes.data(), "bplist00", 8) == 0) {
        return parse_binary(bytes);
    }
    for (uint8_t b : bytes) {
        if (std::isspace(b)) continue;
        if (b == '<') return parse_xml(bytes);
        break;
    }
    throw NotAPlist("neither binary nor XML property list");
}

PlistValue open_plist(const std::filesystem::path& file) {
    auto bytes = util::read_file_bytes(file);
    try {
        return parse_plist(bytes);
    } catch (const NotAPlist& e) {
        throw NotAPlist(file.filename().string() + ": " + e.what());
    }
}

const PlistValue* plist_lookup(const PlistValue& root, std::string_view dotted) {
    const PlistValue* cur = &root;
    size_t i = 0;
    while (i <= dotted.size() && cur) {
        size_t j = dotted.find('.', i);
        if (j == std::string_view::npos) j = dotted.size();
        std::string_view seg = dotted.substr(i, j - i);
        if (seg.empty()) return nullptr;
        if (const PlistDict* d = cur->as_dict()) {
            auto it = d->find(std::string(seg));
            cur = (it == d->end()) ? nullptr : &it->second;
        } else if (const PlistArray* a = cur->as_array()) {
            size_t idx = 0;
            auto res = std::from_chars(seg.data(), seg.data() + seg.size(), idx);
            if (res.ec != std::errc{} || idx >= a->size()) return nullptr;
            cur = &(*a)[idx];
        } else {
            return nullptr;
        }
        if (j == dotted.size()) break;
        i = j + 1;
    }
    return cur;
}

std::vector<uint8_t> write_bplist(const PlistValue& root) {
    // Two passes: count objects to size the refs, then emit.
    BinWriter counter;
    counter.add(root, 8);
    uint64_t n = counter.objects.size();
    uint8_t ref_size = n <= 0xff ? 1 : (n <= 0xffff ? 2 : 4);

    BinWriter w;
    uint64_t top = w.add(root, ref_size);

    std::vector<uint8_t> out;
    const char magic[] = "bplist00";
    out.insert(out.end(), magic, magic + 8);

    std::vector<uint64_t> offsets;
    offsets.reserve(w.objects.size());
    for (const auto& obj : w.objects) {
        offsets.push_back(out.size());
        out.insert(out.end(), obj.begin(), obj.end());
    }

    uint64_t table_off = out.size();
    uint8_t off_size = table_off <= 0xff ? 1 : (table_off <= 0xffff ? 2 : 4);
    for (uint64_t o : offsets) BinWriter::push_be(out, o, off_size);

    // trailer
    for (int i = 0; i < 6; ++i) out.push_back(0);
    out.push_back(off_size);
    out.push_back(ref_size);
    BinWriter::push_be(out, w.objects.size(), 8);
    BinWriter::push_be(out, top, 8);
    BinWriter::push_be(out, table_off, 8);
    return out;
}

}  // namespace imtriage::store
