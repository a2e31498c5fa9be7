#include "doctest.h"
#include "imtriage/store/plist.hpp"
#include "imtriage/util.hpp"
#include "test_helpers.hpp"

#include <fstream>

using namespace imtriage;
using namespace imtriage::store;

// Binary plist produced once by Python's plistlib (an independent writer)
// from: {CFBundleIdentifier: "net.whatsapp.WhatsApp",
//        CFBundleShortVersionString: "2.11.8", Counts: [1,2,3],
//        Nested: {unicode: "café ✓", flag: true, ratio: 0.25},
//        Blob: 000102ff, Stamp: 2014-03-01T12:00:00Z}
static const char* kPlistlibHex =
    "62706c6973743030d60102030405060708090a0e1554426c6f625f1012434642756e646c65"
    "4964656e7469666965725f101a434642756e646c6553686f727456657273696f6e53747269"
    "6e6756436f756e7473564e6573746564555374616d7044000102ff5f10156e65742e776861"
    "74736170702e576861747341707056322e31312e38a30b0c0d100110021003d30f10111213"
    "1454666c616755726174696f57756e69636f646509233fd000000000000066006300610066"
    "00e9002027133341b8c2034000000008151a2f4c535a60657d84888a8c8e959aa0a8a9b2bf"
    "00000000000001010000000000000016000000000000000000000000000000c8";

TEST_CASE("binary plist from an independent writer parses") {
    auto bytes = util::from_hex(kPlistlibHex);
    REQUIRE(bytes.has_value());
    auto root = parse_plist(*bytes);

    const auto* bundle = plist_lookup(root, "CFBundleIdentifier");
    REQUIRE(bundle != nullptr);
    CHECK(*bundle->as_string() == "net.whatsapp.WhatsApp");

    const auto* version = plist_lookup(root, "CFBundleShortVersionString");
    REQUIRE(version != nullptr);
    CHECK(*version->as_string() == "2.11.8");

    const auto* second = plist_lookup(root, "Counts.1");
    REQUIRE(second != nullptr);
    CHECK(*second->as_int() == 2);

    const auto* unicode = plist_lookup(root, "Nested.unicode");
    REQUIRE(unicode != nullptr);
    CHECK(*unicode->as_string() == "café ✓");

    const auto* flag = plist_lookup(root, "Nested.flag");
    REQUIRE(flag != nullptr);
    CHECK(*flag->as_bool() == true);

    const auto* ratio = plist_lookup(root, "Nested.ratio");
    REQUIRE(ratio != nullptr);
    CHECK(*ratio->as_real() == 0.25);

    const auto* blob = plist_lookup(root, "Blob");
    REQUIRE(blob != nullptr);
    CHECK(std::get<std::vector<uint8_t>>(blob->v) ==
          std::vector<uint8_t>{0x00, 0x01, 0x02, 0xff});

    const auto* stamp = plist_lookup(root, "Stamp");
    REQUIRE(stamp != nullptr);
    // 2014-03-01T12:00:00Z, as seconds since 2001-01-01
    CHECK(std::get<PlistDate>(stamp->v).seconds_since_2001 == 415368000.0);
}

TEST_CASE("XML plist parses with entities and nesting") {
    std::string xml = R"(<?xml version="1.0" encoding="UTF-8"?>
<!DOCTYPE plist PUBLIC "-//Apple//DTD PLIST 1.0//EN" "http://www.apple.com/DTDs/PropertyList-1.0.dtd">
<plist version="1.0">
<dict>
  <key>CFBundleIdentifier</key>
  <string>net.whatsapp.WhatsApp</string>
  <key>note</key>
  <string>a &amp; b &lt;ok&gt;</string>
  <key>ok</key>
  <true/>
  <key>n</key>
  <integer>-7</integer>
  <key>arr</key>
  <array><string>one</string><integer>2</integer></array>
</dict>
</plist>)";
    auto root = parse_plist(
        std::span(reinterpret_cast<const uint8_t*>(xml.data()), xml.size()));
    CHECK(*plist_lookup(root, "CFBundleIdentifier")->as_string() == "net.whatsapp.WhatsApp");
    CHECK(*plist_lookup(root, "note")->as_string() == "a & b <ok>");
    CHECK(*plist_lookup(root, "ok")->as_bool() == true);
    CHECK(*plist_lookup(root, "n")->as_int() == -7);
    CHECK(*plist_lookup(root, "arr.0")->as_string() == "one");
    CHECK(*plist_lookup(root, "arr.1")->as_int() == 2);
    CHECK(plist_lookup(root, "arr.2") == nullptr);
    CHECK(plist_lookup(root, "missing.key") == nullptr);
}

TEST_CASE("empty dict plist has zero children") {
    PlistValue root{PlistDict{}};
    auto bytes = write_bplist(root);
    auto parsed = parse_plist(bytes);
    REQUIRE(parsed.as_dict() != nullptr);
    CHECK(parsed.as_dict()->empty());
}

TEST_CASE("a SQLite file is NotAPlist") {
    TempDir tmp;
    auto db_path = tmp.path() / "x.db";
    {
        SqliteWriter w(db_path);
        w.exec("CREATE TABLE t(a TEXT);");
    }
    CHECK_THROWS_AS(open_plist(db_path), NotAPlist);
}

TEST_CASE("writer/reader round trip preserves scalar types") {
    PlistDict nested;
    nested["names"] = PlistArray{PlistValue{std::string("ada")},
                                 PlistValue{std::string("grüße ✓")}};
    nested["threshold"] = PlistValue{7.25};
    PlistDict root_d;
    root_d["CFBundleIdentifier"] = PlistValue{std::string("com.skype.skype")};
    root_d["count"] = PlistValue{int64_t{123456789}};
    root_d["negative"] = PlistValue{int64_t{-42}};
    root_d["enabled"] = PlistValue{true};
    root_d["disabled"] = PlistValue{false};
    root_d["payload"] = PlistValue{std::vector<uint8_t>(300, 0xab)};  // long data
    root_d["when"] = PlistValue{PlistDate{415368000.0}};
    root_d["nested"] = PlistValue{nested};
    PlistValue root{root_d};

    auto bytes = write_bplist(root);
    auto parsed = parse_plist(bytes);
    CHECK(parsed == root);

    // deterministic serialization
    CHECK(write_bplist(root) == bytes);
}
