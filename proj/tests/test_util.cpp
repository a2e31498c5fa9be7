#include "doctest.h"
#include "imtriage/sha256.hpp"
#include "imtriage/util.hpp"
#include "test_helpers.hpp"

#include <fstream>

using namespace imtriage;

TEST_CASE("sha256 published vectors") {
    // FIPS 180-2 test vectors
    CHECK(util::digest_hex(util::sha256_string("")) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(util::digest_hex(util::sha256_string("abc")) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("sha256_file matches sha256 of contents") {
    TempDir tmp;
    auto p = tmp.path() / "f.bin";
    std::ofstream(p) << "abc";
    CHECK(util::digest_hex(util::sha256_file(p)) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");

    std::ofstream(tmp.path() / "empty.bin").close();
    CHECK(util::digest_hex(util::sha256_file(tmp.path() / "empty.bin")) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("hex round trip") {
    std::vector<uint8_t> bytes{0x00, 0x7f, 0x80, 0xff};
    auto hex = util::to_hex(bytes);
    CHECK(hex == "007f80ff");
    CHECK(util::from_hex(hex) == bytes);
    CHECK_FALSE(util::from_hex("0g").has_value());
    CHECK_FALSE(util::from_hex("abc").has_value());
}

TEST_CASE("iso8601 formatting") {
    CHECK(util::iso8601_utc_ms(0) == "1970-01-01T00:00:00.000Z");
    CHECK(util::iso8601_utc_ms(978307200000LL) == "2001-01-01T00:00:00.000Z");
    CHECK(util::iso8601_utc_ms(1393675200123LL) == "2014-03-01T12:00:00.123Z");
}

TEST_CASE("shortest_double round trips") {
    for (double v : {48.8566, 2.3522, 0.0, -90.0, 179.99999, 1.0 / 3.0}) {
        auto s = util::shortest_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(util::shortest_double(48.8566) == "48.8566");
    CHECK(util::shortest_double(2.3522) == "2.3522");
}

TEST_CASE("safe relative paths") {
    CHECK(util::is_safe_relative_path("data/data/com.whatsapp/databases/msgstore.db"));
    CHECK_FALSE(util::is_safe_relative_path("/etc/passwd"));
    CHECK_FALSE(util::is_safe_relative_path("a/../b"));
    CHECK_FALSE(util::is_safe_relative_path(".."));
    CHECK_FALSE(util::is_safe_relative_path(""));
    CHECK(util::is_safe_relative_path("dir/..file"));  // ".."-prefixed name is fine
}

TEST_CASE("DetRng determinism and bounds") {
    util::DetRng a(42), b(42), c(43);
    auto ba = a.bytes(64);
    auto bb = b.bytes(64);
    CHECK(ba == bb);
    CHECK(ba != c.bytes(64));
    util::DetRng r(7);
    for (int i = 0; i < 1000; ++i) {
        auto v = r.in_range(-5, 5);
        CHECK(v >= -5);
        CHECK(v <= 5);
    }
}

TEST_CASE("list_files_sorted is sorted and complete") {
    TempDir tmp;
    std::filesystem::create_directories(tmp.path() / "b/sub");
    std::ofstream(tmp.path() / "b/sub/x.txt") << "x";
    std::ofstream(tmp.path() / "a.txt") << "a";
    auto files = util::list_files_sorted(tmp.path());
    REQUIRE(files.size() == 2);
    CHECK(files[0] == "a.txt");
    CHECK(files[1] == "b/sub/x.txt");
}
