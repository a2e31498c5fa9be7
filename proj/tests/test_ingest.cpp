#include "doctest.h"
#include "imtriage/ingest.hpp"
#include "imtriage/util.hpp"
#include "test_helpers.hpp"

#include <fstream>

using namespace imtriage;
using namespace imtriage::ingest;

namespace fs = std::filesystem;

namespace {

void touch(const fs::path& p, const std::string& content = "x") {
    fs::create_directories(p.parent_path());
    std::ofstream(p) << content;
}

}  // namespace

TEST_CASE("classify: android marker wins, ios marker, unknown") {
    TempDir tmp;
    SUBCASE("empty directory is unknown with zero files") {
        auto img = classify_image(tmp.path());
        CHECK(img.os == model::Os::unknown);
        CHECK(img.file_count == 0);
    }
    SUBCASE("data/data subtree means android") {
        touch(tmp.path() / "data/data/com.skype.raider/files/u/main.db");
        auto img = classify_image(tmp.path());
        CHECK(img.os == model::Os::android);
        CHECK(img.file_count == 1);
    }
    SUBCASE("var/mobile/Applications subtree means ios") {
        fs::create_directories(tmp.path() / "var/mobile/Applications/ABCD-1234");
        auto img = classify_image(tmp.path());
        CHECK(img.os == model::Os::ios);
    }
    SUBCASE("both markers classify android with a warning") {
        fs::create_directories(tmp.path() / "data/data");
        fs::create_directories(tmp.path() / "var/mobile/Applications");
        auto img = classify_image(tmp.path());
        CHECK(img.os == model::Os::android);
        REQUIRE(img.warnings.size() == 1);
    }
}

TEST_CASE("classify: missing root is UnreadableRoot") {
    CHECK_THROWS_AS(classify_image("/no/such/dir/anywhere"), UnreadableRoot);
}

TEST_CASE("discovery on a hand-built android tree") {
    TempDir tmp;
    touch(tmp.path() / "data/data/com.skype.raider/files/ada.acct/main.db");
    touch(tmp.path() / "mnt/sdcard/Android/data/com.skype.raider/cache/transfer-0.jpg");
    touch(tmp.path() / "data/data/com.whatsapp/databases/msgstore.db");
    touch(tmp.path() / "data/data/com.whatsapp/databases/wa.db");
    touch(tmp.path() / "mnt/sdcard/WhatsApp/Media/WhatsApp Images/IMG-0.jpg");
    // no viber, no tango

    auto img = classify_image(tmp.path());
    auto homes = discover_apps(img);
    REQUIRE(homes.size() == 2);

    CHECK(homes[0].app == model::AppId::skype);
    CHECK(homes[0].store("main_db") == "data/data/com.skype.raider/files/ada.acct/main.db");
    bool has_cache_root = false;
    for (const auto& r : homes[0].roots) {
        if (r == "mnt/sdcard/Android/data/com.skype.raider/cache") has_cache_root = true;
    }
    CHECK(has_cache_root);

    CHECK(homes[1].app == model::AppId::whatsapp);
    CHECK(homes[1].store("chat_db") == "data/data/com.whatsapp/databases/msgstore.db");
    CHECK(homes[1].store("contacts_db") == "data/data/com.whatsapp/databases/wa.db");
}

TEST_CASE("discovery accepts sdcard without mnt prefix and sgiggle variants") {
    TempDir tmp;
    touch(tmp.path() / "data/data/com.viber.voip/databases/viber_messages");
    touch(tmp.path() / "data/data/com.viber.voip/databases/viber_data");
    touch(tmp.path() / "sdcard/viber/Viber Images/IMG-0.jpg");
    touch(tmp.path() / "data/data/com.sgiggle.production/files/tc.db");

    auto homes = discover_apps(classify_image(tmp.path()));
    REQUIRE(homes.size() == 2);
    CHECK(homes[0].app == model::AppId::tango);
    CHECK(homes[0].signature == "pkg:com.sgiggle.production");
    CHECK_FALSE(homes[0].hidden);
    CHECK(homes[1].app == model::AppId::viber);
    bool has_sdcard_viber = false;
    for (const auto& r : homes[1].roots) {
        if (r == "sdcard/viber") has_sdcard_viber = true;
    }
    CHECK(has_sdcard_viber);
}

TEST_CASE("ios discovery by content signature, tango hidden") {
    TempDir tmp;
    auto apps = tmp.path() / "var/mobile/Applications";
    touch(apps / "AAAA-1111/Library/Application Support/Skype/ada.acct/main.db");
    touch(apps / "BBBB-2222/Documents/Contacts.data");
    touch(apps / "CCCC-3333/Documents/.sgiggle/tc.db");
    touch(apps / "DDDD-4444/Documents/ChatStorage.sqlite");
    touch(apps / "DDDD-4444/Documents/Contacts.sqlite");

    auto homes = discover_apps(classify_image(tmp.path()));
    REQUIRE(homes.size() == 4);
    CHECK(homes[0].app == model::AppId::skype);
    CHECK_FALSE(homes[0].hidden);
    CHECK(homes[1].app == model::AppId::tango);
    CHECK(homes[1].hidden);
    CHECK(homes[1].store("tc_db") == "var/mobile/Applications/CCCC-3333/Documents/.sgiggle/tc.db");
    CHECK(homes[2].app == model::AppId::viber);
    CHECK(homes[3].app == model::AppId::whatsapp);
}

TEST_CASE("discovery reports only paths that exist") {
    TempDir tmp;
    touch(tmp.path() / "data/data/com.whatsapp/databases/msgstore.db");
    auto homes = discover_apps(classify_image(tmp.path()));
    REQUIRE(homes.size() == 1);
    for (const auto& r : homes[0].roots) {
        CHECK(fs::exists(tmp.path() / r));
    }
    for (const auto& [role, p] : homes[0].stores) {
        CHECK(fs::is_regular_file(tmp.path() / p));
    }
}

TEST_CASE("hash_file spec vectors") {
    TempDir tmp;
    touch(tmp.path() / "empty.bin", "");
    touch(tmp.path() / "abc.bin", "abc");
    CHECK(util::digest_hex(hash_file(tmp.path(), "empty.bin")) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(util::digest_hex(hash_file(tmp.path(), "abc.bin")) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("parallel digest kernel agrees with the serial reference") {
    TempDir tmp;
    util::DetRng rng(99);
    for (int i = 0; i < 40; ++i) {
        auto data = rng.bytes(static_cast<size_t>(rng.in_range(0, 5000)));
        util::write_file_bytes(
            tmp.path() / ("d" + std::to_string(i % 5)) / ("f" + std::to_string(i) + ".bin"),
            data);
    }
    auto par = digest_tree(tmp.path());
    auto ser = digest_tree_serial(tmp.path());
    REQUIRE(par.size() == 40);
    CHECK(par == ser);
}

TEST_CASE("directory listing digest is stable and content-indexed") {
    TempDir tmp;
    touch(tmp.path() / "pkg/a.txt");
    touch(tmp.path() / "pkg/sub/b.txt");
    auto d1 = hash_directory_listing(tmp.path(), "pkg");
    auto d2 = hash_directory_listing(tmp.path(), "pkg");
    CHECK(d1 == d2);
    touch(tmp.path() / "pkg/c.txt");
    CHECK(hash_directory_listing(tmp.path(), "pkg") != d1);
}
