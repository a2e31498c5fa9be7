#include "doctest.h"
#include "imtriage/sha256.hpp"
#include "imtriage/store/sqlite_reader.hpp"
#include "imtriage/util.hpp"
#include "test_helpers.hpp"

#include <fstream>

using namespace imtriage;
using namespace imtriage::store;

TEST_CASE("reads tables and typed values written by the real sqlite library") {
    TempDir tmp;
    auto db_path = tmp.path() / "main.db";
    {
        SqliteWriter w(db_path);
        w.exec("CREATE TABLE Messages(id INTEGER PRIMARY KEY, convo_id INTEGER,"
               " author TEXT, body_xml TEXT, timestamp INTEGER);");
        w.exec("CREATE TABLE Calls(id INTEGER PRIMARY KEY, partner_handle TEXT,"
               " begin_timestamp INTEGER, duration INTEGER);");
        w.exec("CREATE TABLE Contacts(id INTEGER PRIMARY KEY, skypename TEXT);");
        w.exec("INSERT INTO Messages VALUES (1, 7, 'ada', 'héllo wörld', 1400000000);");
        w.exec("INSERT INTO Messages(id, convo_id, author, body_xml, timestamp)"
               " VALUES (2, 7, 'bob', NULL, 1400000060);");
        w.exec("CREATE TABLE typed(t TEXT, i INTEGER, r REAL, b BLOB, n TEXT);");
        w.exec("INSERT INTO typed VALUES ('x', -42, 48.8566, x'00ff10', NULL);");
    }

    auto st = TableStore::open(db_path);
    CHECK(st.page_size() >= 512);
    CHECK(st.has_table("Messages"));
    CHECK(st.has_table("Calls"));
    CHECK(st.has_table("Contacts"));

    auto res = st.read_rows("Messages", {"id", "convo_id", "author", "body_xml", "timestamp"});
    REQUIRE(res.rows.size() == 2);
    CHECK(res.warnings.empty());
    CHECK(as_int(res.rows[0].at("id")) == 1);  // rowid alias substituted
    CHECK(as_text(res.rows[0].at("author")) == "ada");
    CHECK(as_text(res.rows[0].at("body_xml")) == "héllo wörld");
    CHECK(as_int(res.rows[0].at("timestamp")) == 1400000000);
    CHECK(is_null(res.rows[1].at("body_xml")));

    auto typed = st.read_rows("typed", {"t", "i", "r", "b", "n"});
    REQUIRE(typed.rows.size() == 1);
    CHECK(as_int(typed.rows[0].at("i")) == -42);
    CHECK(as_real(typed.rows[0].at("r")) == 48.8566);
    const Blob* b = as_blob(typed.rows[0].at("b"));
    REQUIRE(b != nullptr);
    CHECK(*b == Blob{0x00, 0xff, 0x10});
    CHECK(is_null(typed.rows[0].at("n")));
}

TEST_CASE("row order is rowid ascending regardless of insert order") {
    TempDir tmp;
    auto db_path = tmp.path() / "order.db";
    {
        SqliteWriter w(db_path);
        w.exec("CREATE TABLE t(id INTEGER PRIMARY KEY, v TEXT);");
        w.exec("INSERT INTO t VALUES (5, 'five');");
        w.exec("INSERT INTO t VALUES (1, 'one');");
        w.exec("INSERT INTO t VALUES (3, 'three');");
    }
    auto st = TableStore::open(db_path);
    auto res = st.read_rows("t", {"id", "v"});
    REQUIRE(res.rows.size() == 3);
    CHECK(as_int(res.rows[0].at("id")) == 1);
    CHECK(as_int(res.rows[1].at("id")) == 3);
    CHECK(as_int(res.rows[2].at("id")) == 5);
}

TEST_CASE("multi-page tables and overflow payloads") {
    TempDir tmp;
    auto db_path = tmp.path() / "big.db";
    std::string big_text(20000, 'x');
    big_text += "END";
    {
        SqliteWriter w(db_path);
        w.exec("PRAGMA page_size=512;");
        w.exec("CREATE TABLE t(id INTEGER PRIMARY KEY, v TEXT);");
        w.exec("BEGIN;");
        for (int i = 1; i <= 500; ++i) {
            w.exec("INSERT INTO t VALUES (" + std::to_string(i) + ", 'row-" +
                   std::to_string(i) + "');");
        }
        w.exec("INSERT INTO t VALUES (501, '" + big_text + "');");
        w.exec("COMMIT;");
    }
    auto st = TableStore::open(db_path);
    CHECK(st.page_size() == 512);
    auto res = st.read_rows("t", {"id", "v"});
    REQUIRE(res.rows.size() == 501);
    CHECK(as_text(res.rows[0].at("v")) == "row-1");
    CHECK(as_text(res.rows[499].at("v")) == "row-500");
    auto big = as_text(res.rows[500].at("v"));
    REQUIRE(big.has_value());
    CHECK(big->size() == big_text.size());
    CHECK(*big == big_text);
}

TEST_CASE("requesting a missing column yields nulls plus one warning") {
    TempDir tmp;
    auto db_path = tmp.path() / "m.db";
    {
        SqliteWriter w(db_path);
        w.exec("CREATE TABLE t(a TEXT);");
        w.exec("INSERT INTO t VALUES ('1');");
        w.exec("INSERT INTO t VALUES ('2');");
    }
    auto st = TableStore::open(db_path);
    auto res = st.read_rows("t", {"a", "no_such_col"});
    REQUIRE(res.rows.size() == 2);
    CHECK(res.warnings.size() == 1);
    CHECK(is_null(res.rows[0].at("no_such_col")));
    CHECK(is_null(res.rows[1].at("no_such_col")));
}

TEST_CASE("missing table raises TableMissing") {
    TempDir tmp;
    auto db_path = tmp.path() / "t.db";
    {
        SqliteWriter w(db_path);
        w.exec("CREATE TABLE t(a TEXT);");
    }
    auto st = TableStore::open(db_path);
    CHECK_THROWS_AS(st.read_rows("NoSuchTable", {"a"}), TableMissing);
}

TEST_CASE("zero-byte and non-sqlite files are NotASQLiteFile") {
    TempDir tmp;
    auto empty = tmp.path() / "zero.db";
    std::ofstream(empty).close();
    CHECK_THROWS_AS(TableStore::open(empty), NotASQLiteFile);

    auto junk = tmp.path() / "junk.db";
    std::ofstream(junk) << "this is not a database at all, not even close";
    CHECK_THROWS_AS(TableStore::open(junk), NotASQLiteFile);
}

TEST_CASE("truncation to 100 bytes is CorruptStore") {
    TempDir tmp;
    auto db_path = tmp.path() / "trunc.db";
    {
        SqliteWriter w(db_path);
        w.exec("CREATE TABLE t(a TEXT);");
        w.exec("INSERT INTO t VALUES ('hello');");
    }
    auto bytes = util::read_file_bytes(db_path);
    bytes.resize(100);
    util::write_file_bytes(db_path, bytes);
    CHECK_THROWS_AS(TableStore::open(db_path), CorruptStore);
}

TEST_CASE("rows older than an added column read as NULL") {
    TempDir tmp;
    auto db_path = tmp.path() / "alter.db";
    {
        SqliteWriter w(db_path);
        w.exec("CREATE TABLE t(a TEXT);");
        w.exec("INSERT INTO t VALUES ('old');");
        w.exec("ALTER TABLE t ADD COLUMN extra TEXT;");
        w.exec("INSERT INTO t VALUES ('new', 'val');");
    }
    auto st = TableStore::open(db_path);
    auto res = st.read_rows("t", {"a", "extra"});
    REQUIRE(res.rows.size() == 2);
    CHECK(is_null(res.rows[0].at("extra")));
    CHECK(as_text(res.rows[1].at("extra")) == "val");
}

TEST_CASE("WITHOUT ROWID tables are refused with a reason") {
    TempDir tmp;
    auto db_path = tmp.path() / "wr.db";
    {
        SqliteWriter w(db_path);
        w.exec("CREATE TABLE t(k TEXT PRIMARY KEY, v TEXT) WITHOUT ROWID;");
        w.exec("INSERT INTO t VALUES ('a', 'b');");
    }
    auto st = TableStore::open(db_path);
    CHECK(st.has_table("t"));
    CHECK_THROWS_AS(st.read_rows("t", {"k"}), CorruptStore);
}

TEST_CASE("quoted and exotic column names parse") {
    TempDir tmp;
    auto db_path = tmp.path() / "q.db";
    {
        SqliteWriter w(db_path);
        w.exec("CREATE TABLE t(\"week day\" TEXT, [bracketed] INT, `ticked` TEXT,"
               " plain REAL, CONSTRAINT c UNIQUE(plain));");
        w.exec("INSERT INTO t VALUES ('mon', 1, 'x', 2.5);");
    }
    auto st = TableStore::open(db_path);
    auto cols = st.columns("t");
    REQUIRE(cols.size() == 4);
    CHECK(cols[0] == "week day");
    CHECK(cols[1] == "bracketed");
    CHECK(cols[2] == "ticked");
    CHECK(cols[3] == "plain");
}

TEST_CASE("reading never modifies the evidence file") {
    TempDir tmp;
    auto db_path = tmp.path() / "ro.db";
    {
        SqliteWriter w(db_path);
        w.exec("CREATE TABLE t(a TEXT);");
        w.exec("INSERT INTO t VALUES ('x');");
    }
    auto before = util::sha256_file(db_path);
    auto st = TableStore::open(db_path);
    st.read_rows("t", {"a"});
    st.read_rows("t", {"a", "missing"});
    CHECK(util::sha256_file(db_path) == before);
    // and no sidecar files appeared
    size_t n = 0;
    for ([[maybe_unused]] auto& e : std::filesystem::directory_iterator(tmp.path())) ++n;
    CHECK(n == 1);
}
