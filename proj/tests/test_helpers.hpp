#pragma once

#include <sqlite3.h>

#include <atomic>
#include <filesystem>
#include <stdexcept>
#include <string>

// Scratch directory removed on scope exit.
class TempDir {
public:
    TempDir() {
        static std::atomic<uint64_t> counter{0};
        auto base = std::filesystem::temp_directory_path();
        path_ = base / ("imtriage-test-" + std::to_string(::getpid()) + "-" +
                        std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

// Thin wrapper over the real sqlite3 library. Tests build evidence files with
// it so the hand-built reader is always checked against an independent writer.
class SqliteWriter {
public:
    explicit SqliteWriter(const std::filesystem::path& file) {
        std::filesystem::create_directories(file.parent_path());
        if (sqlite3_open(file.string().c_str(), &db_) != SQLITE_OK) {
            throw std::runtime_error("sqlite3_open failed: " + file.string());
        }
        exec("PRAGMA journal_mode=MEMORY;");
    }
    ~SqliteWriter() {
        if (db_) sqlite3_close(db_);
    }

    void exec(const std::string& sql) {
        char* err = nullptr;
        if (sqlite3_exec(db_, sql.c_str(), nullptr, nullptr, &err) != SQLITE_OK) {
            std::string msg = err ? err : "unknown";
            sqlite3_free(err);
            throw std::runtime_error("sqlite exec failed: " + msg + " [" + sql + "]");
        }
    }

    sqlite3* raw() { return db_; }

private:
    sqlite3* db_ = nullptr;
};
