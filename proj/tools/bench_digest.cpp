// Compares the OpenMP digest kernel against the serial reference on a
// directory tree and verifies they agree.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <numeric>

#include "imtriage/ingest.hpp"
#include "imtriage/util.hpp"

using Clock = std::chrono::steady_clock;

static double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int main(int argc, char** argv) {
    if (argc != 2) {
        std::fprintf(stderr, "usage: bench_digest <directory>\n");
        return 1;
    }
    std::filesystem::path root = argv[1];
    if (!std::filesystem::is_directory(root)) {
        std::fprintf(stderr, "not a directory: %s\n", argv[1]);
        return 1;
    }

    uint64_t total_bytes = 0;
    for (const auto& f : imtriage::util::list_files_sorted(root)) {
        total_bytes += std::filesystem::file_size(root / f);
    }

    auto t0 = Clock::now();
    auto serial = imtriage::ingest::digest_tree_serial(root);
    double t_serial = seconds_since(t0);

    t0 = Clock::now();
    auto parallel = imtriage::ingest::digest_tree(root);
    double t_parallel = seconds_since(t0);

    if (serial != parallel) {
        std::fprintf(stderr, "MISMATCH: parallel kernel disagrees with serial reference\n");
        return 2;
    }

    double mb = static_cast<double>(total_bytes) / (1024.0 * 1024.0);
    std::printf("files:    %zu (%.1f MiB)\n", serial.size(), mb);
    std::printf("serial:   %.3f s  (%.1f MiB/s)\n", t_serial, mb / t_serial);
    std::printf("parallel: %.3f s  (%.1f MiB/s)\n", t_parallel, mb / t_parallel);
    std::printf("speedup:  %.2fx\n", t_serial / t_parallel);
    std::printf("results identical: yes\n");
    return 0;
}
