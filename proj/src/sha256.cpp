#include "imtriage/sha256.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <memory>
#include <stdexcept>

#include "imtriage/util.hpp"

namespace imtriage::util {

namespace {

struct CtxDeleter {
    void operator()(EVP_MD_CTX* ctx) const { EVP_MD_CTX_free(ctx); }
};
using CtxPtr = std::unique_ptr<EVP_MD_CTX, CtxDeleter>;

CtxPtr new_sha256_ctx() {
    CtxPtr ctx(EVP_MD_CTX_new());
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 init failed");
    }
    return ctx;
}

Digest finish(CtxPtr ctx) {
    Digest d{};
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx.get(), d.data(), &len) != 1 || len != d.size()) {
        throw std::runtime_error("sha256 final failed");
    }
    return d;
}

}  // namespace

Digest sha256_bytes(std::span<const uint8_t> data) {
    auto ctx = new_sha256_ctx();
    if (!data.empty() &&
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1) {
        throw std::runtime_error("sha256 update failed");
    }
    return finish(std::move(ctx));
}

Digest sha256_string(std::string_view data) {
    return sha256_bytes({reinterpret_cast<const uint8_t*>(data.data()), data.size()});
}

Digest sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    auto ctx = new_sha256_ctx();
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        std::streamsize n = in.gcount();
        if (n > 0 && EVP_DigestUpdate(ctx.get(), buf, static_cast<size_t>(n)) != 1) {
            throw std::runtime_error("sha256 update failed");
        }
    }
    if (in.bad()) throw std::runtime_error("read error on " + path.string());
    return finish(std::move(ctx));
}

std::string digest_hex(const Digest& d) { return to_hex(d); }

}  // namespace imtriage::util
