#include "fvkit/crypto.hpp"

#include <openssl/evp.h>

#include <cstring>
#include <stdexcept>

namespace fv {

Digest sha256(std::span<const std::uint8_t> data) {
    Digest out{};
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (ctx == nullptr) throw std::runtime_error("sha256: context allocation failed");
    unsigned len = 0;
    if (EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx, data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx, out.data(), &len) != 1 || len != out.size()) {
        EVP_MD_CTX_free(ctx);
        throw std::runtime_error("sha256: digest computation failed");
    }
    EVP_MD_CTX_free(ctx);
    return out;
}

struct ChaCha20Stream::Impl {
    EVP_CIPHER_CTX* ctx = nullptr;
    std::array<std::uint8_t, 4096> buffer{};
    std::size_t pos = buffer.size();

    explicit Impl(const Digest& key) {
        ctx = EVP_CIPHER_CTX_new();
        if (ctx == nullptr) throw std::runtime_error("chacha20: context allocation failed");
        // OpenSSL's 16-byte IV is a 4-byte little-endian block counter followed
        // by the 12-byte nonce; all zero here.
        std::array<std::uint8_t, 16> iv{};
        if (EVP_EncryptInit_ex(ctx, EVP_chacha20(), nullptr, key.data(), iv.data()) != 1) {
            EVP_CIPHER_CTX_free(ctx);
            throw std::runtime_error("chacha20: init failed");
        }
    }

    ~Impl() {
        if (ctx != nullptr) EVP_CIPHER_CTX_free(ctx);
    }

    void refill() {
        static const std::array<std::uint8_t, 4096> zeros{};
        int outlen = 0;
        if (EVP_EncryptUpdate(ctx, buffer.data(), &outlen, zeros.data(),
                              static_cast<int>(zeros.size())) != 1 ||
            outlen != static_cast<int>(buffer.size())) {
            throw std::runtime_error("chacha20: keystream generation failed");
        }
        pos = 0;
    }
};

ChaCha20Stream::ChaCha20Stream(const Digest& key) : impl_(std::make_unique<Impl>(key)) {}
ChaCha20Stream::~ChaCha20Stream() = default;
ChaCha20Stream::ChaCha20Stream(ChaCha20Stream&&) noexcept = default;
ChaCha20Stream& ChaCha20Stream::operator=(ChaCha20Stream&&) noexcept = default;

std::uint32_t ChaCha20Stream::next_u32() {
    if (impl_->pos + 4 > impl_->buffer.size()) impl_->refill();
    std::uint32_t w = 0;
    std::memcpy(&w, impl_->buffer.data() + impl_->pos, 4);
    impl_->pos += 4;
#if defined(__BYTE_ORDER__) && __BYTE_ORDER__ == __ORDER_BIG_ENDIAN__
    w = __builtin_bswap32(w);
#endif
    return w;
}

std::uint32_t ChaCha20Stream::below(std::uint32_t bound) {
    const std::uint64_t span = (std::uint64_t{1} << 32) / bound * bound;
    std::uint32_t r;
    do {
        r = next_u32();
    } while (r >= span);
    return r % bound;
}

}  // namespace fv
