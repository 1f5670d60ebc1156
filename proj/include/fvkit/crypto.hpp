// Cryptographic primitives backing the vault: SHA-256 for key commitments and
// a ChaCha20 keystream for deriving record-specific bijections. Both are fully
// deterministic so records interoperate across implementations.
#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>

namespace fv {

using Digest = std::array<std::uint8_t, 32>;

Digest sha256(std::span<const std::uint8_t> data);

// Deterministic keystream: ChaCha20 with a 256-bit key, zero nonce and zero
// initial counter. Words are consecutive little-endian 32-bit reads of the
// keystream; bounded draws use rejection sampling on whole words. This
// derivation is part of the record format.
class ChaCha20Stream {
  public:
    explicit ChaCha20Stream(const Digest& key);
    ~ChaCha20Stream();
    ChaCha20Stream(ChaCha20Stream&&) noexcept;
    ChaCha20Stream& operator=(ChaCha20Stream&&) noexcept;
    ChaCha20Stream(const ChaCha20Stream&) = delete;
    ChaCha20Stream& operator=(const ChaCha20Stream&) = delete;

    std::uint32_t next_u32();

    // Uniform in [0, bound), bound >= 1.
    std::uint32_t below(std::uint32_t bound);

  private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace fv
