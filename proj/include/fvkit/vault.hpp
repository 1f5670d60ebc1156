// Key binding and retrieval in an unlinkable improved fuzzy vault: a secret
// polynomial kappa of degree < k is committed by SHA-256, a record-specific
// bijection sigma (seeded from that commitment) re-maps the feature set, and
// the stored polynomial is the degree-hiding blind
//     V(X) = kappa(X) + Q(X) * prod_{v in sigma(P)} (X - v)
// with Q rootless and of degree n*m - |P|, so deg(V) is always n*m.
//
// Record format (all little-endian):
//   magic "FFV1" | version u8=1 | e u8 | n u16 | m u16 | d u8 | scheme u8 |
//   k u16 | coeff_count u32 = n*m+1 | coefficients u16 each (< 2^e) |
//   key_hash 32 bytes
// Any deviation is a format error. The field reduction polynomial is fixed
// per degree e (see default_reduction_poly); the bijection is a Fisher-Yates
// shuffle of [0, 2^e) driven by the ChaCha20 keystream of crypto.hpp keyed
// with key_hash.
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fvkit/crypto.hpp"
#include "fvkit/decoders.hpp"
#include "fvkit/feature.hpp"
#include "fvkit/gf2e.hpp"
#include "fvkit/rng.hpp"

namespace fv {

struct VaultParams {
    std::uint16_t n = 0;   // feature elements
    std::uint16_t m = 0;   // bits per element
    std::uint8_t d = 0;    // quantisation intervals
    BinScheme scheme = BinScheme::Lssc;
    std::uint16_t k = 0;   // secret polynomial degree bound
    std::uint8_t field_degree = 0;  // e = ceil(log2(n*m))

    std::uint32_t nm() const { return static_cast<std::uint32_t>(n) * m; }
    const Gf2e& field() const { return field_for_degree(field_degree); }
};

// Computes m and the field degree from (n, d, scheme); validates 1 <= k <= n*m.
VaultParams make_vault_params(unsigned n, unsigned d, BinScheme scheme, unsigned k);

// Exactly k coefficients, low degree first; leading coefficients may be zero.
struct SecretKey {
    std::vector<Fe> coeffs;

    Poly as_poly() const { return Poly::from_coefficients(coeffs); }
    static SecretKey from_poly(const Poly& p, unsigned k);
};

// SHA-256 over the k coefficients serialized as little-endian 16-bit words,
// low degree first, followed by the optional deployment salt.
Digest key_commitment(const SecretKey& key, std::span<const std::uint8_t> salt = {});

struct VaultRecord {
    VaultParams params;
    Poly v;  // degree exactly n*m
    Digest key_hash{};
};

// A permutation of the field [0, order).
class Bijection {
  public:
    explicit Bijection(std::vector<Fe> forward);
    Fe apply(Fe x) const { return forward_[x]; }
    Fe invert(Fe y) const { return inverse_[y]; }
    std::uint32_t size() const { return static_cast<std::uint32_t>(forward_.size()); }

  private:
    std::vector<Fe> forward_;
    std::vector<Fe> inverse_;
};

// Deterministic Fisher-Yates permutation of the field driven by the ChaCha20
// keystream keyed with `seed`: for i = order-1 down to 1, swap positions i
// and below(i+1). Identical across runs and implementations.
Bijection derive_bijection(const Digest& seed, const Gf2e& field);

struct BindResult {
    VaultRecord record;
    SecretKey key;  // for caller-side key use only; never stored
};

// Binds a nonempty feature set (elements < n*m) to a fresh uniform secret.
BindResult bind_vault(const FeatureSet& features, const VaultParams& params, Rng& rng,
                std::span<const std::uint8_t> salt = {});

// Evaluation pairs (sigma(x), V(sigma(x))) for x in the probe set; sigma is
// re-derived from the stored commitment.
std::vector<FePoint> unlock_set(const VaultRecord& record, const FeatureSet& probe);

struct RetrieveResult {
    bool success = false;
    std::optional<SecretKey> key;
    DecodeOutcome outcome;
};

// Dispatches to the configured decoder; succeeds only if the recovered
// polynomial matches the stored commitment. Never returns an unverified key.
RetrieveResult retrieve(const VaultRecord& record, const FeatureSet& probe,
                        const DecoderConfig& config, std::span<const std::uint8_t> salt = {});

std::vector<std::uint8_t> serialize_record(const VaultRecord& record);

// Throws FormatError (with byte offset) on any deviation from the format.
VaultRecord deserialize_record(std::span<const std::uint8_t> bytes);

void save_record(const VaultRecord& record, const std::string& path);
VaultRecord load_record(const std::string& path);

}  // namespace fv
