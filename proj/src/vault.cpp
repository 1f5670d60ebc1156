#include "fvkit/vault.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "fvkit/errors.hpp"

namespace fv {

namespace {

void check_feature_set(const FeatureSet& set, std::uint32_t nm, const char* what) {
    if (set.empty()) throw std::invalid_argument(std::string(what) + ": empty feature set");
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (set[i] >= nm) {
            throw std::invalid_argument(std::string(what) + ": element " +
                                        std::to_string(set[i]) + " out of range [0, " +
                                        std::to_string(nm) + ")");
        }
        if (i > 0 && set[i] <= set[i - 1]) {
            throw std::invalid_argument(std::string(what) +
                                        ": elements must be strictly increasing");
        }
    }
}

}  // namespace

VaultParams make_vault_params(unsigned n, unsigned d, BinScheme scheme, unsigned k) {
    if (n == 0 || n > 0xFFFF) throw std::invalid_argument("n must be in [1, 65535]");
    const unsigned m = bits_per_element(scheme, d);
    const std::uint64_t nm = static_cast<std::uint64_t>(n) * m;
    if (nm < 2 || nm > 65536) {
        throw std::invalid_argument("n*m must be in [2, 65536], got " + std::to_string(nm));
    }
    if (k == 0 || k > nm) {
        throw std::invalid_argument("k must be in [1, n*m]");
    }
    VaultParams params;
    params.n = static_cast<std::uint16_t>(n);
    params.m = static_cast<std::uint16_t>(m);
    params.d = static_cast<std::uint8_t>(d);
    params.scheme = scheme;
    params.k = static_cast<std::uint16_t>(k);
    const unsigned e = std::max<unsigned>(2, std::bit_width(nm - 1));
    params.field_degree = static_cast<std::uint8_t>(e);
    return params;
}

SecretKey SecretKey::from_poly(const Poly& p, unsigned k) {
    if (p.degree() >= static_cast<int>(k)) {
        throw std::invalid_argument("secret polynomial degree must be below k");
    }
    SecretKey key;
    key.coeffs.assign(k, 0);
    for (unsigned i = 0; i < k; ++i) key.coeffs[i] = p.coeff(i);
    return key;
}

Digest key_commitment(const SecretKey& key, std::span<const std::uint8_t> salt) {
    std::vector<std::uint8_t> bytes;
    bytes.reserve(2 * key.coeffs.size() + salt.size());
    for (const Fe c : key.coeffs) {
        bytes.push_back(static_cast<std::uint8_t>(c & 0xFF));
        bytes.push_back(static_cast<std::uint8_t>(c >> 8));
    }
    bytes.insert(bytes.end(), salt.begin(), salt.end());
    return sha256(bytes);
}

Bijection::Bijection(std::vector<Fe> forward) : forward_(std::move(forward)) {
    inverse_.assign(forward_.size(), 0);
    std::vector<bool> seen(forward_.size(), false);
    for (std::size_t i = 0; i < forward_.size(); ++i) {
        const Fe y = forward_[i];
        if (y >= forward_.size() || seen[y]) {
            throw std::invalid_argument("bijection table is not a permutation");
        }
        seen[y] = true;
        inverse_[y] = static_cast<Fe>(i);
    }
}

Bijection derive_bijection(const Digest& seed, const Gf2e& field) {
    const std::uint32_t order = field.order();
    std::vector<Fe> forward(order);
    for (std::uint32_t i = 0; i < order; ++i) forward[i] = static_cast<Fe>(i);
    ChaCha20Stream stream(seed);
    for (std::uint32_t i = order - 1; i >= 1; --i) {
        const std::uint32_t j = stream.below(i + 1);
        std::swap(forward[i], forward[j]);
    }
    return Bijection(std::move(forward));
}

BindResult bind_vault(const FeatureSet& features, const VaultParams& params, Rng& rng,
                std::span<const std::uint8_t> salt) {
    const std::uint32_t nm = params.nm();
    check_feature_set(features, nm, "bind");
    const Gf2e& f = params.field();

    SecretKey key;
    key.coeffs.resize(params.k);
    for (auto& c : key.coeffs) c = static_cast<Fe>(rng.below(f.order()));
    const Digest hash = key_commitment(key, salt);

    const Bijection sigma = derive_bijection(hash, f);
    std::vector<Fe> mapped;
    mapped.reserve(features.size());
    for (const std::uint32_t v : features) mapped.push_back(sigma.apply(static_cast<Fe>(v)));

    const Poly locator = poly_from_roots(f, mapped);
    const Poly blind = sample_rootless_poly(f, nm - static_cast<std::uint32_t>(mapped.size()), rng);
    Poly v = poly_add(key.as_poly(), poly_mul(f, blind, locator));
    if (v.degree() != static_cast<int>(nm)) {
        throw std::logic_error("vault polynomial degree invariant violated");
    }

    BindResult result;
    result.record.params = params;
    result.record.v = std::move(v);
    result.record.key_hash = hash;
    result.key = std::move(key);
    return result;
}

std::vector<FePoint> unlock_set(const VaultRecord& record, const FeatureSet& probe) {
    check_feature_set(probe, record.params.nm(), "unlock_set");
    const Gf2e& f = record.params.field();
    const Bijection sigma = derive_bijection(record.key_hash, f);
    std::vector<FePoint> pairs;
    pairs.reserve(probe.size());
    for (const std::uint32_t x : probe) {
        const Fe mapped = sigma.apply(static_cast<Fe>(x));
        pairs.emplace_back(mapped, poly_eval(f, record.v, mapped));
    }
    return pairs;
}

RetrieveResult retrieve(const VaultRecord& record, const FeatureSet& probe,
                        const DecoderConfig& config, std::span<const std::uint8_t> salt) {
    const std::vector<FePoint> pairs = unlock_set(record, probe);
    const Gf2e& f = record.params.field();
    const unsigned k = record.params.k;
    const KeyVerifier verify = [&](const Poly& candidate) {
        if (candidate.degree() >= static_cast<int>(k)) return false;
        return key_commitment(SecretKey::from_poly(candidate, k), salt) == record.key_hash;
    };
    RetrieveResult result;
    result.outcome = run_decoder(f, pairs, k, verify, config);
    result.success = result.outcome.success;
    if (result.success && result.outcome.key) {
        result.key = SecretKey::from_poly(*result.outcome.key, k);
    }
    return result;
}

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'F', 'F', 'V', '1'};
constexpr std::uint8_t kVersion = 1;

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

class Reader {
  public:
    explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const { return pos_; }

    std::uint8_t u8(const char* what) {
        need(1, what);
        return bytes_[pos_++];
    }

    std::uint16_t u16(const char* what) {
        need(2, what);
        const std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_]) |
                                static_cast<std::uint16_t>(bytes_[pos_ + 1]) << 8;
        pos_ += 2;
        return v;
    }

    std::uint32_t u32(const char* what) {
        need(4, what);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        pos_ += 4;
        return v;
    }

    void need(std::size_t count, const char* what) const {
        if (pos_ + count > bytes_.size()) {
            throw FormatError(std::string("truncated record while reading ") + what, pos_);
        }
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }
    const std::uint8_t* cursor() const { return bytes_.data() + pos_; }
    void advance(std::size_t count) { pos_ += count; }

  private:
    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_record(const VaultRecord& record) {
    const VaultParams& p = record.params;
    const std::uint32_t nm = p.nm();
    std::vector<std::uint8_t> out;
    out.reserve(18 + 2 * (nm + 1) + 32);
    out.insert(out.end(), kMagic.begin(), kMagic.end());
    out.push_back(kVersion);
    out.push_back(p.field_degree);
    put_u16(out, p.n);
    put_u16(out, p.m);
    out.push_back(p.d);
    out.push_back(static_cast<std::uint8_t>(p.scheme));
    put_u16(out, p.k);
    put_u32(out, nm + 1);
    for (std::uint32_t i = 0; i <= nm; ++i) put_u16(out, record.v.coeff(i));
    out.insert(out.end(), record.key_hash.begin(), record.key_hash.end());
    return out;
}

VaultRecord deserialize_record(std::span<const std::uint8_t> bytes) {
    Reader in(bytes);
    in.need(4, "magic");
    if (!std::equal(kMagic.begin(), kMagic.end(), in.cursor())) {
        throw FormatError("bad magic", in.offset());
    }
    in.advance(4);
    if (in.u8("version") != kVersion) throw FormatError("unsupported version", in.offset() - 1);

    VaultRecord record;
    VaultParams& p = record.params;
    p.field_degree = in.u8("field degree");
    if (p.field_degree < 2 || p.field_degree > 16) {
        throw FormatError("field degree out of range", in.offset() - 1);
    }
    p.n = in.u16("n");
    p.m = in.u16("m");
    p.d = in.u8("d");
    const std::uint8_t scheme_byte = in.u8("scheme");
    if (scheme_byte > static_cast<std::uint8_t>(BinScheme::Onehot)) {
        throw FormatError("unknown binarisation scheme", in.offset() - 1);
    }
    p.scheme = static_cast<BinScheme>(scheme_byte);
    p.k = in.u16("k");

    std::uint32_t nm = 0;
    try {
        const VaultParams check = make_vault_params(p.n, p.d, p.scheme, p.k == 0 ? 1 : p.k);
        nm = check.nm();
        if (check.m != p.m) throw FormatError("m does not match scheme and d", 8);
        if (check.field_degree != p.field_degree) {
            throw FormatError("field degree does not match n*m", 5);
        }
    } catch (const std::invalid_argument& e) {
        throw FormatError(std::string("invalid parameters: ") + e.what(), 5);
    }
    if (p.k == 0 || p.k > nm) throw FormatError("k out of range", 12);

    const std::uint32_t coeff_count = in.u32("coefficient count");
    if (coeff_count != nm + 1) {
        throw FormatError("coefficient count must be n*m+1", in.offset() - 4);
    }
    std::vector<Fe> coeffs(coeff_count);
    const std::uint32_t order = std::uint32_t{1} << p.field_degree;
    for (std::uint32_t i = 0; i < coeff_count; ++i) {
        const std::size_t at = in.offset();
        coeffs[i] = in.u16("coefficient");
        if (coeffs[i] >= order) throw FormatError("coefficient exceeds field order", at);
    }
    if (coeffs.back() == 0) {
        throw FormatError("vault polynomial must have degree exactly n*m", in.offset() - 2);
    }
    record.v = Poly::from_coefficients(std::move(coeffs));

    in.need(32, "key hash");
    std::memcpy(record.key_hash.data(), in.cursor(), 32);
    in.advance(32);
    if (in.remaining() != 0) {
        throw FormatError("trailing bytes after record", in.offset());
    }
    return record;
}

void save_record(const VaultRecord& record, const std::string& path) {
    const auto bytes = serialize_record(record);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("write failed for " + path);
}

VaultRecord load_record(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return deserialize_record(bytes);
}

}  // namespace fv
