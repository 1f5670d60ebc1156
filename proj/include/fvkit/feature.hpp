// Feature transformation pipeline: real-valued vector -> quantised integer
// vector -> binary vector -> feature set, plus Hamming scoring for the
// binarisation baselines.
//
// Bit-position convention (recorded in serialized models): codes are
// concatenated in element order and bit 0 of an element's m-bit code is its
// least-significant bit, so the global position of bit j of element i is
// i*m + j.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fv {

enum class QuantScheme : std::uint8_t { EqualProbable = 0, EqualSize = 1 };
enum class BinScheme : std::uint8_t { Boolean = 0, Dbr = 1, Brgc = 2, Lssc = 3, Onehot = 4 };

const char* to_string(QuantScheme s);
const char* to_string(BinScheme s);
std::optional<QuantScheme> parse_quant_scheme(const std::string& name);
std::optional<BinScheme> parse_bin_scheme(const std::string& name);

// Bits per element: Boolean 1 (requires d=2), DBR/BRGC log2(d), LSSC d-1,
// one-hot d. Throws std::invalid_argument for Boolean with d != 2 or d not a
// power of two.
unsigned bits_per_element(BinScheme scheme, unsigned d);

struct RealFeatureVector {
    std::string subject_id;
    std::string sample_id;
    std::vector<double> values;
};

// Packed bit sequence.
class BitVec {
  public:
    BitVec() = default;
    explicit BitVec(std::size_t size) : words_((size + 63) / 64, 0), size_(size) {}

    void set(std::size_t i, bool v = true) {
        const std::uint64_t mask = std::uint64_t{1} << (i % 64);
        if (v)
            words_[i / 64] |= mask;
        else
            words_[i / 64] &= ~mask;
    }

    bool get(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
    std::size_t size() const { return size_; }
    std::size_t count() const;
    const std::vector<std::uint64_t>& words() const { return words_; }

    bool operator==(const BitVec&) const = default;

  private:
    std::vector<std::uint64_t> words_;
    std::size_t size_ = 0;
};

struct BinaryVector {
    BitVec bits;
    unsigned m = 0;
    BinScheme scheme = BinScheme::Lssc;
};

// Sorted, duplicate-free positions of set bits; values lie in [0, n*m).
using FeatureSet = std::vector<std::uint32_t>;

// Per-element interval boundaries learned from training data. Immutable
// after fitting. Elements that are constant in training get collapsed
// thresholds and always quantise to interval 0 (flagged in `degenerate`).
struct QuantiserModel {
    QuantScheme scheme = QuantScheme::EqualProbable;
    unsigned d = 4;
    std::size_t n = 0;
    std::pair<double, double> range{-0.3, 0.3};        // used by EqualSize
    std::vector<std::vector<double>> thresholds;       // n entries of d-1 values
    std::vector<std::uint8_t> degenerate;              // n flags
};

// Fits interval boundaries. EqualProbable places thresholds at empirical
// quantiles j/d: with N sorted samples per element and boundary index
// b = j*N/d, the threshold is the midpoint of the order statistics x_ceil(b)
// and x_floor(b)+1 (1-based), which averages straddling observations when b
// is integral. EqualSize spaces d-1 thresholds evenly over `range`.
// Requires at least d training samples; non-finite training values raise an
// error naming the element.
QuantiserModel fit_quantiser(const std::vector<RealFeatureVector>& training, unsigned d,
                             QuantScheme scheme, std::pair<double, double> range = {-0.3, 0.3});

// Interval index per element: number of thresholds <= value (a value equal to
// a threshold goes to the interval on its right); out-of-range values clamp
// to the first/last interval. Degenerate elements always map to 0. NaN input
// raises std::invalid_argument.
std::vector<std::uint16_t> quantise(const QuantiserModel& model,
                                    const std::vector<double>& values);

// Per-element m-bit codes, concatenated in element order:
//   DBR     base-2 representation of the interval index
//   BRGC    index XOR (index >> 1)
//   LSSC    thermometer code, index j -> j ones from the least-significant side
//   one-hot single set bit at position index
//   Boolean the index itself (d must be 2)
BinaryVector binarise(const std::vector<std::uint16_t>& q, unsigned d, BinScheme scheme);

// 0-based positions of set bits. The empty set is allowed; callers decide
// whether to reject it.
FeatureSet to_feature_set(const BinaryVector& b);

// Count of differing bits; inputs must share length and scheme.
std::size_t hamming_score(const BinaryVector& a, const BinaryVector& b);

// Self-describing text persistence for quantiser models.
std::string quantiser_to_text(const QuantiserModel& model);
QuantiserModel quantiser_from_text(const std::string& text);
void save_quantiser(const QuantiserModel& model, const std::string& path);
QuantiserModel load_quantiser(const std::string& path);

}  // namespace fv
