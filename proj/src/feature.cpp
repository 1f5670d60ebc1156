#include "fvkit/feature.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fvkit/errors.hpp"

namespace fv {

const char* to_string(QuantScheme s) {
    return s == QuantScheme::EqualProbable ? "equal_probable" : "equal_size";
}

const char* to_string(BinScheme s) {
    switch (s) {
        case BinScheme::Boolean: return "boolean";
        case BinScheme::Dbr: return "dbr";
        case BinScheme::Brgc: return "brgc";
        case BinScheme::Lssc: return "lssc";
        case BinScheme::Onehot: return "onehot";
    }
    return "?";
}

std::optional<QuantScheme> parse_quant_scheme(const std::string& name) {
    if (name == "equal_probable") return QuantScheme::EqualProbable;
    if (name == "equal_size") return QuantScheme::EqualSize;
    return std::nullopt;
}

std::optional<BinScheme> parse_bin_scheme(const std::string& name) {
    if (name == "boolean") return BinScheme::Boolean;
    if (name == "dbr") return BinScheme::Dbr;
    if (name == "brgc") return BinScheme::Brgc;
    if (name == "lssc") return BinScheme::Lssc;
    if (name == "onehot") return BinScheme::Onehot;
    return std::nullopt;
}

unsigned bits_per_element(BinScheme scheme, unsigned d) {
    if (d < 2 || !std::has_single_bit(d)) {
        throw std::invalid_argument("interval count d must be a power of two >= 2");
    }
    switch (scheme) {
        case BinScheme::Boolean:
            if (d != 2) throw std::invalid_argument("boolean binarisation requires d = 2");
            return 1;
        case BinScheme::Dbr:
        case BinScheme::Brgc:
            return static_cast<unsigned>(std::bit_width(d) - 1);
        case BinScheme::Lssc:
            return d - 1;
        case BinScheme::Onehot:
            return d;
    }
    throw std::invalid_argument("unknown binarisation scheme");
}

std::size_t BitVec::count() const {
    std::size_t c = 0;
    for (const std::uint64_t w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
}

QuantiserModel fit_quantiser(const std::vector<RealFeatureVector>& training, unsigned d,
                             QuantScheme scheme, std::pair<double, double> range) {
    if (d < 2 || !std::has_single_bit(d)) {
        throw std::invalid_argument("interval count d must be a power of two >= 2");
    }
    if (training.empty()) throw std::invalid_argument("empty training set");
    const std::size_t n = training[0].values.size();
    if (n == 0) throw std::invalid_argument("training vectors are empty");
    for (const auto& sample : training) {
        if (sample.values.size() != n) {
            throw std::invalid_argument("inconsistent feature count in training set");
        }
    }
    if (training.size() < d) {
        throw std::invalid_argument("need at least d training samples, got " +
                                    std::to_string(training.size()));
    }

    QuantiserModel model;
    model.scheme = scheme;
    model.d = d;
    model.n = n;
    model.range = range;
    model.thresholds.assign(n, {});
    model.degenerate.assign(n, 0);

    if (scheme == QuantScheme::EqualSize) {
        if (!(range.first < range.second)) {
            throw std::invalid_argument("equal_size range must satisfy lo < hi");
        }
        const double step = (range.second - range.first) / d;
        for (std::size_t i = 0; i < n; ++i) {
            model.thresholds[i].resize(d - 1);
            for (unsigned j = 1; j < d; ++j) {
                model.thresholds[i][j - 1] = range.first + step * j;
            }
        }
        return model;
    }

    const std::size_t count = training.size();
    std::vector<double> column(count);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t s = 0; s < count; ++s) {
            const double v = training[s].values[i];
            if (!std::isfinite(v)) {
                throw std::invalid_argument("non-finite training value in element " +
                                            std::to_string(i));
            }
            column[s] = v;
        }
        std::sort(column.begin(), column.end());
        model.thresholds[i].resize(d - 1);
        if (column.front() == column.back()) {
            // Constant element: collapsed thresholds, quantises to interval 0.
            model.degenerate[i] = 1;
            std::fill(model.thresholds[i].begin(), model.thresholds[i].end(), column.front());
            continue;
        }
        for (unsigned j = 1; j < d; ++j) {
            // Boundary index b = j*count/d over 1-based order statistics; the
            // threshold is the midpoint of x_ceil(b) and x_(floor(b)+1).
            const std::size_t num = static_cast<std::size_t>(j) * count;
            const std::size_t lo = (num + d - 1) / d;  // ceil(b)
            const std::size_t hi = num / d + 1;        // floor(b)+1
            model.thresholds[i][j - 1] = 0.5 * (column[lo - 1] + column[hi - 1]);
        }
    }
    return model;
}

std::vector<std::uint16_t> quantise(const QuantiserModel& model,
                                    const std::vector<double>& values) {
    if (values.size() != model.n) {
        throw std::invalid_argument("feature vector length does not match the model");
    }
    std::vector<std::uint16_t> out(model.n);
    for (std::size_t i = 0; i < model.n; ++i) {
        const double v = values[i];
        if (std::isnan(v)) {
            throw std::invalid_argument("NaN feature value in element " + std::to_string(i));
        }
        if (model.degenerate[i]) {
            out[i] = 0;
            continue;
        }
        const auto& th = model.thresholds[i];
        // Interval index = count of thresholds <= v; a value equal to a
        // threshold goes right. Clamping falls out of the counting.
        const auto it = std::upper_bound(th.begin(), th.end(), v);
        out[i] = static_cast<std::uint16_t>(it - th.begin());
    }
    return out;
}

BinaryVector binarise(const std::vector<std::uint16_t>& q, unsigned d, BinScheme scheme) {
    const unsigned m = bits_per_element(scheme, d);
    BinaryVector out;
    out.m = m;
    out.scheme = scheme;
    out.bits = BitVec(q.size() * m);
    for (std::size_t i = 0; i < q.size(); ++i) {
        const unsigned idx = q[i];
        if (idx >= d) {
            throw std::invalid_argument("quantised value out of range for d=" +
                                        std::to_string(d));
        }
        const std::size_t base = i * m;
        switch (scheme) {
            case BinScheme::Boolean:
                out.bits.set(base, idx != 0);
                break;
            case BinScheme::Dbr:
                for (unsigned j = 0; j < m; ++j) out.bits.set(base + j, (idx >> j) & 1u);
                break;
            case BinScheme::Brgc: {
                const unsigned g = idx ^ (idx >> 1);
                for (unsigned j = 0; j < m; ++j) out.bits.set(base + j, (g >> j) & 1u);
                break;
            }
            case BinScheme::Lssc:
                for (unsigned j = 0; j < m; ++j) out.bits.set(base + j, j < idx);
                break;
            case BinScheme::Onehot:
                out.bits.set(base + idx, true);
                break;
        }
    }
    return out;
}

FeatureSet to_feature_set(const BinaryVector& b) {
    FeatureSet out;
    out.reserve(b.bits.count());
    for (std::size_t i = 0; i < b.bits.size(); ++i) {
        if (b.bits.get(i)) out.push_back(static_cast<std::uint32_t>(i));
    }
    return out;
}

std::size_t hamming_score(const BinaryVector& a, const BinaryVector& b) {
    if (a.bits.size() != b.bits.size()) {
        throw std::invalid_argument("hamming_score: length mismatch");
    }
    if (a.scheme != b.scheme || a.m != b.m) {
        throw std::invalid_argument("hamming_score: scheme mismatch");
    }
    std::size_t dist = 0;
    const auto& wa = a.bits.words();
    const auto& wb = b.bits.words();
    for (std::size_t i = 0; i < wa.size(); ++i) {
        dist += static_cast<std::size_t>(std::popcount(wa[i] ^ wb[i]));
    }
    return dist;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string quantiser_to_text(const QuantiserModel& model) {
    std::ostringstream os;
    os << "fvkit-quantiser-model v1\n";
    os << "scheme " << to_string(model.scheme) << "\n";
    os << "d " << model.d << "\n";
    os << "n " << model.n << "\n";
    os << "bit_convention element-major-lsb0\n";
    os << "range " << format_double(model.range.first) << " "
       << format_double(model.range.second) << "\n";
    os << "thresholds\n";
    for (std::size_t i = 0; i < model.n; ++i) {
        os << i << (model.degenerate[i] ? " degenerate" : "");
        for (const double t : model.thresholds[i]) os << " " << format_double(t);
        os << "\n";
    }
    os << "end\n";
    return os.str();
}

QuantiserModel quantiser_from_text(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    std::size_t line_no = 0;
    auto next_line = [&]() -> std::string& {
        if (!std::getline(is, line)) throw FormatError("unexpected end of model document", line_no);
        ++line_no;
        return line;
    };

    if (next_line() != "fvkit-quantiser-model v1") {
        throw FormatError("bad model header", line_no);
    }
    QuantiserModel model;
    {
        std::istringstream ls(next_line());
        std::string key, value;
        ls >> key >> value;
        auto scheme = parse_quant_scheme(value);
        if (key != "scheme" || !scheme) throw FormatError("bad scheme line", line_no);
        model.scheme = *scheme;
    }
    {
        std::istringstream ls(next_line());
        std::string key;
        ls >> key >> model.d;
        if (key != "d" || ls.fail()) throw FormatError("bad d line", line_no);
    }
    {
        std::istringstream ls(next_line());
        std::string key;
        ls >> key >> model.n;
        if (key != "n" || ls.fail()) throw FormatError("bad n line", line_no);
    }
    if (next_line() != "bit_convention element-major-lsb0") {
        throw FormatError("unsupported bit convention", line_no);
    }
    {
        std::istringstream ls(next_line());
        std::string key;
        ls >> key >> model.range.first >> model.range.second;
        if (key != "range" || ls.fail()) throw FormatError("bad range line", line_no);
    }
    if (next_line() != "thresholds") throw FormatError("missing thresholds section", line_no);
    model.thresholds.assign(model.n, {});
    model.degenerate.assign(model.n, 0);
    for (std::size_t i = 0; i < model.n; ++i) {
        std::istringstream ls(next_line());
        std::size_t idx = 0;
        ls >> idx;
        if (ls.fail() || idx != i) throw FormatError("bad element index", line_no);
        std::string token;
        std::vector<double> th;
        while (ls >> token) {
            if (token == "degenerate") {
                model.degenerate[i] = 1;
                continue;
            }
            th.push_back(std::stod(token));
        }
        if (th.size() != model.d - 1) {
            throw FormatError("wrong threshold count for element " + std::to_string(i), line_no);
        }
        model.thresholds[i] = std::move(th);
    }
    if (next_line() != "end") throw FormatError("missing end marker", line_no);
    return model;
}

void save_quantiser(const QuantiserModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << quantiser_to_text(model);
}

QuantiserModel load_quantiser(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return quantiser_from_text(buf.str());
}

}  // namespace fv
