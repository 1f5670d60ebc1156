#include "doctest.h"

#include <cmath>
#include <cstdlib>

#include "fvkit/errors.hpp"
#include "fvkit/feature.hpp"
#include "fvkit/rng.hpp"

using namespace fv;

namespace {

std::vector<RealFeatureVector> column_samples(const std::vector<double>& values) {
    std::vector<RealFeatureVector> out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out.push_back({"s" + std::to_string(i), "0", {values[i]}});
    }
    return out;
}

}  // namespace

TEST_CASE("equal-probable thresholds use straddling order statistics") {
    const auto training = column_samples({1, 2, 3, 4, 5, 6, 7, 8});
    const QuantiserModel model = fit_quantiser(training, 2, QuantScheme::EqualProbable);
    REQUIRE(model.thresholds.size() == 1);
    REQUIRE(model.thresholds[0].size() == 1);
    CHECK(model.thresholds[0][0] == doctest::Approx(4.5));
}

TEST_CASE("equal-size thresholds are evenly spaced over the range") {
    const auto training = column_samples({0.0, 0.1, -0.1, 0.2});
    const QuantiserModel model =
        fit_quantiser(training, 4, QuantScheme::EqualSize, {-0.3, 0.3});
    REQUIRE(model.thresholds[0].size() == 3);
    CHECK(model.thresholds[0][0] == doctest::Approx(-0.15));
    CHECK(model.thresholds[0][1] == doctest::Approx(0.0));
    CHECK(model.thresholds[0][2] == doctest::Approx(0.15));
}

TEST_CASE("equal-probable intervals receive near-equal held-out mass") {
    Rng rng(77);
    const std::size_t train_n = 20000, holdout_n = 40000;
    std::vector<RealFeatureVector> training;
    for (std::size_t i = 0; i < train_n; ++i) {
        training.push_back({"t", "0", {rng.unit_real()}});
    }
    const unsigned d = 4;
    const QuantiserModel model = fit_quantiser(training, d, QuantScheme::EqualProbable);
    std::vector<std::size_t> counts(d, 0);
    for (std::size_t i = 0; i < holdout_n; ++i) {
        counts[quantise(model, {rng.unit_real()})[0]] += 1;
    }
    for (unsigned j = 0; j < d; ++j) {
        const double frac = static_cast<double>(counts[j]) / holdout_n;
        CHECK(std::abs(frac - 0.25) < 0.02 * 0.25 + 0.01);
    }
}

TEST_CASE("quantisation clamps, sends ties right, and rejects NaN") {
    const auto training = column_samples({1, 2, 3, 4, 5, 6, 7, 8});
    const QuantiserModel model = fit_quantiser(training, 4, QuantScheme::EqualProbable);
    CHECK(quantise(model, {-100.0})[0] == 0);
    CHECK(quantise(model, {100.0})[0] == 3);
    const double threshold = model.thresholds[0][1];
    CHECK(quantise(model, {threshold})[0] == 2);
    CHECK(quantise(model, {std::nextafter(threshold, -1e9)})[0] == 1);
    CHECK_THROWS_AS(quantise(model, {std::nan("")}), std::invalid_argument);
    CHECK_THROWS_AS(quantise(model, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("quantisation is monotone per element") {
    Rng rng(5);
    std::vector<RealFeatureVector> training;
    for (int i = 0; i < 64; ++i) training.push_back({"t", "0", {rng.gaussian()}});
    for (const QuantScheme scheme : {QuantScheme::EqualProbable, QuantScheme::EqualSize}) {
        const QuantiserModel model = fit_quantiser(training, 8, scheme, {-3, 3});
        for (int it = 0; it < 1000; ++it) {
            double a = 4.0 * (rng.unit_real() - 0.5);
            double b = 4.0 * (rng.unit_real() - 0.5);
            if (a > b) std::swap(a, b);
            CHECK(quantise(model, {a})[0] <= quantise(model, {b})[0]);
        }
    }
}

TEST_CASE("degenerate training elements collapse and quantise to zero") {
    std::vector<RealFeatureVector> training;
    for (int i = 0; i < 8; ++i) {
        training.push_back({"t", "0", {0.25, static_cast<double>(i)}});
    }
    const QuantiserModel model = fit_quantiser(training, 4, QuantScheme::EqualProbable);
    CHECK(model.degenerate[0] == 1);
    CHECK(model.degenerate[1] == 0);
    CHECK(quantise(model, {0.25, 3.0})[0] == 0);
    CHECK(quantise(model, {99.0, 3.0})[0] == 0);
}

TEST_CASE("fit rejects insufficient or non-finite training data") {
    CHECK_THROWS_AS(fit_quantiser(column_samples({1, 2, 3}), 4, QuantScheme::EqualProbable),
                    std::invalid_argument);
    auto bad = column_samples({1, 2, 3, std::nan("")});
    CHECK_THROWS_AS(fit_quantiser(bad, 4, QuantScheme::EqualProbable), std::invalid_argument);
    CHECK_THROWS_AS(fit_quantiser(column_samples({1, 2, 3, 4}), 3, QuantScheme::EqualProbable),
                    std::invalid_argument);
}

TEST_CASE("binarisation codebooks for four intervals") {
    const std::vector<std::uint16_t> q{0, 1, 2, 3};
    SUBCASE("dbr") {
        const BinaryVector b = binarise(q, 4, BinScheme::Dbr);
        REQUIRE(b.m == 2);
        // Codes 00 01 10 11, least-significant bit first within each element.
        const bool expect[] = {0, 0, 1, 0, 0, 1, 1, 1};
        for (int i = 0; i < 8; ++i) CHECK(b.bits.get(i) == expect[i]);
    }
    SUBCASE("brgc") {
        const BinaryVector b = binarise(q, 4, BinScheme::Brgc);
        REQUIRE(b.m == 2);
        // Codes 00 01 11 10.
        const bool expect[] = {0, 0, 1, 0, 1, 1, 0, 1};
        for (int i = 0; i < 8; ++i) CHECK(b.bits.get(i) == expect[i]);
    }
    SUBCASE("lssc") {
        const BinaryVector b = binarise(q, 4, BinScheme::Lssc);
        REQUIRE(b.m == 3);
        // Codes 000 001 011 111.
        const bool expect[] = {0, 0, 0, 1, 0, 0, 1, 1, 0, 1, 1, 1};
        for (int i = 0; i < 12; ++i) CHECK(b.bits.get(i) == expect[i]);
    }
    SUBCASE("onehot") {
        const BinaryVector b = binarise(q, 4, BinScheme::Onehot);
        REQUIRE(b.m == 4);
        // Codes 0001 0010 0100 1000.
        for (int e = 0; e < 4; ++e) {
            for (int j = 0; j < 4; ++j) CHECK(b.bits.get(4 * e + j) == (j == e));
        }
    }
    SUBCASE("boolean requires two intervals") {
        const BinaryVector b = binarise({0, 1}, 2, BinScheme::Boolean);
        REQUIRE(b.m == 1);
        CHECK(b.bits.get(0) == false);
        CHECK(b.bits.get(1) == true);
        CHECK_THROWS_AS(binarise(q, 4, BinScheme::Boolean), std::invalid_argument);
    }
    SUBCASE("all-zero quantised vector maps to all-zero bits") {
        for (const BinScheme s : {BinScheme::Dbr, BinScheme::Brgc, BinScheme::Lssc}) {
            const BinaryVector b = binarise({0, 0, 0}, 4, s);
            CHECK(b.bits.count() == 0);
        }
    }
}

TEST_CASE("brgc adjacency: successive codes differ in one bit") {
    for (const unsigned d : {4u, 8u, 16u}) {
        for (unsigned j = 0; j + 1 < d; ++j) {
            const BinaryVector a = binarise({static_cast<std::uint16_t>(j)}, d, BinScheme::Brgc);
            const BinaryVector b =
                binarise({static_cast<std::uint16_t>(j + 1)}, d, BinScheme::Brgc);
            CHECK(hamming_score(a, b) == 1);
        }
    }
}

TEST_CASE("lssc distance equals the L1 distance of quantised vectors") {
    Rng rng(9);
    for (const unsigned d : {4u, 8u, 16u}) {
        for (int it = 0; it < 400; ++it) {
            const std::size_t n = 1 + rng.below(24);
            std::vector<std::uint16_t> q1(n), q2(n);
            std::size_t l1 = 0;
            for (std::size_t i = 0; i < n; ++i) {
                q1[i] = static_cast<std::uint16_t>(rng.below(d));
                q2[i] = static_cast<std::uint16_t>(rng.below(d));
                l1 += static_cast<std::size_t>(std::abs(int(q1[i]) - int(q2[i])));
            }
            CHECK(hamming_score(binarise(q1, d, BinScheme::Lssc),
                                binarise(q2, d, BinScheme::Lssc)) == l1);
        }
    }
}

TEST_CASE("one-hot distance is twice the element disagreement count") {
    Rng rng(13);
    for (int it = 0; it < 500; ++it) {
        const unsigned d = 4;
        const std::size_t n = 1 + rng.below(32);
        std::vector<std::uint16_t> q1(n), q2(n);
        std::size_t disagreements = 0;
        for (std::size_t i = 0; i < n; ++i) {
            q1[i] = static_cast<std::uint16_t>(rng.below(d));
            q2[i] = static_cast<std::uint16_t>(rng.below(d));
            if (q1[i] != q2[i]) ++disagreements;
        }
        CHECK(hamming_score(binarise(q1, d, BinScheme::Onehot),
                            binarise(q2, d, BinScheme::Onehot)) == 2 * disagreements);
    }
}

TEST_CASE("hamming score basics") {
    const BinaryVector a = binarise({1, 2, 3}, 4, BinScheme::Lssc);
    const BinaryVector b = binarise({1, 0, 3}, 4, BinScheme::Lssc);
    CHECK(hamming_score(a, a) == 0);
    CHECK(hamming_score(a, b) == hamming_score(b, a));
    const BinaryVector c = binarise({1, 2}, 4, BinScheme::Lssc);
    CHECK_THROWS_AS(hamming_score(a, c), std::invalid_argument);
    const BinaryVector d_other = binarise({1, 2, 3}, 4, BinScheme::Onehot);
    CHECK_THROWS_AS(hamming_score(a, d_other), std::invalid_argument);
}

TEST_CASE("feature set mapping") {
    SUBCASE("positions of set bits") {
        BinaryVector b;
        b.m = 2;
        b.scheme = BinScheme::Dbr;
        b.bits = BitVec(4);
        b.bits.set(1);
        b.bits.set(2);
        const FeatureSet set = to_feature_set(b);
        REQUIRE(set.size() == 2);
        CHECK(set[0] == 1);
        CHECK(set[1] == 2);
    }
    SUBCASE("size equals the Hamming weight, fuzzed") {
        Rng rng(21);
        for (int it = 0; it < 500; ++it) {
            const std::size_t n = 1 + rng.below(40);
            std::vector<std::uint16_t> q(n);
            for (auto& v : q) v = static_cast<std::uint16_t>(rng.below(8));
            const BinaryVector b = binarise(q, 8, BinScheme::Lssc);
            const FeatureSet set = to_feature_set(b);
            CHECK(set.size() == b.bits.count());
            CHECK(std::is_sorted(set.begin(), set.end()));
        }
    }
}

TEST_CASE("quantiser model text round trip") {
    Rng rng(3);
    std::vector<RealFeatureVector> training;
    for (int i = 0; i < 32; ++i) {
        training.push_back({"t", "0", {rng.gaussian(), 0.5, rng.unit_real()}});
    }
    const QuantiserModel model = fit_quantiser(training, 4, QuantScheme::EqualProbable);
    const QuantiserModel loaded = quantiser_from_text(quantiser_to_text(model));
    CHECK(loaded.scheme == model.scheme);
    CHECK(loaded.d == model.d);
    CHECK(loaded.n == model.n);
    CHECK(loaded.degenerate == model.degenerate);
    REQUIRE(loaded.thresholds.size() == model.thresholds.size());
    for (std::size_t i = 0; i < model.thresholds.size(); ++i) {
        for (std::size_t j = 0; j < model.thresholds[i].size(); ++j) {
            CHECK(loaded.thresholds[i][j] == model.thresholds[i][j]);
        }
    }
    CHECK_THROWS_AS(quantiser_from_text("garbage"), FormatError);
}
