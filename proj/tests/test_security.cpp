#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "fvkit/rng.hpp"
#include "fvkit/security.hpp"

using namespace fv;

namespace {

// Two-pass reference implementation used as an independent check.
double decidability_reference(const std::vector<double>& g, const std::vector<double>& i) {
    auto mean = [](const std::vector<double>& xs) {
        double s = 0;
        for (double x : xs) s += x;
        return s / xs.size();
    };
    auto var = [&](const std::vector<double>& xs, double mu) {
        double s = 0;
        for (double x : xs) s += (x - mu) * (x - mu);
        return s / (xs.size() - 1);
    };
    const double mg = mean(g), mi = mean(i);
    return std::fabs(mg - mi) / std::sqrt(0.5 * (var(g, mg) + var(i, mi)));
}

}  // namespace

TEST_CASE("decidability") {
    SUBCASE("identical distributions give zero") {
        const std::vector<double> xs{1, 2, 3, 4};
        CHECK(decidability(xs, xs) == doctest::Approx(0.0));
    }
    SUBCASE("unit separation with unit variances gives one") {
        // Samples engineered for mean 0/1 and unbiased variance 1.
        const std::vector<double> g{-1, 0, 0, 1, -1, 1};  // mean 0
        const std::vector<double> i{0, 1, 1, 2, 0, 2};    // mean 1
        const double got = decidability(g, i);
        CHECK(got == doctest::Approx(1.0 / std::sqrt(0.8)).epsilon(1e-12));
        CHECK(decidability_reference(g, i) == doctest::Approx(got).epsilon(1e-12));
    }
    SUBCASE("fuzzed agreement with the reference implementation") {
        Rng rng(1);
        for (int it = 0; it < 300; ++it) {
            std::vector<double> g(2 + rng.below(40)), i(2 + rng.below(40));
            for (auto& x : g) x = rng.gaussian();
            for (auto& x : i) x = 1.5 + 2.0 * rng.gaussian();
            const double a = decidability(g, i);
            const double b = decidability_reference(g, i);
            CHECK(a == doctest::Approx(b).epsilon(1e-12));
        }
    }
    SUBCASE("errors") {
        const std::vector<double> xs{1, 1, 1};
        CHECK_THROWS_AS(decidability({}, xs), std::invalid_argument);
        CHECK_THROWS_AS(decidability(xs, xs), std::domain_error);
    }
}

TEST_CASE("equal error rate") {
    SUBCASE("perfect separation gives zero") {
        const std::vector<double> mated{0.1, 0.2, 0.3};
        const std::vector<double> nonmated{0.9, 1.0, 1.1};
        CHECK(equal_error_rate(mated, nonmated).eer == doctest::Approx(0.0));
    }
    SUBCASE("fully overlapping distributions sit near one half") {
        const std::vector<double> xs{1, 2, 3, 4, 5, 6, 7, 8};
        const double eer = equal_error_rate(xs, xs).eer;
        CHECK(eer > 0.3);
        CHECK(eer < 0.7);
    }
    SUBCASE("matches a brute-force sweep oracle on fuzzed scores") {
        Rng rng(2);
        for (int it = 0; it < 200; ++it) {
            std::vector<double> mated(3 + rng.below(30)), nonmated(3 + rng.below(30));
            for (auto& x : mated) x = rng.gaussian();
            for (auto& x : nonmated) x = 1.0 + rng.gaussian();
            const EerResult got = equal_error_rate(mated, nonmated);

            // Oracle: walk all pooled thresholds, find the sign change of
            // FNMR-FMR, interpolate linearly; identical convention, separate
            // code path.
            std::vector<double> ts;
            ts.insert(ts.end(), mated.begin(), mated.end());
            ts.insert(ts.end(), nonmated.begin(), nonmated.end());
            std::sort(ts.begin(), ts.end());
            ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
            auto fnmr_at = [&](double t) {
                double c = 0;
                for (double s : mated) c += s > t ? 1 : 0;
                return c / mated.size();
            };
            auto fmr_at = [&](double t) {
                double c = 0;
                for (double s : nonmated) c += s <= t ? 1 : 0;
                return c / nonmated.size();
            };
            double prev_t = ts.front() - 1.0;
            double expected = -1.0;
            for (const double t : ts) {
                const double gap = fnmr_at(t) - fmr_at(t);
                if (gap <= 0.0) {
                    const double pg = fnmr_at(prev_t) - fmr_at(prev_t);
                    const double alpha = pg / (pg - gap);
                    expected = fnmr_at(prev_t) + alpha * (fnmr_at(t) - fnmr_at(prev_t));
                    break;
                }
                prev_t = t;
            }
            REQUIRE(expected >= 0.0);
            CHECK(got.eer == doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("vault trial aggregation") {
    std::vector<TrialOutcome> trials;
    for (int i = 0; i < 100; ++i) {
        trials.push_back({true, 8, DecoderStrategy::GsList, i != 0, 0.002, 2.0});
    }
    for (int i = 0; i < 10000; ++i) {
        trials.push_back({false, 8, DecoderStrategy::GsList, false, 0.001, 4.0});
    }
    const auto rows = error_rates(trials);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].fnmr == doctest::Approx(0.01));
    CHECK(rows[0].fmr == doctest::Approx(0.0));
    CHECK(rows[0].gmr == doctest::Approx(0.99));
    CHECK(rows[0].mean_seconds_mated == doctest::Approx(0.002));
    CHECK(rows[0].mean_seconds_nonmated == doctest::Approx(0.001));
    CHECK(rows[0].mean_units_nonmated == doctest::Approx(4.0));
    CHECK_THROWS_AS(error_rates(std::vector<TrialOutcome>{}), std::invalid_argument);
    std::vector<TrialOutcome> only_mated{{true, 8, DecoderStrategy::GsList, true, 0.0, 1.0}};
    CHECK_THROWS_AS(error_rates(only_mated), std::invalid_argument);
}

TEST_CASE("false-accept security in bits") {
    CHECK(fas_bits(0.5, 1.0) == doctest::Approx(0.0));
    CHECK(fas_bits(0.01, 1024.0) == doctest::Approx(16.108).epsilon(1e-3));
    SUBCASE("strictly decreasing in the match rate") {
        double prev = fas_bits(0.001, 64.0);
        for (const double fmr : {0.01, 0.05, 0.2, 0.5, 0.9}) {
            const double bits = fas_bits(fmr, 64.0);
            CHECK(bits < prev);
            prev = bits;
        }
    }
    SUBCASE("matches a geometric-trials simulation") {
        Rng rng(3);
        const double fmr = 0.05, ops = 16.0;
        const int trials = 20000;
        // Median number of attempts scaled by per-attempt work.
        std::vector<double> attempts(trials);
        for (auto& a : attempts) {
            int n = 1;
            while (rng.unit_real() >= fmr) ++n;
            a = n * ops;
        }
        std::sort(attempts.begin(), attempts.end());
        const double median = attempts[trials / 2];
        CHECK(std::log2(median) == doctest::Approx(fas_bits(fmr, ops)).epsilon(0.08));
    }
    SUBCASE("domain errors") {
        CHECK_THROWS_AS(fas_bits(0.0, 10.0), std::domain_error);
        CHECK_THROWS_AS(fas_bits(1.0, 10.0), std::domain_error);
        CHECK_THROWS_AS(fas_bits(0.5, 0.0), std::invalid_argument);
    }
}

TEST_CASE("false-accept security extrapolation") {
    SUBCASE("linear extension of the last two anchors") {
        std::vector<FasEntry> series{{100, 10.0, false}, {110, 12.0, false}, {120, {}, false}};
        const auto out = fas_extrapolate(series);
        REQUIRE(out.size() == 3);
        CHECK(out[2].bits.has_value());
        CHECK(*out[2].bits == doctest::Approx(14.0));
        CHECK(out[2].extrapolated);
        CHECK(!out[0].extrapolated);
    }
    SUBCASE("fully estimable series is unchanged") {
        std::vector<FasEntry> series{{10, 1.0, false}, {20, 2.0, false}};
        const auto out = fas_extrapolate(series);
        CHECK(!out[0].extrapolated);
        CHECK(!out[1].extrapolated);
        CHECK(*out[1].bits == doctest::Approx(2.0));
    }
    SUBCASE("extrapolated values inherit a non-negative slope") {
        std::vector<FasEntry> series{{10, 5.0, false}, {20, 8.0, false}, {30, {}, false},
                                     {40, {}, false}};
        const auto out = fas_extrapolate(series);
        REQUIRE(out[2].bits.has_value());
        REQUIRE(out[3].bits.has_value());
        CHECK(*out[2].bits <= *out[3].bits);
        CHECK(*out[2].bits >= 8.0);
    }
    SUBCASE("fewer than two anchors stays empty") {
        std::vector<FasEntry> series{{10, 5.0, false}, {20, {}, false}};
        const auto out = fas_extrapolate(series);
        CHECK(!out[1].bits.has_value());
    }
}

TEST_CASE("brute-force floor") {
    CHECK(bfs_floor_bits(384) == 384);
    CHECK(bfs_floor_bits(1) == 1);
    for (unsigned k = 1; k < 64; ++k) CHECK(bfs_floor_bits(k + 1) > bfs_floor_bits(k));
    CHECK_THROWS_AS(bfs_floor_bits(0), std::invalid_argument);
}

TEST_CASE("linkage probability: exact values") {
    SUBCASE("enumeration oracle at rho=4") {
        // All pairs of 2-subsets of a 4-element universe; count pairs whose
        // overlap reaches ceil((2+0)/2) = 1.
        std::vector<std::set<int>> subsets;
        for (int a = 0; a < 4; ++a) {
            for (int b = a + 1; b < 4; ++b) subsets.push_back({a, b});
        }
        int linked = 0, total = 0;
        for (const auto& s1 : subsets) {
            for (const auto& s2 : subsets) {
                ++total;
                int overlap = 0;
                for (int v : s1) overlap += s2.count(v);
                if (overlap >= 1) ++linked;
            }
        }
        CHECK(mpq_class(linked, total) == linkage_probability_exact(4, 2, 2, 0));
        CHECK(linkage_probability_exact(4, 2, 2, 0) == mpq_class(5, 6));
    }
    SUBCASE("degrees above the set size make linkage impossible") {
        CHECK(linkage_probability_exact(16, 4, 4, 5) == 0);
        CHECK(linkage_probability_exact(100, 10, 8, 20) == 0);
    }
    SUBCASE("the standard operating point is negligible") {
        const mpq_class p = linkage_probability_exact(2048, 768, 768, 384);
        mpq_class threshold(1);
        threshold /= mpq_class(mpz_class(1) << 80);
        CHECK(p > 0);
        CHECK(p < threshold);
    }
    SUBCASE("monotone non-increasing in k and in the universe size") {
        mpq_class prev = 2;
        for (const unsigned k : {0u, 2u, 4u, 6u, 8u}) {
            const mpq_class p = linkage_probability_exact(32, 12, 10, k);
            CHECK(p <= prev);
            prev = p;
        }
        prev = 2;
        for (const unsigned rho : {24u, 32u, 48u, 64u, 128u}) {
            const mpq_class p = linkage_probability_exact(rho, 12, 10, 2);
            CHECK(p <= prev);
            prev = p;
        }
    }
    SUBCASE("argument order does not matter") {
        CHECK(linkage_probability_exact(32, 12, 9, 3) == linkage_probability_exact(32, 9, 12, 3));
    }
    SUBCASE("range errors") {
        CHECK_THROWS_AS(linkage_probability_exact(8, 9, 2, 1), std::invalid_argument);
    }
}

TEST_CASE("random re-mappings fulfil the overlap condition at the analytic rate") {
    // Independent bijections turn both sets into uniform random subsets; the
    // fraction of pairs whose overlap reaches ceil((|P|+k)/2) must follow the
    // exact hypergeometric tail.
    const Gf2e& f = field_for_degree(5);  // universe of 32
    Rng rng(7);
    const std::uint32_t size_p = 12, size_p2 = 10, k = 0;
    const double p = linkage_probability(f.order(), size_p, size_p2, k);
    REQUIRE(p > 0.02);
    REQUIRE(p < 0.98);
    const std::uint32_t threshold = (size_p + k + 1) / 2;
    const int trials = 10000;
    int linked = 0;
    const auto base1 = sample_subset(rng, f.order(), size_p);
    const auto base2 = sample_subset(rng, f.order(), size_p2);
    for (int it = 0; it < trials; ++it) {
        Digest seed1{}, seed2{};
        for (auto& b : seed1) b = static_cast<std::uint8_t>(rng.below(256));
        for (auto& b : seed2) b = static_cast<std::uint8_t>(rng.below(256));
        const Bijection s1 = derive_bijection(seed1, f);
        const Bijection s2 = derive_bijection(seed2, f);
        std::set<Fe> m1, m2;
        for (const auto v : base1) m1.insert(s1.apply(static_cast<Fe>(v)));
        for (const auto v : base2) m2.insert(s2.apply(static_cast<Fe>(v)));
        std::size_t overlap = 0;
        for (const auto v : m1) overlap += m2.count(v);
        if (overlap >= threshold) ++linked;
    }
    const double rate = static_cast<double>(linked) / trials;
    const double sigma = std::sqrt(p * (1 - p) / trials);
    CHECK(std::abs(rate - p) <= 3 * sigma);
}

namespace {

struct AttackFixture {
    const Gf2e& f = field_for_degree(4);
    std::uint32_t nm = 16;

    // Improved-vault polynomial over an explicit feature set, identity
    // mapping (no bijection), with degree-hiding blinding.
    std::pair<Poly, Poly> make_vault(const std::vector<Fe>& set, unsigned k, Rng& rng) {
        std::vector<Fe> coeffs(k);
        for (auto& c : coeffs) c = static_cast<Fe>(rng.below(f.order()));
        const Poly kappa = Poly::from_coefficients(coeffs);
        const Poly locator = poly_from_roots(f, set);
        const Poly blind =
            sample_rootless_poly(f, nm - static_cast<std::uint32_t>(set.size()), rng);
        return {poly_add(kappa, poly_mul(f, blind, locator)), kappa};
    }
};

}  // namespace

TEST_CASE("correlation attack recovers the overlap of unprotected related vaults") {
    AttackFixture fx;
    Rng rng(11);
    SUBCASE("same set stored twice") {
        const unsigned k = 2;
        std::vector<Fe> set{1, 2, 4, 5, 7, 8, 9, 10, 11, 13, 14, 15, 3};  // 13 elements
        auto [va, ka] = fx.make_vault(set, k, rng);
        auto [vb, kb] = fx.make_vault(set, k, rng);
        const CorrelationResult res = correlation_attack(fx.f, va, vb, k);
        REQUIRE(res.linked);
        std::vector<Fe> expected = set;
        std::sort(expected.begin(), expected.end());
        CHECK(res.common_elements == expected);
        CHECK(res.key_a == ka);
        CHECK(res.key_b == kb);
    }
    SUBCASE("overlapping but distinct sets") {
        const unsigned k = 2;
        // Overlap 12 >= ceil((16+2)/2) = 9 against the blinded degree 16.
        std::vector<Fe> common{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
        std::vector<Fe> set_a = common;
        set_a.push_back(12);
        std::vector<Fe> set_b = common;
        set_b.push_back(13);
        set_b.push_back(14);
        auto [va, ka] = fx.make_vault(set_a, k, rng);
        auto [vb, kb] = fx.make_vault(set_b, k, rng);
        const CorrelationResult res = correlation_attack(fx.f, va, vb, k);
        REQUIRE(res.linked);
        CHECK(res.common_elements == common);
        CHECK(res.key_a == ka);
        CHECK(res.key_b == kb);
    }
    SUBCASE("unblinded related vaults with distinct degrees") {
        const unsigned k = 2;
        std::vector<Fe> common{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
        std::vector<Fe> set_a = common;
        set_a.push_back(12);
        set_a.push_back(13);
        std::vector<Fe> set_b = common;
        set_b.push_back(14);
        std::vector<Fe> ca(k), cb(k);
        for (auto& c : ca) c = static_cast<Fe>(rng.below(16));
        for (auto& c : cb) c = static_cast<Fe>(rng.below(16));
        const Poly va = poly_add(Poly::from_coefficients(ca), poly_from_roots(fx.f, set_a));
        const Poly vb = poly_add(Poly::from_coefficients(cb), poly_from_roots(fx.f, set_b));
        const CorrelationResult res = correlation_attack(fx.f, va, vb, k);
        REQUIRE(res.linked);
        CHECK(res.common_elements == common);
    }
}

TEST_CASE("correlation attack fails on disjoint sets") {
    AttackFixture fx;
    Rng rng(13);
    std::vector<Fe> set_a{0, 1, 2, 3, 4, 5, 6};
    std::vector<Fe> set_b{8, 9, 10, 11, 12, 13, 14};
    for (int it = 0; it < 50; ++it) {
        auto [va, ka] = fx.make_vault(set_a, 2, rng);
        auto [vb, kb] = fx.make_vault(set_b, 2, rng);
        CHECK(!correlation_attack(fx.f, va, vb, 2).linked);
    }
}

TEST_CASE("record-specific bijections defeat the correlation attack") {
    Rng rng(17);
    const VaultParams params = make_vault_params(4, 4, BinScheme::Lssc, 2);  // nm = 12
    FeatureSet set{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    int linked = 0;
    for (int it = 0; it < 1000; ++it) {
        const VaultRecord a = bind_vault(set, params, rng).record;
        const VaultRecord b = bind_vault(set, params, rng).record;
        if (correlation_attack(a, b, params.k).linked) ++linked;
    }
    CHECK(linked == 0);
}

TEST_CASE("correlation attack validates record parameters") {
    Rng rng(19);
    const VaultParams pa = make_vault_params(4, 4, BinScheme::Lssc, 2);
    const VaultParams pb = make_vault_params(8, 4, BinScheme::Lssc, 2);
    const VaultRecord a = bind_vault({0, 1, 2, 3, 4, 5}, pa, rng).record;
    const VaultRecord b = bind_vault({0, 1, 2, 3, 4, 5}, pb, rng).record;
    CHECK_THROWS_AS(correlation_attack(a, b, 2), std::invalid_argument);
}
