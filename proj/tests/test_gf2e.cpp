#include "doctest.h"

#include <algorithm>
#include <set>

#include "fvkit/gf2e.hpp"
#include "fvkit/rng.hpp"

using namespace fv;

namespace {

// Independent multiplication route: carry-less product reduced bit by bit.
Fe slow_mul(unsigned degree, std::uint32_t reduction, Fe a, Fe b) {
    std::uint32_t acc = 0;
    std::uint32_t x = a;
    std::uint32_t y = b;
    while (y != 0) {
        if (y & 1u) acc ^= x;
        y >>= 1;
        x <<= 1;
        if (x & (1u << degree)) x ^= reduction;
    }
    return static_cast<Fe>(acc);
}

Poly random_poly(Rng& rng, const Gf2e& f, int max_degree) {
    std::vector<Fe> c(static_cast<std::size_t>(max_degree) + 1);
    for (auto& v : c) v = static_cast<Fe>(rng.below(f.order()));
    return Poly::from_coefficients(std::move(c));
}

}  // namespace

TEST_CASE("table multiplication matches the bitwise route exhaustively") {
    for (const unsigned e : {4u, 8u}) {
        const Gf2e& f = field_for_degree(e);
        for (std::uint32_t a = 0; a < f.order(); ++a) {
            for (std::uint32_t b = 0; b < f.order(); ++b) {
                REQUIRE(f.mul(static_cast<Fe>(a), static_cast<Fe>(b)) ==
                        slow_mul(e, f.reduction_poly(), static_cast<Fe>(a), static_cast<Fe>(b)));
            }
        }
    }
}

TEST_CASE("field arithmetic basics") {
    const Gf2e& f = field_for_degree(4);
    CHECK(f.mul(0x2, 0x9) == 0x1);
    CHECK(f.inv(0x1) == 0x1);
    for (std::uint32_t a = 0; a < 16; ++a) {
        CHECK(Gf2e::add(static_cast<Fe>(a), static_cast<Fe>(a)) == 0);
    }
    CHECK_THROWS_AS(f.inv(0), std::domain_error);
    CHECK_THROWS_AS(f.div(3, 0), std::domain_error);
}

TEST_CASE("field axioms hold") {
    const Gf2e& f4 = field_for_degree(4);
    for (std::uint32_t a = 0; a < 16; ++a) {
        for (std::uint32_t b = 0; b < 16; ++b) {
            for (std::uint32_t c = 0; c < 16; ++c) {
                const Fe fa = static_cast<Fe>(a), fb = static_cast<Fe>(b), fc = static_cast<Fe>(c);
                CHECK(f4.mul(f4.mul(fa, fb), fc) == f4.mul(fa, f4.mul(fb, fc)));
                CHECK(f4.mul(fa, Gf2e::add(fb, fc)) ==
                      Gf2e::add(f4.mul(fa, fb), f4.mul(fa, fc)));
            }
        }
    }
    for (const unsigned e : {4u, 8u}) {
        const Gf2e& f = field_for_degree(e);
        for (std::uint32_t a = 1; a < f.order(); ++a) {
            CHECK(f.mul(static_cast<Fe>(a), f.inv(static_cast<Fe>(a))) == 1);
        }
    }
    // Fuzzed axioms in a larger field.
    const Gf2e& f11 = field_for_degree(11);
    Rng rng(11);
    for (int it = 0; it < 1000; ++it) {
        const Fe a = static_cast<Fe>(rng.below(f11.order()));
        const Fe b = static_cast<Fe>(rng.below(f11.order()));
        const Fe c = static_cast<Fe>(rng.below(f11.order()));
        CHECK(f11.mul(f11.mul(a, b), c) == f11.mul(a, f11.mul(b, c)));
        CHECK(f11.mul(a, Gf2e::add(b, c)) == Gf2e::add(f11.mul(a, b), f11.mul(a, c)));
        if (a != 0) CHECK(f11.div(f11.mul(a, b), a) == b);
    }
}

TEST_CASE("polynomial evaluation") {
    const Gf2e& f = field_for_degree(4);
    CHECK(poly_eval(f, Poly::constant(9), 5) == 9);
    // X + a has root a.
    for (std::uint32_t a = 0; a < 16; ++a) {
        const Poly p = Poly::from_coefficients({static_cast<Fe>(a), 1});
        CHECK(poly_eval(f, p, static_cast<Fe>(a)) == 0);
    }
    CHECK(poly_eval(f, Poly::from_coefficients({1, 1, 1}), 0x2) == 0x7);
}

TEST_CASE("interpolation recovers polynomials") {
    const Gf2e& f = field_for_degree(4);
    SUBCASE("constant through two points") {
        std::vector<FePoint> pts{{1, 7}, {2, 7}};
        CHECK(lagrange_interpolate(f, pts) == Poly::constant(7));
    }
    SUBCASE("identity function") {
        std::vector<FePoint> pts{{1, 1}, {2, 2}, {3, 3}};
        CHECK(lagrange_interpolate(f, pts) == Poly::from_coefficients({0, 1}));
    }
    SUBCASE("duplicate abscissae rejected") {
        std::vector<FePoint> pts{{1, 1}, {1, 2}};
        CHECK_THROWS_AS(lagrange_interpolate(f, pts), std::invalid_argument);
    }
    SUBCASE("round trip over random secrets") {
        for (const unsigned e : {4u, 8u}) {
            const Gf2e& field = field_for_degree(e);
            Rng rng(17 + e);
            for (int it = 0; it < 500; ++it) {
                const unsigned k = 1 + rng.below(std::min<std::uint32_t>(10, field.order() - 1));
                std::vector<Fe> coeffs(k);
                for (auto& c : coeffs) c = static_cast<Fe>(rng.below(field.order()));
                const Poly kappa = Poly::from_coefficients(coeffs);
                std::vector<FePoint> pts;
                for (const auto x : sample_subset(rng, field.order(), k)) {
                    pts.emplace_back(static_cast<Fe>(x),
                                     poly_eval(field, kappa, static_cast<Fe>(x)));
                }
                REQUIRE(lagrange_interpolate(field, pts) == kappa);
            }
        }
    }
}

TEST_CASE("poly_from_roots") {
    const Gf2e& f = field_for_degree(4);
    SUBCASE("singleton gives X + a") {
        const std::vector<Fe> roots{0xA};
        CHECK(poly_from_roots(f, roots) == Poly::from_coefficients({0xA, 1}));
    }
    SUBCASE("empty product is one") {
        CHECK(poly_from_roots(f, {}) == Poly::constant(1));
    }
    SUBCASE("vanishes exactly on the root set, exhaustively") {
        Rng rng(5);
        for (int it = 0; it < 50; ++it) {
            const unsigned t = 1 + rng.below(15);
            auto indices = sample_subset(rng, 16, t);
            std::vector<Fe> roots(indices.begin(), indices.end());
            const Poly p = poly_from_roots(f, roots);
            CHECK(p.degree() == static_cast<int>(t));
            CHECK(p.leading() == 1);
            std::set<Fe> root_set(roots.begin(), roots.end());
            for (std::uint32_t x = 0; x < 16; ++x) {
                const bool is_root = poly_eval(f, p, static_cast<Fe>(x)) == 0;
                CHECK(is_root == (root_set.count(static_cast<Fe>(x)) > 0));
            }
        }
    }
}

TEST_CASE("partial extended euclidean algorithm") {
    const Gf2e& f = field_for_degree(8);
    Rng rng(23);
    SUBCASE("equal inputs reach a zero remainder") {
        const Poly a = random_poly(rng, f, 6);
        const EeaStep step = extended_euclid(f, a, a, a.degree());
        CHECK(step.r.is_zero());
        CHECK(poly_add(poly_mul(f, step.s, a), poly_mul(f, step.t, a)) == step.r);
    }
    SUBCASE("high stop degree returns the first operand untouched") {
        const Poly a = random_poly(rng, f, 6);
        Poly b = random_poly(rng, f, 4);
        const EeaStep step = extended_euclid(f, a, b, a.degree() + 1);
        CHECK(step.r == a);
        CHECK(step.s == Poly::constant(1));
        CHECK(step.t.is_zero());
    }
    SUBCASE("Bezout identity holds on fuzzed inputs") {
        for (int it = 0; it < 1000; ++it) {
            const Poly a = random_poly(rng, f, 2 + static_cast<int>(rng.below(12)));
            const Poly b = random_poly(rng, f, 1 + static_cast<int>(rng.below(10)));
            if (a.is_zero() && b.is_zero()) continue;
            const int stop = static_cast<int>(rng.below(10));
            const EeaStep step = extended_euclid(f, a, b, stop);
            CHECK(step.r.degree() < std::max(stop, std::min(a.degree(), b.degree()) + 1));
            REQUIRE(poly_add(poly_mul(f, step.s, a), poly_mul(f, step.t, b)) == step.r);
        }
    }
}

TEST_CASE("rootless polynomial sampling") {
    const Gf2e& f = field_for_degree(4);
    Rng rng(31);
    SUBCASE("degree zero gives a nonzero constant") {
        const Poly p = sample_rootless_poly(f, 0, rng);
        CHECK(p.degree() == 0);
        CHECK(p.leading() != 0);
    }
    SUBCASE("degree-exact and rootless over many samples") {
        for (int it = 0; it < 1000; ++it) {
            const unsigned degree = rng.below(8);
            const Poly p = sample_rootless_poly(f, degree, rng);
            REQUIRE(p.degree() == static_cast<int>(degree));
            REQUIRE(p.leading() != 0);
            CHECK(roots_in_field(f, p).empty());
        }
    }
}

TEST_CASE("polynomial division invariants") {
    const Gf2e& f = field_for_degree(8);
    Rng rng(41);
    for (int it = 0; it < 500; ++it) {
        const Poly num = random_poly(rng, f, static_cast<int>(rng.below(14)));
        Poly den = random_poly(rng, f, static_cast<int>(rng.below(8)));
        if (den.is_zero()) den = Poly::constant(1);
        const auto [q, r] = poly_divmod(f, num, den);
        const bool remainder_ok = r.degree() < den.degree() || r.is_zero();
        CHECK(remainder_ok);
        CHECK(poly_add(poly_mul(f, q, den), r) == num);
    }
    CHECK_THROWS_AS(poly_divmod(f, Poly::constant(1), Poly{}), std::domain_error);
}

TEST_CASE("default reduction polynomials are valid for every supported degree") {
    for (unsigned e = 2; e <= 16; ++e) {
        const Gf2e f(e);  // construction validates irreducibility and the generator
        CHECK(f.order() == (1u << e));
        CHECK(f.mul(1, 3 % f.order()) == 3 % f.order());
    }
    CHECK_THROWS_AS(Gf2e(1), std::invalid_argument);
    CHECK_THROWS_AS(Gf2e(17), std::invalid_argument);
    // x^4 + x^3 + x^2 + x + 1 is irreducible but x is not a generator.
    CHECK_THROWS_AS(Gf2e(4, 0x1F), std::invalid_argument);
}
