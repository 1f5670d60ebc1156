#include "fvkit/gf2e.hpp"

#include <algorithm>
#include <array>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "fvkit/rng.hpp"

namespace fv {

std::uint32_t default_reduction_poly(unsigned degree) {
    // Primitive polynomials, constant term in bit 0, degree term in bit e.
    static constexpr std::array<std::uint32_t, 17> kTable = {
        0,       0,      0x7,    0xB,    0x13,   0x25,   0x43,    0x89,  0x11D,
        0x211,   0x409,  0x805,  0x1053, 0x201B, 0x4443, 0x8003,  0x1100B,
    };
    if (degree < 2 || degree > 16) {
        throw std::invalid_argument("field degree must be in [2, 16], got " +
                                    std::to_string(degree));
    }
    return kTable[degree];
}

Gf2e::Gf2e(unsigned degree) : Gf2e(degree, default_reduction_poly(degree)) {}

Gf2e::Gf2e(unsigned degree, std::uint32_t reduction_poly)
    : degree_(degree), reduction_(reduction_poly), order_(1u << degree) {
    if (degree < 2 || degree > 16) {
        throw std::invalid_argument("field degree must be in [2, 16]");
    }
    if ((reduction_ >> degree) != 1u || (reduction_ & 1u) == 0) {
        throw std::invalid_argument("reduction polynomial must be monic of the field degree "
                                    "with nonzero constant term");
    }
    exp_.assign(2 * (order_ - 1), 0);
    log_.assign(order_, 0);
    std::uint32_t x = 1;
    for (std::uint32_t i = 0; i < order_ - 1; ++i) {
        if (i != 0 && x == 1) {
            throw std::invalid_argument("reduction polynomial does not make x a generator");
        }
        exp_[i] = static_cast<Fe>(x);
        exp_[i + order_ - 1] = static_cast<Fe>(x);
        log_[x] = static_cast<std::uint16_t>(i);
        x <<= 1;
        if (x & order_) x ^= reduction_;
    }
    if (x != 1) {
        throw std::invalid_argument("reduction polynomial is not irreducible");
    }
}

Fe Gf2e::inv(Fe a) const {
    if (a == 0) throw std::domain_error("inversion of zero in GF(2^e)");
    return exp_[order_ - 1 - log_[a]];
}

Fe Gf2e::div(Fe a, Fe b) const {
    if (b == 0) throw std::domain_error("division by zero in GF(2^e)");
    if (a == 0) return 0;
    return exp_[static_cast<std::uint32_t>(log_[a]) + order_ - 1 - log_[b]];
}

Fe Gf2e::pow(Fe a, std::uint64_t n) const {
    if (a == 0) return n == 0 ? Fe{1} : Fe{0};
    const std::uint64_t e = (static_cast<std::uint64_t>(log_[a]) * (n % (order_ - 1))) %
                            (order_ - 1);
    return exp_[e];
}

const Gf2e& field_for_degree(unsigned degree) {
    if (degree < 2 || degree > 16) {
        throw std::invalid_argument("field degree must be in [2, 16]");
    }
    static std::array<std::unique_ptr<Gf2e>, 17> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    if (!cache[degree]) cache[degree] = std::make_unique<Gf2e>(degree);
    return *cache[degree];
}

Poly poly_add(const Poly& a, const Poly& b) {
    const auto& ca = a.coefficients();
    const auto& cb = b.coefficients();
    std::vector<Fe> out(std::max(ca.size(), cb.size()), 0);
    for (std::size_t i = 0; i < ca.size(); ++i) out[i] = ca[i];
    for (std::size_t i = 0; i < cb.size(); ++i) out[i] = static_cast<Fe>(out[i] ^ cb[i]);
    return Poly::from_coefficients(std::move(out));
}

Poly poly_scale(const Gf2e& f, const Poly& p, Fe c) {
    if (c == 0) return Poly{};
    std::vector<Fe> out(p.coefficients());
    for (auto& v : out) v = f.mul(v, c);
    return Poly::from_coefficients(std::move(out));
}

Poly poly_mul(const Gf2e& f, const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly{};
    const auto& ca = a.coefficients();
    const auto& cb = b.coefficients();
    std::vector<Fe> out(ca.size() + cb.size() - 1, 0);
    for (std::size_t i = 0; i < ca.size(); ++i) {
        const Fe ai = ca[i];
        if (ai == 0) continue;
        for (std::size_t j = 0; j < cb.size(); ++j) {
            out[i + j] = static_cast<Fe>(out[i + j] ^ f.mul(ai, cb[j]));
        }
    }
    return Poly::from_coefficients(std::move(out));
}

std::pair<Poly, Poly> poly_divmod(const Gf2e& f, const Poly& num, const Poly& den) {
    if (den.is_zero()) throw std::domain_error("polynomial division by zero");
    if (num.degree() < den.degree()) return {Poly{}, num};
    std::vector<Fe> rem(num.coefficients());
    const auto& d = den.coefficients();
    const Fe lead_inv = f.inv(den.leading());
    const std::size_t dn = d.size();
    std::vector<Fe> quot(rem.size() - dn + 1, 0);
    for (std::size_t i = rem.size() - 1; i + 1 >= dn; --i) {
        const Fe c = f.mul(rem[i], lead_inv);
        if (c != 0) {
            quot[i - dn + 1] = c;
            for (std::size_t j = 0; j < dn; ++j) {
                rem[i - dn + 1 + j] = static_cast<Fe>(rem[i - dn + 1 + j] ^ f.mul(c, d[j]));
            }
        }
        if (i + 1 == dn) break;
    }
    return {Poly::from_coefficients(std::move(quot)), Poly::from_coefficients(std::move(rem))};
}

Fe poly_eval(const Gf2e& f, const Poly& p, Fe x) {
    Fe acc = 0;
    const auto& c = p.coefficients();
    for (std::size_t i = c.size(); i-- > 0;) {
        acc = static_cast<Fe>(f.mul(acc, x) ^ c[i]);
    }
    return acc;
}

Poly lagrange_interpolate(const Gf2e& f, std::span<const FePoint> points) {
    if (points.empty()) throw std::invalid_argument("interpolation needs at least one point");
    const std::size_t n = points.size();
    {
        std::vector<Fe> xs(n);
        for (std::size_t i = 0; i < n; ++i) xs[i] = points[i].first;
        std::sort(xs.begin(), xs.end());
        if (std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
            throw std::invalid_argument("interpolation abscissae must be distinct");
        }
    }
    // Newton divided differences; subtraction is XOR in characteristic 2.
    std::vector<Fe> coef(n);
    for (std::size_t i = 0; i < n; ++i) coef[i] = points[i].second;
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = n - 1; i >= j; --i) {
            const Fe dx = static_cast<Fe>(points[i].first ^ points[i - j].first);
            coef[i] = f.mul(static_cast<Fe>(coef[i] ^ coef[i - 1]), f.inv(dx));
            if (i == j) break;
        }
    }
    // Expand the Newton form from the highest term down.
    std::vector<Fe> acc;
    acc.reserve(n);
    acc.push_back(coef[n - 1]);
    for (std::size_t i = n - 1; i-- > 0;) {
        // acc = acc*(X + x_i) + coef[i]
        acc.push_back(0);
        for (std::size_t j = acc.size() - 1; j > 0; --j) {
            acc[j] = static_cast<Fe>(acc[j - 1] ^ f.mul(acc[j], points[i].first));
        }
        acc[0] = static_cast<Fe>(f.mul(acc[0], points[i].first) ^ coef[i]);
    }
    return Poly::from_coefficients(std::move(acc));
}

Poly poly_from_roots(const Gf2e& f, std::span<const Fe> roots) {
    std::vector<Fe> acc{1};
    acc.reserve(roots.size() + 1);
    for (const Fe r : roots) {
        acc.push_back(0);
        for (std::size_t j = acc.size() - 1; j > 0; --j) {
            acc[j] = static_cast<Fe>(acc[j - 1] ^ f.mul(acc[j], r));
        }
        acc[0] = f.mul(acc[0], r);
    }
    return Poly::from_coefficients(std::move(acc));
}

EeaStep extended_euclid(const Gf2e& f, const Poly& a, const Poly& b, int stop_degree) {
    if (a.is_zero() && b.is_zero()) {
        throw std::invalid_argument("extended_euclid: both inputs are zero");
    }
    EeaStep cur{a, Poly::constant(1), Poly{}};
    EeaStep nxt{b, Poly{}, Poly::constant(1)};
    while (cur.r.degree() >= stop_degree) {
        if (nxt.r.is_zero()) return nxt;
        auto [q, rem] = poly_divmod(f, cur.r, nxt.r);
        EeaStep after{std::move(rem), poly_add(cur.s, poly_mul(f, q, nxt.s)),
                      poly_add(cur.t, poly_mul(f, q, nxt.t))};
        cur = std::move(nxt);
        nxt = std::move(after);
    }
    return cur;
}

Poly sample_rootless_poly(const Gf2e& f, unsigned degree, Rng& rng) {
    // Roughly a third of degree-exact polynomials have no roots in the field,
    // so the rejection loop is short.
    const std::uint32_t order = f.order();
    for (;;) {
        std::vector<Fe> c(degree + 1);
        for (unsigned i = 0; i < degree; ++i) c[i] = static_cast<Fe>(rng.below(order));
        c[degree] = static_cast<Fe>(1 + rng.below(order - 1));
        Poly candidate = Poly::from_coefficients(std::move(c));
        bool rootless = true;
        for (std::uint32_t x = 0; x < order; ++x) {
            if (poly_eval(f, candidate, static_cast<Fe>(x)) == 0) {
                rootless = false;
                break;
            }
        }
        if (rootless) return candidate;
    }
}

std::vector<Fe> roots_in_field(const Gf2e& f, const Poly& p) {
    std::vector<Fe> out;
    if (p.is_zero()) return out;
    for (std::uint32_t x = 0; x < f.order(); ++x) {
        if (poly_eval(f, p, static_cast<Fe>(x)) == 0) out.push_back(static_cast<Fe>(x));
    }
    return out;
}

}  // namespace fv
