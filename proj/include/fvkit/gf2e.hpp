// Arithmetic over binary extension fields GF(2^e), 2 <= e <= 16, and
// univariate polynomials over them. This is the substrate for key binding,
// unlocking and all decoders.
//
// Fields are immutable after construction and safe for unrestricted parallel
// use. Multiplication runs on precomputed log/antilog tables; the reduction
// polynomial is fixed per degree (see default_reduction_poly) and recorded
// implicitly in serialized vault records through the field degree.
#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace fv {

class Rng;

// A field element value; the owning Gf2e instance defines its semantics.
// Invariant: value < field order.
using Fe = std::uint16_t;

using FePoint = std::pair<Fe, Fe>;

// Published primitive polynomial of the given degree, encoded as an
// (e+1)-bit integer with the constant term in bit 0. x generates the
// multiplicative group under each of these.
std::uint32_t default_reduction_poly(unsigned degree);

class Gf2e {
  public:
    explicit Gf2e(unsigned degree);
    Gf2e(unsigned degree, std::uint32_t reduction_poly);

    unsigned degree() const { return degree_; }
    std::uint32_t order() const { return order_; }
    std::uint32_t reduction_poly() const { return reduction_; }

    static Fe add(Fe a, Fe b) { return static_cast<Fe>(a ^ b); }

    Fe mul(Fe a, Fe b) const {
        if (a == 0 || b == 0) return 0;
        return exp_[static_cast<std::uint32_t>(log_[a]) + log_[b]];
    }

    // Throws std::domain_error on inversion of zero.
    Fe inv(Fe a) const;
    Fe div(Fe a, Fe b) const;
    Fe pow(Fe a, std::uint64_t n) const;

  private:
    unsigned degree_;
    std::uint32_t reduction_;
    std::uint32_t order_;
    std::vector<Fe> exp_;             // doubled antilog table, 2*(order-1) entries
    std::vector<std::uint16_t> log_;  // log_[0] is never read
};

// Shared immutable field instances keyed by degree (default reduction).
const Gf2e& field_for_degree(unsigned degree);

// Polynomial over GF(2^e) in canonical form: coefficient index equals degree
// and there are no trailing zero coefficients. The zero polynomial is empty
// and reports degree() == -1.
class Poly {
  public:
    Poly() = default;

    static Poly constant(Fe c) {
        Poly p;
        if (c != 0) p.coeff_.push_back(c);
        return p;
    }

    static Poly from_coefficients(std::vector<Fe> coeffs) {
        Poly p;
        p.coeff_ = std::move(coeffs);
        p.trim();
        return p;
    }

    static Poly monomial(unsigned degree, Fe c = 1) {
        Poly p;
        if (c != 0) {
            p.coeff_.assign(degree + 1, 0);
            p.coeff_.back() = c;
        }
        return p;
    }

    int degree() const { return static_cast<int>(coeff_.size()) - 1; }
    bool is_zero() const { return coeff_.empty(); }

    Fe coeff(std::size_t i) const { return i < coeff_.size() ? coeff_[i] : 0; }
    Fe leading() const { return coeff_.empty() ? 0 : coeff_.back(); }
    const std::vector<Fe>& coefficients() const { return coeff_; }

    bool operator==(const Poly&) const = default;

  private:
    friend Poly poly_add(const Poly&, const Poly&);
    void trim() {
        while (!coeff_.empty() && coeff_.back() == 0) coeff_.pop_back();
    }
    std::vector<Fe> coeff_;
};

Poly poly_add(const Poly& a, const Poly& b);
Poly poly_scale(const Gf2e& f, const Poly& p, Fe c);
Poly poly_mul(const Gf2e& f, const Poly& a, const Poly& b);

// Quotient and remainder; throws std::domain_error when den is zero.
std::pair<Poly, Poly> poly_divmod(const Gf2e& f, const Poly& num, const Poly& den);

// Horner evaluation.
Fe poly_eval(const Gf2e& f, const Poly& p, Fe x);

// Unique polynomial of degree < |points| through all points (Newton form).
// Throws std::invalid_argument on duplicate abscissae or empty input.
Poly lagrange_interpolate(const Gf2e& f, std::span<const FePoint> points);

// Monic polynomial of degree |roots| vanishing exactly on the given distinct
// roots; the empty product is the constant 1.
Poly poly_from_roots(const Gf2e& f, std::span<const Fe> roots);

struct EeaStep {
    Poly r, s, t;  // r = s*a + t*b
};

// Partial extended Euclidean algorithm on (a, b): walks the remainder
// sequence a, b, a mod b, ... and returns the first entry whose degree is
// below stop_degree, together with its Bezout coefficients.
EeaStep extended_euclid(const Gf2e& f, const Poly& a, const Poly& b, int stop_degree);

// Uniform degree-exact polynomial with no roots in the field, found by
// rejection sampling with exhaustive evaluation over all field elements.
Poly sample_rootless_poly(const Gf2e& f, unsigned degree, Rng& rng);

// All x in the field with p(x) == 0, ascending. Exhaustive scan.
std::vector<Fe> roots_in_field(const Gf2e& f, const Poly& p);

}  // namespace fv
