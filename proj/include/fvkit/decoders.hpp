// Polynomial reconstruction strategies for key retrieval and their analytic
// single-step success probabilities.
//
// Decoding radius at multiplicity s: the decoder interpolates a nonzero
// bivariate Q(X, Y) with a zero of multiplicity s at each of the u points
// under the (1, k-1)-weighted degree bound D, where D is the smallest value
// for which the monomial count
//     M(D) = sum_{j=0}^{floor(D/(k-1))} (D + 1 - j(k-1))
// exceeds the u*s*(s+1)/2 interpolation constraints. Every polynomial of
// degree < k agreeing with at least radius = floor(D/s) + 1 points is then a
// Y-root of Q. This is the interpolation-count radius, not the asymptotic
// sqrt(u(k-1)) bound, which fixed multiplicities do not reach in general.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "fvkit/gf2e.hpp"

namespace fv {

enum class DecoderStrategy : std::uint8_t {
    LagrangeIterated = 0,
    RsGaoIterated = 1,
    GsList = 2,
};

const char* to_string(DecoderStrategy s);

struct DecoderConfig {
    DecoderStrategy strategy = DecoderStrategy::GsList;
    std::uint64_t max_iterations = std::uint64_t{1} << 16;
    // Subset size c for the iterated strategies; 0 selects the full unlocking
    // set (a single deterministic pass for RS/GS). Lagrange always samples
    // k-subsets.
    std::uint32_t subset_size = 0;
    unsigned multiplicity = 1;  // GS interpolation multiplicity s >= 1
    std::uint64_t seed = 0;
    // When false, wall-clock fields stay zero and operation counts fall back
    // to iteration counts, which keeps reports bit-reproducible.
    bool measure_time = true;
};

struct DecodeOutcome {
    bool success = false;
    std::optional<Poly> key;
    std::uint64_t iterations = 0;
    double elapsed_seconds = 0.0;
    // Work expressed in units of one k-point interpolation; >= 1.
    double lagrange_units = 1.0;
};

// Accepts a candidate secret polynomial (degree < k); typically a hash gate.
using KeyVerifier = std::function<bool(const Poly&)>;

// Gao-style Reed-Solomon decoding: interpolate through all points, run the
// partial extended Euclidean algorithm against prod(X - x_i) down to degree
// ceil((u+k)/2), divide. Succeeds exactly when at most (u-k)/2 points
// disagree with the underlying polynomial. Deterministic; nullopt on failure.
std::optional<Poly> decode_gao(const Gf2e& f, std::span<const FePoint> points, unsigned k);

struct GsParams {
    unsigned radius = 0;       // guaranteed-agreement threshold
    unsigned wdeg_bound = 0;   // D
    unsigned list_degree = 0;  // maximal Y-degree L
};

GsParams gs_decoding_params(unsigned u, unsigned k, unsigned multiplicity);

// Guruswami-Sudan list decoding (Koetter interpolation, Roth-Ruckenstein
// root finding). Returns every polynomial of degree < k agreeing with at
// least gs_decoding_params(u, k, s).radius of the points. Requires k >= 2
// and distinct abscissae.
std::vector<Poly> decode_gs(const Gf2e& f, std::span<const FePoint> points, unsigned k,
                            unsigned multiplicity);

DecodeOutcome decode_lagrange_iterated(const Gf2e& f, std::span<const FePoint> set, unsigned k,
                                       const KeyVerifier& verify, const DecoderConfig& config);
DecodeOutcome decode_rs_iterated(const Gf2e& f, std::span<const FePoint> set, unsigned k,
                                 const KeyVerifier& verify, const DecoderConfig& config);
DecodeOutcome decode_gs_iterated(const Gf2e& f, std::span<const FePoint> set, unsigned k,
                                 const KeyVerifier& verify, const DecoderConfig& config);

// Dispatch on config.strategy.
DecodeOutcome run_decoder(const Gf2e& f, std::span<const FePoint> set, unsigned k,
                          const KeyVerifier& verify, const DecoderConfig& config);

// Analytic single-step success probabilities as exact rationals.
//   Lagrange: C(omega, k) / C(u, k)                     (c is ignored)
//   RS:       C(u,c)^-1 * sum_{j=ceil((c+k)/2)}^{min(omega,c)} C(omega,j) C(u-omega, c-j)
//   GS:       same sum starting at j = ceil(sqrt(c(k-1)))
// Preconditions: 0 <= omega <= u and k <= c <= u (violations raise
// std::invalid_argument).
mpq_class success_probability_exact(unsigned u, unsigned omega, unsigned k, unsigned c,
                                    DecoderStrategy strategy);
double success_probability(unsigned u, unsigned omega, unsigned k, unsigned c,
                           DecoderStrategy strategy);

// Seconds per single k-point interpolation in the given field, measured once
// per (field degree, k) by a small startup benchmark and cached. Reported in
// benchmark output so operation counts can be traced back to wall time.
double lagrange_unit_seconds(const Gf2e& f, unsigned k);

}  // namespace fv
