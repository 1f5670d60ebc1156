// Security and error-rate analyses: decidability, EER, vault trial rates,
// false-accept security in bits, brute-force floor, exact linkage
// probability, and the record-multiplicity correlation attack as an
// executable check.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "fvkit/decoders.hpp"
#include "fvkit/gf2e.hpp"
#include "fvkit/vault.hpp"

namespace fv {

// |mu_g - mu_i| / sqrt((var_g + var_i)/2) with unbiased sample variances.
// Throws std::invalid_argument on an empty class and std::domain_error when
// the pooled variance is zero.
double decidability(std::span<const double> mated, std::span<const double> nonmated);

// Scores are distances: small for mated pairs. A comparison at threshold t
// matches when score <= t. The EER is read off the crossing of the linearly
// interpolated FNMR/FMR curves over the pooled score thresholds.
struct EerResult {
    double eer = 0.0;
    double threshold = 0.0;
};
EerResult equal_error_rate(std::span<const double> mated, std::span<const double> nonmated);

// One decode attempt inside a benchmark run.
struct TrialOutcome {
    bool mated = false;
    unsigned k = 0;
    DecoderStrategy decoder = DecoderStrategy::GsList;
    bool success = false;
    double seconds = 0.0;
    double lagrange_units = 1.0;
};

// Per (k, decoder) aggregation: FNMR = mated failure fraction, FMR =
// non-mated success fraction, GMR = 1 - FNMR; mean decode times t_g / t_i
// and mean operation counts over the non-mated pool.
struct VaultRateRow {
    unsigned k = 0;
    DecoderStrategy decoder = DecoderStrategy::GsList;
    std::uint64_t mated_trials = 0;
    std::uint64_t mated_successes = 0;
    std::uint64_t nonmated_trials = 0;
    std::uint64_t nonmated_successes = 0;
    double fnmr = 0.0;
    double fmr = 0.0;
    double gmr = 1.0;
    double mean_seconds_mated = 0.0;
    double mean_seconds_nonmated = 0.0;
    double mean_units_nonmated = 0.0;
};

// Requires at least one mated and one non-mated trial overall.
std::vector<VaultRateRow> error_rates(std::span<const TrialOutcome> trials);

// Attacker workload, in bits, to reach a 50% unlock probability by simulated
// non-mated attempts: log2(l * log(0.5) / log(1 - fmr)). Requires
// 0 < fmr < 1 and l >= 1; use fas_extrapolate when no false match was seen.
double fas_bits(double fmr, double operations);

struct FasEntry {
    unsigned k = 0;
    std::optional<double> bits;
    bool extrapolated = false;
};

// Fills unestimable entries by extending the line through the last two
// estimable degrees below each gap, in (k, bits) space; filled entries are
// flagged. Entries without two preceding anchors stay empty.
std::vector<FasEntry> fas_extrapolate(std::vector<FasEntry> series);

// Naive polynomial-guessing workload floor; reported alongside the
// false-accept security, never instead of it, since it is overestimate-prone.
unsigned bfs_floor_bits(unsigned k);

// Probability that two independently re-mapped sets of the given sizes in a
// universe of `rho` elements overlap in at least ceil((size_p + k)/2)
// elements (hypergeometric tail, exact big-rational arithmetic). Sizes are
// swapped internally so that size_p >= size_p2.
mpq_class linkage_probability_exact(std::uint64_t rho, std::uint64_t size_p,
                                    std::uint64_t size_p2, std::uint64_t k);
double linkage_probability(std::uint64_t rho, std::uint64_t size_p, std::uint64_t size_p2,
                           std::uint64_t k);

struct CorrelationResult {
    bool linked = false;
    std::vector<Fe> common_elements;  // recovered re-mapped features, ascending
    Poly key_a, key_b;                // recovered secrets when linked
};

// Record-multiplicity linkage attempt on a pair of vault polynomials, based
// on the partial extended Euclidean algorithm: at the remainder step
// straddling ceil((max(deg V, deg W) + k)/2) the Bezout cofactors expose the
// common factor C = gcd(V - kappa, W - kappa'), whose roots in the field are
// the shared re-mapped features. Division-validated; recovery works when the
// common-factor degree g satisfies
//     ceil((max(deg V, deg W) + k)/2) <= g <= max(deg V, deg W) - k.
// Record-specific bijections randomize the overlap and defeat the attack.
CorrelationResult correlation_attack(const Gf2e& f, const Poly& va, const Poly& vb, unsigned k);

// Same attack on full records; params must agree.
CorrelationResult correlation_attack(const VaultRecord& a, const VaultRecord& b, unsigned k);

}  // namespace fv
