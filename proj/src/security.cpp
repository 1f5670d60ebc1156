#include "fvkit/security.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace fv {

namespace {

double mean_of(std::span<const double> xs) {
    double s = 0.0;
    for (const double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

double unbiased_variance(std::span<const double> xs, double mu) {
    if (xs.size() < 2) return 0.0;
    double s = 0.0;
    for (const double x : xs) s += (x - mu) * (x - mu);
    return s / static_cast<double>(xs.size() - 1);
}

}  // namespace

double decidability(std::span<const double> mated, std::span<const double> nonmated) {
    if (mated.empty() || nonmated.empty()) {
        throw std::invalid_argument("decidability needs both score classes");
    }
    const double mg = mean_of(mated);
    const double mi = mean_of(nonmated);
    const double vg = unbiased_variance(mated, mg);
    const double vi = unbiased_variance(nonmated, mi);
    const double pooled = 0.5 * (vg + vi);
    if (pooled <= 0.0) {
        throw std::domain_error("decidability undefined for zero pooled variance");
    }
    return std::abs(mg - mi) / std::sqrt(pooled);
}

EerResult equal_error_rate(std::span<const double> mated, std::span<const double> nonmated) {
    if (mated.empty() || nonmated.empty()) {
        throw std::invalid_argument("equal_error_rate needs both score classes");
    }
    std::vector<double> thresholds;
    thresholds.reserve(mated.size() + nonmated.size());
    thresholds.insert(thresholds.end(), mated.begin(), mated.end());
    thresholds.insert(thresholds.end(), nonmated.begin(), nonmated.end());
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    const double nm = static_cast<double>(mated.size());
    const double ni = static_cast<double>(nonmated.size());
    auto rates_at = [&](double t) {
        std::size_t fn = 0;
        for (const double s : mated) {
            if (s > t) ++fn;
        }
        std::size_t fm = 0;
        for (const double s : nonmated) {
            if (s <= t) ++fm;
        }
        return std::pair<double, double>{static_cast<double>(fn) / nm,
                                         static_cast<double>(fm) / ni};
    };

    // Below the smallest score FNMR=1, FMR=0; the gap g = FNMR-FMR starts
    // positive and is non-increasing, so a sign change exists.
    double prev_t = thresholds.front() - 1.0;
    auto [prev_fnmr, prev_fmr] = rates_at(prev_t);
    for (const double t : thresholds) {
        const auto [fnmr, fmr] = rates_at(t);
        const double prev_gap = prev_fnmr - prev_fmr;
        const double gap = fnmr - fmr;
        if (gap <= 0.0) {
            if (prev_gap <= gap) {
                return {0.5 * (fnmr + fmr), t};
            }
            const double alpha = prev_gap / (prev_gap - gap);
            const double eer = prev_fnmr + alpha * (fnmr - prev_fnmr);
            return {eer, prev_t + alpha * (t - prev_t)};
        }
        prev_t = t;
        prev_fnmr = fnmr;
        prev_fmr = fmr;
    }
    // FNMR stayed above FMR across all observed scores; beyond the largest
    // score FNMR=0, FMR=1.
    const double gap = 0.0 - 1.0;
    const double prev_gap = prev_fnmr - prev_fmr;
    const double alpha = prev_gap / (prev_gap - gap);
    return {prev_fnmr + alpha * (0.0 - prev_fnmr), prev_t};
}

std::vector<VaultRateRow> error_rates(std::span<const TrialOutcome> trials) {
    std::uint64_t mated_total = 0;
    std::uint64_t nonmated_total = 0;
    for (const auto& t : trials) {
        (t.mated ? mated_total : nonmated_total) += 1;
    }
    if (mated_total == 0 || nonmated_total == 0) {
        throw std::invalid_argument("error_rates needs mated and non-mated trials");
    }
    std::map<std::pair<unsigned, unsigned>, VaultRateRow> rows;
    std::map<std::pair<unsigned, unsigned>, std::pair<double, double>> time_sums;
    std::map<std::pair<unsigned, unsigned>, double> unit_sums;
    for (const auto& t : trials) {
        const std::pair<unsigned, unsigned> key{t.k, static_cast<unsigned>(t.decoder)};
        auto& row = rows[key];
        row.k = t.k;
        row.decoder = t.decoder;
        if (t.mated) {
            row.mated_trials += 1;
            row.mated_successes += t.success ? 1 : 0;
            time_sums[key].first += t.seconds;
        } else {
            row.nonmated_trials += 1;
            row.nonmated_successes += t.success ? 1 : 0;
            time_sums[key].second += t.seconds;
            unit_sums[key] += t.lagrange_units;
        }
    }
    std::vector<VaultRateRow> out;
    out.reserve(rows.size());
    for (auto& [key, row] : rows) {
        if (row.mated_trials > 0) {
            row.fnmr = 1.0 - static_cast<double>(row.mated_successes) /
                                 static_cast<double>(row.mated_trials);
            row.mean_seconds_mated =
                time_sums[key].first / static_cast<double>(row.mated_trials);
        }
        if (row.nonmated_trials > 0) {
            row.fmr = static_cast<double>(row.nonmated_successes) /
                      static_cast<double>(row.nonmated_trials);
            row.mean_seconds_nonmated =
                time_sums[key].second / static_cast<double>(row.nonmated_trials);
            row.mean_units_nonmated = unit_sums[key] / static_cast<double>(row.nonmated_trials);
        }
        row.gmr = 1.0 - row.fnmr;
        out.push_back(row);
    }
    return out;
}

double fas_bits(double fmr, double operations) {
    if (!(fmr > 0.0 && fmr < 1.0)) {
        throw std::domain_error("fas_bits requires 0 < fmr < 1");
    }
    if (operations < 1.0) throw std::invalid_argument("operation count must be >= 1");
    const double attack_ops = operations * std::log(0.5) / std::log1p(-fmr);
    return std::log2(attack_ops);
}

std::vector<FasEntry> fas_extrapolate(std::vector<FasEntry> series) {
    std::sort(series.begin(), series.end(),
              [](const FasEntry& a, const FasEntry& b) { return a.k < b.k; });
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i].bits) continue;
        // Last two estimable degrees below this one.
        std::optional<std::size_t> a2, a1;
        for (std::size_t j = i; j-- > 0;) {
            if (series[j].bits && !series[j].extrapolated) {
                if (!a2) {
                    a2 = j;
                } else {
                    a1 = j;
                    break;
                }
            }
        }
        if (!a1 || !a2) continue;
        const double k1 = static_cast<double>(series[*a1].k);
        const double k2 = static_cast<double>(series[*a2].k);
        const double b1 = *series[*a1].bits;
        const double b2 = *series[*a2].bits;
        const double slope = (b2 - b1) / (k2 - k1);
        series[i].bits = b2 + slope * (static_cast<double>(series[i].k) - k2);
        series[i].extrapolated = true;
    }
    return series;
}

unsigned bfs_floor_bits(unsigned k) {
    if (k == 0) throw std::invalid_argument("bfs_floor_bits requires k >= 1");
    return k;
}

namespace {

mpz_class binom(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

}  // namespace

mpq_class linkage_probability_exact(std::uint64_t rho, std::uint64_t size_p,
                                    std::uint64_t size_p2, std::uint64_t k) {
    if (size_p < size_p2) std::swap(size_p, size_p2);
    if (size_p > rho || size_p2 > rho) {
        throw std::invalid_argument("set sizes must not exceed the universe size");
    }
    if (size_p2 == 0) throw std::invalid_argument("set sizes must be positive");
    const std::uint64_t omega0 = (size_p + k + 1) / 2;
    mpz_class sum = 0;
    const std::uint64_t hi = std::min(omega0 == 0 ? 0 : omega0 - 1, size_p2);
    if (omega0 > 0) {
        for (std::uint64_t j = 0; j <= hi; ++j) {
            sum += binom(static_cast<unsigned long>(size_p2), static_cast<unsigned long>(j)) *
                   binom(static_cast<unsigned long>(rho - size_p2),
                         static_cast<unsigned long>(size_p - j));
        }
    }
    mpq_class tail(sum, binom(static_cast<unsigned long>(rho), static_cast<unsigned long>(size_p)));
    tail.canonicalize();
    mpq_class result = 1 - tail;
    result.canonicalize();
    return result;
}

double linkage_probability(std::uint64_t rho, std::uint64_t size_p, std::uint64_t size_p2,
                           std::uint64_t k) {
    return linkage_probability_exact(rho, size_p, size_p2, k).get_d();
}

CorrelationResult correlation_attack(const Gf2e& f, const Poly& va, const Poly& vb, unsigned k) {
    CorrelationResult result;
    if (va.is_zero() || vb.is_zero()) return result;
    const int dmax = std::max(va.degree(), vb.degree());
    const int stop = (dmax + static_cast<int>(k) + 1) / 2;
    const EeaStep step = extended_euclid(f, va, vb, stop);
    // Useful steps have nonconstant cofactors on both sides.
    if (step.s.degree() < 1 || step.t.degree() < 1) return result;
    auto [c1, rem1] = poly_divmod(f, va, step.t);
    if (rem1.degree() >= static_cast<int>(k)) return result;
    auto [c2, rem2] = poly_divmod(f, vb, step.s);
    if (rem2.degree() >= static_cast<int>(k)) return result;
    if (c1.is_zero() || !(c1 == c2)) return result;
    std::vector<Fe> roots = roots_in_field(f, c1);
    if (roots.empty()) return result;
    result.linked = true;
    result.common_elements = std::move(roots);
    result.key_a = std::move(rem1);
    result.key_b = std::move(rem2);
    return result;
}

CorrelationResult correlation_attack(const VaultRecord& a, const VaultRecord& b, unsigned k) {
    if (a.params.field_degree != b.params.field_degree || a.params.nm() != b.params.nm()) {
        throw std::invalid_argument("correlation_attack: records have incompatible parameters");
    }
    return correlation_attack(a.params.field(), a.v, b.v, k);
}

}  // namespace fv
