#include "fvkit/decoders.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>

#include "fvkit/rng.hpp"

namespace fv {

namespace {

using Clock = std::chrono::steady_clock;

class StopWatch {
  public:
    explicit StopWatch(bool enabled) : enabled_(enabled) {
        if (enabled_) start_ = Clock::now();
    }
    double stop() const {
        if (!enabled_) return 0.0;
        return std::chrono::duration<double>(Clock::now() - start_).count();
    }

  private:
    bool enabled_;
    Clock::time_point start_;
};

void check_distinct(std::span<const FePoint> points) {
    std::vector<Fe> xs(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) xs[i] = points[i].first;
    std::sort(xs.begin(), xs.end());
    if (std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
        throw std::invalid_argument("decoder input abscissae must be distinct");
    }
}

std::size_t agreement(const Gf2e& f, const Poly& p, std::span<const FePoint> points) {
    std::size_t n = 0;
    for (const auto& [x, y] : points) {
        if (poly_eval(f, p, x) == y) ++n;
    }
    return n;
}

// ---- Koetter interpolation -------------------------------------------------

// Bivariate polynomial as x-coefficient vectors per Y power; vectors may
// carry trailing zeros while being updated.
using Comps = std::vector<std::vector<Fe>>;

int xdeg(const std::vector<Fe>& v) {
    for (std::size_t i = v.size(); i-- > 0;) {
        if (v[i] != 0) return static_cast<int>(i);
    }
    return -1;
}

// Leading monomial under the (1, k-1)-weighted order; pairs compare
// lexicographically by (weighted degree, Y degree), matching the order.
std::pair<int, int> leading_monomial(const Comps& g, unsigned k) {
    std::pair<int, int> best{-1, -1};
    for (std::size_t j = 0; j < g.size(); ++j) {
        const int d = xdeg(g[j]);
        if (d < 0) continue;
        const std::pair<int, int> cand{d + static_cast<int>(j) * static_cast<int>(k - 1),
                                       static_cast<int>(j)};
        if (cand > best) best = cand;
    }
    return best;
}

// a-th Hasse derivative of a univariate polynomial evaluated at x; binomial
// parities come from Lucas' theorem.
Fe hasse_eval(const Gf2e& f, const std::vector<Fe>& comp, Fe x, unsigned a) {
    Fe acc = 0;
    Fe xp = 1;
    for (std::size_t i = a; i < comp.size(); ++i) {
        if (comp[i] != 0 && (i & a) == a) acc = static_cast<Fe>(acc ^ f.mul(comp[i], xp));
        xp = f.mul(xp, x);
    }
    return acc;
}

Fe constraint_delta(const Gf2e& f, const Comps& g, Fe x, unsigned a, unsigned b,
                    const std::vector<Fe>& ypow) {
    Fe acc = 0;
    for (std::size_t j = b; j < g.size(); ++j) {
        if ((j & b) != b) continue;
        const Fe h = hasse_eval(f, g[j], x, a);
        if (h != 0) acc = static_cast<Fe>(acc ^ f.mul(h, ypow[j - b]));
    }
    return acc;
}

// g = scale_self*g + scale_other*other, componentwise.
void axpy(const Gf2e& f, Comps& g, Fe scale_self, const Comps& other, Fe scale_other) {
    for (std::size_t j = 0; j < g.size(); ++j) {
        const std::size_t n = std::max(g[j].size(), other[j].size());
        g[j].resize(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const Fe a = f.mul(g[j][i], scale_self);
            const Fe b = i < other[j].size() ? f.mul(other[j][i], scale_other) : Fe{0};
            g[j][i] = static_cast<Fe>(a ^ b);
        }
    }
}

void mul_by_x_plus(const Gf2e& f, Comps& g, Fe x) {
    for (auto& comp : g) {
        if (xdeg(comp) < 0) continue;
        comp.push_back(0);
        for (std::size_t i = comp.size() - 1; i > 0; --i) {
            comp[i] = static_cast<Fe>(comp[i - 1] ^ f.mul(comp[i], x));
        }
        comp[0] = f.mul(comp[0], x);
    }
}

Comps koetter_interpolate(const Gf2e& f, std::span<const FePoint> points, unsigned k,
                          unsigned s, unsigned list_degree) {
    const unsigned L = list_degree;
    std::vector<Comps> g(L + 1);
    for (unsigned j = 0; j <= L; ++j) {
        g[j].assign(L + 1, {});
        g[j][j] = {Fe{1}};
    }
    std::vector<Fe> ypow(L + 1);
    std::vector<Fe> delta(L + 1);
    for (const auto& [x, y] : points) {
        ypow[0] = 1;
        for (unsigned t = 1; t <= L; ++t) ypow[t] = f.mul(ypow[t - 1], y);
        // Constraint order matters: for a fixed Y-derivative order b the
        // X-orders a must ascend so that multiplying the pivot by (X - x)
        // only touches already-enforced conditions.
        for (unsigned b = 0; b < s; ++b) {
            for (unsigned a = 0; a + b < s; ++a) {
                int pivot = -1;
                std::pair<int, int> pivot_lead{0, 0};
                for (unsigned j = 0; j <= L; ++j) {
                    delta[j] = constraint_delta(f, g[j], x, a, b, ypow);
                    if (delta[j] == 0) continue;
                    const auto lead = leading_monomial(g[j], k);
                    if (pivot < 0 || lead < pivot_lead) {
                        pivot = static_cast<int>(j);
                        pivot_lead = lead;
                    }
                }
                if (pivot < 0) continue;
                const Fe dp = delta[pivot];
                for (unsigned j = 0; j <= L; ++j) {
                    if (static_cast<int>(j) == pivot || delta[j] == 0) continue;
                    axpy(f, g[j], dp, g[pivot], delta[j]);
                }
                mul_by_x_plus(f, g[pivot], x);
            }
        }
    }
    int best = 0;
    auto best_lead = leading_monomial(g[0], k);
    for (unsigned j = 1; j <= L; ++j) {
        const auto lead = leading_monomial(g[j], k);
        if (lead < best_lead) {
            best = static_cast<int>(j);
            best_lead = lead;
        }
    }
    return g[best];
}

// ---- Roth-Ruckenstein root finding ----------------------------------------

// Divides out the largest power of X dividing every component.
void strip_x_power(Comps& q) {
    std::size_t val = SIZE_MAX;
    for (const auto& comp : q) {
        for (std::size_t i = 0; i < comp.size(); ++i) {
            if (comp[i] != 0) {
                val = std::min(val, i);
                break;
            }
        }
    }
    if (val == SIZE_MAX || val == 0) return;
    for (auto& comp : q) {
        if (comp.size() <= val) {
            comp.clear();
        } else {
            comp.erase(comp.begin(), comp.begin() + static_cast<std::ptrdiff_t>(val));
        }
    }
}

std::vector<Fe> univariate_roots(const Gf2e& f, const std::vector<Fe>& r) {
    std::vector<Fe> roots;
    const int d = xdeg(r);
    if (d <= 0) return roots;
    if (d == 1) {
        roots.push_back(f.div(r[0], r[1]));
        return roots;
    }
    for (std::uint32_t x = 0; x < f.order(); ++x) {
        Fe acc = 0;
        for (std::size_t i = r.size(); i-- > 0;) {
            acc = static_cast<Fe>(f.mul(acc, static_cast<Fe>(x)) ^ r[i]);
        }
        if (acc == 0) roots.push_back(static_cast<Fe>(x));
    }
    return roots;
}

// Q(X, gamma + X*Y), expanded with mod-2 binomials.
Comps shift_substitute(const Gf2e& f, const Comps& q, Fe gamma) {
    const std::size_t n = q.size();
    Comps out(n);
    for (std::size_t b = 0; b < n; ++b) {
        std::vector<Fe> acc;
        for (std::size_t j = b; j < n; ++j) {
            if ((j & b) != b) continue;
            const Fe scale = f.pow(gamma, j - b);
            if (scale == 0) continue;
            if (q[j].size() > acc.size()) acc.resize(q[j].size(), 0);
            for (std::size_t i = 0; i < q[j].size(); ++i) {
                acc[i] = static_cast<Fe>(acc[i] ^ f.mul(q[j][i], scale));
            }
        }
        if (xdeg(acc) >= 0) {
            acc.insert(acc.begin(), b, 0);
            out[b] = std::move(acc);
        }
    }
    return out;
}

void rr_recurse(const Gf2e& f, Comps q, unsigned k, unsigned depth, std::vector<Fe>& prefix,
                std::vector<std::vector<Fe>>& out, long& budget) {
    if (--budget < 0) return;
    strip_x_power(q);
    std::vector<Fe> r(q.size(), 0);
    bool all_zero = true;
    for (std::size_t j = 0; j < q.size(); ++j) {
        r[j] = q[j].empty() ? Fe{0} : q[j][0];
        if (xdeg(q[j]) >= 0) all_zero = false;
    }
    if (all_zero) return;
    for (const Fe gamma : univariate_roots(f, r)) {
        prefix[depth] = gamma;
        if (depth + 1 == k) {
            out.push_back(prefix);
        } else {
            rr_recurse(f, shift_substitute(f, q, gamma), k, depth + 1, prefix, out, budget);
        }
    }
}

std::vector<Poly> roth_ruckenstein(const Gf2e& f, Comps q, unsigned k) {
    std::vector<std::vector<Fe>> raw;
    std::vector<Fe> prefix(k, 0);
    long budget = 64 + 16L * static_cast<long>(k) * static_cast<long>(q.size());
    rr_recurse(f, std::move(q), k, 0, prefix, raw, budget);
    std::sort(raw.begin(), raw.end());
    raw.erase(std::unique(raw.begin(), raw.end()), raw.end());
    std::vector<Poly> out;
    out.reserve(raw.size());
    for (auto& coeffs : raw) out.push_back(Poly::from_coefficients(std::move(coeffs)));
    return out;
}

std::vector<FePoint> gather_subset(std::span<const FePoint> set,
                                   const std::vector<std::uint32_t>& indices) {
    std::vector<FePoint> subset;
    subset.reserve(indices.size());
    for (const std::uint32_t i : indices) subset.push_back(set[i]);
    return subset;
}

double finish_units(const DecoderConfig& config, const Gf2e& f, unsigned k, double elapsed,
                    std::uint64_t iterations) {
    if (!config.measure_time) return std::max<double>(1.0, static_cast<double>(iterations));
    return std::max(1.0, elapsed / lagrange_unit_seconds(f, k));
}

}  // namespace

const char* to_string(DecoderStrategy s) {
    switch (s) {
        case DecoderStrategy::LagrangeIterated: return "lagrange";
        case DecoderStrategy::RsGaoIterated: return "rs";
        case DecoderStrategy::GsList: return "gs";
    }
    return "?";
}

std::optional<Poly> decode_gao(const Gf2e& f, std::span<const FePoint> points, unsigned k) {
    const std::size_t u = points.size();
    if (k == 0 || u == 0 || u < k) return std::nullopt;
    check_distinct(points);
    std::vector<Fe> xs(u);
    for (std::size_t i = 0; i < u; ++i) xs[i] = points[i].first;
    const Poly locator = poly_from_roots(f, xs);
    const Poly interpolant = lagrange_interpolate(f, points);
    const int stop = static_cast<int>((u + k + 1) / 2);
    const EeaStep step = extended_euclid(f, locator, interpolant, stop);
    if (step.t.is_zero()) return std::nullopt;
    auto [quotient, remainder] = poly_divmod(f, step.r, step.t);
    if (!remainder.is_zero() || quotient.degree() >= static_cast<int>(k)) return std::nullopt;
    return quotient;
}

GsParams gs_decoding_params(unsigned u, unsigned k, unsigned multiplicity) {
    if (k < 2) throw std::invalid_argument("list decoding requires k >= 2");
    if (multiplicity < 1) throw std::invalid_argument("multiplicity must be >= 1");
    const std::uint64_t constraints =
        static_cast<std::uint64_t>(u) * multiplicity * (multiplicity + 1) / 2;
    auto monomials = [&](std::uint64_t d) {
        std::uint64_t total = 0;
        for (std::uint64_t j = 0; j * (k - 1) <= d; ++j) total += d + 1 - j * (k - 1);
        return total;
    };
    std::uint64_t d = 0;
    while (monomials(d) <= constraints) ++d;
    GsParams params;
    params.wdeg_bound = static_cast<unsigned>(d);
    params.list_degree = static_cast<unsigned>(d / (k - 1));
    params.radius = static_cast<unsigned>(d / multiplicity + 1);
    return params;
}

std::vector<Poly> decode_gs(const Gf2e& f, std::span<const FePoint> points, unsigned k,
                            unsigned multiplicity) {
    if (k < 2) throw std::invalid_argument("list decoding requires k >= 2");
    if (multiplicity < 1) throw std::invalid_argument("multiplicity must be >= 1");
    if (points.empty()) return {};
    check_distinct(points);
    const GsParams params =
        gs_decoding_params(static_cast<unsigned>(points.size()), k, multiplicity);
    Comps q = koetter_interpolate(f, points, k, multiplicity, params.list_degree);
    std::vector<Poly> out;
    for (Poly& cand : roth_ruckenstein(f, std::move(q), k)) {
        if (agreement(f, cand, points) >= params.radius) out.push_back(std::move(cand));
    }
    return out;
}

DecodeOutcome decode_lagrange_iterated(const Gf2e& f, std::span<const FePoint> set, unsigned k,
                                       const KeyVerifier& verify, const DecoderConfig& config) {
    StopWatch watch(config.measure_time);
    DecodeOutcome out;
    const std::uint32_t u = static_cast<std::uint32_t>(set.size());
    if (k == 0 || u < k) {
        out.elapsed_seconds = watch.stop();
        return out;
    }
    Rng rng(config.seed, 0x4c414752u);
    std::vector<FePoint> subset;
    for (std::uint64_t it = 1; it <= config.max_iterations; ++it) {
        out.iterations = it;
        if (k == u) {
            subset.assign(set.begin(), set.end());
        } else {
            subset = gather_subset(set, sample_subset(rng, u, k));
        }
        const Poly candidate = lagrange_interpolate(f, subset);
        if (verify(candidate)) {
            out.success = true;
            out.key = candidate;
            break;
        }
        if (k == u) break;
    }
    out.elapsed_seconds = watch.stop();
    out.lagrange_units = std::max<double>(1.0, static_cast<double>(out.iterations));
    return out;
}

DecodeOutcome decode_rs_iterated(const Gf2e& f, std::span<const FePoint> set, unsigned k,
                                 const KeyVerifier& verify, const DecoderConfig& config) {
    StopWatch watch(config.measure_time);
    DecodeOutcome out;
    const std::uint32_t u = static_cast<std::uint32_t>(set.size());
    if (k == 0 || u < k) {
        out.elapsed_seconds = watch.stop();
        return out;
    }
    const std::uint32_t c = config.subset_size == 0 ? u : config.subset_size;
    if (c < k || c > u) {
        throw std::invalid_argument("subset size must satisfy k <= c <= u");
    }
    Rng rng(config.seed, 0x52474f41u);
    for (std::uint64_t it = 1; it <= config.max_iterations; ++it) {
        out.iterations = it;
        std::vector<FePoint> subset;
        if (c == u) {
            subset.assign(set.begin(), set.end());
        } else {
            subset = gather_subset(set, sample_subset(rng, u, c));
        }
        const auto candidate = decode_gao(f, subset, k);
        if (candidate && verify(*candidate)) {
            out.success = true;
            out.key = *candidate;
            break;
        }
        if (c == u) break;
    }
    out.elapsed_seconds = watch.stop();
    out.lagrange_units = finish_units(config, f, k, out.elapsed_seconds, out.iterations);
    return out;
}

DecodeOutcome decode_gs_iterated(const Gf2e& f, std::span<const FePoint> set, unsigned k,
                                 const KeyVerifier& verify, const DecoderConfig& config) {
    StopWatch watch(config.measure_time);
    DecodeOutcome out;
    const std::uint32_t u = static_cast<std::uint32_t>(set.size());
    if (k < 2 || u < k) {
        out.elapsed_seconds = watch.stop();
        return out;
    }
    const std::uint32_t c = config.subset_size == 0 ? u : config.subset_size;
    if (c < k || c > u) {
        throw std::invalid_argument("subset size must satisfy k <= c <= u");
    }
    Rng rng(config.seed, 0x47534c44u);
    for (std::uint64_t it = 1; it <= config.max_iterations; ++it) {
        out.iterations = it;
        std::vector<FePoint> subset;
        if (c == u) {
            subset.assign(set.begin(), set.end());
        } else {
            subset = gather_subset(set, sample_subset(rng, u, c));
        }
        for (const Poly& candidate : decode_gs(f, subset, k, config.multiplicity)) {
            if (verify(candidate)) {
                out.success = true;
                out.key = candidate;
                break;
            }
        }
        if (out.success || c == u) break;
    }
    out.elapsed_seconds = watch.stop();
    out.lagrange_units = finish_units(config, f, k, out.elapsed_seconds, out.iterations);
    return out;
}

DecodeOutcome run_decoder(const Gf2e& f, std::span<const FePoint> set, unsigned k,
                          const KeyVerifier& verify, const DecoderConfig& config) {
    switch (config.strategy) {
        case DecoderStrategy::LagrangeIterated:
            return decode_lagrange_iterated(f, set, k, verify, config);
        case DecoderStrategy::RsGaoIterated:
            return decode_rs_iterated(f, set, k, verify, config);
        case DecoderStrategy::GsList:
            return decode_gs_iterated(f, set, k, verify, config);
    }
    throw std::invalid_argument("unknown decoder strategy");
}

namespace {

mpz_class binom(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

std::uint64_t ceil_sqrt(std::uint64_t m) {
    if (m == 0) return 0;
    auto s = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(m)));
    while (s * s > m) --s;
    while ((s + 1) * (s + 1) <= m) ++s;
    return s * s == m ? s : s + 1;
}

}  // namespace

mpq_class success_probability_exact(unsigned u, unsigned omega, unsigned k, unsigned c,
                                    DecoderStrategy strategy) {
    if (omega > u) throw std::invalid_argument("omega must satisfy 0 <= omega <= u");
    if (strategy == DecoderStrategy::LagrangeIterated) {
        if (k > u) throw std::invalid_argument("lagrange sampling requires k <= u");
        mpq_class p(binom(omega, k), binom(u, k));
        p.canonicalize();
        return p;
    }
    if (c < k || c > u) throw std::invalid_argument("subset size must satisfy k <= c <= u");
    std::uint64_t lo;
    if (strategy == DecoderStrategy::RsGaoIterated) {
        lo = (static_cast<std::uint64_t>(c) + k + 1) / 2;
    } else {
        lo = ceil_sqrt(static_cast<std::uint64_t>(c) * (k - 1));
    }
    const std::uint64_t hi = std::min<std::uint64_t>(omega, c);
    mpz_class sum = 0;
    for (std::uint64_t j = lo; j <= hi; ++j) {
        sum += binom(omega, static_cast<unsigned long>(j)) *
               binom(u - omega, static_cast<unsigned long>(c - j));
    }
    mpq_class p(sum, binom(u, c));
    p.canonicalize();
    return p;
}

double success_probability(unsigned u, unsigned omega, unsigned k, unsigned c,
                           DecoderStrategy strategy) {
    return success_probability_exact(u, omega, k, c, strategy).get_d();
}

double lagrange_unit_seconds(const Gf2e& f, unsigned k) {
    static std::map<std::pair<unsigned, unsigned>, double> cache;
    static std::mutex mutex;
    const std::pair<unsigned, unsigned> key{f.degree(), k};
    std::lock_guard<std::mutex> lock(mutex);
    if (const auto it = cache.find(key); it != cache.end()) return it->second;

    const std::uint32_t count = std::min<std::uint32_t>(std::max(1u, k), f.order());
    Rng rng(0xCA11B7A7E5ULL, key.first ^ (std::uint64_t{key.second} << 20));
    std::vector<FePoint> points(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        points[i] = {static_cast<Fe>(i), static_cast<Fe>(rng.below(f.order()))};
    }
    volatile Fe sink = 0;
    sink = static_cast<Fe>(sink ^ lagrange_interpolate(f, points).coeff(0));  // warmup
    const auto start = Clock::now();
    std::uint64_t reps = 0;
    double elapsed = 0.0;
    do {
        sink = static_cast<Fe>(sink ^ lagrange_interpolate(f, points).coeff(0));
        ++reps;
        elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    } while (elapsed < 2e-3 && reps < 100000);
    const double unit = std::max(elapsed / static_cast<double>(reps), 1e-9);
    cache[key] = unit;
    return unit;
}

}  // namespace fv
