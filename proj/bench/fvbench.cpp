// Throughput benchmark: the data-parallel retrieval-trial loop run on one
// thread (the reference path kept for testing) versus the OpenMP path, plus
// single-decode timings at full-scale parameters.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fvkit/harness.hpp"
#include "fvkit/rng.hpp"
#include "fvkit/vault.hpp"

using namespace fv;
using Clock = std::chrono::steady_clock;

namespace {

double time_call(const std::function<void()>& fn) {
    const auto start = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp threads: %d\n", omp_get_max_threads());
#else
    std::printf("openmp: unavailable, parallel path falls back to serial\n");
#endif

    // Trial batch: moderate-scale vault benchmark, identical work both ways.
    SynthConfig synth;
    synth.n = 64;
    synth.subjects = 16;
    synth.samples_per_subject = 3;
    synth.sigma_within = 0.25;
    synth.seed = 5;
    const auto [train, eval] = generate_synthetic(synth);

    VaultBenchConfig config;
    config.d = 4;
    config.scheme = BinScheme::Lssc;
    config.quant = QuantScheme::EqualProbable;
    config.degrees = {16, 32, 64};
    config.max_iterations = 64;
    config.nonmated_cap = 600;
    config.seed = 7;
    config.measure_time = false;  // count work, not clocks, inside trials

    MetricsReport serial_report, parallel_report;
    config.parallel = false;
    const double serial_s =
        time_call([&] { serial_report = run_vault_benchmark(train, eval, config); });
    config.parallel = true;
    const double parallel_s =
        time_call([&] { parallel_report = run_vault_benchmark(train, eval, config); });

    const bool identical = report_to_json(serial_report) == report_to_json(parallel_report);
    std::uint64_t trials = 0;
    for (const auto& row : serial_report.rows) {
        trials += row.mated_trials + row.nonmated_trials;
    }
    std::printf("trial batch: %llu retrievals over %zu rows\n",
                static_cast<unsigned long long>(trials), serial_report.rows.size());
    std::printf("  serial   %.3f s  (%.0f trials/s)\n", serial_s, trials / serial_s);
    std::printf("  openmp   %.3f s  (%.0f trials/s)\n", parallel_s, trials / parallel_s);
    std::printf("  speedup  %.2fx, reports identical: %s\n", serial_s / parallel_s,
                identical ? "yes" : "NO");

    // Full-scale single decodes (n=512, d=4, thermometer coding, GF(2^11)).
    {
        SynthConfig big = synth;
        big.n = 512;
        big.subjects = 4;
        big.samples_per_subject = 2;
        big.seed = 11;
        const auto [btrain, beval] = generate_synthetic(big);
        const QuantiserModel model = fit_quantiser(btrain, 4, QuantScheme::EqualProbable);
        std::vector<FeatureSet> sets;
        for (const auto& sample : beval.samples) {
            sets.push_back(
                to_feature_set(binarise(quantise(model, sample.values), 4, BinScheme::Lssc)));
        }
        const VaultParams params = make_vault_params(512, 4, BinScheme::Lssc, 416);
        Rng rng(1);
        const double bind_s = time_call([&] {
            for (int i = 0; i < 4; ++i) bind_vault(sets[0], params, rng);
        });
        const BindResult bound = bind_vault(sets[0], params, rng);
        DecoderConfig dc;
        dc.strategy = DecoderStrategy::GsList;
        dc.seed = 3;
        retrieve(bound.record, sets[1], dc);  // warmup
        const RetrieveResult mated = retrieve(bound.record, sets[1], dc);
        const RetrieveResult nonmated = retrieve(bound.record, sets[2], dc);
        dc.strategy = DecoderStrategy::RsGaoIterated;
        const RetrieveResult rs_nonmated = retrieve(bound.record, sets[2], dc);
        std::printf("full scale (u ~ %zu, k=416, GF(2^11)):\n", sets[2].size());
        std::printf("  bind             %8.1f ms\n", 1e3 * bind_s / 4);
        std::printf("  gs mated decode  %8.1f ms (success=%d)\n",
                    1e3 * mated.outcome.elapsed_seconds, mated.success);
        std::printf("  gs nonmated      %8.1f ms (success=%d)\n",
                    1e3 * nonmated.outcome.elapsed_seconds, nonmated.success);
        std::printf("  rs nonmated      %8.1f ms (success=%d)\n",
                    1e3 * rs_nonmated.outcome.elapsed_seconds, rs_nonmated.success);
        std::printf("  lagrange unit    %8.3f ms per interpolation at k=416\n",
                    1e3 * lagrange_unit_seconds(params.field(), 416));
    }
    return 0;
}
