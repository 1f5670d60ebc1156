// Experiment harness: feature ingestion, synthetic feature generation,
// binarisation and vault benchmarks, and report rendering.
//
// Trial execution is data-parallel: every trial derives its own RNG
// substream from the experiment seed and its index, results land in an
// index-ordered vector, and aggregation walks that order, so serial and
// OpenMP runs produce identical reports.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fvkit/feature.hpp"
#include "fvkit/security.hpp"
#include "fvkit/vault.hpp"

namespace fv {

enum class DatasetRole : std::uint8_t { Train = 0, Eval = 1 };

struct Dataset {
    DatasetRole role = DatasetRole::Train;
    std::vector<RealFeatureVector> samples;

    std::size_t feature_count() const { return samples.empty() ? 0 : samples[0].values.size(); }
};

// CSV with a mandatory header row: subject_id,sample_id,f0,...,f{n-1}.
// Throws FormatError with the offending 1-based line number.
Dataset ingest_features(const std::string& path, DatasetRole role);
Dataset parse_features_csv(const std::string& text, DatasetRole role);
std::string features_to_csv(const Dataset& dataset);
void write_features(const Dataset& dataset, const std::string& path);

struct SynthConfig {
    std::size_t n = 128;
    std::size_t subjects = 24;
    std::size_t samples_per_subject = 4;
    double sigma_within = 0.25;   // per-coordinate noise around the archetype
    double sigma_between = 1.0;   // per-coordinate archetype spread
    std::uint64_t seed = 1;
};

// Each subject gets an archetype vector; samples are archetype plus noise,
// unit-normalized. Train and eval use disjoint subject pools. Byte-identical
// for identical configs.
std::pair<Dataset, Dataset> generate_synthetic(const SynthConfig& config);

// Dataset-level fit with the cross-database guard: refuses eval-tagged data.
QuantiserModel fit_quantiser(const Dataset& training, unsigned d, QuantScheme scheme,
                             std::pair<double, double> range = {-0.3, 0.3});

// Runs fn(0..count-1); parallel uses OpenMP when available. Results must be
// written by index so both paths agree.
void run_indexed(std::size_t count, bool parallel, const std::function<void(std::size_t)>& fn);

struct BinBenchConfig {
    std::vector<unsigned> interval_counts{4, 8, 16};
    std::vector<QuantScheme> quant_schemes{QuantScheme::EqualProbable, QuantScheme::EqualSize};
    std::vector<BinScheme> bin_schemes{BinScheme::Boolean, BinScheme::Dbr, BinScheme::Brgc,
                                       BinScheme::Lssc, BinScheme::Onehot};
    std::pair<double, double> range{-0.3, 0.3};
    bool parallel = true;
};

struct BinBenchRow {
    std::string method;  // "baseline" or a binarisation scheme name
    unsigned d = 0;      // 0 for the baseline row
    std::optional<QuantScheme> quant;
    double eer = 0.0;
    double dprime = 0.0;
};

struct BinBenchReport {
    std::string config_echo;
    std::size_t mated_pairs = 0;
    std::size_t nonmated_pairs = 0;
    std::vector<BinBenchRow> rows;
};

// For every (scheme, d, quantisation) in the grid: fit on train, transform
// eval, score mated and non-mated pairs by Hamming distance, report EER and
// decidability. Always includes the Euclidean-distance baseline row.
// Boolean runs at d = 2 regardless of the interval grid.
BinBenchReport run_binarisation_benchmark(const Dataset& train, const Dataset& eval,
                                          const BinBenchConfig& config);

struct VaultBenchConfig {
    unsigned d = 4;
    QuantScheme quant = QuantScheme::EqualProbable;
    BinScheme scheme = BinScheme::Lssc;
    std::pair<double, double> range{-0.3, 0.3};
    std::vector<unsigned> degrees;  // k sweep
    std::vector<DecoderStrategy> decoders{DecoderStrategy::LagrangeIterated,
                                          DecoderStrategy::RsGaoIterated,
                                          DecoderStrategy::GsList};
    std::uint64_t max_iterations = std::uint64_t{1} << 16;
    std::uint32_t subset_size = 0;
    unsigned multiplicity = 1;
    std::size_t nonmated_cap = 2000;
    std::uint64_t seed = 1;
    // "wall" timing is the default; disabling it zeroes clock-derived fields
    // so two runs with one seed emit byte-identical reports.
    bool measure_time = true;
    bool parallel = true;
    bool rule_of_three = false;  // optional FMR upper bound for zero-FM rows
};

struct SetSizeStats {
    double mean = 0.0;
    double stddev = 0.0;
    double cv = 0.0;
    std::uint64_t min = 0;
    std::uint64_t max = 0;
    std::uint64_t count = 0;
};

struct MetricsReport {
    std::string config_echo;
    std::uint64_t seed = 0;
    std::vector<VaultRateRow> rows;
    // False-accept security per degree for the list-decoding strategy (the
    // strongest attacker model); filled by extrapolation where no false
    // match was observed.
    std::vector<FasEntry> fas;
    std::vector<double> rule_of_three_fmr_bound;  // parallel to rows when enabled
    SetSizeStats set_sizes;
    std::vector<std::pair<unsigned, double>> lagrange_unit_by_k;  // calibration factors
    double mean_ops_attacker = 0.0;  // mean non-mated operation count, list decoder
};

// Enrolls one record per reference sample, runs mated and non-mated
// retrieval trials per degree and decoder, aggregates rates, timings and
// security columns. Throws std::invalid_argument when a degree exceeds n*m.
MetricsReport run_vault_benchmark(const Dataset& train, const Dataset& eval,
                                  const VaultBenchConfig& config);

// Deterministic renderings; the JSON mirror uses ordered keys.
std::string report_to_table(const MetricsReport& report);
std::string report_to_json(const MetricsReport& report);
std::string report_to_table(const BinBenchReport& report);
std::string report_to_json(const BinBenchReport& report);

// Serialized records for the same inputs, used by the determinism checks and
// by the CLI to persist enrolments: one record per (degree, reference).
struct EnrolledVaults {
    std::vector<unsigned> degrees;
    std::vector<std::string> reference_ids;
    std::vector<std::vector<std::uint8_t>> records;  // degrees-major order
};
EnrolledVaults enroll_references(const Dataset& train, const Dataset& eval,
                                 const VaultBenchConfig& config);

}  // namespace fv
