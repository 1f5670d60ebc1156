#include "fvkit/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "fvkit/errors.hpp"
#include "fvkit/rng.hpp"

namespace fv {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v, const char* fmt = "%.17g") {
    char buf[48];
    std::snprintf(buf, sizeof(buf), fmt, v);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (const char ch : line) {
        if (ch == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

Dataset parse_features_csv(const std::string& text, DatasetRole role) {
    Dataset dataset;
    dataset.role = role;
    std::istringstream is(text);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(is, line)) throw FormatError("empty feature file", 1);
    ++line_no;
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[0] != "subject_id" || header[1] != "sample_id") {
        throw FormatError("header must be subject_id,sample_id,f0,...", line_no);
    }
    const std::size_t n = header.size() - 2;

    while (std::getline(is, line)) {
        ++line_no;
        if (line.empty() || (line.size() == 1 && line[0] == '\r')) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != n + 2) {
            throw FormatError("expected " + std::to_string(n + 2) + " fields, got " +
                                  std::to_string(fields.size()),
                              line_no);
        }
        RealFeatureVector sample;
        sample.subject_id = fields[0];
        sample.sample_id = fields[1];
        sample.values.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::string& cell = fields[i + 2];
            const char* begin = cell.data();
            const char* end = begin + cell.size();
            auto [ptr, ec] = std::from_chars(begin, end, sample.values[i]);
            if (ec != std::errc{} || ptr != end) {
                throw FormatError("non-numeric cell '" + cell + "'", line_no);
            }
        }
        dataset.samples.push_back(std::move(sample));
    }
    return dataset;
}

Dataset ingest_features(const std::string& path, DatasetRole role) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_features_csv(buf.str(), role);
}

std::string features_to_csv(const Dataset& dataset) {
    std::ostringstream os;
    const std::size_t n = dataset.feature_count();
    os << "subject_id,sample_id";
    for (std::size_t i = 0; i < n; ++i) os << ",f" << i;
    os << "\n";
    for (const auto& sample : dataset.samples) {
        os << sample.subject_id << "," << sample.sample_id;
        for (const double v : sample.values) os << "," << format_double(v);
        os << "\n";
    }
    return os.str();
}

void write_features(const Dataset& dataset, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << features_to_csv(dataset);
}

namespace {

Dataset synth_split(const SynthConfig& config, DatasetRole role, std::uint64_t tag,
                    const char* prefix) {
    Dataset dataset;
    dataset.role = role;
    std::vector<double> archetype(config.n);
    for (std::size_t subj = 0; subj < config.subjects; ++subj) {
        Rng arch_rng(config.seed, mix_seed(tag, subj, 0));
        for (auto& v : archetype) v = config.sigma_between * arch_rng.gaussian();
        for (std::size_t smp = 0; smp < config.samples_per_subject; ++smp) {
            RealFeatureVector sample;
            char id[32];
            std::snprintf(id, sizeof(id), "%s%04zu", prefix, subj);
            sample.subject_id = id;
            std::snprintf(id, sizeof(id), "s%02zu", smp);
            sample.sample_id = id;
            sample.values.resize(config.n);
            Rng noise_rng(config.seed, mix_seed(tag, subj, 1 + smp));
            double norm_sq = 0.0;
            for (std::size_t i = 0; i < config.n; ++i) {
                sample.values[i] = archetype[i] + config.sigma_within * noise_rng.gaussian();
                norm_sq += sample.values[i] * sample.values[i];
            }
            if (norm_sq > 0.0) {
                const double inv = 1.0 / std::sqrt(norm_sq);
                for (auto& v : sample.values) v *= inv;
            }
            dataset.samples.push_back(std::move(sample));
        }
    }
    return dataset;
}

}  // namespace

std::pair<Dataset, Dataset> generate_synthetic(const SynthConfig& config) {
    if (config.n == 0 || config.subjects == 0 || config.samples_per_subject == 0) {
        throw std::invalid_argument("synthetic config requires positive counts");
    }
    if (config.sigma_within < 0.0 || config.sigma_between <= 0.0) {
        throw std::invalid_argument("synthetic config requires sigma_between > 0 and "
                                    "sigma_within >= 0");
    }
    return {synth_split(config, DatasetRole::Train, 0x7261696eULL, "train-"),
            synth_split(config, DatasetRole::Eval, 0x6576616cULL, "eval-")};
}

QuantiserModel fit_quantiser(const Dataset& training, unsigned d, QuantScheme scheme,
                             std::pair<double, double> range) {
    if (training.role != DatasetRole::Train) {
        throw std::invalid_argument(
            "refusing to fit a quantiser on an eval-tagged dataset; the protocol keeps "
            "training and evaluation data disjoint");
    }
    return fit_quantiser(training.samples, d, scheme, range);
}

void run_indexed(std::size_t count, bool parallel, const std::function<void(std::size_t)>& fn) {
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(count); ++i) {
            fn(static_cast<std::size_t>(i));
        }
        return;
    }
#else
    (void)parallel;
#endif
    for (std::size_t i = 0; i < count; ++i) fn(i);
}

namespace {

// Reference = first sample of each subject in file order, probes = the rest.
struct PairPlan {
    std::vector<std::size_t> refs;                          // sample indices
    std::vector<std::size_t> probes;                        // sample indices
    std::vector<std::pair<std::size_t, std::size_t>> mated;     // (probe pos, ref pos)
    std::vector<std::pair<std::size_t, std::size_t>> nonmated;  // (probe pos, ref pos)
};

PairPlan plan_pairs(const Dataset& eval, std::size_t nonmated_cap) {
    PairPlan plan;
    std::map<std::string, std::size_t> ref_of;  // subject -> ref position
    std::vector<std::string> ref_subject;
    for (std::size_t i = 0; i < eval.samples.size(); ++i) {
        const auto& subject = eval.samples[i].subject_id;
        if (ref_of.find(subject) == ref_of.end()) {
            ref_of[subject] = plan.refs.size();
            plan.refs.push_back(i);
            ref_subject.push_back(subject);
        } else {
            plan.probes.push_back(i);
        }
    }
    for (std::size_t p = 0; p < plan.probes.size(); ++p) {
        const auto& subject = eval.samples[plan.probes[p]].subject_id;
        plan.mated.emplace_back(p, ref_of[subject]);
        for (std::size_t r = 0; r < plan.refs.size(); ++r) {
            if (ref_subject[r] != subject) plan.nonmated.emplace_back(p, r);
        }
    }
    if (nonmated_cap > 0 && plan.nonmated.size() > nonmated_cap) {
        std::vector<std::pair<std::size_t, std::size_t>> kept;
        kept.reserve(nonmated_cap);
        const double total = static_cast<double>(plan.nonmated.size());
        for (std::size_t i = 0; i < nonmated_cap; ++i) {
            kept.push_back(
                plan.nonmated[static_cast<std::size_t>(i * total / nonmated_cap)]);
        }
        plan.nonmated = std::move(kept);
    }
    return plan;
}

struct PreparedVaultBench {
    QuantiserModel model;
    PairPlan plan;
    std::vector<FeatureSet> ref_sets;
    std::vector<FeatureSet> probe_sets;
    std::vector<std::string> ref_ids;
    SetSizeStats set_sizes;
};

SetSizeStats set_size_stats(const std::vector<std::size_t>& sizes) {
    SetSizeStats stats;
    stats.count = sizes.size();
    if (sizes.empty()) return stats;
    stats.min = sizes[0];
    stats.max = sizes[0];
    double sum = 0.0;
    for (const std::size_t s : sizes) {
        sum += static_cast<double>(s);
        stats.min = std::min<std::uint64_t>(stats.min, s);
        stats.max = std::max<std::uint64_t>(stats.max, s);
    }
    stats.mean = sum / static_cast<double>(sizes.size());
    double sq = 0.0;
    for (const std::size_t s : sizes) {
        const double delta = static_cast<double>(s) - stats.mean;
        sq += delta * delta;
    }
    stats.stddev = sizes.size() > 1
                       ? std::sqrt(sq / static_cast<double>(sizes.size() - 1))
                       : 0.0;
    stats.cv = stats.mean > 0.0 ? stats.stddev / stats.mean : 0.0;
    return stats;
}

PreparedVaultBench prepare_vault_bench(const Dataset& train, const Dataset& eval,
                                       const VaultBenchConfig& config) {
    if (eval.role != DatasetRole::Eval) {
        throw std::invalid_argument("vault benchmark expects an eval-tagged dataset");
    }
    PreparedVaultBench prep;
    prep.model = fit_quantiser(train, config.d, config.quant, config.range);
    if (eval.feature_count() != prep.model.n) {
        throw std::invalid_argument("train and eval feature counts differ");
    }
    prep.plan = plan_pairs(eval, config.nonmated_cap);

    std::vector<std::size_t> sizes;
    sizes.reserve(eval.samples.size());
    std::vector<FeatureSet> all(eval.samples.size());
    for (std::size_t i = 0; i < eval.samples.size(); ++i) {
        const auto q = quantise(prep.model, eval.samples[i].values);
        all[i] = to_feature_set(binarise(q, config.d, config.scheme));
        sizes.push_back(all[i].size());
    }
    prep.set_sizes = set_size_stats(sizes);

    for (const std::size_t idx : prep.plan.refs) {
        prep.ref_sets.push_back(all[idx]);
        prep.ref_ids.push_back(eval.samples[idx].subject_id);
    }
    for (const std::size_t idx : prep.plan.probes) prep.probe_sets.push_back(all[idx]);
    return prep;
}

constexpr std::uint64_t kEnrolTag = 0xE14ULL;
constexpr std::uint64_t kTrialTag = 0x7214ULL;

std::vector<VaultRecord> enroll_all(const PreparedVaultBench& prep,
                                    const VaultBenchConfig& config, unsigned n) {
    std::vector<VaultRecord> records;
    records.reserve(config.degrees.size() * prep.ref_sets.size());
    for (std::size_t kk = 0; kk < config.degrees.size(); ++kk) {
        const VaultParams params =
            make_vault_params(n, config.d, config.scheme, config.degrees[kk]);
        for (std::size_t r = 0; r < prep.ref_sets.size(); ++r) {
            if (prep.ref_sets[r].empty()) {
                throw std::invalid_argument("reference sample with empty feature set; "
                                            "cannot enroll");
            }
            Rng rng(config.seed, mix_seed(kEnrolTag, kk, r));
            records.push_back(bind_vault(prep.ref_sets[r], params, rng).record);
        }
    }
    return records;
}

std::string vault_config_echo(const VaultBenchConfig& config, const PreparedVaultBench& prep) {
    std::ostringstream os;
    os << "d=" << config.d << " quant=" << to_string(config.quant)
       << " scheme=" << to_string(config.scheme) << " n=" << prep.model.n << " degrees=";
    for (std::size_t i = 0; i < config.degrees.size(); ++i) {
        os << (i ? "," : "") << config.degrees[i];
    }
    os << " decoders=";
    for (std::size_t i = 0; i < config.decoders.size(); ++i) {
        os << (i ? "," : "") << to_string(config.decoders[i]);
    }
    os << " max_iterations=" << config.max_iterations << " subset_size=" << config.subset_size
       << " multiplicity=" << config.multiplicity << " nonmated_cap=" << config.nonmated_cap
       << " seed=" << config.seed << " timing=" << (config.measure_time ? "wall" : "off")
       << " refs=" << prep.ref_sets.size() << " probes=" << prep.probe_sets.size()
       << " mated_pairs=" << prep.plan.mated.size()
       << " nonmated_pairs=" << prep.plan.nonmated.size();
    return os.str();
}

}  // namespace

EnrolledVaults enroll_references(const Dataset& train, const Dataset& eval,
                                 const VaultBenchConfig& config) {
    const PreparedVaultBench prep = prepare_vault_bench(train, eval, config);
    const auto records =
        enroll_all(prep, config, static_cast<unsigned>(prep.model.n));
    EnrolledVaults out;
    out.degrees = config.degrees;
    out.reference_ids = prep.ref_ids;
    out.records.reserve(records.size());
    for (const auto& record : records) out.records.push_back(serialize_record(record));
    return out;
}

MetricsReport run_vault_benchmark(const Dataset& train, const Dataset& eval,
                                  const VaultBenchConfig& config) {
    if (config.degrees.empty()) throw std::invalid_argument("empty degree sweep");
    const PreparedVaultBench prep = prepare_vault_bench(train, eval, config);
    const unsigned n = static_cast<unsigned>(prep.model.n);
    {
        // Degree bounds are checked before any trial runs.
        const unsigned m = bits_per_element(config.scheme, config.d);
        for (const unsigned k : config.degrees) {
            if (k == 0 || k > n * m) {
                throw std::invalid_argument("degree " + std::to_string(k) +
                                            " outside [1, n*m]");
            }
        }
    }
    if (prep.plan.mated.empty() || prep.plan.nonmated.empty()) {
        throw std::invalid_argument("benchmark needs mated and non-mated pairs; give every "
                                    "subject at least two samples and use several subjects");
    }
    const std::vector<VaultRecord> records = enroll_all(prep, config, n);

    struct TrialSpec {
        std::size_t record_idx;
        std::size_t probe_pos;
        unsigned k;
        DecoderStrategy decoder;
        bool mated;
        std::uint64_t rng_label;
    };
    std::vector<TrialSpec> specs;
    const std::size_t refs = prep.ref_sets.size();
    for (std::size_t kk = 0; kk < config.degrees.size(); ++kk) {
        for (std::size_t di = 0; di < config.decoders.size(); ++di) {
            std::uint64_t pair_no = 0;
            for (const auto& [probe_pos, ref_pos] : prep.plan.mated) {
                specs.push_back({kk * refs + ref_pos, probe_pos, config.degrees[kk],
                                 config.decoders[di], true,
                                 mix_seed(kTrialTag, kk, di, pair_no++)});
            }
            for (const auto& [probe_pos, ref_pos] : prep.plan.nonmated) {
                specs.push_back({kk * refs + ref_pos, probe_pos, config.degrees[kk],
                                 config.decoders[di], false,
                                 mix_seed(kTrialTag, kk, di, pair_no++)});
            }
        }
    }

    std::vector<TrialOutcome> outcomes(specs.size());
    run_indexed(specs.size(), config.parallel, [&](std::size_t i) {
        const TrialSpec& spec = specs[i];
        DecoderConfig dc;
        dc.strategy = spec.decoder;
        dc.max_iterations = config.max_iterations;
        dc.subset_size = config.subset_size;
        dc.multiplicity = config.multiplicity;
        dc.seed = mix_seed(config.seed, spec.rng_label);
        dc.measure_time = config.measure_time;
        const FeatureSet& probe = prep.probe_sets[spec.probe_pos];
        TrialOutcome& out = outcomes[i];
        out.mated = spec.mated;
        out.k = spec.k;
        out.decoder = spec.decoder;
        if (probe.empty()) {
            out.success = false;
            return;
        }
        const RetrieveResult r = retrieve(records[spec.record_idx], probe, dc);
        out.success = r.success;
        out.seconds = r.outcome.elapsed_seconds;
        out.lagrange_units = r.outcome.lagrange_units;
    });

    MetricsReport report;
    report.seed = config.seed;
    report.config_echo = vault_config_echo(config, prep);
    report.rows = error_rates(outcomes);
    report.set_sizes = prep.set_sizes;

    // Security columns follow the list-decoding strategy (the strongest of
    // the three per observed FMR); the per-degree operation count l is the
    // mean over that strategy's non-mated pool.
    const bool have_gs =
        std::find(config.decoders.begin(), config.decoders.end(), DecoderStrategy::GsList) !=
        config.decoders.end();
    double ops_sum = 0.0;
    std::uint64_t ops_rows = 0;
    if (have_gs) {
        std::vector<FasEntry> series;
        for (const auto& row : report.rows) {
            if (row.decoder != DecoderStrategy::GsList) continue;
            FasEntry entry;
            entry.k = row.k;
            const double l = std::max(1.0, row.mean_units_nonmated);
            if (row.fmr > 0.0 && row.fmr < 1.0) entry.bits = fas_bits(row.fmr, l);
            series.push_back(entry);
            ops_sum += row.mean_units_nonmated * static_cast<double>(row.nonmated_trials);
            ops_rows += row.nonmated_trials;
        }
        report.fas = fas_extrapolate(std::move(series));
    }
    report.mean_ops_attacker = ops_rows > 0 ? ops_sum / static_cast<double>(ops_rows) : 0.0;

    if (config.rule_of_three) {
        report.rule_of_three_fmr_bound.reserve(report.rows.size());
        for (const auto& row : report.rows) {
            report.rule_of_three_fmr_bound.push_back(
                row.nonmated_successes == 0 && row.nonmated_trials > 0
                    ? 3.0 / static_cast<double>(row.nonmated_trials)
                    : row.fmr);
        }
    }

    for (const unsigned k : config.degrees) {
        const VaultParams params = make_vault_params(n, config.d, config.scheme, k);
        report.lagrange_unit_by_k.emplace_back(
            k, config.measure_time ? lagrange_unit_seconds(params.field(), k) : 0.0);
    }
    return report;
}

namespace {

const FasEntry* fas_for(const MetricsReport& report, unsigned k) {
    for (const auto& entry : report.fas) {
        if (entry.k == k) return &entry;
    }
    return nullptr;
}

}  // namespace

std::string report_to_table(const MetricsReport& report) {
    std::ostringstream os;
    os << "# fvkit vault benchmark\n";
    os << "# seed " << report.seed << "\n";
    os << "# config " << report.config_echo << "\n";
    os << "# set_sizes mean=" << format_double(report.set_sizes.mean, "%.3f")
       << " stddev=" << format_double(report.set_sizes.stddev, "%.3f")
       << " cv=" << format_double(report.set_sizes.cv, "%.5f") << " min=" << report.set_sizes.min
       << " max=" << report.set_sizes.max << " count=" << report.set_sizes.count << "\n";
    os << "# lagrange_unit_seconds";
    for (const auto& [k, unit] : report.lagrange_unit_by_k) {
        os << " k" << k << "=" << format_double(unit, "%.3e");
    }
    os << "\n";
    os << "# mean_ops_attacker " << format_double(report.mean_ops_attacker, "%.2f") << "\n";
    os << "k\tdecoder\tFNMR%\tFMR%\tGMR%\tFAS_bits\tBFS_bits\tt_g_ms\tt_i_ms\tops\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        os << row.k << "\t" << to_string(row.decoder) << "\t"
           << format_double(100.0 * row.fnmr, "%.4f") << "\t"
           << format_double(100.0 * row.fmr, "%.4f") << "\t"
           << format_double(100.0 * row.gmr, "%.4f") << "\t";
        const FasEntry* fas =
            row.decoder == DecoderStrategy::GsList ? fas_for(report, row.k) : nullptr;
        if (fas != nullptr && fas->bits) {
            os << format_double(*fas->bits, "%.2f") << (fas->extrapolated ? "*" : "");
        } else {
            os << "-";
        }
        os << "\t" << bfs_floor_bits(row.k) << "\t"
           << format_double(1e3 * row.mean_seconds_mated, "%.3f") << "\t"
           << format_double(1e3 * row.mean_seconds_nonmated, "%.3f") << "\t"
           << format_double(row.mean_units_nonmated, "%.1f");
        if (!report.rule_of_three_fmr_bound.empty()) {
            os << "\t" << format_double(100.0 * report.rule_of_three_fmr_bound[i], "%.4f");
        }
        os << "\n";
    }
    return os.str();
}

std::string report_to_json(const MetricsReport& report) {
    ordered_json j;
    j["kind"] = "fvkit-vault-benchmark";
    j["seed"] = report.seed;
    j["config"] = report.config_echo;
    j["set_sizes"] = {{"mean", report.set_sizes.mean},   {"stddev", report.set_sizes.stddev},
                      {"cv", report.set_sizes.cv},       {"min", report.set_sizes.min},
                      {"max", report.set_sizes.max},     {"count", report.set_sizes.count}};
    j["lagrange_unit_seconds"] = ordered_json::array();
    for (const auto& [k, unit] : report.lagrange_unit_by_k) {
        j["lagrange_unit_seconds"].push_back({{"k", k}, {"seconds", unit}});
    }
    j["mean_ops_attacker"] = report.mean_ops_attacker;
    j["rows"] = ordered_json::array();
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
        const auto& row = report.rows[i];
        ordered_json r;
        r["k"] = row.k;
        r["decoder"] = to_string(row.decoder);
        r["mated_trials"] = row.mated_trials;
        r["mated_successes"] = row.mated_successes;
        r["nonmated_trials"] = row.nonmated_trials;
        r["nonmated_successes"] = row.nonmated_successes;
        r["fnmr"] = row.fnmr;
        r["fmr"] = row.fmr;
        r["gmr"] = row.gmr;
        r["bfs_bits"] = bfs_floor_bits(row.k);
        const FasEntry* fas =
            row.decoder == DecoderStrategy::GsList ? fas_for(report, row.k) : nullptr;
        if (fas != nullptr && fas->bits) {
            r["fas_bits"] = *fas->bits;
            r["fas_extrapolated"] = fas->extrapolated;
        } else {
            r["fas_bits"] = nullptr;
            r["fas_extrapolated"] = false;
        }
        r["t_g_seconds"] = row.mean_seconds_mated;
        r["t_i_seconds"] = row.mean_seconds_nonmated;
        r["ops_lagrange_units"] = row.mean_units_nonmated;
        if (!report.rule_of_three_fmr_bound.empty()) {
            r["rule_of_three_fmr_bound"] = report.rule_of_three_fmr_bound[i];
        }
        j["rows"].push_back(std::move(r));
    }
    return j.dump(2) + "\n";
}

namespace {

struct ScoredCombo {
    std::vector<double> mated;
    std::vector<double> nonmated;
};

ScoredCombo score_pairs(const std::vector<BinaryVector>& ref_bits,
                        const std::vector<BinaryVector>& probe_bits, const PairPlan& plan,
                        bool parallel) {
    ScoredCombo combo;
    combo.mated.resize(plan.mated.size());
    combo.nonmated.resize(plan.nonmated.size());
    run_indexed(plan.mated.size(), parallel, [&](std::size_t i) {
        const auto& [probe_pos, ref_pos] = plan.mated[i];
        combo.mated[i] =
            static_cast<double>(hamming_score(probe_bits[probe_pos], ref_bits[ref_pos]));
    });
    run_indexed(plan.nonmated.size(), parallel, [&](std::size_t i) {
        const auto& [probe_pos, ref_pos] = plan.nonmated[i];
        combo.nonmated[i] =
            static_cast<double>(hamming_score(probe_bits[probe_pos], ref_bits[ref_pos]));
    });
    return combo;
}

}  // namespace

BinBenchReport run_binarisation_benchmark(const Dataset& train, const Dataset& eval,
                                          const BinBenchConfig& config) {
    if (eval.role != DatasetRole::Eval) {
        throw std::invalid_argument("binarisation benchmark expects an eval-tagged dataset");
    }
    if (train.feature_count() != eval.feature_count() || eval.feature_count() == 0) {
        throw std::invalid_argument("train and eval feature counts must match and be nonzero");
    }
    const PairPlan plan = plan_pairs(eval, 0);
    if (plan.mated.empty() || plan.nonmated.empty()) {
        throw std::invalid_argument("benchmark needs mated and non-mated pairs");
    }

    BinBenchReport report;
    report.mated_pairs = plan.mated.size();
    report.nonmated_pairs = plan.nonmated.size();
    {
        std::ostringstream os;
        os << "n=" << eval.feature_count() << " intervals=";
        for (std::size_t i = 0; i < config.interval_counts.size(); ++i) {
            os << (i ? "," : "") << config.interval_counts[i];
        }
        os << " mated_pairs=" << plan.mated.size() << " nonmated_pairs=" << plan.nonmated.size();
        report.config_echo = os.str();
    }

    // Baseline: Euclidean distance on the raw vectors.
    {
        std::vector<double> mated(plan.mated.size());
        std::vector<double> nonmated(plan.nonmated.size());
        auto euclid = [&](std::size_t probe_idx, std::size_t ref_idx) {
            const auto& a = eval.samples[probe_idx].values;
            const auto& b = eval.samples[ref_idx].values;
            double s = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
            return std::sqrt(s);
        };
        run_indexed(plan.mated.size(), config.parallel, [&](std::size_t i) {
            mated[i] = euclid(plan.probes[plan.mated[i].first], plan.refs[plan.mated[i].second]);
        });
        run_indexed(plan.nonmated.size(), config.parallel, [&](std::size_t i) {
            nonmated[i] =
                euclid(plan.probes[plan.nonmated[i].first], plan.refs[plan.nonmated[i].second]);
        });
        BinBenchRow row;
        row.method = "baseline";
        row.eer = equal_error_rate(mated, nonmated).eer;
        row.dprime = decidability(mated, nonmated);
        report.rows.push_back(row);
    }

    for (const BinScheme scheme : config.bin_schemes) {
        const std::vector<unsigned> ds = scheme == BinScheme::Boolean
                                             ? std::vector<unsigned>{2}
                                             : config.interval_counts;
        for (const unsigned d : ds) {
            for (const QuantScheme quant : config.quant_schemes) {
                const QuantiserModel model = fit_quantiser(train, d, quant, config.range);
                std::vector<BinaryVector> ref_bits(plan.refs.size());
                std::vector<BinaryVector> probe_bits(plan.probes.size());
                for (std::size_t i = 0; i < plan.refs.size(); ++i) {
                    ref_bits[i] =
                        binarise(quantise(model, eval.samples[plan.refs[i]].values), d, scheme);
                }
                for (std::size_t i = 0; i < plan.probes.size(); ++i) {
                    probe_bits[i] =
                        binarise(quantise(model, eval.samples[plan.probes[i]].values), d, scheme);
                }
                const ScoredCombo combo =
                    score_pairs(ref_bits, probe_bits, plan, config.parallel);
                BinBenchRow row;
                row.method = to_string(scheme);
                row.d = d;
                row.quant = quant;
                row.eer = equal_error_rate(combo.mated, combo.nonmated).eer;
                row.dprime = decidability(combo.mated, combo.nonmated);
                report.rows.push_back(std::move(row));
            }
        }
    }
    return report;
}

std::string report_to_table(const BinBenchReport& report) {
    std::ostringstream os;
    os << "# fvkit binarisation benchmark\n";
    os << "# config " << report.config_echo << "\n";
    os << "method\td\tquantisation\tEER%\td'\n";
    for (const auto& row : report.rows) {
        os << row.method << "\t";
        if (row.d == 0) {
            os << "-\t-";
        } else {
            os << row.d << "\t" << (row.quant ? to_string(*row.quant) : "-");
        }
        os << "\t" << format_double(100.0 * row.eer, "%.4f") << "\t"
           << format_double(row.dprime, "%.3f") << "\n";
    }
    return os.str();
}

std::string report_to_json(const BinBenchReport& report) {
    ordered_json j;
    j["kind"] = "fvkit-binarisation-benchmark";
    j["config"] = report.config_echo;
    j["mated_pairs"] = report.mated_pairs;
    j["nonmated_pairs"] = report.nonmated_pairs;
    j["rows"] = ordered_json::array();
    for (const auto& row : report.rows) {
        ordered_json r;
        r["method"] = row.method;
        if (row.d != 0) {
            r["d"] = row.d;
            r["quantisation"] = row.quant ? to_string(*row.quant) : "";
        }
        r["eer"] = row.eer;
        r["dprime"] = row.dprime;
        j["rows"].push_back(std::move(r));
    }
    return j.dump(2) + "\n";
}

}  // namespace fv
