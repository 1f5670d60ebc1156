// Command-line surface for the fuzzy vault toolkit: dataset synthesis,
// quantiser fitting, feature transformation, enrolment/verification, the
// binarisation and vault benchmarks, security reporting and record
// inspection.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error,
// 3 data or format error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fvkit/errors.hpp"
#include "fvkit/harness.hpp"
#include "fvkit/rng.hpp"
#include "fvkit/security.hpp"
#include "fvkit/vault.hpp"

namespace {

using namespace fv;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

std::string hex(std::span<const std::uint8_t> bytes) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (const std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

std::vector<std::uint8_t> parse_hex(const std::string& text) {
    if (text.size() % 2 != 0) throw std::invalid_argument("hex string must have even length");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        throw std::invalid_argument("invalid hex digit");
    };
    std::vector<std::uint8_t> out(text.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(nibble(text[2 * i]) << 4 | nibble(text[2 * i + 1]));
    }
    return out;
}

BinScheme bin_scheme_or_throw(const std::string& name) {
    const auto scheme = parse_bin_scheme(name);
    if (!scheme) throw std::invalid_argument("unknown binarisation scheme '" + name + "'");
    return *scheme;
}

QuantScheme quant_scheme_or_throw(const std::string& name) {
    const auto scheme = parse_quant_scheme(name);
    if (!scheme) throw std::invalid_argument("unknown quantisation scheme '" + name + "'");
    return *scheme;
}

DecoderStrategy decoder_or_throw(const std::string& name) {
    if (name == "lagrange" || name == "lg") return DecoderStrategy::LagrangeIterated;
    if (name == "rs" || name == "gao") return DecoderStrategy::RsGaoIterated;
    if (name == "gs") return DecoderStrategy::GsList;
    throw std::invalid_argument("unknown decoder '" + name + "' (use lagrange|rs|gs)");
}

FeatureSet transform_row(const Dataset& data, std::size_t row, const QuantiserModel& model,
                         BinScheme scheme) {
    if (row >= data.samples.size()) {
        throw std::invalid_argument("row " + std::to_string(row) + " out of range (dataset has " +
                                    std::to_string(data.samples.size()) + " rows)");
    }
    return to_feature_set(binarise(quantise(model, data.samples[row].values), model.d, scheme));
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
}

struct CommonDecodeOpts {
    std::string decoder = "gs";
    std::uint64_t max_iterations = std::uint64_t{1} << 16;
    std::uint32_t subset_size = 0;
    unsigned multiplicity = 1;
    std::uint64_t seed = 1;
};

void add_decode_opts(CLI::App* cmd, CommonDecodeOpts& opts) {
    cmd->add_option("--decoder", opts.decoder, "Decoder strategy: lagrange|rs|gs");
    cmd->add_option("--max-iterations", opts.max_iterations,
                    "Iteration budget for subset-sampling strategies");
    cmd->add_option("--subset-size", opts.subset_size,
                    "Subset size c for rs/gs (0 = whole unlocking set)");
    cmd->add_option("--multiplicity", opts.multiplicity, "Interpolation multiplicity for gs");
    cmd->add_option("--seed", opts.seed, "Subset sampling seed");
}

int cmd_synth(const SynthConfig& config, const std::string& train_out,
              const std::string& eval_out) {
    const auto [train, eval] = generate_synthetic(config);
    write_features(train, train_out);
    write_features(eval, eval_out);
    std::printf("wrote %zu train samples to %s\n", train.samples.size(), train_out.c_str());
    std::printf("wrote %zu eval samples to %s\n", eval.samples.size(), eval_out.c_str());
    return kExitOk;
}

int cmd_fit(const std::string& train_path, unsigned d, const std::string& quant,
            std::pair<double, double> range, const std::string& out) {
    const Dataset train = ingest_features(train_path, DatasetRole::Train);
    const QuantiserModel model = fit_quantiser(train, d, quant_scheme_or_throw(quant), range);
    save_quantiser(model, out);
    std::printf("fitted %s d=%u on %zu samples (n=%zu) -> %s\n", quant.c_str(), d,
                train.samples.size(), model.n, out.c_str());
    return kExitOk;
}

int cmd_transform(const std::string& features_path, const std::string& model_path,
                  const std::string& scheme_name, const std::string& out) {
    const Dataset data = ingest_features(features_path, DatasetRole::Eval);
    const QuantiserModel model = load_quantiser(model_path);
    const BinScheme scheme = bin_scheme_or_throw(scheme_name);
    const unsigned m = bits_per_element(scheme, model.d);
    std::ostringstream os;
    os << "fvkit-feature-sets v1\n";
    os << "n " << model.n << " d " << model.d << " scheme " << to_string(scheme) << " m " << m
       << " nm " << model.n * m << "\n";
    for (std::size_t row = 0; row < data.samples.size(); ++row) {
        const FeatureSet set = transform_row(data, row, model, scheme);
        os << data.samples[row].subject_id << " " << data.samples[row].sample_id << " "
           << set.size();
        for (const auto e : set) os << " " << e;
        os << "\n";
    }
    write_text(out, os.str());
    std::printf("transformed %zu samples -> %s\n", data.samples.size(), out.c_str());
    return kExitOk;
}

int cmd_enroll(const std::string& features_path, std::size_t row, const std::string& model_path,
               const std::string& scheme_name, unsigned k, std::uint64_t seed,
               const std::string& salt_hex, const std::string& out) {
    const Dataset data = ingest_features(features_path, DatasetRole::Eval);
    const QuantiserModel model = load_quantiser(model_path);
    const BinScheme scheme = bin_scheme_or_throw(scheme_name);
    const FeatureSet set = transform_row(data, row, model, scheme);
    if (set.empty()) {
        std::fprintf(stderr, "error: sample transforms to an empty feature set\n");
        return kExitData;
    }
    const VaultParams params =
        make_vault_params(static_cast<unsigned>(model.n), model.d, scheme, k);
    const auto salt = parse_hex(salt_hex);
    Rng rng(seed);
    const BindResult bound = bind_vault(set, params, rng, salt);
    save_record(bound.record, out);
    std::printf("enrolled subject=%s sample=%s t=%zu k=%u field=GF(2^%u)\n",
                data.samples[row].subject_id.c_str(), data.samples[row].sample_id.c_str(),
                set.size(), k, params.field_degree);
    std::printf("record: %s\n", out.c_str());
    std::printf("key digest: %s\n", hex(bound.record.key_hash).c_str());
    return kExitOk;
}

int cmd_verify(const std::string& record_path, const std::string& features_path, std::size_t row,
               const std::string& model_path, const CommonDecodeOpts& opts,
               const std::string& salt_hex) {
    const VaultRecord record = load_record(record_path);
    const Dataset data = ingest_features(features_path, DatasetRole::Eval);
    const QuantiserModel model = load_quantiser(model_path);
    if (model.n != record.params.n || model.d != record.params.d) {
        throw std::invalid_argument("quantiser model does not match the record parameters");
    }
    const FeatureSet set = transform_row(data, row, model, record.params.scheme);
    if (set.empty()) {
        std::fprintf(stderr, "error: probe transforms to an empty feature set\n");
        return kExitData;
    }
    DecoderConfig config;
    config.strategy = decoder_or_throw(opts.decoder);
    config.max_iterations = opts.max_iterations;
    config.subset_size = opts.subset_size;
    config.multiplicity = opts.multiplicity;
    config.seed = opts.seed;
    const auto salt = parse_hex(salt_hex);
    const RetrieveResult result = retrieve(record, set, config, salt);
    if (!result.success) {
        std::printf("verification failed after %llu iteration(s) (%.1f ms)\n",
                    static_cast<unsigned long long>(result.outcome.iterations),
                    1e3 * result.outcome.elapsed_seconds);
        return kExitVerifyFailed;
    }
    std::printf("verified in %llu iteration(s) (%.1f ms)\n",
                static_cast<unsigned long long>(result.outcome.iterations),
                1e3 * result.outcome.elapsed_seconds);
    std::printf("derived-key digest: %s\n", hex(record.key_hash).c_str());
    return kExitOk;
}

int cmd_bench_binarise(const std::string& train_path, const std::string& eval_path,
                       std::vector<unsigned> interval_counts,
                       std::vector<std::string> scheme_names,
                       std::vector<std::string> quant_names, std::pair<double, double> range,
                       bool serial, const std::string& out_base) {
    const Dataset train = ingest_features(train_path, DatasetRole::Train);
    const Dataset eval = ingest_features(eval_path, DatasetRole::Eval);
    BinBenchConfig config;
    if (!interval_counts.empty()) config.interval_counts = std::move(interval_counts);
    if (!scheme_names.empty()) {
        config.bin_schemes.clear();
        for (const auto& name : scheme_names) {
            config.bin_schemes.push_back(bin_scheme_or_throw(name));
        }
    }
    if (!quant_names.empty()) {
        config.quant_schemes.clear();
        for (const auto& name : quant_names) {
            config.quant_schemes.push_back(quant_scheme_or_throw(name));
        }
    }
    config.range = range;
    config.parallel = !serial;
    const BinBenchReport report = run_binarisation_benchmark(train, eval, config);
    const std::string table = report_to_table(report);
    std::fputs(table.c_str(), stdout);
    if (!out_base.empty()) {
        write_text(out_base + ".txt", table);
        write_text(out_base + ".json", report_to_json(report));
        std::printf("wrote %s.txt and %s.json\n", out_base.c_str(), out_base.c_str());
    }
    return kExitOk;
}

int cmd_bench_vault(const std::string& train_path, const std::string& eval_path,
                    VaultBenchConfig config, const std::string& scheme_name,
                    const std::string& quant_name, const std::vector<std::string>& decoder_names,
                    const std::string& timing, bool serial, const std::string& out_base,
                    const std::string& records_dir) {
    const Dataset train = ingest_features(train_path, DatasetRole::Train);
    const Dataset eval = ingest_features(eval_path, DatasetRole::Eval);
    config.scheme = bin_scheme_or_throw(scheme_name);
    config.quant = quant_scheme_or_throw(quant_name);
    if (!decoder_names.empty()) {
        config.decoders.clear();
        for (const auto& name : decoder_names) config.decoders.push_back(decoder_or_throw(name));
    }
    if (timing == "off") {
        config.measure_time = false;
    } else if (timing != "wall") {
        throw std::invalid_argument("--timing must be wall or off");
    }
    config.parallel = !serial;
    const MetricsReport report = run_vault_benchmark(train, eval, config);
    const std::string table = report_to_table(report);
    std::fputs(table.c_str(), stdout);
    if (!out_base.empty()) {
        write_text(out_base + ".txt", table);
        write_text(out_base + ".json", report_to_json(report));
        std::printf("wrote %s.txt and %s.json\n", out_base.c_str(), out_base.c_str());
    }
    if (!records_dir.empty()) {
        std::filesystem::create_directories(records_dir);
        const EnrolledVaults vaults = enroll_references(train, eval, config);
        std::size_t idx = 0;
        for (std::size_t kk = 0; kk < vaults.degrees.size(); ++kk) {
            for (std::size_t r = 0; r < vaults.reference_ids.size(); ++r, ++idx) {
                char name[160];
                std::snprintf(name, sizeof(name), "%s/k%u_%s.fv", records_dir.c_str(),
                              vaults.degrees[kk], vaults.reference_ids[r].c_str());
                std::ofstream out(name, std::ios::binary);
                if (!out) throw std::runtime_error(std::string("cannot write ") + name);
                out.write(reinterpret_cast<const char*>(vaults.records[idx].data()),
                          static_cast<std::streamsize>(vaults.records[idx].size()));
            }
        }
        std::printf("wrote %zu records to %s\n", idx, records_dir.c_str());
    }
    return kExitOk;
}

int cmd_security_report(const std::string& bench_json, const std::vector<double>& fas_args,
                        const std::vector<std::uint64_t>& linkage_args, unsigned bfs_k,
                        bool rule_of_three) {
    bool did_something = false;
    if (fas_args.size() == 2) {
        std::printf("fas: fmr=%g l=%g -> %.3f bits\n", fas_args[0], fas_args[1],
                    fas_bits(fas_args[0], fas_args[1]));
        did_something = true;
    }
    if (!linkage_args.empty()) {
        if (linkage_args.size() != 4) {
            throw std::invalid_argument("--linkage needs four values: rho |P| |P'| k");
        }
        const std::uint64_t rho = linkage_args[0];
        const std::uint64_t p1 = linkage_args[1];
        const std::uint64_t p2 = linkage_args[2];
        const std::uint64_t k = linkage_args[3];
        const mpq_class exact = linkage_probability_exact(rho, p1, p2, k);
        std::printf("linkage: universe=%llu |P|=%llu |P'|=%llu k=%llu\n",
                    static_cast<unsigned long long>(rho), static_cast<unsigned long long>(p1),
                    static_cast<unsigned long long>(p2), static_cast<unsigned long long>(k));
        const double val = exact.get_d();
        std::printf("  probability ~ %.6e%s\n", val,
                    val == 0.0 && exact > 0 ? " (below double precision; exact value positive)"
                                            : "");
        did_something = true;
    }
    if (bfs_k > 0) {
        std::printf("bfs floor: k=%u -> %u bits (overestimate-prone; report alongside the "
                    "false-accept security, never instead of it)\n",
                    bfs_k, bfs_floor_bits(bfs_k));
        did_something = true;
    }
    if (!bench_json.empty()) {
        std::ifstream in(bench_json, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + bench_json);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw FormatError(std::string("bad benchmark JSON: ") + e.what(), 0);
        }
        std::vector<FasEntry> series;
        for (const auto& row : j.at("rows")) {
            if (row.at("decoder").get<std::string>() != "gs") continue;
            FasEntry entry;
            entry.k = row.at("k").get<unsigned>();
            const double fmr = row.at("fmr").get<double>();
            const double ops = std::max(1.0, row.at("ops_lagrange_units").get<double>());
            if (fmr > 0.0 && fmr < 1.0) entry.bits = fas_bits(fmr, ops);
            series.push_back(entry);
        }
        series = fas_extrapolate(std::move(series));
        std::printf("k\tdecoder\tFMR%%\tGMR%%\tFAS_bits\tBFS_bits%s\n",
                    rule_of_three ? "\tFMR_bound_3N%" : "");
        for (const auto& row : j.at("rows")) {
            if (row.at("decoder").get<std::string>() != "gs") continue;
            const unsigned k = row.at("k").get<unsigned>();
            const double fmr = row.at("fmr").get<double>();
            const double gmr = row.at("gmr").get<double>();
            const FasEntry* entry = nullptr;
            for (const auto& e : series) {
                if (e.k == k) entry = &e;
            }
            std::printf("%u\tgs\t%.4f\t%.4f\t", k, 100.0 * fmr, 100.0 * gmr);
            if (entry != nullptr && entry->bits) {
                std::printf("%.2f%s", *entry->bits, entry->extrapolated ? "*" : "");
            } else {
                std::printf("-");
            }
            std::printf("\t%u", bfs_floor_bits(k));
            if (rule_of_three) {
                const auto trials = row.at("nonmated_trials").get<std::uint64_t>();
                const auto successes = row.at("nonmated_successes").get<std::uint64_t>();
                const double bound =
                    successes == 0 && trials > 0 ? 3.0 / static_cast<double>(trials) : fmr;
                std::printf("\t%.4f", 100.0 * bound);
            }
            std::printf("\n");
        }
        std::printf("(* = extrapolated from the last two estimable degrees)\n");
        did_something = true;
    }
    if (!did_something) {
        throw std::invalid_argument("nothing to report: give --bench, --fas, --linkage or --bfs");
    }
    return kExitOk;
}

int cmd_record_inspect(const std::string& record_path) {
    std::ifstream in(record_path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + record_path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    const VaultRecord record = deserialize_record(bytes);
    const VaultParams& p = record.params;
    std::printf("record: %s (%zu bytes)\n", record_path.c_str(), bytes.size());
    std::printf("  field: GF(2^%u), reduction polynomial 0x%X\n", p.field_degree,
                p.field().reduction_poly());
    std::printf("  n=%u m=%u d=%u scheme=%s k=%u\n", p.n, p.m, p.d, to_string(p.scheme), p.k);
    std::printf("  vault polynomial degree: %d (always n*m = %u)\n", record.v.degree(), p.nm());
    std::printf("  key digest: %s\n", hex(record.key_hash).c_str());
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fvkit - fuzzy vault toolkit for fixed-length real-valued feature vectors"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a config file");

    std::function<int()> action;

    {
        auto* cmd = app.add_subcommand("synth", "Generate synthetic train/eval feature sets");
        auto config = std::make_shared<SynthConfig>();
        auto train_out = std::make_shared<std::string>("train.csv");
        auto eval_out = std::make_shared<std::string>("eval.csv");
        cmd->add_option("--n", config->n, "Feature vector length");
        cmd->add_option("--subjects", config->subjects, "Subjects per split");
        cmd->add_option("--samples", config->samples_per_subject, "Samples per subject");
        cmd->add_option("--sigma-within", config->sigma_within, "Within-subject noise");
        cmd->add_option("--sigma-between", config->sigma_between, "Between-subject spread");
        cmd->add_option("--seed", config->seed, "Generator seed");
        cmd->add_option("--train-out", *train_out, "Training CSV path");
        cmd->add_option("--eval-out", *eval_out, "Evaluation CSV path");
        cmd->callback([&action, config, train_out, eval_out]() {
            action = [=]() { return cmd_synth(*config, *train_out, *eval_out); };
        });
    }

    {
        auto* cmd =
            app.add_subcommand("fit-quantiser", "Fit interval boundaries on training data");
        auto train = std::make_shared<std::string>();
        auto d = std::make_shared<unsigned>(4);
        auto quant = std::make_shared<std::string>("equal_probable");
        auto range = std::make_shared<std::pair<double, double>>(-0.3, 0.3);
        auto out = std::make_shared<std::string>("quantiser.model");
        cmd->add_option("--train", *train, "Training CSV (train role)")->required();
        cmd->add_option("--d", *d, "Intervals per element (power of two)");
        cmd->add_option("--quant", *quant, "equal_probable|equal_size");
        cmd->add_option("--range", *range, "Feature range for equal_size (lo hi)");
        cmd->add_option("--out", *out, "Model output path");
        cmd->callback([&action, train, d, quant, range, out]() {
            action = [=]() { return cmd_fit(*train, *d, *quant, *range, *out); };
        });
    }

    {
        auto* cmd = app.add_subcommand("transform", "Map features to integer feature sets");
        auto features = std::make_shared<std::string>();
        auto model = std::make_shared<std::string>();
        auto scheme = std::make_shared<std::string>("lssc");
        auto out = std::make_shared<std::string>("sets.txt");
        cmd->add_option("--features", *features, "Feature CSV")->required();
        cmd->add_option("--model", *model, "Quantiser model document")->required();
        cmd->add_option("--binarise", *scheme, "boolean|dbr|brgc|lssc|onehot");
        cmd->add_option("--out", *out, "Feature-set output path");
        cmd->callback([&action, features, model, scheme, out]() {
            action = [=]() { return cmd_transform(*features, *model, *scheme, *out); };
        });
    }

    {
        auto* cmd = app.add_subcommand("enroll", "Bind a feature vector into a vault record");
        auto features = std::make_shared<std::string>();
        auto row = std::make_shared<std::size_t>(0);
        auto model = std::make_shared<std::string>();
        auto scheme = std::make_shared<std::string>("lssc");
        auto k = std::make_shared<unsigned>(0);
        auto seed = std::make_shared<std::uint64_t>(1);
        auto salt = std::make_shared<std::string>("");
        auto out = std::make_shared<std::string>("record.fv");
        cmd->add_option("--features", *features, "Feature CSV")->required();
        cmd->add_option("--row", *row, "Row index of the sample to enroll");
        cmd->add_option("--model", *model, "Quantiser model document")->required();
        cmd->add_option("--binarise", *scheme, "boolean|dbr|brgc|lssc|onehot");
        cmd->add_option("--k", *k, "Secret polynomial degree bound")->required();
        cmd->add_option("--seed", *seed, "Secret sampling seed");
        cmd->add_option("--salt", *salt, "Optional deployment salt (hex)");
        cmd->add_option("--out", *out, "Record output path");
        cmd->callback([&action, features, row, model, scheme, k, seed, salt, out]() {
            action = [=]() {
                return cmd_enroll(*features, *row, *model, *scheme, *k, *seed, *salt, *out);
            };
        });
    }

    {
        auto* cmd = app.add_subcommand("verify", "Retrieve the key from a record with a probe");
        auto record = std::make_shared<std::string>();
        auto features = std::make_shared<std::string>();
        auto row = std::make_shared<std::size_t>(0);
        auto model = std::make_shared<std::string>();
        auto opts = std::make_shared<CommonDecodeOpts>();
        auto salt = std::make_shared<std::string>("");
        cmd->add_option("--record", *record, "Vault record path")->required();
        cmd->add_option("--features", *features, "Probe feature CSV")->required();
        cmd->add_option("--row", *row, "Row index of the probe sample");
        cmd->add_option("--model", *model, "Quantiser model document")->required();
        add_decode_opts(cmd, *opts);
        cmd->add_option("--salt", *salt, "Optional deployment salt (hex)");
        cmd->callback([&action, record, features, row, model, opts, salt]() {
            action = [=]() {
                return cmd_verify(*record, *features, *row, *model, *opts, *salt);
            };
        });
    }

    {
        auto* cmd = app.add_subcommand("bench-binarise",
                                       "EER and decidability per binarisation scheme");
        auto train = std::make_shared<std::string>();
        auto eval = std::make_shared<std::string>();
        auto intervals = std::make_shared<std::vector<unsigned>>();
        auto schemes = std::make_shared<std::vector<std::string>>();
        auto quants = std::make_shared<std::vector<std::string>>();
        auto range = std::make_shared<std::pair<double, double>>(-0.3, 0.3);
        auto serial = std::make_shared<bool>(false);
        auto out = std::make_shared<std::string>("");
        cmd->add_option("--train", *train, "Training CSV")->required();
        cmd->add_option("--eval", *eval, "Evaluation CSV")->required();
        cmd->add_option("--d", *intervals, "Interval counts, e.g. --d 4 8 16");
        cmd->add_option("--schemes", *schemes, "Binarisation schemes to benchmark");
        cmd->add_option("--quant", *quants, "Quantisation schemes to benchmark");
        cmd->add_option("--range", *range, "Feature range for equal_size (lo hi)");
        cmd->add_flag("--serial", *serial, "Run trials on one thread");
        cmd->add_option("--out", *out, "Report basename (writes .txt and .json)");
        cmd->callback([&action, train, eval, intervals, schemes, quants, range, serial, out]() {
            action = [=]() {
                return cmd_bench_binarise(*train, *eval, *intervals, *schemes, *quants, *range,
                                          *serial, *out);
            };
        });
    }

    {
        auto* cmd = app.add_subcommand("bench-vault",
                                       "FNMR/FMR per degree and decoder, with security columns");
        auto train = std::make_shared<std::string>();
        auto eval = std::make_shared<std::string>();
        auto config = std::make_shared<VaultBenchConfig>();
        auto scheme = std::make_shared<std::string>("lssc");
        auto quant = std::make_shared<std::string>("equal_probable");
        auto decoders = std::make_shared<std::vector<std::string>>();
        auto timing = std::make_shared<std::string>("wall");
        auto serial = std::make_shared<bool>(false);
        auto out = std::make_shared<std::string>("");
        auto records_dir = std::make_shared<std::string>("");
        cmd->add_option("--train", *train, "Training CSV")->required();
        cmd->add_option("--eval", *eval, "Evaluation CSV")->required();
        cmd->add_option("--d", config->d, "Intervals per element");
        cmd->add_option("--binarise", *scheme, "Binarisation scheme");
        cmd->add_option("--quant", *quant, "Quantisation scheme");
        cmd->add_option("--range", config->range, "Feature range for equal_size (lo hi)");
        cmd->add_option("--k", config->degrees, "Degree sweep, e.g. --k 8 16 24")->required();
        cmd->add_option("--decoders", *decoders, "Decoders: lagrange rs gs");
        cmd->add_option("--max-iterations", config->max_iterations, "Iteration budget");
        cmd->add_option("--subset-size", config->subset_size, "Subset size c (0 = full set)");
        cmd->add_option("--multiplicity", config->multiplicity, "GS multiplicity");
        cmd->add_option("--nonmated-cap", config->nonmated_cap,
                        "Cap on non-mated pairs (0 = all)");
        cmd->add_option("--seed", config->seed, "Experiment seed");
        cmd->add_option("--timing", *timing, "wall|off (off keeps reports bit-reproducible)");
        cmd->add_flag("--serial", *serial, "Run trials on one thread");
        cmd->add_flag("--rule-of-three", config->rule_of_three,
                      "Add the 3/N FMR upper-bound column for zero-false-match rows");
        cmd->add_option("--out", *out, "Report basename (writes .txt and .json)");
        cmd->add_option("--records-out", *records_dir, "Directory for enrolled records");
        cmd->callback([&action, train, eval, config, scheme, quant, decoders, timing, serial,
                       out, records_dir]() {
            action = [=]() {
                return cmd_bench_vault(*train, *eval, *config, *scheme, *quant, *decoders,
                                       *timing, *serial, *out, *records_dir);
            };
        });
    }

    {
        auto* cmd = app.add_subcommand("security-report",
                                       "Security math: FAS, linkage probability, BFS floor");
        auto bench = std::make_shared<std::string>("");
        auto fas = std::make_shared<std::vector<double>>();
        auto linkage = std::make_shared<std::vector<std::uint64_t>>();
        auto bfs = std::make_shared<unsigned>(0);
        auto rule3 = std::make_shared<bool>(false);
        cmd->add_option("--bench", *bench, "bench-vault JSON report to annotate");
        cmd->add_option("--fas", *fas, "FMR and operation count: --fas 0.01 1024")->expected(2);
        cmd->add_option("--linkage", *linkage, "Universe and set sizes: --linkage rho |P| |P'| k")
            ->expected(4);
        cmd->add_option("--bfs", *bfs, "Brute-force floor for degree k");
        cmd->add_flag("--rule-of-three", *rule3, "Add the 3/N FMR upper-bound column");
        cmd->callback([&action, bench, fas, linkage, bfs, rule3]() {
            action = [=]() { return cmd_security_report(*bench, *fas, *linkage, *bfs, *rule3); };
        });
    }

    {
        auto* cmd = app.add_subcommand("record-inspect", "Parse and describe a vault record");
        auto record = std::make_shared<std::string>();
        cmd->add_option("--record", *record, "Vault record path")->required();
        cmd->callback(
            [&action, record]() { action = [=]() { return cmd_record_inspect(*record); }; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        return action();
    } catch (const fv::FormatError& e) {
        std::fprintf(stderr, "format error: %s\n", e.what());
        return kExitData;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitData;
    }
}
