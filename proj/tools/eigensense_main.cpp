#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "eigensense/experiment.hpp"
#include "eigensense/rmt_dist.hpp"

namespace {

using namespace eigensense;

struct Overrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<int> K, N, runs;
    std::optional<std::string> vcase, detector;
    std::optional<double> snr_db, pfa;
    std::optional<std::string> tw_table;
};

void add_common(CLI::App* cmd, Overrides& ov) {
    cmd->add_option("--config", ov.config_path, "Config file (key = value lines)");
    cmd->add_option("--seed", ov.seed, "RNG seed");
    cmd->add_option("--workers", ov.workers, "Worker thread count");
    cmd->add_option("--out", ov.out, "Output path (default: stdout)");
    cmd->add_option("--format", ov.format, "csv|json");
    cmd->add_option("--K", ov.K, "Antenna count");
    cmd->add_option("--N", ov.N, "Samples per antenna");
    cmd->add_option("--case", ov.vcase, "real|complex");
    cmd->add_option("--detector", ov.detector, "med|cnd");
    cmd->add_option("--snr-db", ov.snr_db, "Target SNR in dB (S1)");
    cmd->add_option("--pfa", ov.pfa, "Single target false-alarm probability");
    cmd->add_option("--runs", ov.runs, "Monte Carlo run count");
    cmd->add_option("--tw-table", ov.tw_table, "Tracy-Widom CDF table (CSV)");
}

ExperimentSpec resolve(const Overrides& ov, ExperimentKind kind) {
    ExperimentSpec spec;
    if (!ov.config_path.empty()) spec = parse_config_file(ov.config_path);
    spec.experiment = kind;
    // CLI flags win over the config file.
    if (ov.seed) spec.seed = *ov.seed;
    if (ov.workers) spec.workers = *ov.workers;
    if (ov.out) spec.output_path = *ov.out;
    if (ov.format) {
        if (*ov.format == "csv") spec.format = EmitFormat::Csv;
        else if (*ov.format == "json") spec.format = EmitFormat::Json;
        else throw ConfigError("format: unknown value '" + *ov.format + "'");
    }
    if (ov.K) spec.K = *ov.K;
    if (ov.N) spec.N = *ov.N;
    if (ov.runs) spec.n_runs = *ov.runs;
    if (ov.vcase) {
        if (*ov.vcase == "real") spec.vc = ValueCase::Real;
        else if (*ov.vcase == "complex") spec.vc = ValueCase::Complex;
        else throw ConfigError("case: unknown value '" + *ov.vcase + "'");
    }
    if (ov.detector) {
        if (*ov.detector == "med") spec.detector = DetectorKind::MED;
        else if (*ov.detector == "cnd") spec.detector = DetectorKind::CND;
        else throw ConfigError("detector: unknown value '" + *ov.detector + "'");
    }
    if (ov.snr_db) {
        spec.snr_db = *ov.snr_db;
        spec.has_snr_db = true;
    }
    if (ov.pfa) spec.pfa_grid = {*ov.pfa};
    if (ov.tw_table) spec.tw_table_path = *ov.tw_table;
    return spec;
}

int run(const ExperimentSpec& spec) {
    validate_spec(spec);
    std::cerr << "eigensense: " << to_string(spec.experiment) << " "
              << to_string(spec.detector) << " " << to_string(spec.vc) << " K=" << spec.K
              << " N=" << spec.N << " runs=" << spec.n_runs << " seed=" << spec.seed
              << " workers=" << spec.workers << "\n";
    const ExperimentResult res = run_experiment(spec);
    emit_to_path(res);
    std::cerr << "eigensense: done in " << res.wall_seconds << " s\n";
    return 0;
}

int build_tables(const Overrides& ov, const std::string& out_dir) {
    ExperimentSpec spec;
    if (!ov.config_path.empty()) spec = parse_config_file(ov.config_path);
    if (ov.K) spec.K = *ov.K;
    if (ov.vcase)
        spec.vc = *ov.vcase == "complex" ? ValueCase::Complex : ValueCase::Real;
    std::filesystem::create_directories(out_dir);
    const std::string vc = to_string(spec.vc);
    const auto path = [&](const std::string& name) {
        return out_dir + "/" + name + "_K" + std::to_string(spec.K) + "_" + vc + ".tbl";
    };
    save_table(rmt::cached_marginal(spec.K, 1, spec.vc), path("marginal_top"));
    save_table(rmt::cached_marginal(spec.K, spec.K, spec.vc), path("marginal_bottom"));
    std::cerr << "eigensense: wrote marginal tables to " << out_dir << "\n";
    if (spec.K >= 2) {
        save_table(rmt::cached_cnd_s0(spec.K, spec.vc), path("cnd_s0"));
        std::cerr << "eigensense: wrote cnd table\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Eigenvalue-based spectrum sensing experiments (MED/CND)"};
    app.require_subcommand(1);
    Overrides ov;
    std::string tables_out = "tables";

    CLI::App* cdf = app.add_subcommand("cdf", "Empirical vs. theoretical CDF of the statistic");
    CLI::App* threshold = app.add_subcommand("threshold", "Threshold comparison under S0");
    CLI::App* detect = app.add_subcommand("detect", "Detection probability under S1");
    CLI::App* sweep = app.add_subcommand("sweep", "Detection probability over an SNR grid");
    CLI::App* tables = app.add_subcommand("tables", "Pre-build and cache distribution tables");
    for (CLI::App* cmd : {cdf, threshold, detect, sweep, tables}) add_common(cmd, ov);
    tables->add_option("--out-dir", tables_out, "Directory for cached tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (cdf->parsed()) return run(resolve(ov, ExperimentKind::Cdf));
        if (threshold->parsed()) return run(resolve(ov, ExperimentKind::Threshold));
        if (detect->parsed()) return run(resolve(ov, ExperimentKind::Detection));
        if (sweep->parsed()) return run(resolve(ov, ExperimentKind::Sweep));
        if (tables->parsed()) return build_tables(ov, tables_out);
    } catch (const ConfigError& e) {
        std::cerr << "eigensense: config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "eigensense: config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "eigensense: error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
