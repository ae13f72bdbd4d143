#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eigensense/detectors.hpp"
#include "eigensense/evaluation.hpp"
#include "eigensense/signal_model.hpp"
#include "eigensense/types.hpp"

namespace eigensense {

enum class ExperimentKind { Cdf, Threshold, Detection, Sweep };
enum class EmitFormat { Csv, Json };

const char* to_string(ExperimentKind k);
const char* to_string(EmitFormat f);

// Raised for invalid configuration; the CLI maps it to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExperimentSpec {
    ExperimentKind experiment = ExperimentKind::Cdf;
    DetectorKind detector = DetectorKind::MED;
    ValueCase vc = ValueCase::Real;
    Scenario scenario = Scenario::S0;  // cdf experiment only; others imply it
    int K = 2;
    int N = 1000;
    int t = 1;
    double sigma_s2 = 1.0;
    double sigma_u2 = 1.0;
    double snr_db = 0.0;
    bool has_snr_db = false;
    std::vector<double> channel;       // K*t real gains; empty = all-ones column
    std::string channel_policy = "fixed";  // "fixed" | "redraw"
    int n_runs = 10000;
    std::uint64_t seed = 12345;
    std::vector<double> pfa_grid;      // default: 10 points in [0.02, 0.2]
    double sweep_pfa = 0.1;
    std::vector<double> snr_grid_db;   // sweep experiment
    std::string output_path;           // empty = stdout
    EmitFormat format = EmitFormat::Csv;
    int workers = 1;
    std::string tw_table_path;         // empty = data/tw{1,2}_cdf.csv by case
    double rel_tol = 1e-9;
};

bool operator==(const ExperimentSpec& a, const ExperimentSpec& b);

// Flat key=value config text. parse(serialize(spec)) == spec.
ExperimentSpec parse_config_text(const std::string& text);
ExperimentSpec parse_config_file(const std::string& path);
std::string serialize_config(const ExperimentSpec& spec);

void validate_spec(const ExperimentSpec& spec);
std::vector<double> effective_pfa_grid(const ExperimentSpec& spec);
std::string effective_tw_path(const ExperimentSpec& spec);

struct ExperimentResult {
    ExperimentSpec spec;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::pair<std::string, std::string>> metadata;  // emitted, ordered
    double wall_seconds = 0.0;  // reported to stderr only, never emitted
};

// Raw per-run test statistics under the given scenario, parallelized over a
// worker pool; identical output for any worker count.
std::vector<double> run_statistics(const ScenarioConfig& cfg, DetectorKind detector,
                                   int n_runs, std::uint64_t run_offset, int workers,
                                   const std::string& channel_policy = "fixed",
                                   double target_snr_db = 0.0, bool rescale_channel = false);

ExperimentResult run_cdf_experiment(const ExperimentSpec& spec);
ExperimentResult run_threshold_experiment(const ExperimentSpec& spec);
ExperimentResult run_detection_experiment(const ExperimentSpec& spec);
ExperimentResult run_sweep_experiment(const ExperimentSpec& spec);
ExperimentResult run_experiment(const ExperimentSpec& spec);

void emit(const ExperimentResult& result, std::ostream& out, EmitFormat format);
void emit_to_path(const ExperimentResult& result);  // output_path or stdout

}  // namespace eigensense
