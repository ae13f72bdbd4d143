#include "eigensense/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "eigensense/rmt_dist.hpp"

#include <json.hpp>

namespace eigensense {

namespace {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double round12(double v) { return std::strtod(fmt12(v).c_str(), nullptr); }

// Type-7 quantile of a sorted sample.
double sorted_quantile(const std::vector<double>& s, double p) {
    const double h = (static_cast<double>(s.size()) - 1.0) * p;
    const std::size_t i = static_cast<std::size_t>(h);
    if (i + 1 >= s.size()) return s.back();
    return s[i] + (h - i) * (s[i + 1] - s[i]);
}

std::vector<cplx> build_channel(const ExperimentSpec& spec) {
    std::vector<cplx> h;
    if (spec.channel.empty()) {
        h.assign(static_cast<std::size_t>(spec.K) * spec.t, cplx(1.0, 0.0));
    } else {
        h.reserve(spec.channel.size());
        for (double v : spec.channel) h.emplace_back(v, 0.0);
    }
    if (spec.has_snr_db)
        h = scale_channel_to_snr(h, spec.K, spec.t, spec.sigma_s2, spec.sigma_u2, spec.snr_db);
    return h;
}

ScenarioConfig base_config(const ExperimentSpec& spec, Scenario scenario) {
    ScenarioConfig cfg;
    cfg.K = spec.K;
    cfg.N = spec.N;
    cfg.vc = spec.vc;
    cfg.scenario = scenario;
    cfg.t = spec.t;
    cfg.sigma_s2 = spec.sigma_s2;
    cfg.sigma_u2 = spec.sigma_u2;
    cfg.seed = spec.seed;
    if (scenario == Scenario::S1) cfg.channel = build_channel(spec);
    return cfg;
}

void base_metadata(ExperimentResult& r, const ExperimentSpec& spec) {
    r.metadata.emplace_back("version", kVersionTag);
    r.metadata.emplace_back("experiment", to_string(spec.experiment));
    r.metadata.emplace_back("detector", to_string(spec.detector));
    r.metadata.emplace_back("case", to_string(spec.vc));
    r.metadata.emplace_back("K", std::to_string(spec.K));
    r.metadata.emplace_back("N", std::to_string(spec.N));
    r.metadata.emplace_back("n_runs", std::to_string(spec.n_runs));
    r.metadata.emplace_back("seed", std::to_string(spec.seed));
    r.metadata.emplace_back("channel_policy", spec.channel_policy);
}

}  // namespace

const char* to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Cdf: return "cdf";
        case ExperimentKind::Threshold: return "threshold";
        case ExperimentKind::Detection: return "detection";
        case ExperimentKind::Sweep: return "sweep";
    }
    return "?";
}

const char* to_string(EmitFormat f) { return f == EmitFormat::Csv ? "csv" : "json"; }

bool operator==(const ExperimentSpec& a, const ExperimentSpec& b) {
    return a.experiment == b.experiment && a.detector == b.detector && a.vc == b.vc &&
           a.scenario == b.scenario && a.K == b.K && a.N == b.N && a.t == b.t &&
           a.sigma_s2 == b.sigma_s2 && a.sigma_u2 == b.sigma_u2 && a.snr_db == b.snr_db &&
           a.has_snr_db == b.has_snr_db && a.channel == b.channel &&
           a.channel_policy == b.channel_policy && a.n_runs == b.n_runs && a.seed == b.seed &&
           a.pfa_grid == b.pfa_grid && a.sweep_pfa == b.sweep_pfa &&
           a.snr_grid_db == b.snr_grid_db && a.output_path == b.output_path &&
           a.format == b.format && a.workers == b.workers &&
           a.tw_table_path == b.tw_table_path && a.rel_tol == b.rel_tol;
}

std::vector<double> effective_pfa_grid(const ExperimentSpec& spec) {
    if (!spec.pfa_grid.empty()) return spec.pfa_grid;
    std::vector<double> grid(10);
    for (int i = 0; i < 10; ++i) grid[i] = 0.02 + 0.02 * i;
    return grid;
}

std::string effective_tw_path(const ExperimentSpec& spec) {
    if (!spec.tw_table_path.empty()) return spec.tw_table_path;
    return spec.vc == ValueCase::Real ? "data/tw1_cdf.csv" : "data/tw2_cdf.csv";
}

void validate_spec(const ExperimentSpec& spec) {
    if (spec.K < 1) throw ConfigError("K: must be >= 1");
    if (spec.N < 1) throw ConfigError("N: must be >= 1");
    if (spec.t < 1) throw ConfigError("t: must be >= 1");
    if (spec.n_runs < 1) throw ConfigError("n_runs: must be >= 1");
    if (spec.workers < 1) throw ConfigError("workers: must be >= 1");
    if (!(spec.sigma_u2 > 0.0)) throw ConfigError("sigma_u2: must be > 0");
    if (!(spec.rel_tol > 0.0)) throw ConfigError("rel_tol: must be > 0");
    if (spec.detector == DetectorKind::CND && spec.K < 2)
        throw ConfigError("K: CND requires K >= 2");
    if (spec.channel_policy != "fixed" && spec.channel_policy != "redraw")
        throw ConfigError("channel_policy: must be 'fixed' or 'redraw'");
    const auto grid = effective_pfa_grid(spec);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0 && grid[i] < 1.0))
            throw ConfigError("pfa_grid: values must be in (0,1)");
        if (i > 0 && grid[i] <= grid[i - 1])
            throw ConfigError("pfa_grid: values must be strictly increasing");
    }
    if (!spec.channel.empty() &&
        spec.channel.size() != static_cast<std::size_t>(spec.K) * spec.t)
        throw ConfigError("channel: must have K*t entries");
    const bool s1 = spec.experiment == ExperimentKind::Detection ||
                    spec.experiment == ExperimentKind::Sweep ||
                    (spec.experiment == ExperimentKind::Cdf && spec.scenario == Scenario::S1);
    if (s1) {
        if (!(spec.sigma_s2 > 0.0))
            throw ConfigError("sigma_s2: must be > 0 under S1 (assumption iv)");
        if (!spec.has_snr_db && spec.channel.empty() &&
            spec.experiment != ExperimentKind::Sweep)
            throw ConfigError("snr_db or channel: required under S1");
        bool nonzero = spec.channel.empty();
        for (double v : spec.channel)
            if (v != 0.0) nonzero = true;
        if (!nonzero) throw ConfigError("channel: must be nonzero");
    }
    if (spec.experiment == ExperimentKind::Sweep && spec.snr_grid_db.empty())
        throw ConfigError("snr_grid_db: required for sweep");
    if (spec.experiment == ExperimentKind::Sweep &&
        !(spec.sweep_pfa > 0.0 && spec.sweep_pfa < 1.0))
        throw ConfigError("sweep_pfa: must be in (0,1)");
}

std::vector<double> run_statistics(const ScenarioConfig& cfg, DetectorKind detector,
                                   int n_runs, std::uint64_t run_offset, int workers,
                                   const std::string& channel_policy, double target_snr_db,
                                   bool rescale_channel) {
    std::vector<double> out(n_runs);
    const bool redraw = cfg.scenario == Scenario::S1 && channel_policy == "redraw";
    const auto work = [&](int lo, int hi) {
        ScenarioConfig c = cfg;
        for (int r = lo; r < hi; ++r) {
            RandomStream rng = RandomStream::for_run(cfg.seed, run_offset + r);
            if (redraw) {
                c.channel.resize(static_cast<std::size_t>(c.K) * c.t);
                for (auto& h : c.channel)
                    h = c.vc == ValueCase::Real ? cplx(rng.gaussian(), 0.0) : rng.cgaussian();
                if (rescale_channel)
                    c.channel = scale_channel_to_snr(c.channel, c.K, c.t, c.sigma_s2,
                                                     c.sigma_u2, target_snr_db);
            }
            const SampleMatrix x = c.scenario == Scenario::S0 ? generate_noise(c, rng)
                                                              : generate_received(c, rng);
            const EigenSpectrum spec = eigenvalues(sample_covariance(x));
            out[r] = detector == DetectorKind::MED ? med_statistic(spec, c.sigma_u2)
                                                   : cnd_statistic(spec);
        }
    };
    const int nthreads = std::min(workers, n_runs);
    if (nthreads <= 1) {
        work(0, n_runs);
        return out;
    }
    std::vector<std::thread> pool;
    const int chunk = (n_runs + nthreads - 1) / nthreads;
    for (int w = 0; w < nthreads; ++w) {
        const int lo = w * chunk;
        const int hi = std::min(n_runs, lo + chunk);
        if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& th : pool) th.join();
    return out;
}

ExperimentResult run_cdf_experiment(const ExperimentSpec& spec) {
    validate_spec(spec);
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentResult res;
    res.spec = spec;
    const ScenarioConfig cfg = base_config(spec, spec.scenario);
    std::vector<double> stats =
        run_statistics(cfg, spec.detector, spec.n_runs, 0, spec.workers, spec.channel_policy,
                       spec.snr_db, spec.has_snr_db);

    const double sqrt_n = std::sqrt(static_cast<double>(spec.N));
    double alpha = 1.0;
    S1LawParams params;
    const DistributionTable* law = nullptr;
    if (spec.scenario == Scenario::S0) {
        law = spec.detector == DetectorKind::MED ? &rmt::cached_marginal(spec.K, 1, spec.vc)
                                                 : &rmt::cached_cnd_s0(spec.K, spec.vc);
    } else {
        const EigenSpectrum pop =
            eigenvalues(population_covariance(cfg.channel, spec.K, spec.t, spec.sigma_s2,
                                              spec.sigma_u2, spec.vc));
        params = s1_params(pop, spec.sigma_u2, spec.rel_tol);
        alpha = spec.detector == DetectorKind::MED ? params.alpha_m : params.alpha_c;
        law = spec.detector == DetectorKind::MED
                  ? &rmt::cached_s1_med(params.q1, spec.vc)
                  : &rmt::cached_s1_cnd(params.q1, params.qr, spec.vc);
    }

    for (auto& v : stats) v = sqrt_n * (alpha * v - 1.0);
    std::sort(stats.begin(), stats.end());

    const TracyWidomTable tw = load_tw_table(effective_tw_path(spec));
    const auto largek_cdf = [&](double x) {
        if (spec.scenario == Scenario::S0)
            return large_k_regulated_cdf(spec.detector, spec.K, spec.N, x, tw);
        // S1: map the regulated value back to an eps and reuse the Pd formula.
        const double eps = (1.0 + x / sqrt_n) / alpha;
        return 1.0 - large_k_pd(spec.detector, spec.K, spec.N, eps, params, spec.sigma_u2, tw);
    };

    res.columns = {"x", "empirical_cdf", "fixedk_cdf", "largek_cdf"};
    const double n = static_cast<double>(stats.size());
    double ks_fixed = 0.0, ks_large = 0.0;
    for (std::size_t i = 0; i < stats.size(); ++i) {
        const double ecdf = (i + 1) / n;
        const double fk = cdf_at(*law, stats[i]);
        const double lk = largek_cdf(stats[i]);
        ks_fixed = std::max({ks_fixed, std::abs(ecdf - fk), std::abs(i / n - fk)});
        ks_large = std::max({ks_large, std::abs(ecdf - lk), std::abs(i / n - lk)});
        res.rows.push_back({stats[i], ecdf, fk, lk});
    }
    base_metadata(res, spec);
    res.metadata.emplace_back("scenario", to_string(spec.scenario));
    res.metadata.emplace_back("fixedk_method", law->meta.method);
    res.metadata.emplace_back("tw_provenance", tw.provenance);
    res.metadata.emplace_back("largek_formula", large_k_formula_note(spec.detector));
    res.metadata.emplace_back("ks_fixedk", fmt12(ks_fixed));
    res.metadata.emplace_back("ks_largek", fmt12(ks_large));
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

ExperimentResult run_threshold_experiment(const ExperimentSpec& spec) {
    validate_spec(spec);
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentResult res;
    res.spec = spec;
    const ScenarioConfig cfg = base_config(spec, Scenario::S0);
    std::vector<double> stats =
        run_statistics(cfg, spec.detector, spec.n_runs, 0, spec.workers);
    std::sort(stats.begin(), stats.end());
    const TracyWidomTable tw = load_tw_table(effective_tw_path(spec));

    res.columns = {"target_pfa", "eps_fixedk", "eps_largek", "eps_simulated"};
    for (double pfa : effective_pfa_grid(spec)) {
        const double eps_fixed = threshold_for_pfa(spec.detector, spec.K, spec.N, spec.vc, pfa);
        const double eps_large =
            large_k_baseline_threshold(spec.detector, spec.K, spec.N, pfa, tw);
        const double eps_sim = sorted_quantile(stats, 1.0 - pfa);
        res.rows.push_back({pfa, eps_fixed, eps_large, eps_sim});
    }
    base_metadata(res, spec);
    res.metadata.emplace_back("threshold_methods", "fixedk-theory,largek-theory,simulation");
    res.metadata.emplace_back("tw_provenance", tw.provenance);
    res.metadata.emplace_back("largek_formula", large_k_formula_note(spec.detector));
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

ExperimentResult run_detection_experiment(const ExperimentSpec& spec) {
    validate_spec(spec);
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentResult res;
    res.spec = spec;
    const ScenarioConfig cfg0 = base_config(spec, Scenario::S0);
    const ScenarioConfig cfg1 = base_config(spec, Scenario::S1);
    std::vector<double> stats0 =
        run_statistics(cfg0, spec.detector, spec.n_runs, 0, spec.workers);
    std::sort(stats0.begin(), stats0.end());
    const std::vector<double> stats1 = run_statistics(
        cfg1, spec.detector, spec.n_runs, static_cast<std::uint64_t>(spec.n_runs),
        spec.workers, spec.channel_policy, spec.snr_db, spec.has_snr_db);

    const EigenSpectrum pop = eigenvalues(population_covariance(
        cfg1.channel, spec.K, spec.t, spec.sigma_s2, spec.sigma_u2, spec.vc));
    const S1LawParams params = s1_params(pop, spec.sigma_u2, spec.rel_tol);
    const TracyWidomTable tw = load_tw_table(effective_tw_path(spec));

    res.columns = {"target_pfa", "eps_sim",  "pd_empirical", "pd_ci_low",
                   "pd_ci_high", "pd_fixedk", "pd_largek"};
    for (double pfa : effective_pfa_grid(spec)) {
        const double eps = sorted_quantile(stats0, 1.0 - pfa);
        std::vector<Decision> decisions;
        decisions.reserve(stats1.size());
        for (double T : stats1) decisions.push_back(decide(T, eps));
        RatePoint rate = empirical_rate(decisions);
        rate.target_pfa = pfa;
        rate.threshold = eps;
        // Each theory column is that method's end-to-end prediction for the
        // target false alarm: its own threshold, then its own Pd formula. The
        // empirical column keeps the simulation-calibrated threshold.
        const double eps_fixed = threshold_for_pfa(spec.detector, spec.K, spec.N, spec.vc, pfa);
        const double pd_fixed =
            theoretical_pd(spec.detector, spec.K, spec.N, spec.vc, eps_fixed, params);
        const double eps_large =
            large_k_baseline_threshold(spec.detector, spec.K, spec.N, pfa, tw);
        const double pd_large =
            large_k_pd(spec.detector, spec.K, spec.N, eps_large, params, spec.sigma_u2, tw);
        res.rows.push_back({pfa, eps, rate.empirical_rate, rate.ci_low, rate.ci_high,
                            pd_fixed, pd_large});
    }
    base_metadata(res, spec);
    res.metadata.emplace_back("threshold_method",
                              "empirical: simulation-calibrated; theory columns: "
                              "self-calibrated per target pfa");
    res.metadata.emplace_back("snr_db", spec.has_snr_db ? fmt12(spec.snr_db) : "n/a");
    res.metadata.emplace_back("mu1", fmt12(params.mu1));
    res.metadata.emplace_back("mur", fmt12(params.mur));
    res.metadata.emplace_back("tw_provenance", tw.provenance);
    res.metadata.emplace_back("largek_formula", large_k_formula_note(spec.detector));
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

ExperimentResult run_sweep_experiment(const ExperimentSpec& spec) {
    validate_spec(spec);
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentResult res;
    res.spec = spec;
    const ScenarioConfig cfg0 = base_config(spec, Scenario::S0);
    std::vector<double> stats0 =
        run_statistics(cfg0, spec.detector, spec.n_runs, 0, spec.workers);
    std::sort(stats0.begin(), stats0.end());
    const double eps = sorted_quantile(stats0, 1.0 - spec.sweep_pfa);
    const TracyWidomTable tw = load_tw_table(effective_tw_path(spec));

    res.columns = {"snr_db",    "eps_sim",   "pd_empirical", "pd_ci_low",
                   "pd_ci_high", "pd_fixedk", "pd_largek"};
    std::uint64_t offset = static_cast<std::uint64_t>(spec.n_runs);
    for (double snr_db : spec.snr_grid_db) {
        ExperimentSpec point = spec;
        point.snr_db = snr_db;
        point.has_snr_db = true;
        ScenarioConfig cfg1 = base_config(point, Scenario::S1);
        const std::vector<double> stats1 =
            run_statistics(cfg1, spec.detector, spec.n_runs, offset, spec.workers,
                           spec.channel_policy, snr_db, true);
        offset += static_cast<std::uint64_t>(spec.n_runs);
        const EigenSpectrum pop = eigenvalues(population_covariance(
            cfg1.channel, spec.K, spec.t, spec.sigma_s2, spec.sigma_u2, spec.vc));
        const S1LawParams params = s1_params(pop, spec.sigma_u2, spec.rel_tol);
        std::vector<Decision> decisions;
        decisions.reserve(stats1.size());
        for (double T : stats1) decisions.push_back(decide(T, eps));
        const RatePoint rate = empirical_rate(decisions);
        const double eps_fixed =
            threshold_for_pfa(spec.detector, spec.K, spec.N, spec.vc, spec.sweep_pfa);
        const double pd_fixed =
            theoretical_pd(spec.detector, spec.K, spec.N, spec.vc, eps_fixed, params);
        const double eps_large =
            large_k_baseline_threshold(spec.detector, spec.K, spec.N, spec.sweep_pfa, tw);
        const double pd_large =
            large_k_pd(spec.detector, spec.K, spec.N, eps_large, params, spec.sigma_u2, tw);
        res.rows.push_back({snr_db, eps, rate.empirical_rate, rate.ci_low, rate.ci_high,
                            pd_fixed, pd_large});
    }
    base_metadata(res, spec);
    res.metadata.emplace_back("sweep_pfa", fmt12(spec.sweep_pfa));
    res.metadata.emplace_back("threshold_method",
                              "empirical: simulation-calibrated; theory columns: "
                              "self-calibrated per target pfa");
    res.metadata.emplace_back("tw_provenance", tw.provenance);
    res.metadata.emplace_back("largek_formula", large_k_formula_note(spec.detector));
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    switch (spec.experiment) {
        case ExperimentKind::Cdf: return run_cdf_experiment(spec);
        case ExperimentKind::Threshold: return run_threshold_experiment(spec);
        case ExperimentKind::Detection: return run_detection_experiment(spec);
        case ExperimentKind::Sweep: return run_sweep_experiment(spec);
    }
    throw ConfigError("experiment: unknown kind");
}

void emit(const ExperimentResult& result, std::ostream& out, EmitFormat format) {
    if (format == EmitFormat::Csv) {
        for (const auto& [k, v] : result.metadata) out << "# " << k << "=" << v << "\n";
        for (std::size_t i = 0; i < result.columns.size(); ++i)
            out << result.columns[i] << (i + 1 < result.columns.size() ? "," : "\n");
        for (const auto& row : result.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                out << fmt12(row[i]) << (i + 1 < row.size() ? "," : "\n");
        }
        return;
    }
    nlohmann::ordered_json j;
    // The embedded spec describes the experiment, not this execution: worker
    // count and destination path must not break byte-identity of results.
    ExperimentSpec canon = result.spec;
    canon.workers = 1;
    canon.output_path.clear();
    j["spec"] = serialize_config(canon);
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : result.metadata) meta[k] = v;
    j["metadata"] = meta;
    j["columns"] = result.columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : result.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::array();
        for (double v : row) r.push_back(round12(v));
        rows.push_back(r);
    }
    j["rows"] = rows;
    out << j.dump(2) << "\n";
}

void emit_to_path(const ExperimentResult& result) {
    if (result.spec.output_path.empty()) {
        emit(result, std::cout, result.spec.format);
        return;
    }
    std::ofstream out(result.spec.output_path);
    if (!out)
        throw std::runtime_error("emit: cannot open output path " + result.spec.output_path);
    emit(result, out, result.spec.format);
    if (!out) throw std::runtime_error("emit: write failed for " + result.spec.output_path);
}

}  // namespace eigensense
