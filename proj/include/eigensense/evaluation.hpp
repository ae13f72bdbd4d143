#pragma once

#include <string>
#include <vector>

#include "eigensense/detectors.hpp"
#include "eigensense/dist_table.hpp"
#include "eigensense/eigen_engine.hpp"
#include "eigensense/types.hpp"

namespace eigensense {

struct RatePoint {
    double target_pfa = 0.0;
    double threshold = 0.0;
    double empirical_rate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double theoretical_rate = 0.0;
    int n_runs = 0;
};

// Population-spectrum quantities driving the S1 limit laws.
struct S1LawParams {
    double mu1 = 0.0;   // largest distinct population eigenvalue
    double mur = 0.0;   // smallest distinct population eigenvalue
    int q1 = 0;
    int qr = 0;
    double alpha_m = 0.0;  // sigma_u2 / mu1
    double alpha_c = 0.0;  // mur / mu1
};

// P_f = 1 - F(sqrt(N)(eps - 1)) under the matching S0 law.
double theoretical_pfa(DetectorKind kind, int K, int N, ValueCase vc, double eps);

S1LawParams s1_params(const EigenSpectrum& pop, double sigma_u2, double rel_tol = 1e-9);

// P_d = 1 - F(sqrt(N)(alpha eps - 1)) with the matching S1 law.
double theoretical_pd(DetectorKind kind, int K, int N, ValueCase vc, double eps,
                      const S1LawParams& params);

// Fraction of H1 decisions with a 95% Wilson score interval.
RatePoint empirical_rate(const std::vector<Decision>& decisions);

// Sup-norm distance between the empirical CDF of sorted samples and a law.
double ks_distance(const std::vector<double>& sorted_samples, const DistributionTable& law);

// --- Large-(K, N) comparison baseline -------------------------------------
// Tracy-Widom quantiles/CDF come in as external tables; nothing here computes
// the TW laws from first principles.

struct TracyWidomTable {
    DistributionTable law;
    std::string provenance;
};

// Load "x,cdf" CSV (leading '#' comment lines hold the provenance).
TracyWidomTable load_tw_table(const std::string& path);

// Centering (sqrt(N)+sqrt(K))^2 and scaling (sqrt(N)+sqrt(K))^{4/3} (N K)^{-1/6}
// of N lambda_1 / sigma_u2 under the large-(K,N) theory.
double largek_center(int K, int N);
double largek_scale(int K, int N);

struct LargeKBaseline {
    const TracyWidomTable* tw = nullptr;  // must be non-null
    std::string formula;                  // recorded in output metadata
};

double large_k_baseline_threshold(DetectorKind kind, int K, int N, double target_pfa,
                                  const TracyWidomTable& tw);

// CDF of the regulated statistic sqrt(N)(T - 1) under the large-K theory.
double large_k_regulated_cdf(DetectorKind kind, int K, int N, double x,
                             const TracyWidomTable& tw);

// Large-K detection probability at threshold eps under S1.
double large_k_pd(DetectorKind kind, int K, int N, double eps, const S1LawParams& params,
                  double sigma_u2, const TracyWidomTable& tw);

// Human-readable description of the baseline formulas, for output metadata.
std::string large_k_formula_note(DetectorKind kind);

}  // namespace eigensense
