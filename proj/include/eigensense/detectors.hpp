#pragma once

#include "eigensense/eigen_engine.hpp"
#include "eigensense/types.hpp"

namespace eigensense {

enum class DetectorKind { MED, CND };

inline const char* to_string(DetectorKind k) { return k == DetectorKind::MED ? "med" : "cnd"; }

struct Decision {
    double statistic = 0.0;
    double threshold = 0.0;
    bool h1 = false;  // true iff statistic > threshold
};

// T = lambda_1 / sigma_u2 (noise power assumed known).
double med_statistic(const EigenSpectrum& spec, double sigma_u2);

// T = lambda_1 / lambda_K; rejects nonpositive smallest eigenvalue.
double cnd_statistic(const EigenSpectrum& spec);

// eps = 1 + F^{-1}(1 - target_pfa) / sqrt(N) with the matching S0 law.
double threshold_for_pfa(DetectorKind kind, int K, int N, ValueCase vc, double target_pfa);

// Strict-inequality rule; tie resolves to H0.
Decision decide(double statistic, double threshold);

}  // namespace eigensense
