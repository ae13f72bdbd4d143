#pragma once

#include <vector>

#include "eigensense/rng.hpp"
#include "eigensense/types.hpp"

namespace eigensense {

// Full description of one sensing scenario. `channel` is K x t column-major;
// real-valued configs keep zero imaginary parts.
struct ScenarioConfig {
    int K = 2;
    int N = 1000;
    ValueCase vc = ValueCase::Real;
    Scenario scenario = Scenario::S0;
    int t = 1;
    double sigma_s2 = 1.0;
    double sigma_u2 = 1.0;
    std::vector<cplx> channel;  // K*t entries, column-major (S1 only)
    std::uint64_t seed = 0;
};

// Throws std::invalid_argument on any invariant violation.
void validate(const ScenarioConfig& cfg);

// K x N block of received samples, column-major. Exactly one of `re` / `cx`
// is populated, matching `vc`.
struct SampleMatrix {
    ValueCase vc = ValueCase::Real;
    int K = 0;
    int N = 0;
    std::vector<double> re;
    std::vector<cplx> cx;
};

// S0: pure noise, x(n) = u(n).
SampleMatrix generate_noise(const ScenarioConfig& cfg, RandomStream& rng);

// S1: x(n) = H s(n) + u(n), with s and u independent Gaussians.
SampleMatrix generate_received(const ScenarioConfig& cfg, RandomStream& rng);

// Average received SNR: sum_l ||h_l||^2 sigma_s2 / (K sigma_u2), linear.
double compute_snr(const std::vector<cplx>& channel, int K, int t, double sigma_s2,
                   double sigma_u2);

inline double snr_to_db(double snr_linear) { return 10.0 * std::log10(snr_linear); }
inline double db_to_snr(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

// Rescale the channel so compute_snr hits target_snr_db exactly.
std::vector<cplx> scale_channel_to_snr(const std::vector<cplx>& channel, int K, int t,
                                       double sigma_s2, double sigma_u2,
                                       double target_snr_db);

}  // namespace eigensense
