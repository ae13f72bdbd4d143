#include "eigensense/detectors.hpp"

#include <cmath>
#include <stdexcept>

#include "eigensense/rmt_dist.hpp"

namespace eigensense {

double med_statistic(const EigenSpectrum& spec, double sigma_u2) {
    if (!(sigma_u2 > 0.0)) throw std::invalid_argument("med_statistic: sigma_u2 must be > 0");
    if (spec.values.empty()) throw std::invalid_argument("med_statistic: empty spectrum");
    return spec.values.front() / sigma_u2;
}

double cnd_statistic(const EigenSpectrum& spec) {
    if (spec.values.size() < 2)
        throw std::invalid_argument("cnd_statistic: need at least two eigenvalues");
    const double smallest = spec.values.back();
    if (!(smallest > 0.0))
        throw std::invalid_argument(
            "cnd_statistic: smallest eigenvalue is not positive (rank-deficient covariance)");
    return spec.values.front() / smallest;
}

double threshold_for_pfa(DetectorKind kind, int K, int N, ValueCase vc, double target_pfa) {
    if (!(target_pfa > 0.0 && target_pfa < 1.0))
        throw std::invalid_argument("threshold_for_pfa: target_pfa must be in (0,1)");
    if (N < 1) throw std::invalid_argument("threshold_for_pfa: N must be >= 1");
    if (kind == DetectorKind::CND && K < 2)
        throw std::invalid_argument("threshold_for_pfa: CND needs K >= 2");
    const DistributionTable& law = kind == DetectorKind::MED ? rmt::cached_marginal(K, 1, vc)
                                                             : rmt::cached_cnd_s0(K, vc);
    return 1.0 + quantile(law, 1.0 - target_pfa) / std::sqrt(static_cast<double>(N));
}

Decision decide(double statistic, double threshold) {
    return Decision{statistic, threshold, statistic > threshold};
}

}  // namespace eigensense
