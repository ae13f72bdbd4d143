#include "eigensense/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "eigensense/rmt_dist.hpp"

namespace eigensense {

double theoretical_pfa(DetectorKind kind, int K, int N, ValueCase vc, double eps) {
    const DistributionTable& law = kind == DetectorKind::MED ? rmt::cached_marginal(K, 1, vc)
                                                             : rmt::cached_cnd_s0(K, vc);
    const double x = std::sqrt(static_cast<double>(N)) * (eps - 1.0);
    return 1.0 - cdf_at(law, x);
}

S1LawParams s1_params(const EigenSpectrum& pop, double sigma_u2, double rel_tol) {
    const MultiplicityPartition part = multiplicity_partition(pop, rel_tol);
    if (part.r < 2)
        throw std::invalid_argument(
            "s1_params: all population eigenvalues identical (assumption iv violated)");
    S1LawParams p;
    p.mu1 = part.mus.front();
    p.mur = part.mus.back();
    p.q1 = part.qs.front();
    p.qr = part.qs.back();
    p.alpha_m = sigma_u2 / p.mu1;
    p.alpha_c = p.mur / p.mu1;
    return p;
}

double theoretical_pd(DetectorKind kind, int K, int N, ValueCase vc, double eps,
                      const S1LawParams& params) {
    (void)K;
    const double sqrt_n = std::sqrt(static_cast<double>(N));
    if (kind == DetectorKind::MED) {
        const DistributionTable& law = rmt::cached_s1_med(params.q1, vc);
        return 1.0 - cdf_at(law, sqrt_n * (params.alpha_m * eps - 1.0));
    }
    const DistributionTable& law = rmt::cached_s1_cnd(params.q1, params.qr, vc);
    return 1.0 - cdf_at(law, sqrt_n * (params.alpha_c * eps - 1.0));
}

RatePoint empirical_rate(const std::vector<Decision>& decisions) {
    if (decisions.empty()) throw std::invalid_argument("empirical_rate: no decisions");
    const double n = static_cast<double>(decisions.size());
    double hits = 0.0;
    for (const auto& d : decisions) hits += d.h1 ? 1.0 : 0.0;
    const double p = hits / n;
    const double z = 1.959963984540054;  // 95%
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    RatePoint r;
    r.empirical_rate = p;
    // center - half is 0 (resp. 1) analytically at the boundary rates; pin it
    // so roundoff cannot leak a sliver past the data.
    r.ci_low = p == 0.0 ? 0.0 : std::max(0.0, center - half);
    r.ci_high = p == 1.0 ? 1.0 : std::min(1.0, center + half);
    r.n_runs = static_cast<int>(decisions.size());
    return r;
}

double ks_distance(const std::vector<double>& sorted_samples, const DistributionTable& law) {
    if (sorted_samples.size() < 2)
        throw std::invalid_argument("ks_distance: need at least two samples");
    const double n = static_cast<double>(sorted_samples.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < sorted_samples.size(); ++i) {
        const double f = cdf_at(law, sorted_samples[i]);
        ks = std::max(ks, std::abs((i + 1) / n - f));
        ks = std::max(ks, std::abs(i / n - f));
    }
    return ks;
}

TracyWidomTable load_tw_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_tw_table: cannot open " + path);
    TracyWidomTable tw;
    tw.law.meta.law = "tracy_widom";
    tw.law.meta.method = "external";
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (!tw.provenance.empty()) tw.provenance += " ";
            tw.provenance += line.substr(line.find_first_not_of("# "));
            continue;
        }
        if (line.rfind("x,", 0) == 0) continue;  // header row
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b))
            throw std::runtime_error("load_tw_table: malformed row in " + path);
        tw.law.grid.push_back(std::stod(a));
        tw.law.cdf.push_back(std::stod(b));
    }
    if (tw.law.grid.size() < 2) throw std::runtime_error("load_tw_table: empty table " + path);
    // Forward-difference pdf; only the CDF/quantile are consumed downstream.
    tw.law.pdf.assign(tw.law.grid.size(), 0.0);
    for (std::size_t i = 1; i < tw.law.grid.size(); ++i)
        tw.law.pdf[i] = (tw.law.cdf[i] - tw.law.cdf[i - 1]) /
                        (tw.law.grid[i] - tw.law.grid[i - 1]);
    return tw;
}

double largek_center(int K, int N) {
    const double s = std::sqrt(static_cast<double>(N)) + std::sqrt(static_cast<double>(K));
    return s * s;
}

double largek_scale(int K, int N) {
    const double s = std::sqrt(static_cast<double>(N)) + std::sqrt(static_cast<double>(K));
    return std::pow(s, 4.0 / 3.0) / std::pow(static_cast<double>(N) * K, 1.0 / 6.0);
}

double large_k_baseline_threshold(DetectorKind kind, int K, int N, double target_pfa,
                                  const TracyWidomTable& tw) {
    if (tw.law.grid.empty())
        throw std::invalid_argument("large_k_baseline_threshold: missing quantile input");
    if (!(target_pfa > 0.0 && target_pfa < 1.0))
        throw std::invalid_argument("large_k_baseline_threshold: target_pfa must be in (0,1)");
    const double q = quantile(tw.law, 1.0 - target_pfa);
    const double mu = largek_center(K, N);
    const double sigma = largek_scale(K, N);
    if (kind == DetectorKind::MED) return (mu + sigma * q) / N;
    const double sn = std::sqrt(static_cast<double>(N));
    const double sk = std::sqrt(static_cast<double>(K));
    const double ratio = (sn + sk) * (sn + sk) / ((sn - sk) * (sn - sk));
    return ratio * (1.0 + std::pow(sn + sk, -2.0 / 3.0) *
                              std::pow(static_cast<double>(N) * K, -1.0 / 6.0) * q);
}

double large_k_regulated_cdf(DetectorKind kind, int K, int N, double x,
                             const TracyWidomTable& tw) {
    const double mu = largek_center(K, N);
    const double sigma = largek_scale(K, N);
    const double sn = std::sqrt(static_cast<double>(N));
    if (kind == DetectorKind::MED) return cdf_at(tw.law, (N + x * sn - mu) / sigma);
    const double sk = std::sqrt(static_cast<double>(K));
    const double edge = (sn - sk) * (sn - sk);
    return cdf_at(tw.law, ((1.0 + x / sn) * edge - mu) / sigma);
}

double large_k_pd(DetectorKind kind, int K, int N, double eps, const S1LawParams& params,
                  double sigma_u2, const TracyWidomTable& tw) {
    const double mu = largek_center(K, N);
    const double sigma = largek_scale(K, N);
    if (kind == DetectorKind::MED)
        return 1.0 - cdf_at(tw.law, (N * eps * sigma_u2 / params.mu1 - mu) / sigma);
    const double sn = std::sqrt(static_cast<double>(N));
    const double sk = std::sqrt(static_cast<double>(K));
    const double edge = (sn - sk) * (sn - sk);
    return 1.0 - cdf_at(tw.law, (eps * params.alpha_c * edge - mu) / sigma);
}

std::string large_k_formula_note(DetectorKind kind) {
    if (kind == DetectorKind::MED)
        return "largek med: eps=(mu+sigma*q)/N with mu=(sqrt(N)+sqrt(K))^2, "
               "sigma=(sqrt(N)+sqrt(K))^(4/3)(NK)^(-1/6), q=TW quantile; "
               "Pd=1-Ftw((N*eps*sigma_u2/mu1-mu)/sigma)";
    return "largek cnd: eps=((sqrt(N)+sqrt(K))^2/(sqrt(N)-sqrt(K))^2)"
           "(1+(sqrt(N)+sqrt(K))^(-2/3)(NK)^(-1/6)q), q=TW quantile; "
           "Pd=1-Ftw((eps*(mur/mu1)*(sqrt(N)-sqrt(K))^2-mu)/sigma)";
}

}  // namespace eigensense
