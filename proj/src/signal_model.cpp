#include "eigensense/signal_model.hpp"

#include <cmath>
#include <stdexcept>

namespace eigensense {

void validate(const ScenarioConfig& cfg) {
    if (cfg.K < 1) throw std::invalid_argument("ScenarioConfig: K must be >= 1");
    if (cfg.N < 1) throw std::invalid_argument("ScenarioConfig: N must be >= 1");
    if (!(cfg.sigma_u2 > 0.0))
        throw std::invalid_argument("ScenarioConfig: sigma_u2 must be > 0");
    if (cfg.scenario == Scenario::S1) {
        if (cfg.t < 1) throw std::invalid_argument("ScenarioConfig: t must be >= 1 under S1");
        if (cfg.channel.size() != static_cast<std::size_t>(cfg.K) * cfg.t)
            throw std::invalid_argument("ScenarioConfig: channel must be K x t under S1");
        bool nonzero = false;
        for (const auto& h : cfg.channel)
            if (h != cplx(0.0, 0.0)) nonzero = true;
        if (!nonzero)
            throw std::invalid_argument("ScenarioConfig: channel must have a nonzero entry");
        if (cfg.vc == ValueCase::Real) {
            for (const auto& h : cfg.channel)
                if (h.imag() != 0.0)
                    throw std::invalid_argument(
                        "ScenarioConfig: complex channel entries in real-valued config");
        }
    }
}

SampleMatrix generate_noise(const ScenarioConfig& cfg, RandomStream& rng) {
    if (cfg.scenario != Scenario::S0)
        throw std::invalid_argument("generate_noise: scenario must be S0");
    validate(cfg);
    SampleMatrix m;
    m.vc = cfg.vc;
    m.K = cfg.K;
    m.N = cfg.N;
    const std::size_t total = static_cast<std::size_t>(cfg.K) * cfg.N;
    const double su = std::sqrt(cfg.sigma_u2);
    if (cfg.vc == ValueCase::Real) {
        m.re.resize(total);
        for (auto& v : m.re) v = su * rng.gaussian();
    } else {
        m.cx.resize(total);
        for (auto& v : m.cx) v = su * rng.cgaussian();
    }
    return m;
}

SampleMatrix generate_received(const ScenarioConfig& cfg, RandomStream& rng) {
    if (cfg.scenario != Scenario::S1)
        throw std::invalid_argument("generate_received: scenario must be S1");
    validate(cfg);
    SampleMatrix m;
    m.vc = cfg.vc;
    m.K = cfg.K;
    m.N = cfg.N;
    const double ss = std::sqrt(cfg.sigma_s2);
    const double su = std::sqrt(cfg.sigma_u2);
    // Draw order per column: s(n) first, then u(n).
    if (cfg.vc == ValueCase::Real) {
        m.re.assign(static_cast<std::size_t>(cfg.K) * cfg.N, 0.0);
        std::vector<double> s(cfg.t);
        for (int n = 0; n < cfg.N; ++n) {
            for (int l = 0; l < cfg.t; ++l) s[l] = ss * rng.gaussian();
            double* col = &m.re[static_cast<std::size_t>(n) * cfg.K];
            for (int i = 0; i < cfg.K; ++i) {
                double acc = 0.0;
                for (int l = 0; l < cfg.t; ++l)
                    acc += cfg.channel[static_cast<std::size_t>(l) * cfg.K + i].real() * s[l];
                col[i] = acc + su * rng.gaussian();
            }
        }
    } else {
        m.cx.assign(static_cast<std::size_t>(cfg.K) * cfg.N, cplx(0.0, 0.0));
        std::vector<cplx> s(cfg.t);
        for (int n = 0; n < cfg.N; ++n) {
            for (int l = 0; l < cfg.t; ++l) s[l] = ss * rng.cgaussian();
            cplx* col = &m.cx[static_cast<std::size_t>(n) * cfg.K];
            for (int i = 0; i < cfg.K; ++i) {
                cplx acc(0.0, 0.0);
                for (int l = 0; l < cfg.t; ++l)
                    acc += cfg.channel[static_cast<std::size_t>(l) * cfg.K + i] * s[l];
                col[i] = acc + su * rng.cgaussian();
            }
        }
    }
    return m;
}

double compute_snr(const std::vector<cplx>& channel, int K, int t, double sigma_s2,
                   double sigma_u2) {
    if (!(sigma_u2 > 0.0)) throw std::invalid_argument("compute_snr: sigma_u2 must be > 0");
    if (channel.size() != static_cast<std::size_t>(K) * t)
        throw std::invalid_argument("compute_snr: channel must be K x t");
    double norm2 = 0.0;
    for (const auto& h : channel) norm2 += std::norm(h);
    return norm2 * sigma_s2 / (K * sigma_u2);
}

std::vector<cplx> scale_channel_to_snr(const std::vector<cplx>& channel, int K, int t,
                                       double sigma_s2, double sigma_u2,
                                       double target_snr_db) {
    if (!std::isfinite(target_snr_db))
        throw std::invalid_argument("scale_channel_to_snr: target must be finite");
    const double current = compute_snr(channel, K, t, sigma_s2, sigma_u2);
    if (!(current > 0.0))
        throw std::invalid_argument("scale_channel_to_snr: channel must be nonzero");
    const double factor = std::sqrt(db_to_snr(target_snr_db) / current);
    std::vector<cplx> out = channel;
    for (auto& h : out) h *= factor;
    return out;
}

}  // namespace eigensense
