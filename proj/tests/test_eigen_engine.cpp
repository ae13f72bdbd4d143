#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "eigensense/eigen_engine.hpp"
#include "eigensense/rng.hpp"

using namespace eigensense;

namespace {

// Oracle: eigenvalues of a 3x3 real symmetric matrix via the trigonometric
// solution of the characteristic cubic. Independent of the Jacobi code path.
std::vector<double> sym3_eigen_oracle(const double m[9]) {
    const double a = m[0], b = m[4], c = m[8];
    const double d = m[3], e = m[7], f = m[6];  // m01, m12, m02
    const double p1 = d * d + e * e + f * f;
    const double q = (a + b + c) / 3.0;
    const double p2 =
        (a - q) * (a - q) + (b - q) * (b - q) + (c - q) * (c - q) + 2.0 * p1;
    const double p = std::sqrt(p2 / 6.0);
    std::vector<double> out(3, q);
    if (p > 0) {
        // B = (M - q I) / p; r = det(B) / 2
        const double ba = (a - q) / p, bb = (b - q) / p, bc = (c - q) / p;
        const double bd = d / p, be = e / p, bf = f / p;
        double r = (ba * (bb * bc - be * be) - bd * (bd * bc - be * bf) +
                    bf * (bd * be - bb * bf)) /
                   2.0;
        r = std::clamp(r, -1.0, 1.0);
        const double phi = std::acos(r) / 3.0;
        out[0] = q + 2.0 * p * std::cos(phi);
        out[2] = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
        out[1] = 3.0 * q - out[0] - out[2];
    }
    return out;
}

CovarianceMatrix real_cov(int K, const std::vector<double>& entries) {
    CovarianceMatrix c;
    c.vc = ValueCase::Real;
    c.K = K;
    c.a.resize(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) c.a[i] = cplx(entries[i], 0.0);
    return c;
}

}  // namespace

TEST_CASE("K=1 and K=2 closed forms") {
    CHECK(eigenvalues(real_cov(1, {3.5})).values[0] == doctest::Approx(3.5));
    // [[2,1],[1,2]] -> {3,1}
    const auto v = eigenvalues(real_cov(2, {2, 1, 1, 2})).values;
    CHECK(v[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("complex K=2 closed form") {
    CovarianceMatrix c;
    c.vc = ValueCase::Complex;
    c.K = 2;
    c.a = {cplx(2, 0), cplx(0, 1), cplx(0, -1), cplx(2, 0)};
    const auto v = eigenvalues(c).values;
    CHECK(v[0] == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("K=3 Jacobi matches characteristic polynomial oracle") {
    RandomStream rng(123);
    for (int rep = 0; rep < 200; ++rep) {
        double m[9];
        const double a = rng.gaussian(), b = rng.gaussian(), c = rng.gaussian();
        const double d = rng.gaussian(), e = rng.gaussian(), f = rng.gaussian();
        m[0] = a; m[4] = b; m[8] = c;
        m[1] = m[3] = d;
        m[5] = m[7] = e;
        m[2] = m[6] = f;
        const auto jac = jacobi_eigenvalues(std::vector<double>(m, m + 9), 3);
        const auto ora = sym3_eigen_oracle(m);
        const double scale = std::max({1.0, std::abs(ora[0]), std::abs(ora[2])});
        for (int i = 0; i < 3; ++i)
            CHECK(std::abs(jac[i] - ora[i]) < 1e-10 * scale);
    }
}

TEST_CASE("random K up to 8: trace, trace of square, ordering, orthogonal invariance") {
    RandomStream rng(77);
    for (int K = 2; K <= 8; ++K) {
        std::vector<double> m(K * K);
        for (int j = 0; j < K; ++j)
            for (int i = 0; i <= j; ++i) {
                const double v = rng.gaussian();
                m[i + j * K] = v;
                m[j + i * K] = v;
            }
        const auto ev = jacobi_eigenvalues(m, K);
        double tr = 0.0, tr2 = 0.0, mtr = 0.0, mtr2 = 0.0;
        for (int i = 0; i < K; ++i) {
            tr += ev[i];
            tr2 += ev[i] * ev[i];
            mtr += m[i + i * K];
            for (int j = 0; j < K; ++j) mtr2 += m[i + j * K] * m[j + i * K];
        }
        CHECK(tr == doctest::Approx(mtr).epsilon(1e-10));
        CHECK(tr2 == doctest::Approx(mtr2).epsilon(1e-10));
        CHECK(std::is_sorted(ev.rbegin(), ev.rend()));
    }
}

TEST_CASE("complex Hermitian via embedding matches real oracle on a real input") {
    // A real symmetric matrix fed through the complex path must agree.
    RandomStream rng(5);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> m(9);
        for (int j = 0; j < 3; ++j)
            for (int i = 0; i <= j; ++i) {
                const double v = rng.gaussian();
                m[i + j * 3] = v;
                m[j + i * 3] = v;
            }
        std::vector<cplx> cm(9);
        for (int i = 0; i < 9; ++i) cm[i] = cplx(m[i], 0.0);
        const auto ev_r = jacobi_eigenvalues(m, 3);
        const auto ev_c = hermitian_eigenvalues(cm, 3, ValueCase::Complex);
        for (int i = 0; i < 3; ++i)
            CHECK(ev_c[i] == doctest::Approx(ev_r[i]).epsilon(1e-9));
    }
}

TEST_CASE("complex Hermitian invariants for random matrices") {
    RandomStream rng(9);
    for (int K = 2; K <= 6; ++K) {
        std::vector<cplx> m(K * K);
        for (int j = 0; j < K; ++j) {
            m[j + j * K] = cplx(rng.gaussian(), 0.0);
            for (int i = 0; i < j; ++i) {
                const cplx v(rng.gaussian(), rng.gaussian());
                m[i + j * K] = v;
                m[j + i * K] = std::conj(v);
            }
        }
        const auto ev = hermitian_eigenvalues(m, K, ValueCase::Complex);
        double tr = 0.0, tr2 = 0.0, mtr = 0.0, mtr2 = 0.0;
        for (int i = 0; i < K; ++i) {
            tr += ev[i];
            tr2 += ev[i] * ev[i];
            mtr += m[i + i * K].real();
            for (int j = 0; j < K; ++j)
                mtr2 += (m[i + j * K] * m[j + i * K]).real();
        }
        CHECK(tr == doctest::Approx(mtr).epsilon(1e-10));
        CHECK(tr2 == doctest::Approx(mtr2).epsilon(1e-10));
        CHECK(std::is_sorted(ev.rbegin(), ev.rend()));
    }
}

TEST_CASE("sample_covariance is exactly Hermitian with real diagonal") {
    ScenarioConfig cfg;
    cfg.K = 4;
    cfg.N = 64;
    cfg.vc = ValueCase::Complex;
    RandomStream rng(21);
    const auto c = sample_covariance(generate_noise(cfg, rng));
    for (int j = 0; j < 4; ++j) {
        CHECK(c.a[j + j * 4].imag() == 0.0);
        for (int i = 0; i < 4; ++i)
            CHECK(c.a[i + j * 4] == std::conj(c.a[j + i * 4]));
    }
    CHECK_NOTHROW(eigenvalues(c));
}

TEST_CASE("sample covariance eigenvalues are nonnegative") {
    ScenarioConfig cfg;
    cfg.K = 5;
    cfg.N = 8;  // N > K but small, smallest eigenvalue near zero
    RandomStream rng(2);
    const auto ev = eigenvalues(sample_covariance(generate_noise(cfg, rng)));
    CHECK(ev.values.back() >= -1e-12);
}

TEST_CASE("population covariance: rank-one channel spectrum") {
    // sigma_s2 ||h||^2 + sigma_u2 at the top, sigma_u2 repeated below.
    const std::vector<cplx> h = {cplx(1, 0), cplx(1, 0), cplx(1, 0)};
    const auto pop = population_covariance(h, 3, 1, 2.0, 1.0, ValueCase::Real);
    const auto ev = eigenvalues(pop);
    CHECK(ev.values[0] == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(ev.values[1] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(ev.values[2] == doctest::Approx(1.0).epsilon(1e-12));
    const auto part = multiplicity_partition(ev);
    CHECK(part.r == 2);
    CHECK(part.qs[0] == 1);
    CHECK(part.qs[1] == 2);
    CHECK(part.mus[0] == doctest::Approx(7.0));
    CHECK(part.mus[1] == doctest::Approx(1.0));
}

TEST_CASE("multiplicity partition groups within tolerance and splits beyond it") {
    EigenSpectrum s;
    s.values = {5.0 + 5e-10 * 5.0, 5.0, 1.0};
    auto p = multiplicity_partition(s, 1e-9);
    CHECK(p.r == 2);
    CHECK(p.qs[0] == 2);
    s.values = {5.0 * (1.0 + 1e-6), 5.0, 1.0};
    p = multiplicity_partition(s, 1e-9);
    CHECK(p.r == 3);
    // group means are averaged
    s.values = {4.0 + 1e-12, 4.0 - 1e-12};
    p = multiplicity_partition(s, 1e-9);
    CHECK(p.r == 1);
    CHECK(p.mus[0] == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(p.qs[0] == 2);
}

TEST_CASE("eigenvalues() rejects non-Hermitian input") {
    CovarianceMatrix c = real_cov(2, {1, 0.5, 0.7, 1});
    CHECK_THROWS_AS(eigenvalues(c), std::invalid_argument);
}
