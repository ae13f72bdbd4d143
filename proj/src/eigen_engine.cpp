#include "eigensense/eigen_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eigensense {

CovarianceMatrix sample_covariance(const SampleMatrix& x) {
    if (x.K < 1 || x.N < 1) throw std::invalid_argument("sample_covariance: empty matrix");
    CovarianceMatrix c;
    c.vc = x.vc;
    c.K = x.K;
    c.a.assign(static_cast<std::size_t>(x.K) * x.K, cplx(0.0, 0.0));
    const double inv_n = 1.0 / x.N;
    if (x.vc == ValueCase::Real) {
        for (int n = 0; n < x.N; ++n) {
            const double* col = &x.re[static_cast<std::size_t>(n) * x.K];
            for (int j = 0; j < x.K; ++j)
                for (int i = j; i < x.K; ++i)
                    c.a[static_cast<std::size_t>(j) * x.K + i] += col[i] * col[j];
        }
        for (int j = 0; j < x.K; ++j)
            for (int i = j; i < x.K; ++i) {
                const cplx v = c.a[static_cast<std::size_t>(j) * x.K + i] * inv_n;
                c.a[static_cast<std::size_t>(j) * x.K + i] = v;
                c.a[static_cast<std::size_t>(i) * x.K + j] = v;
            }
    } else {
        for (int n = 0; n < x.N; ++n) {
            const cplx* col = &x.cx[static_cast<std::size_t>(n) * x.K];
            for (int j = 0; j < x.K; ++j)
                for (int i = j; i < x.K; ++i)
                    c.a[static_cast<std::size_t>(j) * x.K + i] += col[i] * std::conj(col[j]);
        }
        for (int j = 0; j < x.K; ++j)
            for (int i = j; i < x.K; ++i) {
                cplx v = c.a[static_cast<std::size_t>(j) * x.K + i] * inv_n;
                if (i == j) v = cplx(v.real(), 0.0);
                c.a[static_cast<std::size_t>(j) * x.K + i] = v;
                c.a[static_cast<std::size_t>(i) * x.K + j] = std::conj(v);
            }
    }
    return c;
}

CovarianceMatrix population_covariance(const std::vector<cplx>& channel, int K, int t,
                                       double sigma_s2, double sigma_u2, ValueCase vc) {
    if (channel.size() != static_cast<std::size_t>(K) * t)
        throw std::invalid_argument("population_covariance: channel must be K x t");
    CovarianceMatrix c;
    c.vc = vc;
    c.K = K;
    c.a.assign(static_cast<std::size_t>(K) * K, cplx(0.0, 0.0));
    for (int l = 0; l < t; ++l) {
        const cplx* h = &channel[static_cast<std::size_t>(l) * K];
        for (int j = 0; j < K; ++j)
            for (int i = 0; i < K; ++i)
                c.a[static_cast<std::size_t>(j) * K + i] += sigma_s2 * h[i] * std::conj(h[j]);
    }
    for (int i = 0; i < K; ++i) c.a[static_cast<std::size_t>(i) * K + i] += sigma_u2;
    return c;
}

std::vector<double> jacobi_eigenvalues(std::vector<double> a, int n) {
    const auto at = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(j) * n + i]; };
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(at(i, j)));
    if (scale == 0.0) return std::vector<double>(n, 0.0);
    const double stop = 1e-30 * scale * scale;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += at(p, q) * at(p, q);
        if (off < stop) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                double tt = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                if (theta < 0.0) tt = -tt;
                const double cc = 1.0 / std::sqrt(tt * tt + 1.0);
                const double ss = tt * cc;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p);
                    const double akq = at(k, q);
                    at(k, p) = cc * akp - ss * akq;
                    at(k, q) = ss * akp + cc * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k);
                    const double aqk = at(q, k);
                    at(p, k) = cc * apk - ss * aqk;
                    at(q, k) = ss * apk + cc * aqk;
                }
            }
        }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = at(i, i);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

std::vector<double> hermitian_eigenvalues(const std::vector<cplx>& a, int K, ValueCase vc) {
    if (K == 1) return {a[0].real()};
    if (K == 2) {
        const double p = a[0].real();
        const double q = a[3].real();
        const double b = std::abs(a[2]);
        const double mid = 0.5 * (p + q);
        const double rad = std::sqrt(0.25 * (p - q) * (p - q) + b * b);
        return {mid + rad, mid - rad};
    }
    if (vc == ValueCase::Real) {
        std::vector<double> m(static_cast<std::size_t>(K) * K);
        for (std::size_t i = 0; i < m.size(); ++i) m[i] = a[i].real();
        return jacobi_eigenvalues(std::move(m), K);
    }
    // Complex case: real-symmetric embedding [[Re, -Im], [Im, Re]]; eigenvalues
    // come in identical pairs.
    const int n = 2 * K;
    std::vector<double> m(static_cast<std::size_t>(n) * n, 0.0);
    const auto put = [&](int i, int j, double v) { m[static_cast<std::size_t>(j) * n + i] = v; };
    for (int j = 0; j < K; ++j)
        for (int i = 0; i < K; ++i) {
            const cplx v = a[static_cast<std::size_t>(j) * K + i];
            put(i, j, v.real());
            put(i + K, j + K, v.real());
            put(i + K, j, v.imag());
            put(i, j + K, -v.imag());
        }
    std::vector<double> doubled = jacobi_eigenvalues(std::move(m), n);
    std::vector<double> ev(K);
    for (int i = 0; i < K; ++i) ev[i] = 0.5 * (doubled[2 * i] + doubled[2 * i + 1]);
    return ev;
}

EigenSpectrum eigenvalues(const CovarianceMatrix& c) {
    if (c.K < 1) throw std::invalid_argument("eigenvalues: empty matrix");
    double scale = 0.0;
    for (const auto& v : c.a) scale = std::max(scale, std::abs(v));
    for (int j = 0; j < c.K; ++j)
        for (int i = 0; i < c.K; ++i) {
            const cplx v = c.a[static_cast<std::size_t>(j) * c.K + i];
            const cplx w = std::conj(c.a[static_cast<std::size_t>(i) * c.K + j]);
            if (std::abs(v - w) > 1e-12 * std::max(scale, 1e-300))
                throw std::invalid_argument("eigenvalues: matrix is not Hermitian");
            if (c.vc == ValueCase::Real && v.imag() != 0.0)
                throw std::invalid_argument("eigenvalues: complex entries in real-case matrix");
        }
    return EigenSpectrum{hermitian_eigenvalues(c.a, c.K, c.vc)};
}

MultiplicityPartition multiplicity_partition(const EigenSpectrum& spec, double rel_tol) {
    const auto& v = spec.values;
    if (v.empty()) throw std::invalid_argument("multiplicity_partition: empty spectrum");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[i - 1]) throw std::invalid_argument("multiplicity_partition: not ordered");
    MultiplicityPartition part;
    std::size_t start = 0;
    for (std::size_t i = 1; i <= v.size(); ++i) {
        bool close = false;
        if (i < v.size()) {
            const double scale = std::max({std::abs(v[i - 1]), std::abs(v[i]), 1e-300});
            close = (v[i - 1] - v[i]) <= rel_tol * scale;
        }
        if (!close) {
            double mean = 0.0;
            for (std::size_t j = start; j < i; ++j) mean += v[j];
            part.mus.push_back(mean / static_cast<double>(i - start));
            part.qs.push_back(static_cast<int>(i - start));
            start = i;
        }
    }
    part.r = static_cast<int>(part.mus.size());
    return part;
}

}  // namespace eigensense
