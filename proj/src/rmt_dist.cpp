#include "eigensense/rmt_dist.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "eigensense/eigen_engine.hpp"
#include "eigensense/mathutil.hpp"

namespace eigensense::rmt {

namespace {

// Gaussian-weight variance and Vandermonde exponent of the two ensembles.
double weight_var(ValueCase vc) { return vc == ValueCase::Real ? 2.0 : 1.0; }
int vander_pow(ValueCase vc) { return vc == ValueCase::Real ? 1 : 2; }

DistributionTable make_grid_table(double lo, double hi, int points, TableMeta meta) {
    DistributionTable t;
    t.meta = std::move(meta);
    t.grid.resize(points);
    const double h = (hi - lo) / (points - 1);
    for (int i = 0; i < points; ++i) t.grid[i] = lo + h * i;
    t.pdf.assign(points, 0.0);
    return t;
}

DistributionTable gaussian_table(double variance, TableMeta meta, int points) {
    const double s = std::sqrt(variance);
    meta.closed = ClosedForm::Gaussian;
    meta.gauss_variance = variance;
    meta.method = "closed";
    DistributionTable t = make_grid_table(-8.0 * s, 8.0 * s, points, std::move(meta));
    for (std::size_t i = 0; i < t.grid.size(); ++i)
        t.pdf[i] = math::norm_pdf(t.grid[i] / s) / s;
    fill_cdf_from_pdf(t);
    return t;
}

// Reflect a table through the origin: density of -X.
DistributionTable reflect_table(const DistributionTable& src, TableMeta meta) {
    DistributionTable t;
    t.meta = std::move(meta);
    const std::size_t n = src.grid.size();
    t.grid.resize(n);
    t.pdf.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        t.grid[i] = -src.grid[n - 1 - i];
        t.pdf[i] = src.pdf[n - 1 - i];
    }
    fill_cdf_from_pdf(t);
    return t;
}

double marginal_pdf_k2_top(ValueCase vc, double x) {
    const double s2 = weight_var(vc);
    const int b = vander_pow(vc);
    const double c = joint_density_constant(2, vc);
    std::vector<double> poly =
        b == 1 ? std::vector<double>{x, -1.0} : std::vector<double>{x * x, -2.0 * x, 1.0};
    double mom[3];
    math::lower_gauss_moments(s2, x, b, mom);
    double acc = 0.0;
    for (int k = 0; k <= b; ++k) acc += poly[k] * mom[k];
    return c * std::exp(-x * x / (2.0 * s2)) * acc;
}

double marginal_pdf_k3_top(ValueCase vc, double x) {
    const double s2 = weight_var(vc);
    const int b = vander_pow(vc);
    const double c = joint_density_constant(3, vc);
    const double reach = 8.0 * std::sqrt(3.0 * s2);
    const auto integrand = [&](double m) {
        // Integrate out beta_3 in closed form: poly((x - w)(m - w))^b in w.
        std::vector<double> p = math::polymul({x, -1.0}, {m, -1.0});
        if (b == 2) p = math::polymul(p, p);
        double mom[5];
        math::lower_gauss_moments(s2, m, static_cast<int>(p.size()) - 1, mom);
        double inner = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) inner += p[k] * mom[k];
        const double top = b == 1 ? (x - m) : (x - m) * (x - m);
        return top * std::exp(-m * m / (2.0 * s2)) * inner;
    };
    const double integral = math::adaptive_simpson(integrand, x - reach, x, 1e-8);
    return c * std::exp(-x * x / (2.0 * s2)) * integral;
}

double marginal_pdf_k3_mid(ValueCase vc, double m) {
    const double s2 = weight_var(vc);
    const int b = vander_pow(vc);
    const double c = joint_density_constant(3, vc);
    using math::Poly2;
    Poly2 um = Poly2::from({{-m}, {1.0}});          // u - m
    Poly2 mw = Poly2::from({{m, -1.0}});            // m - w
    Poly2 uw = Poly2::from({{0.0, -1.0}, {1.0, 0.0}});  // u - w
    Poly2 prod = um * mw * uw;
    if (b == 2) prod = prod * prod;
    const int du = static_cast<int>(prod.c.size()) - 1;
    const int dw = static_cast<int>(prod.c[0].size()) - 1;
    double lower[5], full[5];
    math::lower_gauss_moments(s2, m, std::max(du, dw), lower);
    math::full_gauss_moments(s2, std::max(du, dw), full);
    double acc = 0.0;
    for (int i = 0; i <= du; ++i)
        for (int j = 0; j <= dw; ++j) {
            if (prod.c[i][j] == 0.0) continue;
            acc += prod.c[i][j] * (full[i] - lower[i]) * lower[j];
        }
    return c * std::exp(-m * m / (2.0 * s2)) * acc;
}

DistributionTable empirical_table(int K, int which_index, bool difference, ValueCase vc,
                                  int grid_points, double lo, double hi, TableMeta meta) {
    meta.method = "sampling";
    DistributionTable t = make_grid_table(lo, hi, grid_points, std::move(meta));
    const double h = t.grid[1] - t.grid[0];
    std::vector<std::size_t> counts(t.grid.size(), 0);
    RandomStream rng(derive_stream_seed(
        kTableSampleSeed, (static_cast<std::uint64_t>(K) << 20) ^
                              (static_cast<std::uint64_t>(which_index) << 10) ^
                              (difference ? 512u : 0u) ^
                              static_cast<std::uint64_t>(vc == ValueCase::Complex)));
    for (std::size_t n = 0; n < kTableSampleDraws; ++n) {
        const std::vector<double> ev = sample_wigner(K, vc, rng);
        const double v = difference ? ev.front() - ev.back() : ev[which_index - 1];
        const double pos = (v - t.grid.front()) / h + 0.5;
        if (pos < 0.0) continue;
        const std::size_t cell = static_cast<std::size_t>(pos);
        if (cell < counts.size()) ++counts[cell];
    }
    const double norm = 1.0 / (static_cast<double>(kTableSampleDraws) * h);
    for (std::size_t i = 0; i < counts.size(); ++i) t.pdf[i] = counts[i] * norm;
    fill_cdf_from_pdf(t);
    return t;
}

}  // namespace

double joint_density_constant(int K, ValueCase vc) {
    if (vc == ValueCase::Real) {
        double log_c = -0.25 * K * (K + 3) * std::log(2.0);
        for (int i = 1; i <= K; ++i) log_c -= std::lgamma(0.5 * (K + 1 - i));
        return std::exp(log_c);
    }
    double log_c = std::lgamma(K + 1.0) - 0.5 * K * std::log(2.0 * M_PI);
    for (int j = 1; j <= K; ++j) log_c -= std::lgamma(1.0 + j);
    return std::exp(log_c);
}

double joint_density(const std::vector<double>& betas, ValueCase vc) {
    const int K = static_cast<int>(betas.size());
    if (K < 1) throw std::invalid_argument("joint_density: empty vector");
    for (int i = 1; i < K; ++i)
        if (betas[i] > betas[i - 1])
            throw std::invalid_argument("joint_density: betas must be descending");
    double sumsq = 0.0;
    for (double b : betas) sumsq += b * b;
    double vander = 1.0;
    for (int i = 0; i < K; ++i)
        for (int j = i + 1; j < K; ++j) vander *= betas[i] - betas[j];
    if (vc == ValueCase::Real)
        return joint_density_constant(K, vc) * std::exp(-0.25 * sumsq) * vander;
    return joint_density_constant(K, vc) * std::exp(-0.5 * sumsq) * vander * vander;
}

std::vector<double> sample_wigner(int K, ValueCase vc, RandomStream& rng) {
    if (K < 1) throw std::invalid_argument("sample_wigner: K must be >= 1");
    std::vector<cplx> a(static_cast<std::size_t>(K) * K);
    if (vc == ValueCase::Real) {
        for (int i = 0; i < K; ++i)
            a[static_cast<std::size_t>(i) * K + i] = M_SQRT2 * rng.gaussian();
        for (int j = 0; j < K; ++j)
            for (int i = j + 1; i < K; ++i) {
                const double v = rng.gaussian();
                a[static_cast<std::size_t>(j) * K + i] = v;
                a[static_cast<std::size_t>(i) * K + j] = v;
            }
    } else {
        for (int i = 0; i < K; ++i)
            a[static_cast<std::size_t>(i) * K + i] = rng.gaussian();
        for (int j = 0; j < K; ++j)
            for (int i = j + 1; i < K; ++i) {
                const cplx v = rng.cgaussian();
                a[static_cast<std::size_t>(j) * K + i] = v;
                a[static_cast<std::size_t>(i) * K + j] = std::conj(v);
            }
    }
    return hermitian_eigenvalues(a, K, vc);
}

double marginal_pdf_quad(int K, int i, ValueCase vc, double x) {
    if (K < 1 || K > 3 || i < 1 || i > K)
        throw std::invalid_argument("marginal_pdf_quad: need 1 <= i <= K <= 3");
    if (K == 1) {
        const double s = std::sqrt(weight_var(vc));
        return math::norm_pdf(x / s) / s;
    }
    if (i == K) return marginal_pdf_quad(K, 1, vc, -x);
    if (K == 2) return marginal_pdf_k2_top(vc, x);
    if (i == 1) return marginal_pdf_k3_top(vc, x);
    return marginal_pdf_k3_mid(vc, x);
}

double cnd_pdf_quad(int K, ValueCase vc, double x) {
    if (K < 2 || K > 3) throw std::invalid_argument("cnd_pdf_quad: K must be 2 or 3");
    if (x < 0.0) return 0.0;
    const double s2 = weight_var(vc);
    const int b = vander_pow(vc);
    const double c = joint_density_constant(K, vc);
    const double reach = 8.0 * std::sqrt(K * s2);
    if (K == 2) {
        const double top = b == 1 ? x : x * x;
        const auto integrand = [&](double w) {
            const double u = w + x;
            return std::exp(-(u * u + w * w) / (2.0 * s2));
        };
        return c * top *
               math::adaptive_simpson(integrand, -0.5 * x - reach, -0.5 * x + reach, 1e-8);
    }
    const auto integrand = [&](double w) {
        const double u = w + x;
        // Integrate out beta_2 over [w, u] in closed form.
        std::vector<double> p = math::polymul({u, -1.0}, {-w, 1.0});
        if (b == 2) p = math::polymul(p, p);
        double mom_u[5], mom_w[5];
        const int deg = static_cast<int>(p.size()) - 1;
        math::lower_gauss_moments(s2, u, deg, mom_u);
        math::lower_gauss_moments(s2, w, deg, mom_w);
        double inner = 0.0;
        for (int k = 0; k <= deg; ++k) inner += p[k] * (mom_u[k] - mom_w[k]);
        const double top = b == 1 ? x : x * x;
        return top * std::exp(-(u * u + w * w) / (2.0 * s2)) * inner;
    };
    return c * math::adaptive_simpson(integrand, -0.5 * x - reach, -0.5 * x + reach, 1e-8);
}

DistributionTable marginal(int K, int i, ValueCase vc, int grid_points) {
    if (K < 1 || i < 1 || i > K) throw std::invalid_argument("marginal: need 1 <= i <= K");
    TableMeta meta{"marginal", K, i, vc, "", ClosedForm::None, 0.0};
    if (K == 1) return gaussian_table(weight_var(vc), std::move(meta), grid_points);
    const double span = 8.0 * std::sqrt(static_cast<double>(K));
    if (K <= 3) {
        if (2 * i > K + 1) {
            // Bottom-half marginals by reflection of the matching top-half one.
            return reflect_table(marginal(K, K + 1 - i, vc, grid_points), std::move(meta));
        }
        meta.method = "quadrature";
        DistributionTable t = make_grid_table(-span, span, grid_points, std::move(meta));
        for (std::size_t n = 0; n < t.grid.size(); ++n)
            t.pdf[n] = marginal_pdf_quad(K, i, vc, t.grid[n]);
        fill_cdf_from_pdf(t);
        return t;
    }
    return empirical_table(K, i, false, vc, grid_points, -span, span, std::move(meta));
}

DistributionTable cnd_s0_law(int K, ValueCase vc, int grid_points) {
    if (K < 2) throw std::invalid_argument("cnd_s0_law: K must be >= 2 (condition number)");
    TableMeta meta{"cnd_s0", K, 0, vc, "", ClosedForm::None, 0.0};
    const double span = 8.0 * std::sqrt(2.0 * K);
    if (K == 2) {
        meta.method = "closed";
        meta.closed = vc == ValueCase::Real ? ClosedForm::CndRealK2 : ClosedForm::CndComplexK2;
        DistributionTable t = make_grid_table(0.0, span, grid_points, std::move(meta));
        for (std::size_t n = 0; n < t.grid.size(); ++n) t.pdf[n] = pdf_at(t, t.grid[n]);
        fill_cdf_from_pdf(t);
        return t;
    }
    if (K == 3) {
        meta.method = "quadrature";
        DistributionTable t = make_grid_table(0.0, span, grid_points, std::move(meta));
        for (std::size_t n = 0; n < t.grid.size(); ++n)
            t.pdf[n] = cnd_pdf_quad(K, vc, t.grid[n]);
        fill_cdf_from_pdf(t);
        return t;
    }
    return empirical_table(K, 0, true, vc, grid_points, 0.0, span, std::move(meta));
}

DistributionTable s1_med_law(int q1, ValueCase vc, int grid_points) {
    if (q1 < 1) throw std::invalid_argument("s1_med_law: q1 must be >= 1");
    TableMeta meta{"s1_med", q1, 1, vc, "", ClosedForm::None, 0.0};
    if (q1 == 1) return gaussian_table(weight_var(vc), std::move(meta), grid_points);
    DistributionTable t = marginal(q1, 1, vc, grid_points);
    t.meta.law = "s1_med";
    return t;
}

DistributionTable s1_cnd_law(int q1, int qr, ValueCase vc, int grid_points) {
    if (q1 < 1 || qr < 1) throw std::invalid_argument("s1_cnd_law: q1, qr must be >= 1");
    TableMeta meta{"s1_cnd", q1, qr, vc, "convolution", ClosedForm::None, 0.0};
    if (q1 == 1 && qr == 1)
        return gaussian_table(2.0 * weight_var(vc), std::move(meta), grid_points);
    const DistributionTable& top = cached_marginal(q1, 1, vc);
    const DistributionTable& bot = cached_marginal(qr, qr, vc);
    const double lo = top.grid.front() - bot.grid.back();
    const double hi = top.grid.back() - bot.grid.front();
    DistributionTable t = make_grid_table(lo, hi, grid_points, std::move(meta));
    // w(x) = \int g_{q1,1}(x + y) g_{qr,qr}(y) dy, trapezoid over the bottom grid.
    const double h = bot.grid[1] - bot.grid[0];
    for (std::size_t n = 0; n < t.grid.size(); ++n) {
        const double x = t.grid[n];
        double acc = 0.0;
        for (std::size_t j = 0; j < bot.grid.size(); ++j) {
            const double term = pdf_at(top, x + bot.grid[j]) * bot.pdf[j];
            acc += (j == 0 || j + 1 == bot.grid.size()) ? 0.5 * term : term;
        }
        t.pdf[n] = acc * h;
    }
    fill_cdf_from_pdf(t);
    return t;
}

namespace {

// Recursive: building one table may consult another cache (the convolution
// law pulls in marginal tables) on the same thread.
std::recursive_mutex g_cache_mutex;

template <class Key>
const DistributionTable& cache_lookup(std::map<Key, DistributionTable>& cache, const Key& key,
                                      DistributionTable (*build)(const Key&)) {
    std::lock_guard<std::recursive_mutex> lock(g_cache_mutex);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build(key)).first;
    return it->second;
}

}  // namespace

const DistributionTable& cached_marginal(int K, int i, ValueCase vc) {
    using Key = std::tuple<int, int, int>;
    static std::map<Key, DistributionTable> cache;
    return cache_lookup<Key>(cache, {K, i, static_cast<int>(vc)}, [](const Key& k) {
        return marginal(std::get<0>(k), std::get<1>(k), static_cast<ValueCase>(std::get<2>(k)));
    });
}

const DistributionTable& cached_cnd_s0(int K, ValueCase vc) {
    using Key = std::tuple<int, int>;
    static std::map<Key, DistributionTable> cache;
    return cache_lookup<Key>(cache, {K, static_cast<int>(vc)}, [](const Key& k) {
        return cnd_s0_law(std::get<0>(k), static_cast<ValueCase>(std::get<1>(k)));
    });
}

const DistributionTable& cached_s1_med(int q1, ValueCase vc) {
    using Key = std::tuple<int, int>;
    static std::map<Key, DistributionTable> cache;
    return cache_lookup<Key>(cache, {q1, static_cast<int>(vc)}, [](const Key& k) {
        return s1_med_law(std::get<0>(k), static_cast<ValueCase>(std::get<1>(k)));
    });
}

const DistributionTable& cached_s1_cnd(int q1, int qr, ValueCase vc) {
    using Key = std::tuple<int, int, int>;
    static std::map<Key, DistributionTable> cache;
    return cache_lookup<Key>(cache, {q1, qr, static_cast<int>(vc)}, [](const Key& k) {
        return s1_cnd_law(std::get<0>(k), std::get<1>(k),
                          static_cast<ValueCase>(std::get<2>(k)));
    });
}

}  // namespace eigensense::rmt
