#include "eigensense/mathutil.hpp"

namespace eigensense::math {

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("norm_quantile: p must be in (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement.
    const double e = norm_cdf(x) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double m, double b,
                   double fa, double fm, double fb, double whole, double tol, int depth,
                   int force) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    // `force` levels always subdivide so a narrow feature inside a wide
    // interval cannot slip between the initial sample points.
    if (force <= 0 && (depth <= 0 || std::abs(delta) <= 15.0 * tol)) {
        return left + right + delta / 15.0;
    }
    return simpson_rec(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1, force - 1) +
           simpson_rec(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1, force - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, m, b, fa, fm, fb, whole, abs_tol, max_depth, 6);
}

void lower_gauss_moments(double s2, double a, int kmax, double* out) {
    const double e = std::exp(-a * a / (2.0 * s2));
    out[0] = std::sqrt(M_PI * s2 / 2.0) * (1.0 + std::erf(a / std::sqrt(2.0 * s2)));
    if (kmax >= 1) out[1] = -s2 * e;
    double apow = a;  // a^(k-1)
    for (int k = 2; k <= kmax; ++k) {
        out[k] = s2 * ((k - 1) * out[k - 2] - apow * e);
        apow *= a;
    }
}

void full_gauss_moments(double s2, int kmax, double* out) {
    out[0] = std::sqrt(2.0 * M_PI * s2);
    if (kmax >= 1) out[1] = 0.0;
    for (int k = 2; k <= kmax; ++k) out[k] = s2 * (k - 1) * out[k - 2];
}

std::vector<double> polymul(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> r(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

Poly2 Poly2::operator*(const Poly2& o) const {
    const std::size_t du = c.size() + o.c.size() - 1;
    const std::size_t dw = c[0].size() + o.c[0].size() - 1;
    Poly2 r;
    r.c.assign(du, std::vector<double>(dw, 0.0));
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < c[0].size(); ++j) {
            if (c[i][j] == 0.0) continue;
            for (std::size_t k = 0; k < o.c.size(); ++k)
                for (std::size_t l = 0; l < o.c[0].size(); ++l)
                    r.c[i + k][j + l] += c[i][j] * o.c[k][l];
        }
    return r;
}

}  // namespace eigensense::math
