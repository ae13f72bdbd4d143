#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace eigensense::math {

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / M_SQRT2); }

inline double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

// Inverse standard normal CDF: Acklam's rational approximation polished with
// one Halley step, accurate to ~1e-15.
double norm_quantile(double p);

// Adaptive Simpson quadrature with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol = 1e-8, int max_depth = 30);

// moments[k] = \int_{-inf}^{a} t^k exp(-t^2 / (2 s2)) dt for k = 0..kmax.
void lower_gauss_moments(double s2, double a, int kmax, double* out);

// moments[k] = \int_{-inf}^{inf} t^k exp(-t^2 / (2 s2)) dt.
void full_gauss_moments(double s2, int kmax, double* out);

// Coefficient-vector polynomial product, c[k] is the coefficient of t^k.
std::vector<double> polymul(const std::vector<double>& a, const std::vector<double>& b);

// Dense bivariate polynomial in (u, w); c[i][j] multiplies u^i w^j.
struct Poly2 {
    std::vector<std::vector<double>> c;  // (du+1) x (dw+1)

    static Poly2 from(const std::vector<std::vector<double>>& coeffs) { return Poly2{coeffs}; }
    Poly2 operator*(const Poly2& o) const;
};

}  // namespace eigensense::math
