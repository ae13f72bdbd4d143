#pragma once

#include <string>
#include <vector>

#include "eigensense/types.hpp"

namespace eigensense {

// Closed-form backing for a table, used to make CDF/quantile evaluation exact
// where an analytic expression exists.
enum class ClosedForm {
    None,
    Gaussian,       // mean 0, variance = gauss_variance
    CndRealK2,      // f(x) = (x/4) exp(-x^2/8), x >= 0
    CndComplexK2,   // f(x) = x^2 exp(-x^2/4) / (2 sqrt(pi)), x >= 0
};

struct TableMeta {
    std::string law;      // e.g. "marginal", "cnd_s0", "s1_med", "s1_cnd"
    int K = 0;            // K, or q1 for s1 laws
    int index = 0;        // marginal index i, or qr for s1_cnd
    ValueCase vc = ValueCase::Real;
    std::string method;   // "closed", "quadrature", "sampling", "convolution"
    ClosedForm closed = ClosedForm::None;
    double gauss_variance = 0.0;
};

// Tabulated law on a uniform grid; cdf is the running trapezoid of pdf.
struct DistributionTable {
    std::vector<double> grid;
    std::vector<double> pdf;
    std::vector<double> cdf;
    TableMeta meta;
};

double pdf_at(const DistributionTable& t, double x);
double cdf_at(const DistributionTable& t, double x);

// Monotone piecewise-linear inverse CDF; analytic where a closed form exists.
double quantile(const DistributionTable& t, double p);

// Portable text cache format with an embedded version tag.
void save_table(const DistributionTable& t, const std::string& path);
DistributionTable load_table(const std::string& path);

// Fill cdf from pdf by cumulative trapezoid over the (uniform) grid.
void fill_cdf_from_pdf(DistributionTable& t);

}  // namespace eigensense
