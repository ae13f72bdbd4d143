#include "eigensense/dist_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "eigensense/mathutil.hpp"

namespace eigensense {

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - xs.begin());
    const double x0 = xs[j - 1], x1 = xs[j];
    const double y0 = ys[j - 1], y1 = ys[j];
    return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

double closed_cdf(const TableMeta& m, double x) {
    switch (m.closed) {
        case ClosedForm::Gaussian:
            return math::norm_cdf(x / std::sqrt(m.gauss_variance));
        case ClosedForm::CndRealK2:
            return x <= 0.0 ? 0.0 : 1.0 - std::exp(-x * x / 8.0);
        case ClosedForm::CndComplexK2:
            return x <= 0.0 ? 0.0
                            : std::erf(0.5 * x) - x * std::exp(-x * x / 4.0) / std::sqrt(M_PI);
        default:
            throw std::logic_error("closed_cdf: no closed form");
    }
}

}  // namespace

double pdf_at(const DistributionTable& t, double x) {
    switch (t.meta.closed) {
        case ClosedForm::Gaussian: {
            const double s = std::sqrt(t.meta.gauss_variance);
            return math::norm_pdf(x / s) / s;
        }
        case ClosedForm::CndRealK2:
            return x < 0.0 ? 0.0 : 0.25 * x * std::exp(-x * x / 8.0);
        case ClosedForm::CndComplexK2:
            return x < 0.0 ? 0.0 : x * x * std::exp(-x * x / 4.0) / (2.0 * std::sqrt(M_PI));
        case ClosedForm::None:
            break;
    }
    if (x < t.grid.front() || x > t.grid.back()) return 0.0;
    return interp(t.grid, t.pdf, x);
}

double cdf_at(const DistributionTable& t, double x) {
    if (t.meta.closed != ClosedForm::None) return closed_cdf(t.meta, x);
    if (x <= t.grid.front()) return 0.0;
    if (x >= t.grid.back()) return t.cdf.back();
    return interp(t.grid, t.cdf, x);
}

double quantile(const DistributionTable& t, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("quantile: p must be in (0,1)");
    switch (t.meta.closed) {
        case ClosedForm::Gaussian:
            return std::sqrt(t.meta.gauss_variance) * math::norm_quantile(p);
        case ClosedForm::CndRealK2:
            return std::sqrt(-8.0 * std::log1p(-p));
        case ClosedForm::CndComplexK2: {
            // Newton with bisection safeguard on the closed CDF.
            double lo = 0.0, hi = 60.0, x = 2.0;
            for (int it = 0; it < 200; ++it) {
                const double f = closed_cdf(t.meta, x) - p;
                if (f == 0.0) break;
                if (f > 0.0) hi = x; else lo = x;
                const double d = pdf_at(t, x);
                double nx = d > 1e-300 ? x - f / d : 0.5 * (lo + hi);
                if (nx == x) break;  // converged to rounding
                if (!(nx > lo && nx < hi)) nx = 0.5 * (lo + hi);
                const bool done = std::abs(nx - x) < 1e-14 * (1.0 + std::abs(nx));
                x = nx;
                if (done && it > 3) break;
            }
            return x;
        }
        case ClosedForm::None:
            break;
    }
    const double target = p * t.cdf.back();  // tolerate cdf.back() = 1 +- 1e-4
    const auto it = std::lower_bound(t.cdf.begin(), t.cdf.end(), target);
    if (it == t.cdf.begin()) return t.grid.front();
    if (it == t.cdf.end()) return t.grid.back();
    const std::size_t j = static_cast<std::size_t>(it - t.cdf.begin());
    const double c0 = t.cdf[j - 1], c1 = t.cdf[j];
    if (c1 <= c0) return t.grid[j];
    const double w = (target - c0) / (c1 - c0);
    return t.grid[j - 1] + w * (t.grid[j] - t.grid[j - 1]);
}

void fill_cdf_from_pdf(DistributionTable& t) {
    // Quadrature roundoff can leave densities at -1e-30 in dead regions;
    // clamp so the running cdf stays monotone.
    for (double& p : t.pdf) p = std::max(p, 0.0);
    t.cdf.assign(t.grid.size(), 0.0);
    for (std::size_t i = 1; i < t.grid.size(); ++i)
        t.cdf[i] = t.cdf[i - 1] +
                   0.5 * (t.pdf[i - 1] + t.pdf[i]) * (t.grid[i] - t.grid[i - 1]);
}

void save_table(const DistributionTable& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_table: cannot open " + path);
    out << "eigensense-table 1\n";
    out << "law=" << t.meta.law << " K=" << t.meta.K << " index=" << t.meta.index
        << " case=" << to_string(t.meta.vc) << " method=" << t.meta.method
        << " closed=" << static_cast<int>(t.meta.closed)
        << " gauss_variance=" << t.meta.gauss_variance << " points=" << t.grid.size() << "\n";
    char buf[96];
    for (std::size_t i = 0; i < t.grid.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", t.grid[i], t.pdf[i], t.cdf[i]);
        out << buf;
    }
    if (!out) throw std::runtime_error("save_table: write failed for " + path);
}

DistributionTable load_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_table: cannot open " + path);
    std::string tag;
    int version = 0;
    in >> tag >> version;
    if (tag != "eigensense-table" || version != 1)
        throw std::runtime_error("load_table: bad header in " + path);
    DistributionTable t;
    std::string line;
    std::getline(in, line);  // rest of header line
    std::getline(in, line);  // meta line
    std::istringstream meta(line);
    std::string kv;
    std::size_t points = 0;
    while (meta >> kv) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        if (key == "law") t.meta.law = val;
        else if (key == "K") t.meta.K = std::stoi(val);
        else if (key == "index") t.meta.index = std::stoi(val);
        else if (key == "case") t.meta.vc = (val == "real") ? ValueCase::Real : ValueCase::Complex;
        else if (key == "method") t.meta.method = val;
        else if (key == "closed") t.meta.closed = static_cast<ClosedForm>(std::stoi(val));
        else if (key == "gauss_variance") t.meta.gauss_variance = std::stod(val);
        else if (key == "points") points = std::stoul(val);
    }
    t.grid.reserve(points);
    t.pdf.reserve(points);
    t.cdf.reserve(points);
    double x, p, c;
    while (in >> x >> p >> c) {
        t.grid.push_back(x);
        t.pdf.push_back(p);
        t.cdf.push_back(c);
    }
    if (points != 0 && t.grid.size() != points)
        throw std::runtime_error("load_table: truncated table in " + path);
    return t;
}

}  // namespace eigensense
