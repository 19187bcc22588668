#include "qpm/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace qpm::stats {

double wilson_lower(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) return 0.0;
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double centre = p + z2 / (2.0 * n);
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return (centre - half) / denom;
}

double wilson_upper(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) return 1.0;
    double n = static_cast<double>(trials);
    double p = static_cast<double>(successes) / n;
    double z2 = z * z;
    double denom = 1.0 + z2 / n;
    double centre = p + z2 / (2.0 * n);
    double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return (centre + half) / denom;
}

namespace {

double gamma_series_p(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-14) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_cf_q(double a, double x) {
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-14) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gammq(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gammq: bad arguments");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_series_p(a, x);
    return gamma_cf_q(a, x);
}

double chi2_survival(double statistic, int dof) {
    if (dof < 1) throw std::invalid_argument("chi2_survival: dof < 1");
    if (statistic <= 0.0) return 1.0;
    return gammq(0.5 * dof, 0.5 * statistic);
}

double chi2_uniform_statistic(const std::vector<std::uint64_t>& counts) {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (counts.size() < 2 || total == 0) throw std::invalid_argument("chi2: degenerate input");
    double expected = static_cast<double>(total) / static_cast<double>(counts.size());
    double stat = 0.0;
    for (auto c : counts) {
        double diff = static_cast<double>(c) - expected;
        stat += diff * diff / expected;
    }
    return stat;
}

double chi2_uniform_pvalue(const std::vector<std::uint64_t>& counts) {
    return chi2_survival(chi2_uniform_statistic(counts), static_cast<int>(counts.size()) - 1);
}

bool proportions_indistinguishable(std::uint64_t k1, std::uint64_t n1,
                                   std::uint64_t k2, std::uint64_t n2,
                                   double z) {
    if (n1 == 0 || n2 == 0) throw std::invalid_argument("proportion test: empty sample");
    double p1 = static_cast<double>(k1) / static_cast<double>(n1);
    double p2 = static_cast<double>(k2) / static_cast<double>(n2);
    double pooled = static_cast<double>(k1 + k2) / static_cast<double>(n1 + n2);
    double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
    if (se == 0.0) return p1 == p2;
    return std::fabs(p1 - p2) < z * se;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_slope: need >= 2 points");
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::invalid_argument("fit_slope: degenerate x");
    return (n * sxy - sx * sy) / denom;
}

}  // namespace qpm::stats
