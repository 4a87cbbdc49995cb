#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace bipolar {

struct DegenerateInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Moments {
    std::int64_t n = 0;
    double mean = 0.0;
    double m2 = 0.0; // sum of squared deviations

    void add(double x) {
        ++n;
        double d1 = x - mean;
        mean += d1 / double(n);
        m2 += d1 * (x - mean);
    }
    double variance() const { return n > 1 ? m2 / double(n - 1) : 0.0; }
    double stderr_mean() const { return n > 1 ? std::sqrt(variance() / double(n)) : 0.0; }
};

inline double sample_mean(const std::vector<double>& xs) {
    Moments m;
    for (double x : xs) m.add(x);
    return m.mean;
}

inline double sample_variance(const std::vector<double>& xs) {
    Moments m;
    for (double x : xs) m.add(x);
    return m.variance();
}

inline double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw DegenerateInput("quantile of empty sample");
    std::sort(xs.begin(), xs.end());
    double u = q * double(xs.size() - 1);
    std::size_t i = std::size_t(u);
    if (i + 1 >= xs.size()) return xs.back();
    double f = u - double(i);
    return (1 - f) * xs[i] + f * xs[i + 1];
}

// ---- Kolmogorov-Smirnov ------------------------------------------------------

// Two-sample KS statistic sup|F1 - F2|.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw DegenerateInput("ks_statistic: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(double(i) / a.size() - double(j) / b.size()));
    }
    return d;
}

// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
inline double kolmogorov_q(double lambda) {
    if (lambda < 1e-9) return 1.0;
    double sum = 0.0, sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-12) break;
    }
    return std::min(1.0, std::max(0.0, 2.0 * sum));
}

// Asymptotic two-sample p-value with the usual small-sample correction.
inline double ks_p_value(double d, std::size_t n, std::size_t m) {
    double ne = double(n) * double(m) / double(n + m);
    double sq = std::sqrt(ne);
    return kolmogorov_q((sq + 0.12 + 0.11 / sq) * d);
}

// One-sample variant against a continuous cdf supplied by the caller.
template <class Cdf>
double ks_statistic_cdf(std::vector<double> a, Cdf cdf) {
    if (a.empty()) throw DegenerateInput("ks_statistic_cdf: empty sample");
    std::sort(a.begin(), a.end());
    double d = 0.0;
    double n = double(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        double f = cdf(a[i]);
        d = std::max(d, std::max(double(i + 1) / n - f, f - double(i) / n));
    }
    return d;
}

// ---- chi-square --------------------------------------------------------------

// Regularized upper incomplete gamma Q(a, x), series/continued-fraction split.
inline double gamma_q(double a, double x) {
    if (x < 0 || a <= 0) throw std::invalid_argument("gamma_q domain");
    if (x == 0) return 1.0;
    auto gln = std::lgamma(a);
    if (x < a + 1.0) {
        // series for P(a,x)
        double ap = a, sum = 1.0 / a, del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
        }
        double p = sum * std::exp(-x + a * std::log(x) - gln);
        return std::min(1.0, std::max(0.0, 1.0 - p));
    }
    // continued fraction for Q(a,x)
    const double tiny = 1e-300;
    double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -double(i) * (double(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    double q = std::exp(-x + a * std::log(x) - gln) * h;
    return std::min(1.0, std::max(0.0, q));
}

inline double chi_square_cdf_upper(double stat, int dof) {
    return gamma_q(0.5 * dof, 0.5 * stat);
}

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    double p_value = 1.0;
};

// Pearson chi-square of observed counts against probabilities.
inline ChiSquareResult chi_square(const std::vector<std::int64_t>& counts,
                                  const std::vector<double>& probs) {
    if (counts.empty() || counts.size() != probs.size())
        throw DegenerateInput("chi_square: bad inputs");
    std::int64_t total = 0;
    for (auto c : counts) total += c;
    if (total <= 0) throw DegenerateInput("chi_square: empty sample");
    double stat = 0.0;
    int dof = -1;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        double e = probs[i] * double(total);
        if (e <= 0) {
            if (counts[i] != 0) stat = std::numeric_limits<double>::infinity();
            continue;
        }
        double d = double(counts[i]) - e;
        stat += d * d / e;
        ++dof;
    }
    ChiSquareResult r;
    r.statistic = stat;
    r.dof = std::max(1, dof);
    r.p_value = std::isinf(stat) ? 0.0 : chi_square_cdf_upper(stat, r.dof);
    return r;
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

} // namespace bipolar
