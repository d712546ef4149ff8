#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "gravdec/errors.hpp"

namespace gravdec::stats {

// Neumaier-compensated sum. Ensemble reductions run over index-ordered
// arrays, so results do not depend on worker count or scheduling.
inline double csum(std::span<const double> xs) {
    double sum = 0.0, comp = 0.0;
    for (double x : xs) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    return sum + comp;
}

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw DomainError("mean of empty sample");
    return csum(xs) / static_cast<double>(xs.size());
}

// Unbiased (n-1) sample variance, two-pass.
inline double variance(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 2) throw DomainError("variance needs at least 2 samples");
    const double m = mean(xs);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (xs[i] - m) * (xs[i] - m);
    return csum(sq) / static_cast<double>(n - 1);
}

inline double stderr_of_mean(std::span<const double> xs) {
    return std::sqrt(variance(xs) / static_cast<double>(xs.size()));
}

// Leave-one-out jackknife standard error of the mean. Coincides with
// s/sqrt(n) for the plain mean but is kept as the uniform error estimator
// for all ensemble statistics.
inline double jackknife_stderr(std::span<const double> per_realization) {
    const std::size_t n = per_realization.size();
    if (n < 2) throw DomainError("jackknife needs at least 2 realizations");
    const double total = csum(per_realization);
    const double full = total / static_cast<double>(n);
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double loo = (total - per_realization[i]) / static_cast<double>(n - 1);
        dev[i] = (loo - full) * (loo - full);
    }
    const double var = csum(dev) * static_cast<double>(n - 1) / static_cast<double>(n);
    return std::sqrt(var);
}

inline double excess_kurtosis(std::span<const double> xs) {
    const std::size_t n = xs.size();
    if (n < 4) throw DomainError("kurtosis needs at least 4 samples");
    const double m = mean(xs);
    std::vector<double> m2(n), m4(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = xs[i] - m;
        m2[i] = d * d;
        m4[i] = d * d * d * d;
    }
    const double v = csum(m2) / static_cast<double>(n);
    const double q = csum(m4) / static_cast<double>(n);
    return q / (v * v) - 3.0;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double intercept_stderr = 0.0;
    std::vector<double> residuals;
};

// Ordinary least squares y = a + b x with standard errors from the residual
// variance. Degenerate inputs (n < 3) fit without error bars.
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw DomainError("linear_fit: need matching n >= 2");
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("linear_fit: x values are all equal");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.residuals.resize(n);
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        fit.residuals[i] = y[i] - (fit.intercept + fit.slope * x[i]);
        ssr += fit.residuals[i] * fit.residuals[i];
    }
    if (n > 2) {
        const double s2 = ssr / static_cast<double>(n - 2);
        fit.slope_stderr = std::sqrt(s2 / sxx);
        fit.intercept_stderr = std::sqrt(s2 * (1.0 / static_cast<double>(n) + mx * mx / sxx));
    }
    return fit;
}

} // namespace gravdec::stats
