#include "tfshe/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gsl/gsl_cdf.h>

#include "tfshe/errors.hpp"

namespace tfshe::stats {

double mean(std::span<const double> x) {
    if (x.empty()) throw UnderResolvedError("mean of an empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) throw UnderResolvedError("variance needs two samples");
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DomainError("linear_fit: size mismatch");
    if (x.size() < 3) throw UnderResolvedError("linear_fit: at least three points required");
    LinearFit f;
    f.n = x.size();
    const double mx = mean(x), my = mean(y);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) throw UnderResolvedError("linear_fit: abscissae are all equal");
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - f.intercept - f.slope * x[i];
        rss += r * r;
    }
    f.r2 = syy > 0.0 ? 1.0 - rss / syy : 1.0;
    const double dof = static_cast<double>(x.size() - 2);
    f.slope_se = std::sqrt(rss / dof / sxx);
    const double q = gsl_cdf_tdist_Pinv(0.975, dof);
    f.ci_lo = f.slope - q * f.slope_se;
    f.ci_hi = f.slope + q * f.slope_se;
    return f;
}

namespace {

double percentile(const std::vector<double>& sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto i = static_cast<std::size_t>(pos);
    const double f = pos - static_cast<double>(i);
    return i + 1 < sorted.size() ? (1.0 - f) * sorted[i] + f * sorted[i + 1] : sorted[i];
}

} // namespace

std::vector<Bootstrap> bootstrap_many(std::size_t n, std::size_t m,
                                      const std::function<void(std::span<const int>, std::span<double>)>& statistic,
                                      int resamples, std::uint64_t seed) {
    if (n == 0) throw UnderResolvedError("bootstrap of an empty sample");
    std::vector<Bootstrap> out(m);
    std::vector<int> w(n, 1);
    std::vector<double> val(m);
    statistic(w, val);
    for (std::size_t j = 0; j < m; ++j) out[j].estimate = out[j].lo = out[j].hi = val[j];
    if (resamples < 2) return out;
    std::mt19937_64 eng(seed);
    const auto R = static_cast<std::size_t>(resamples);
    std::vector<double> reps(R * m); // [statistic][resample]
    for (std::size_t r = 0; r < R; ++r) {
        std::fill(w.begin(), w.end(), 0);
        for (std::size_t i = 0; i < n; ++i) ++w[eng() % n];
        statistic(w, val);
        for (std::size_t j = 0; j < m; ++j) reps[j * R + r] = val[j];
    }
    std::vector<double> col(R);
    for (std::size_t j = 0; j < m; ++j) {
        std::copy(reps.begin() + static_cast<long>(j * R), reps.begin() + static_cast<long>((j + 1) * R), col.begin());
        out[j].se = std::sqrt(variance(col));
        std::sort(col.begin(), col.end());
        out[j].lo = percentile(col, 0.025);
        out[j].hi = percentile(col, 0.975);
    }
    return out;
}

Bootstrap bootstrap(std::size_t n, const std::function<double(std::span<const int>)>& statistic, int resamples,
                    std::uint64_t seed) {
    return bootstrap_many(
        n, 1, [&](std::span<const int> w, std::span<double> out) { out[0] = statistic(w); }, resamples, seed)[0];
}

Bootstrap bootstrap_mean(std::span<const double> x, int resamples, std::uint64_t seed) {
    return bootstrap(
        x.size(),
        [x](std::span<const int> w) {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i];
            return s / static_cast<double>(x.size());
        },
        resamples, seed);
}

} // namespace tfshe::stats
