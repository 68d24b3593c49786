#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace tfshe::stats {

double mean(std::span<const double> x);
// Unbiased sample variance.
double variance(std::span<const double> x);

struct LinearFit {
    double slope = 0.0, intercept = 0.0;
    double slope_se = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0; // two-sided 95% Student-t interval for the slope
    double r2 = 0.0;
    std::size_t n = 0;
};
// Ordinary least squares y = a + b x. Needs at least three points.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

struct Bootstrap {
    double estimate = 0.0; // statistic on the full sample
    double se = 0.0;       // standard deviation over resamples
    double lo = 0.0, hi = 0.0; // 2.5% and 97.5% percentiles
};
// Resamples the index set {0..n-1} with replacement; the statistic receives
// the multiplicity of each index. Deterministic in seed.
Bootstrap bootstrap(std::size_t n, const std::function<double(std::span<const int>)>& statistic, int resamples,
                    std::uint64_t seed);
// Vector-valued statistic of length m sharing one set of resamples.
std::vector<Bootstrap> bootstrap_many(std::size_t n, std::size_t m,
                                      const std::function<void(std::span<const int>, std::span<double>)>& statistic,
                                      int resamples, std::uint64_t seed);
// Bootstrap of the sample mean.
Bootstrap bootstrap_mean(std::span<const double> x, int resamples, std::uint64_t seed);

} // namespace tfshe::stats
