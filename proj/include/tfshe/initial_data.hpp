#pragma once

// Kernel smoothing of initial data and the polynomial lower floor used by the
// second-moment lower bounds.

#include <vector>

#include <json.hpp>

#include "tfshe/model.hpp"

namespace tfshe::kernel {

// (G u0)_t(x) = int G_t(x - y) u0(y) dy. Non-constant data is one-dimensional.
double smoothed_initial(const ModelParams& p, const InitialData& u0, double t, double x);

struct DecayFloor {
    double t0 = 1.0;    // smallest dyadic time with p(t0, 0) <= 1
    double kappa = 0.0; // 2d/alpha, or 0 for constant data
    double beta = 1.0;
    double alpha = 2.0;
    double c2 = 0.0;
    double window_lo = 0.0, window_hi = 0.0; // calibration range of t
    std::size_t samples = 0;

    // c2 (t0 + t)^{-kappa beta}
    double operator()(double t) const;
    nlohmann::json to_json() const;
};

// Calibrates c2 as half the minimum of (G u0)_{t0+s}(x) (t0+s)^{kappa beta} over
// t in [window_lo, window_hi], s in [0, t], |x| <= t^{beta/alpha}.
DecayFloor build_decay_floor(const ModelParams& p, const InitialData& u0, double window_lo = 1e-2,
                             double window_hi = 1e2);

// Smallest 2^k (k integer) with p(2^k, 0) <= 1.
double warmup_time(const ModelParams& p);

} // namespace tfshe::kernel
