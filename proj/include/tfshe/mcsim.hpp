#pragma once

// Monte Carlo for the discretized mild solution on a periodic grid.
//
//   u_n = (G u0)_{t_n} + lambda sum_{m<n} sum_j G_{(n-m) dt}(x - y_j) sigma(u_m(y_j)) Xi_{m,j}
//
// with Xi the cell noise increments of noise.hpp. Spatial convolutions use the
// periodic symbol E_beta(-nu |xi_k|^alpha (l dt)^beta), xi_k = 2 pi k / L.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tfshe/model.hpp"
#include "tfshe/moments.hpp"
#include "tfshe/noise.hpp"

namespace tfshe::mc {

// Per-lag symbols on the half-complex lattice. Row l holds the lag l * dt / steps_per_lag.
class SpectralKernelCache {
public:
    SpectralKernelCache(const ModelParams& p, const GridSpec& g, int max_lag, int steps_per_lag = 1);

    int max_lag() const { return max_lag_; }
    int steps_per_lag() const { return spl_; }
    std::size_t row_size() const { return nk_; }
    const double* row(int lag) const { return data_.data() + static_cast<std::size_t>(lag) * nk_; }

private:
    int max_lag_, spl_;
    std::size_t nk_;
    std::vector<double> data_;
};

struct SimOptions {
    int replicas = 100;
    std::uint64_t seed = 1;
    std::vector<double> snapshot_times; // full fields are kept at these times
    std::vector<double> probe_points;   // x-coordinates (first axis) with full time series
    unsigned threads = 0;               // 0: hardware concurrency
    double blowup = 1e12;
    // Aggregate distant lags over dyadic blocks with the kernel at the block centre.
    bool blocked_history = false;
    int block_near = 16; // lags below this are always exact
    int block_ratio = 8; // block width <= lag / ratio
};

struct FieldEnsemble {
    ModelParams params;
    GridSpec grid;
    std::string initial;
    std::string noise; // "white" or "colored(gamma)"
    std::uint64_t seed = 0;
    int replicas = 0;
    bool blocked_history = false;

    std::vector<double> snapshot_times;
    std::vector<int> snapshot_steps;
    std::vector<double> snapshots; // [snapshot][replica][cell]

    std::vector<std::size_t> probe_cells;
    std::vector<double> probe_series; // [replica][probe][step 0..nt]
    std::vector<double> mean_square;  // [replica][step 0..nt], spatial mean of u^2

    std::vector<int> aborted_at; // first step past the blow-up cap, -1 if none
    std::vector<std::string> warnings;
    double wall_seconds = 0.0;

    std::size_t cells() const { return grid.cells(); }
    const double* snapshot(std::size_t s, std::size_t r) const;
    const double* probe(std::size_t r, std::size_t p) const;
    bool ok(std::size_t r) const { return aborted_at[r] < 0; }
    std::size_t aborted() const;
    double time(int step) const { return step * grid.dt(); }
};

FieldEnsemble simulate(const ModelParams& p, const GridSpec& g, const InitialData& u0, const SimOptions& opt);

// One replica of the classical-limit scheme stepped twice with the same noise:
// through the full history sum and through the one-lag update
// U_n = G_dt (U_{n-1} + lambda S_{n-1}). Returns max |difference| / max |u|.
double markov_collapse_error(const ModelParams& p, const GridSpec& g, const InitialData& u0, std::uint64_t seed);

// Exact second moment of the discrete scheme for sigma(x) = s x and flat data c,
// via the two-point recursion in Fourier space. Tagged "discrete-oracle".
moments::MomentCurve discrete_flat_oracle(const ModelParams& p, const GridSpec& g, double c);

struct SecondMoment {
    moments::MomentCurve curve;  // E|u_t(x)|^2, stderrs from the replica bootstrap
    moments::MomentCurve energy; // sqrt(sum_j E|u_t(x_j)|^2 dx^d)
    std::vector<double> ci_lo, ci_hi; // 95% percentile bootstrap of the curve
    std::size_t used = 0;
    std::size_t aborted = 0;
};

// Pointwise at probe index `probe`, or averaged over the grid when x_average.
// Aborted replicas are dropped and counted.
SecondMoment second_moment(const FieldEnsemble& e, bool x_average, std::size_t probe = 0,
                           int bootstrap = 400, std::uint64_t seed = 7);

struct HolderFit {
    bool skipped = false;
    std::string reason;
    std::vector<int> lags;
    std::vector<double> increments; // E|u_{t+h} - u_t|^2
    double slope = 0.0;
    double exponent = 0.0; // slope / 2
    double ci_lo = 0.0, ci_hi = 0.0;
    double r2 = 0.0;
    double theoretical = 0.0; // (alpha - beta gamma) / 2 alpha, or with d for white noise
    nlohmann::json to_json() const;
};

// Regresses log E|u_{t+h} - u_t|^2 on log h at a probe; increments average over
// start times in [t_from, T - h] and replicas. CI from a replica bootstrap.
// Throws UnderResolvedError with fewer than 32 lags.
HolderFit holder_increments(const FieldEnsemble& e, std::size_t probe, const std::vector<int>& lags,
                            double t_from = 0.25, int bootstrap = 200, std::uint64_t seed = 11);

} // namespace tfshe::mc
