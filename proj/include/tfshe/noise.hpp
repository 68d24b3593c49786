#pragma once

// Periodic grids, reproducible Gaussian streams and the two noise synthesizers.

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "tfshe/model.hpp"
#include "tfshe/spectral.hpp"

namespace tfshe::mc {

struct GridSpec {
    double L = 16.0; // period per axis
    int nx = 256;    // points per axis, power of two
    double T = 1.0;
    int nt = 256;
    int d = 1;

    double dt() const { return T / nt; }
    double dx() const { return L / nx; }
    double cell_volume() const;
    std::size_t cells() const;
    // Coordinate of index j along one axis; index nx/2 sits at the origin.
    double coord(int j) const { return (j - nx / 2) * dx(); }
    // Linear index of the cell nearest to the point (x, 0, ..., 0).
    std::size_t cell_at(double x) const;

    void validate() const;
    // dt^{beta/alpha} >= dx; the kernel is under-resolved otherwise.
    bool resolved(const ModelParams& p) const;
    // L >= 8 (nu T^beta)^{1/alpha}, keeping wrap-around mass negligible.
    bool torus_large_enough(const ModelParams& p) const;

    nlohmann::json to_json() const;
    static GridSpec from_json(const nlohmann::json& j);
};

inline constexpr std::uint64_t kMaxStreamsPerSeed = 1u << 24;

// Standard normals from mt19937_64 seeded by (seed, stream, tag); Box-Muller
// so the sequence does not depend on the standard library's distributions.
class NormalStream {
public:
    NormalStream(std::uint64_t seed, std::uint64_t stream, std::uint32_t tag = 0);
    double operator()();
    void fill(std::span<double> out);

private:
    double uniform();
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Independent N(0, dt dx^d) per cell.
class WhiteNoise {
public:
    explicit WhiteNoise(const GridSpec& g);
    double variance() const { return var_; }
    void draw(NormalStream& rng, std::span<double> out) const;

private:
    double var_;
};

// Stationary Gaussian field per step with covariance dt dx^{2d} f(x_i - x_j),
// f the minimum-image Riesz kernel |x|^{-gamma} with the lag-0 value replaced
// by its cell average. Circulant embedding on the grid itself.
class ColoredNoise {
public:
    ColoredNoise(const GridSpec& g, double gamma);

    double gamma() const { return gamma_; }
    // Covariance between cells at integer lag vector k (min image applied).
    double covariance(std::span<const int> lag) const;
    double covariance_1d(int k) const;
    double min_eigenvalue() const { return min_eig_; }
    void draw(NormalStream& rng, std::span<double> out, AlignedBuffer<double>& work,
              AlignedBuffer<std::complex<double>>& spec) const;
    const RealFFT& fft() const { return fft_; }

private:
    GridSpec g_;
    double gamma_;
    double scale_; // dt dx^{2d}
    double cell_avg_;
    RealFFT fft_;
    std::vector<double> sqrt_eig_;
    double min_eig_ = 0.0;
};

// Cell average of |x|^{-gamma} over [-h, h]^d (d = 1, 2).
double riesz_cell_average(int d, double gamma, double h);

// Whole noise histories, one array per step (spec-level entry points; the
// simulator draws step by step instead).
// White: requires d < (2 ^ 1/beta) alpha. Colored: gamma from p, 0 < gamma < alpha ^ d.
std::vector<std::vector<double>> synthesize_white_noise(const ModelParams& p, const GridSpec& g,
                                                        std::uint64_t seed, std::uint64_t stream = 0);
std::vector<std::vector<double>> synthesize_colored_noise(const ModelParams& p, const GridSpec& g,
                                                          std::uint64_t seed, std::uint64_t stream = 0);

} // namespace tfshe::mc
