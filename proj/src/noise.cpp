#include "tfshe/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tfshe/errors.hpp"
#include "tfshe/quadrature.hpp"

namespace tfshe::mc {

using std::numbers::pi;

double GridSpec::cell_volume() const { return std::pow(dx(), d); }

std::size_t GridSpec::cells() const {
    std::size_t n = 1;
    for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(nx);
    return n;
}

std::size_t GridSpec::cell_at(double x) const {
    long j = std::lround(x / dx()) + nx / 2;
    j = ((j % nx) + nx) % nx;
    // remaining axes at index nx/2 (coordinate 0); the first axis is the slowest
    std::size_t idx = static_cast<std::size_t>(j);
    for (int i = 1; i < d; ++i) idx = idx * static_cast<std::size_t>(nx) + static_cast<std::size_t>(nx / 2);
    return idx;
}

void GridSpec::validate() const {
    if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("grid: L > 0 required");
    if (nx < 2 || (nx & (nx - 1)) != 0) throw DomainError("grid: nx must be a power of two >= 2");
    if (!(T > 0.0) || !std::isfinite(T)) throw DomainError("grid: T > 0 required");
    if (nt < 1) throw DomainError("grid: nt >= 1 required");
    if (d < 1 || d > 3) throw DomainError("grid: 1 <= d <= 3 required");
}

bool GridSpec::resolved(const ModelParams& p) const {
    return std::pow(dt(), p.beta() / p.alpha()) >= dx();
}

bool GridSpec::torus_large_enough(const ModelParams& p) const {
    return L >= 8.0 * std::pow(p.nu * std::pow(T, p.beta()), 1.0 / p.alpha());
}

nlohmann::json GridSpec::to_json() const {
    return {{"L", L}, {"nx", nx}, {"T", T}, {"nt", nt}, {"d", d}};
}

GridSpec GridSpec::from_json(const nlohmann::json& j) {
    GridSpec g;
    g.L = j.at("L").get<double>();
    g.nx = j.at("nx").get<int>();
    g.T = j.at("T").get<double>();
    g.nt = j.at("nt").get<int>();
    g.d = j.at("d").get<int>();
    return g;
}

NormalStream::NormalStream(std::uint64_t seed, std::uint64_t stream, std::uint32_t tag) {
    if (stream >= kMaxStreamsPerSeed) throw DomainError("seed streams exhausted: stream id >= 2^24 for one base seed");
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32), tag};
    eng_.seed(seq);
}

double NormalStream::uniform() {
    // 53 random bits, shifted off zero
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
}

double NormalStream::operator()() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double th = 2.0 * pi * uniform();
    spare_ = r * std::sin(th);
    has_spare_ = true;
    return r * std::cos(th);
}

void NormalStream::fill(std::span<double> out) {
    for (double& v : out) v = (*this)();
}

WhiteNoise::WhiteNoise(const GridSpec& g) : var_(g.dt() * g.cell_volume()) {}

void WhiteNoise::draw(NormalStream& rng, std::span<double> out) const {
    const double s = std::sqrt(var_);
    for (double& v : out) v = s * rng();
}

double riesz_cell_average(int d, double gamma, double h) {
    if (!(gamma > 0.0 && gamma < d)) throw DomainError("riesz_cell_average: 0 < gamma < d required");
    if (d == 1) return std::pow(h, -gamma) / (1.0 - gamma);
    if (d == 2) {
        // 8 triangles 0 <= y <= x <= h in polar form
        auto f = [gamma](double th) { return std::pow(std::cos(th), gamma - 2.0); };
        const double ang = quad::integrate_smooth(f, 0.0, pi / 4.0, {.epsabs = 0.0, .epsrel = 1e-13}).value;
        return 2.0 * std::pow(h, -gamma) / (2.0 - gamma) * ang;
    }
    throw DomainError("riesz_cell_average: d <= 2 supported");
}

ColoredNoise::ColoredNoise(const GridSpec& g, double gamma)
    : g_(g), gamma_(gamma), scale_(g.dt() * std::pow(g.dx(), 2 * g.d)),
      cell_avg_(riesz_cell_average(g.d, gamma, 0.5 * g.dx())), fft_(g.nx, g.d) {
    AlignedBuffer<double> c(fft_.real_size());
    std::vector<int> lag(static_cast<std::size_t>(g.d));
    for (std::size_t i = 0; i < fft_.real_size(); ++i) {
        std::size_t r = i;
        for (int a = g.d - 1; a >= 0; --a) {
            lag[static_cast<std::size_t>(a)] = static_cast<int>(r % static_cast<std::size_t>(g.nx));
            r /= static_cast<std::size_t>(g.nx);
        }
        c[i] = covariance(lag);
    }
    AlignedBuffer<std::complex<double>> ev(fft_.complex_size());
    fft_.forward(c.data(), ev.data());
    sqrt_eig_.resize(fft_.complex_size());
    double lo = ev[0].real(), hi = ev[0].real();
    for (std::size_t k = 0; k < ev.size(); ++k) {
        lo = std::min(lo, ev[k].real());
        hi = std::max(hi, ev[k].real());
    }
    min_eig_ = lo;
    if (lo < -1e-12 * hi) {
        std::ostringstream os;
        os << "non-positive-definite circulant embedding: min eigenvalue " << lo << " (max " << hi
           << "); raising the lag-0 variance by " << -lo / static_cast<double>(fft_.real_size())
           << " would regularize it";
        throw DomainError(os.str());
    }
    for (std::size_t k = 0; k < ev.size(); ++k) sqrt_eig_[k] = std::sqrt(std::max(0.0, ev[k].real()));
}

double ColoredNoise::covariance(std::span<const int> lag) const {
    double r2 = 0.0;
    bool zero = true;
    for (int k : lag) {
        int m = ((k % g_.nx) + g_.nx) % g_.nx;
        if (m > g_.nx / 2) m -= g_.nx;
        if (m != 0) zero = false;
        r2 += static_cast<double>(m) * m;
    }
    const double f = zero ? cell_avg_ : std::pow(std::sqrt(r2) * g_.dx(), -gamma_);
    return scale_ * f;
}

double ColoredNoise::covariance_1d(int k) const {
    std::vector<int> lag(static_cast<std::size_t>(g_.d), 0);
    lag[0] = k;
    return covariance(lag);
}

void ColoredNoise::draw(NormalStream& rng, std::span<double> out, AlignedBuffer<double>& work,
                        AlignedBuffer<std::complex<double>>& spec) const {
    const std::size_t n = fft_.real_size();
    rng.fill(std::span<double>(work.data(), n));
    fft_.forward(work.data(), spec.data());
    for (std::size_t k = 0; k < fft_.complex_size(); ++k) spec[k] *= sqrt_eig_[k];
    fft_.inverse(spec.data(), work.data());
    const double s = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = work[i] * s;
}

std::vector<std::vector<double>> synthesize_white_noise(const ModelParams& p, const GridSpec& g,
                                                        std::uint64_t seed, std::uint64_t stream) {
    g.validate();
    std::string why;
    if (!white_noise_valid(p, &why)) throw DomainError(why);
    if (p.d != g.d) throw DomainError("grid dimension differs from model dimension");
    WhiteNoise w(g);
    NormalStream rng(seed, stream, 1);
    std::vector<std::vector<double>> out(static_cast<std::size_t>(g.nt), std::vector<double>(g.cells()));
    for (auto& step : out) w.draw(rng, step);
    return out;
}

std::vector<std::vector<double>> synthesize_colored_noise(const ModelParams& p, const GridSpec& g,
                                                          std::uint64_t seed, std::uint64_t stream) {
    g.validate();
    std::string why;
    if (!colored_noise_valid(p, &why)) throw DomainError(why);
    if (p.d != g.d) throw DomainError("grid dimension differs from model dimension");
    ColoredNoise c(g, *p.gamma);
    NormalStream rng(seed, stream, 2);
    AlignedBuffer<double> work(g.cells());
    AlignedBuffer<std::complex<double>> spec(c.fft().complex_size());
    std::vector<std::vector<double>> out(static_cast<std::size_t>(g.nt), std::vector<double>(g.cells()));
    for (auto& step : out) c.draw(rng, step, work, spec);
    return out;
}

} // namespace tfshe::mc
