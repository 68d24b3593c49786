#include "tfshe/fftconv.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace tfshe {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr, inv = nullptr;
};

// FFTW planning is not thread-safe; execution with new-array functions is.
std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

PlanPair plans_for(std::size_t n) {
    static std::map<std::size_t, PlanPair> cache;
    std::lock_guard lock(plan_mutex());
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    double* r = fftw_alloc_real(n);
    fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
    PlanPair p;
    p.fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), r, c, FFTW_ESTIMATE);
    p.inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), c, r, FFTW_ESTIMATE);
    fftw_free(r);
    fftw_free(c);
    cache.emplace(n, p);
    return p;
}

struct RealBuf {
    double* p;
    explicit RealBuf(std::size_t n) : p(fftw_alloc_real(n)) {}
    ~RealBuf() { fftw_free(p); }
};
struct ComplexBuf {
    fftw_complex* p;
    explicit ComplexBuf(std::size_t n) : p(fftw_alloc_complex(n)) {}
    ~ComplexBuf() { fftw_free(p); }
};

} // namespace

void fft_convolve(std::span<const double> a, std::span<const double> b, std::vector<double>& out) {
    const std::size_t len = a.size() + b.size() - 1;
    out.assign(len, 0.0);
    if (a.empty() || b.empty()) return;
    if (std::min(a.size(), b.size()) <= 32) {
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
        return;
    }
    std::size_t n = 1;
    while (n < len) n <<= 1;
    const PlanPair pl = plans_for(n);
    RealBuf ra(n), rb(n);
    ComplexBuf ca(n / 2 + 1), cb(n / 2 + 1);
    std::fill(ra.p, ra.p + n, 0.0);
    std::fill(rb.p, rb.p + n, 0.0);
    std::copy(a.begin(), a.end(), ra.p);
    std::copy(b.begin(), b.end(), rb.p);
    fftw_execute_dft_r2c(pl.fwd, ra.p, ca.p);
    fftw_execute_dft_r2c(pl.fwd, rb.p, cb.p);
    for (std::size_t k = 0; k <= n / 2; ++k) {
        const double re = ca.p[k][0] * cb.p[k][0] - ca.p[k][1] * cb.p[k][1];
        const double im = ca.p[k][0] * cb.p[k][1] + ca.p[k][1] * cb.p[k][0];
        ca.p[k][0] = re;
        ca.p[k][1] = im;
    }
    fftw_execute_dft_c2r(pl.inv, ca.p, ra.p);
    const double s = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < len; ++k) out[k] = ra.p[k] * s;
}

} // namespace tfshe
