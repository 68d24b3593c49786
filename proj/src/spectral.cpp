#include "tfshe/spectral.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

#include "tfshe/errors.hpp"

namespace tfshe {

template <class T>
AlignedBuffer<T>::AlignedBuffer(std::size_t n)
    : p_(static_cast<T*>(fftw_malloc(sizeof(T) * (n ? n : 1)))), n_(n) {
    if (!p_) throw std::bad_alloc();
    for (std::size_t i = 0; i < n; ++i) p_[i] = T{};
}

template <class T>
void AlignedBuffer<T>::Free::operator()(void* p) const {
    fftw_free(p);
}

template class AlignedBuffer<double>;
template class AlignedBuffer<std::complex<double>>;

namespace {

std::mutex& plan_mutex() {
    static std::mutex m;
    return m;
}

struct Plans {
    std::shared_ptr<void> fwd, inv;
};

Plans plans_for(int n, int d) {
    static std::map<std::pair<int, int>, Plans> cache;
    std::lock_guard lock(plan_mutex());
    auto it = cache.find({n, d});
    if (it != cache.end()) return it->second;
    std::vector<int> dims(static_cast<std::size_t>(d), n);
    std::size_t real = 1;
    for (int i = 0; i < d; ++i) real *= static_cast<std::size_t>(n);
    const std::size_t cplx = real / static_cast<std::size_t>(n) * static_cast<std::size_t>(n / 2 + 1);
    double* r = fftw_alloc_real(real);
    fftw_complex* c = fftw_alloc_complex(cplx);
    auto del = [](void* p) { fftw_destroy_plan(static_cast<fftw_plan>(p)); };
    Plans pl;
    pl.fwd = std::shared_ptr<void>(fftw_plan_dft_r2c(d, dims.data(), r, c, FFTW_ESTIMATE), del);
    pl.inv = std::shared_ptr<void>(fftw_plan_dft_c2r(d, dims.data(), c, r, FFTW_ESTIMATE), del);
    fftw_free(r);
    fftw_free(c);
    if (!pl.fwd || !pl.inv) throw std::runtime_error("FFTW planning failed");
    cache.emplace(std::make_pair(n, d), pl);
    return pl;
}

} // namespace

RealFFT::RealFFT(int n, int d) : n_(n), d_(d) {
    if (n < 2 || (n & (n - 1)) != 0) throw DomainError("RealFFT: n must be a power of two >= 2");
    if (d < 1 || d > 3) throw DomainError("RealFFT: 1 <= d <= 3 required");
    real_ = 1;
    for (int i = 0; i < d; ++i) real_ *= static_cast<std::size_t>(n);
    cplx_ = real_ / static_cast<std::size_t>(n) * static_cast<std::size_t>(n / 2 + 1);
    Plans pl = plans_for(n, d);
    fwd_ = pl.fwd;
    inv_ = pl.inv;
}

void RealFFT::forward(double* in, std::complex<double>* out) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(fwd_.get()), in, reinterpret_cast<fftw_complex*>(out));
}

void RealFFT::inverse(std::complex<double>* in, double* out) const {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(inv_.get()), reinterpret_cast<fftw_complex*>(in), out);
}

std::vector<int> RealFFT::wavenumber(std::size_t k) const {
    const std::size_t half = static_cast<std::size_t>(n_ / 2 + 1);
    std::vector<int> w(static_cast<std::size_t>(d_));
    w[static_cast<std::size_t>(d_ - 1)] = static_cast<int>(k % half);
    k /= half;
    for (int i = d_ - 2; i >= 0; --i) {
        const int j = static_cast<int>(k % static_cast<std::size_t>(n_));
        k /= static_cast<std::size_t>(n_);
        w[static_cast<std::size_t>(i)] = j <= n_ / 2 ? j : j - n_;
    }
    return w;
}

std::vector<double> RealFFT::wavenumber_sq() const {
    std::vector<double> out(cplx_);
    for (std::size_t k = 0; k < cplx_; ++k) {
        double s = 0.0;
        for (int c : wavenumber(k)) s += static_cast<double>(c) * c;
        out[k] = s;
    }
    return out;
}

} // namespace tfshe
