#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace tfshe {

// Aligned buffer for FFTW new-array execution.
template <class T>
class AlignedBuffer {
public:
    AlignedBuffer() = default;
    explicit AlignedBuffer(std::size_t n);
    AlignedBuffer(AlignedBuffer&&) noexcept = default;
    AlignedBuffer& operator=(AlignedBuffer&&) noexcept = default;

    T* data() { return p_.get(); }
    const T* data() const { return p_.get(); }
    std::size_t size() const { return n_; }
    T& operator[](std::size_t i) { return p_[i]; }
    const T& operator[](std::size_t i) const { return p_[i]; }

private:
    struct Free {
        void operator()(void* p) const;
    };
    std::unique_ptr<T[], Free> p_;
    std::size_t n_ = 0;
};

// Unnormalized real <-> half-complex transforms on an n^d periodic lattice.
// Plans are shared; execute() is safe from several threads on distinct buffers.
class RealFFT {
public:
    RealFFT(int n, int d);

    int n() const { return n_; }
    int d() const { return d_; }
    std::size_t real_size() const { return real_; }
    std::size_t complex_size() const { return cplx_; }

    void forward(double* in, std::complex<double>* out) const;
    // Destroys its input, as FFTW c2r does.
    void inverse(std::complex<double>* in, double* out) const;

    // Signed integer wavenumber components of half-complex index k (last axis non-negative).
    std::vector<int> wavenumber(std::size_t k) const;
    // |k|^2 for every half-complex index.
    std::vector<double> wavenumber_sq() const;

private:
    int n_, d_;
    std::size_t real_, cplx_;
    std::shared_ptr<void> fwd_, inv_;
};

} // namespace tfshe
