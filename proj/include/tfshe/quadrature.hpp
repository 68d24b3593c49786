#pragma once

// Thin wrappers over GSL QUADPACK plus a panel/extrapolation scheme for
// Fourier-type integrals on the half line.

#include <exception>
#include <span>
#include <vector>

namespace tfshe::quad {

struct Result {
    double value = 0.0;
    double abserr = 0.0;
};

struct Options {
    double epsabs = 0.0;
    double epsrel = 1e-10;
    std::size_t limit = 2000;
    // Throw QuadratureError when the reported error exceeds this many times the target.
    double slack = 1e3;
};

namespace detail {

using RawFn = double (*)(double, void*);

struct Callback {
    RawFn fn;
    void* data;
    std::exception_ptr error;
};

Result qags(Callback& cb, double a, double b, const Options& opt);
Result qag(Callback& cb, double a, double b, const Options& opt);
Result qagiu(Callback& cb, double a, const Options& opt);
Result qagil(Callback& cb, double b, const Options& opt);
Result qagp(Callback& cb, std::span<const double> pts, const Options& opt);

template <class F>
Callback make_callback(F& f) {
    return Callback{[](double x, void* p) -> double { return (*static_cast<F*>(p))(x); }, &f,
                    nullptr};
}

} // namespace detail

// Finite interval, tolerates integrable endpoint singularities.
template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
    auto cb = detail::make_callback(f);
    return detail::qags(cb, a, b, opt);
}

// Finite interval, smooth integrand (Gauss-Kronrod 41, no extrapolation).
template <class F>
Result integrate_smooth(F&& f, double a, double b, const Options& opt = {}) {
    auto cb = detail::make_callback(f);
    return detail::qag(cb, a, b, opt);
}

namespace detail {
Result pieces(Callback& cb, std::span<const double> pts, const Options& opt);
}

// Sum of integrate_smooth over consecutive sub-intervals of a sorted break-point
// list. The absolute tolerance per piece is derived from a coarse first pass.
template <class F>
Result integrate_pieces(F&& f, std::span<const double> pts, const Options& opt = {}) {
    auto cb = detail::make_callback(f);
    return detail::pieces(cb, pts, opt);
}

// [a, +inf)
template <class F>
Result integrate_upper(F&& f, double a, const Options& opt = {}) {
    auto cb = detail::make_callback(f);
    return detail::qagiu(cb, a, opt);
}

// (-inf, b]
template <class F>
Result integrate_lower(F&& f, double b, const Options& opt = {}) {
    auto cb = detail::make_callback(f);
    return detail::qagil(cb, b, opt);
}

// Finite interval split at the given sorted break points (endpoints included).
template <class F>
Result integrate_points(F&& f, std::span<const double> pts, const Options& opt = {}) {
    auto cb = detail::make_callback(f);
    return detail::qagp(cb, pts, opt);
}

// Sum of a slowly convergent series by the Levin u-transform.
Result levin_sum(std::span<const double> terms);

// int_0^inf f(k) w(k r) dk with w = cos (kind Cos), sin (kind Sin) or the
// Bessel function J_nu. Half-period panels are integrated with QUADPACK and the
// panel sums are accelerated with the Levin transform. `scale` is a frequency
// below which the integrand is treated as non-oscillatory.
enum class Kernel { Cos, Sin, Bessel };

struct OscillatorySpec {
    Kernel kind = Kernel::Cos;
    double nu = 0.0;      // Bessel order
    double scale = 1.0;   // characteristic decay scale of f
    std::size_t panels = 60;
};

namespace detail {
Result oscillatory(Callback& cb, double r, const OscillatorySpec& spec, const Options& opt);
}

template <class F>
Result integrate_oscillatory(F&& f, double r, const OscillatorySpec& spec,
                             const Options& opt = {}) {
    auto cb = detail::make_callback(f);
    return detail::oscillatory(cb, r, spec, opt);
}

// Inverse radial Fourier transform in d dimensions of a radial symbol f(|xi|):
// (2 pi)^{-d} int_{R^d} f(|xi|) e^{i xi.x} dxi evaluated at |x| = r.
template <class F>
Result radial_fourier_inverse(F&& f, int d, double r, double scale, const Options& opt = {});

} // namespace tfshe::quad

#include "tfshe/quadrature_impl.hpp"
