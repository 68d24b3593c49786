#pragma once

#include <cmath>
#include <numbers>

#include "tfshe/errors.hpp"

namespace tfshe::quad {

template <class F>
Result radial_fourier_inverse(F&& f, int d, double r, double scale, const Options& opt) {
    using std::numbers::pi;
    if (d < 1) throw DomainError("radial_fourier_inverse: d >= 1 required");
    const double half = 0.5 * d;
    const double sphere = 2.0 * std::pow(pi, half) / std::tgamma(half);
    if (r == 0.0) {
        auto g = [&](double k) { return f(k) * std::pow(k, d - 1); };
        Result res = integrate_upper(g, 0.0, opt);
        const double c = sphere / std::pow(2.0 * pi, d);
        return {c * res.value, c * res.abserr};
    }
    OscillatorySpec spec;
    spec.scale = scale;
    if (d == 1) {
        spec.kind = Kernel::Cos;
        Result res = integrate_oscillatory(f, r, spec, opt);
        return {res.value / pi, res.abserr / pi};
    }
    if (d == 3) {
        auto g = [&](double k) { return f(k) * k; };
        spec.kind = Kernel::Sin;
        Result res = integrate_oscillatory(g, r, spec, opt);
        const double c = 1.0 / (2.0 * pi * pi * r);
        return {c * res.value, c * res.abserr};
    }
    auto g = [&](double k) { return f(k) * std::pow(k, half); };
    spec.kind = Kernel::Bessel;
    spec.nu = half - 1.0;
    Result res = integrate_oscillatory(g, r, spec, opt);
    const double c = std::pow(2.0 * pi, -half) * std::pow(r, 1.0 - half);
    return {c * res.value, c * res.abserr};
}

} // namespace tfshe::quad
