#include "tfshe/initial_data.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "tfshe/errors.hpp"
#include "tfshe/kernel.hpp"
#include "tfshe/quadrature.hpp"
#include "tfshe/specfun.hpp"

namespace tfshe::kernel {

namespace {

// P(x - X_{E_t} in (a, b)) for the one-dimensional time-changed process.
double interval_mass(const ModelParams& p, double t, double lo, double hi) {
    const double a = p.alpha();
    if (p.frac.classical) return specfun::stable_interval_mass(a, p.nu, t, lo, hi);
    const double b = p.beta(), lt = std::log(t);
    auto h = [&](double v) {
        const double u = std::exp(v);
        if (u == 0.0 || std::isinf(u)) return 0.0;
        const double g = specfun::subordinator_density(b, u);
        if (g == 0.0) return 0.0;
        const double s = std::exp(b * (lt - v));
        if (s == 0.0) return 0.0;
        if (std::isinf(s)) return 0.0;
        return specfun::stable_interval_mass(a, p.nu, s, lo, hi) * g * u;
    };
    quad::Options opt;
    opt.epsrel = 1e-9;
    // split where s = 1 and where the interval edge sits one scale away
    const double m = std::max(std::abs(lo), std::abs(hi));
    const double v1 = m > 0.0 ? lt - a * std::log(m) / b : 0.0;
    const double va = std::min(0.0, v1), vb = std::max(0.0, v1);
    double s = quad::integrate_lower(h, va, opt).value + quad::integrate_upper(h, vb, opt).value;
    if (vb > va) s += quad::integrate(h, va, vb, opt).value;
    return std::clamp(s, 0.0, 1.0);
}

} // namespace

double smoothed_initial(const ModelParams& p, const InitialData& u0, double t, double x) {
    if (!(t > 0.0)) throw DomainError("smoothed_initial: t > 0 required");
    switch (u0.kind()) {
    case InitialData::Kind::Constant: return u0.constant_value();
    case InitialData::Kind::Step: {
        if (p.d != 1) throw DomainError("smoothed_initial: step data is one-dimensional");
        double v = 0.0;
        for (const auto& iv : u0.pieces()) v += iv.value * interval_mass(p, t, x - iv.b, x - iv.a);
        return v;
    }
    case InitialData::Kind::Callable: {
        if (p.d != 1) throw DomainError("smoothed_initial: callable data is one-dimensional");
        auto f = [&](double y) {
            const double w = u0(y);
            if (w == 0.0) return 0.0;
            const double r = std::abs(x - y);
            if (r == 0.0 && p.d >= p.alpha()) return 0.0;
            return w * kernel_subordination(p, t, r);
        };
        quad::Options opt;
        opt.epsrel = 1e-7;
        const double lo = u0.support_lo(), hi = u0.support_hi();
        if (x > lo && x < hi) {
            const std::array<double, 3> pts{lo, x, hi};
            return quad::integrate_points(f, pts, opt).value;
        }
        return quad::integrate(f, lo, hi, opt).value;
    }
    }
    return 0.0;
}

double warmup_time(const ModelParams& p) {
    auto p0 = [&](double t) { return specfun::stable_density(p.alpha(), p.nu, p.d, t, 0.0); };
    int k = 0;
    if (p0(1.0) <= 1.0) {
        while (k > -200 && p0(std::ldexp(1.0, k - 1)) <= 1.0) --k;
    } else {
        while (p0(std::ldexp(1.0, k)) > 1.0) ++k;
    }
    return std::ldexp(1.0, k);
}

double DecayFloor::operator()(double t) const { return c2 * std::pow(t0 + t, -kappa * beta); }

nlohmann::json DecayFloor::to_json() const {
    return {{"t0", t0},         {"kappa", kappa},         {"beta", beta},
            {"alpha", alpha},   {"c2", c2},               {"window", {window_lo, window_hi}},
            {"samples", samples}};
}

DecayFloor build_decay_floor(const ModelParams& p, const InitialData& u0, double window_lo, double window_hi) {
    u0.validate();
    if (!(window_lo > 0.0 && window_hi > window_lo)) throw DomainError("build_decay_floor: bad window");
    DecayFloor fl;
    fl.alpha = p.alpha();
    fl.beta = p.frac.classical ? 1.0 : p.beta();
    fl.t0 = warmup_time(p);
    fl.window_lo = window_lo;
    fl.window_hi = window_hi;
    if (u0.kind() == InitialData::Kind::Constant) {
        fl.kappa = 0.0;
        fl.c2 = u0.constant_value();
        return fl;
    }
    fl.kappa = 2.0 * p.d / p.alpha();
    double lowest = std::numeric_limits<double>::infinity();
    const int nt = 9;
    for (int i = 0; i < nt; ++i) {
        const double t = window_lo * std::pow(window_hi / window_lo, double(i) / (nt - 1));
        const double R = std::pow(t, fl.beta / fl.alpha);
        for (double sf : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const double tau = fl.t0 + sf * t;
            for (double xf : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
                const double v = smoothed_initial(p, u0, tau, xf * R);
                lowest = std::min(lowest, v * std::pow(tau, fl.kappa * fl.beta));
                ++fl.samples;
            }
        }
    }
    if (!(lowest > 0.0)) throw DomainError("build_decay_floor: smoothed data vanishes on the calibration window");
    fl.c2 = 0.5 * lowest;
    return fl;
}

} // namespace tfshe::kernel
