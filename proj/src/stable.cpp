#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "tfshe/errors.hpp"
#include "tfshe/quadrature.hpp"
#include "tfshe/specfun.hpp"

namespace tfshe::specfun {

using std::numbers::pi;

namespace {

void check_stable(double alpha, double nu, int d, double t, double r) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("stable_density: 0 < alpha <= 2 violated");
    if (!(nu > 0.0)) throw DomainError("stable_density: nu > 0 violated");
    if (d < 1) throw DomainError("stable_density: d >= 1 violated");
    if (!(t > 0.0)) throw DomainError("stable_density: t > 0 violated");
    if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError("stable_density: r >= 0 violated");
}

// Nolan's representation for the standard symmetric law (ch.f. exp(-|xi|^alpha),
// alpha != 1) on the real line, x > 0:
//   V(theta) = (cos theta / sin(alpha theta))^{alpha/(alpha-1)} cos((alpha-1) theta) / cos theta
//   p(x)     = alpha x^{1/(alpha-1)} / (pi |alpha-1|) int_0^{pi/2} V exp(-x^{alpha/(alpha-1)} V)
struct Nolan {
    double alpha, q, lc;

    Nolan(double alpha, double x) : alpha(alpha), q(alpha / (alpha - 1.0)), lc(q * std::log(x)) {}

    double logV(double th) const {
        return q * (std::log(std::cos(th)) - std::log(std::sin(alpha * th))) +
               std::log(std::cos((alpha - 1.0) * th)) - std::log(std::cos(th));
    }

    // Break points where c V crosses fixed levels; V is monotone in theta.
    std::vector<double> breaks() const {
        const double lo0 = 1e-14, hi0 = 0.5 * pi - 1e-14;
        const bool increasing = alpha < 1.0;
        std::vector<double> pts{0.0, 0.5 * pi};
        static constexpr std::array<double, 7> levels{0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 40.0};
        for (double lev : levels) {
            const double target = std::log(lev) - lc;
            double lo = lo0, hi = hi0;
            const double flo = logV(lo), fhi = logV(hi);
            if (increasing ? (flo >= target || fhi <= target) : (flo <= target || fhi >= target)) continue;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                const bool below = logV(mid) < target;
                (below == increasing ? lo : hi) = mid;
            }
            pts.push_back(0.5 * (lo + hi));
        }
        std::sort(pts.begin(), pts.end());
        return pts;
    }

    double density(double x) const {
        const double lpre = std::log(x) / (alpha - 1.0);
        auto f = [&](double th) {
            const double lv = logV(th);
            const double e = lc + lv;
            if (!std::isfinite(lv) || e > 700.0) return 0.0;
            return std::exp(lpre + lv - std::exp(e));
        };
        auto pts = breaks();
        quad::Options opt;
        opt.epsrel = 1e-12;
        const double I = quad::integrate_pieces(f, pts, opt).value;
        return alpha / (pi * std::abs(alpha - 1.0)) * I;
    }

    // P(X > x), x > 0.
    double tail() const {
        auto f = [&](double th) {
            const double lv = logV(th);
            const double e = lc + lv;
            if (e > 700.0) return alpha > 1.0 ? 0.0 : 1.0;
            if (!std::isfinite(lv)) return (lv < 0) == (alpha > 1.0) ? 1.0 : 0.0;
            const double cv = std::exp(e);
            return alpha > 1.0 ? std::exp(-cv) : -std::expm1(-cv);
        };
        auto pts = breaks();
        quad::Options opt;
        opt.epsrel = 1e-12;
        return quad::integrate_pieces(f, pts, opt).value / pi;
    }
};

// Large-x expansion (1/pi) sum_k (-1)^{k+1} Gamma(alpha k + m)/k! sin(k pi alpha/2) x^{-alpha k - m},
// m = 1 for the density, m = 0 for the tail. NaN if the terms do not settle below 1e-17.
double far_tail_series(double alpha, double x, int m) {
    const double lx = std::log(x);
    double sum = 0.0;
    for (int k = 1; k <= 40; ++k) {
        const double lt = std::lgamma(alpha * k + m) - std::lgamma(k + 1.0) - (alpha * k + m) * lx;
        const double term = std::exp(lt) * std::sin(k * pi * alpha / 2.0) * (k % 2 ? 1.0 : -1.0);
        sum += term;
        if (k > 1 && std::exp(lt) < 1e-17 * std::abs(sum)) return sum / pi;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

constexpr double kFarTail = 30.0;

double standard_density_1d(double alpha, double x) {
    if (x == 0.0) return std::tgamma(1.0 + 1.0 / alpha) / pi;
    if (x > kFarTail) {
        const double v = far_tail_series(alpha, x, 1);
        if (std::isfinite(v)) return v;
    }
    return Nolan(alpha, x).density(x);
}

} // namespace

double stable_density(double alpha, double nu, int d, double t, double r) {
    check_stable(alpha, nu, d, t, r);
    const double s = nu * t;
    if (alpha == 2.0) return std::pow(4.0 * pi * s, -0.5 * d) * std::exp(-r * r / (4.0 * s));
    if (alpha == 1.0) {
        return std::tgamma(0.5 * (d + 1)) / std::pow(pi, 0.5 * (d + 1)) * s /
               std::pow(s * s + r * r, 0.5 * (d + 1));
    }
    if (d == 1) {
        const double scale = std::pow(s, 1.0 / alpha);
        return standard_density_1d(alpha, r / scale) / scale;
    }
    return stable_density_mixture(alpha, nu, d, t, r);
}

// exp(-nu t |xi|^alpha) = E exp(-V |xi|^2) with V = tau D, D one-sided (alpha/2)-stable,
// tau = (nu t)^{2/alpha}; hence p is a Gaussian mixture over g_{alpha/2}.
double stable_density_mixture(double alpha, double nu, int d, double t, double r) {
    check_stable(alpha, nu, d, t, r);
    if (alpha == 2.0) return stable_density(alpha, nu, d, t, r);
    const double tau = std::pow(nu * t, 2.0 / alpha);
    const double a = r * r / (4.0 * tau);
    const double h = 0.5 * alpha;
    auto f = [&](double v) {
        const double w = std::exp(v);
        const double g = subordinator_density(h, w);
        if (g == 0.0) return 0.0;
        return std::exp(-0.5 * d * v - a / w + v) * g;
    };
    quad::Options opt;
    opt.epsrel = 1e-11;
        const double split = a > 1.0 ? std::log(a) : 0.0;
    const double I = quad::integrate_lower(f, split, opt).value + quad::integrate_upper(f, split, opt).value;
    return std::pow(4.0 * pi * tau, -0.5 * d) * I;
}

double stable_density_fourier(double alpha, double nu, int d, double t, double r) {
    check_stable(alpha, nu, d, t, r);
    const double s = nu * t;
    if (r == 0.0 && alpha <= 0.0) throw DivergenceError("stable_density_fourier");
    auto f = [&](double k) { return std::exp(-s * std::pow(k, alpha)); };
    quad::Options opt;
    opt.epsrel = 1e-10;
    return quad::radial_fourier_inverse(f, d, r, std::pow(s, -1.0 / alpha), opt).value;
}

double stable_tail(double alpha, double nu, double t, double x) {
    check_stable(alpha, nu, 1, t, std::abs(x));
    if (x < 0.0) return 1.0 - stable_tail(alpha, nu, t, -x);
    if (x == 0.0) return 0.5;
    const double s = nu * t;
    if (alpha == 2.0) return 0.5 * std::erfc(x / (2.0 * std::sqrt(s)));
    if (alpha == 1.0) return std::atan(s / x) / pi;
    const double z = x / std::pow(s, 1.0 / alpha);
    if (z > kFarTail) {
        const double v = far_tail_series(alpha, z, 0);
        if (std::isfinite(v)) return v;
    }
    return Nolan(alpha, z).tail();
}

double stable_interval_mass(double alpha, double nu, double t, double a, double b) {
    if (!(a <= b)) throw DomainError("stable_interval_mass: a <= b required");
    if (a >= 0.0) return stable_tail(alpha, nu, t, a) - stable_tail(alpha, nu, t, b);
    if (b <= 0.0) return stable_tail(alpha, nu, t, -b) - stable_tail(alpha, nu, t, -a);
    return 1.0 - stable_tail(alpha, nu, t, -a) - stable_tail(alpha, nu, t, b);
}

} // namespace tfshe::specfun
