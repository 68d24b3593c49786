#include "tfshe/specfun.hpp"

#include <gsl/gsl_sf_gamma.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "tfshe/errors.hpp"
#include "tfshe/quadrature.hpp"

namespace tfshe::specfun {

using std::numbers::pi;

namespace {

void check_beta(double beta, const char* who) {
    if (!(beta > 0.0 && beta <= 1.0)) {
        throw DomainError(std::string(who) + ": 0 < beta <= 1 violated (beta = " +
                          std::to_string(beta) + ")");
    }
}

constexpr double kSeriesLimit = 0.5;

} // namespace

double sphere_area(int d) {
    if (d < 1) throw DomainError("sphere_area: d >= 1 required");
    return 2.0 * std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double riesz_constant(int d, double gamma) {
    if (!(gamma > 0.0 && gamma < d)) throw DomainError("riesz_constant: 0 < gamma < d violated");
    return std::pow(pi, 0.5 * d) * std::pow(2.0, d - gamma) * std::tgamma(0.5 * (d - gamma)) /
           std::tgamma(0.5 * gamma);
}

double ml_series(double beta, double z) {
    check_beta(beta, "ml_series");
    double sum = 0.0, zk = 1.0;
    for (int k = 0; k < 5000; ++k) {
        const double term = zk / std::tgamma(1.0 + beta * k);
        sum += term;
        if (k > 5 && std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
        zk *= z;
    }
    return sum;
}

// For beta < 1 and x > 0 the Laplace-inversion contour collapses onto the
// negative real axis; with the substitution w in (0, 1)
//   E_beta(-x) = int_0^1 exp(-(x sin(beta pi w) / sin(beta pi (1-w)))^{1/beta}) dw.
double ml_neg_integral(double beta, double x) {
    const double th = beta * pi;
    const double sth = std::sin(th), cth = std::cos(th);
    const double ib = 1.0 / beta;
    auto w_of_u = [&](double u) { return std::atan2(u * sth, 1.0 + u * cth) / th; };
    auto f = [&](double w) {
        const double u = std::sin(th * w) / std::sin(th * (1.0 - w));
        const double s = std::pow(x * u, ib);
        return std::exp(-s);
    };
    // Break points at fixed values of the exponent s; the dense marks near zero
    // isolate the w^{1/beta} behaviour at the left end.
    static constexpr std::array<double, 18> s_marks{1e-12, 1e-9, 1e-6, 1e-4, 1e-3, 0.01,
                                                    0.1,   0.5,  1.0,  2.0,  4.0,  8.0,
                                                    16.0,  32.0, 64.0, 128.0, 256.0, 745.0};
    std::vector<double> pts{0.0};
    for (double s : s_marks) pts.push_back(w_of_u(std::pow(s, beta) / x));
    quad::Options opt;
    opt.epsrel = 1e-13;
    return quad::integrate_pieces(f, pts, opt).value;
}

double ml_neg(double beta, double x) {
    check_beta(beta, "mittag_leffler_neg");
    if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("mittag_leffler_neg: x >= 0 required");
    if (x == 0.0) return 1.0;
    if (beta == 1.0) return std::exp(-x);
    if (x <= kSeriesLimit) return ml_series(beta, -x);
    if (x >= 30.0 && std::pow(x, 1.0 / beta) >= 60.0) {
        const double v = ml_neg_asymptotic(beta, x);
        if (std::isfinite(v)) return v;
    }
    return ml_neg_integral(beta, x);
}

double ml_neg_asymptotic(double beta, double x) {
    // sum_{k>=1} (-1)^{k+1} x^{-k} / Gamma(1 - beta k), stopped at 1e-17 relative
    double sum = 0.0, xk = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 200; ++k) {
        xk /= x;
        const double term = xk * gsl_sf_gammainv(1.0 - beta * k);
        const double mag = std::abs(term);
        if (mag == 0.0) continue; // pole of Gamma at integer 1 - beta k
        if (mag > prev && mag > 1e-300) break; // diverging before convergence
        sum += (k % 2) ? term : -term;
        if (mag <= 1e-17 * std::abs(sum)) return sum;
        prev = mag;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

MLValue mittag_leffler_neg(double beta, double x) {
    const double v = ml_neg(beta, x);
    const double lower = beta == 1.0 ? 0.0 : 1.0 / (1.0 + std::tgamma(1.0 - beta) * x);
    const double upper = 1.0 / (1.0 + x / std::tgamma(1.0 + beta));
    return {v, lower, upper};
}

double ml_log_pos(double rho, double z) {
    check_beta(rho, "ml_log_pos");
    if (!(z >= 0.0)) throw DomainError("ml_log_pos: z >= 0 required");
    if (z == 0.0) return 0.0;
    if (rho == 1.0) return z;
    const double y = std::pow(z, 1.0 / rho);
    if (y > 60.0) {
        // E_rho(z) = exp(y)/rho - sum_k z^{-k}/Gamma(1 - rho k) + ...; the algebraic part is
        // below exp(-60) relative.
        return y - std::log(rho);
    }
    // log-sum-exp over the positive series terms.
    const double lz = std::log(z);
    double lmax = -std::numeric_limits<double>::infinity();
    std::vector<double> lt;
    for (int k = 0; k < 100000; ++k) {
        const double l = k * lz - std::lgamma(1.0 + rho * k);
        lt.push_back(l);
        lmax = std::max(lmax, l);
        if (k > 2 && l < lmax - 45.0 && l < lt[lt.size() - 2]) break;
    }
    double s = 0.0;
    for (double l : lt) s += std::exp(l - lmax);
    return lmax + std::log(s);
}

// ---------------------------------------------------------------------------
// One-sided stable density

double subordinator_crossover(double) { return 1.0; }

double subordinator_density_series(double beta, double u) {
    // g(u) = 1/pi sum_{k>=1} (-1)^{k-1} Gamma(beta k + 1) sin(pi beta k) / k! u^{-beta k - 1}
    const double lu = std::log(u);
    double sum = 0.0, maxterm = 0.0;
    for (int k = 1; k < 4000; ++k) {
        const double lmag = std::lgamma(beta * k + 1.0) - std::lgamma(k + 1.0) - (beta * k + 1.0) * lu;
        const double term = ((k % 2) ? 1.0 : -1.0) * std::sin(pi * beta * k) * std::exp(lmag);
        sum += term;
        maxterm = std::max(maxterm, std::abs(term));
        if (k > 3 && std::exp(lmag) < 1e-18 * std::max(std::abs(sum), 1e-300)) break;
    }
    return sum / pi;
}

// Zolotarev:
//   g(u) = beta/(1-beta) u^{-1/(1-beta)} / pi int_0^pi A(phi) exp(-u^{-beta/(1-beta)} A(phi)) dphi
//   A(phi) = sin(beta phi)^{beta/(1-beta)} sin((1-beta) phi) / sin(phi)^{1/(1-beta)}
double subordinator_density_integral(double beta, double u) {
    const double q = 1.0 / (1.0 - beta);
    const double lc = -beta * q * std::log(u); // log of u^{-beta/(1-beta)}
    auto logA = [&](double phi) {
        return beta * q * std::log(std::sin(beta * phi)) + std::log(std::sin((1.0 - beta) * phi)) -
               q * std::log(std::sin(phi));
    };
    const double lpre = -q * std::log(u);
    auto f = [&](double phi) {
        const double la = logA(phi);
        const double e = lc + la;
        if (e > 700.0) return 0.0;
        return std::exp(lpre + la - std::exp(e));
    };
    // Break points where c A(phi) crosses fixed levels; A is increasing on (0, pi).
    std::vector<double> pts{0.0};
    static constexpr std::array<double, 6> levels{0.05, 0.5, 1.0, 3.0, 10.0, 40.0};
    for (double lev : levels) {
        const double target = std::log(lev) - lc;
        double lo = 1e-12, hi = pi - 1e-12;
        if (logA(lo) >= target || logA(hi) <= target) continue;
        for (int it = 0; it < 80; ++it) {
            const double mid = 0.5 * (lo + hi);
            (logA(mid) < target ? lo : hi) = mid;
        }
        pts.push_back(0.5 * (lo + hi));
    }
    pts.push_back(pi);
    std::sort(pts.begin(), pts.end());
    quad::Options opt;
    opt.epsrel = 1e-12;
    const double I = quad::integrate_pieces(f, pts, opt).value;
    return beta * q * I / pi;
}

SubordinatorEval subordinator_density_eval(double beta, double u) {
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("subordinator_density: 0 < beta < 1 violated");
    if (!(u >= 0.0)) throw DomainError("subordinator_density: u >= 0 required");
    if (u == 0.0) return {0.0, SubordinatorBranch::Integral, true};
    if (std::isinf(u)) return {0.0, SubordinatorBranch::Series, true};
    SubordinatorEval out{};
    if (u >= subordinator_crossover(beta)) {
        out.value = subordinator_density_series(beta, u);
        out.branch = SubordinatorBranch::Series;
    } else {
        out.value = subordinator_density_integral(beta, u);
        out.branch = SubordinatorBranch::Integral;
    }
    out.value = std::max(out.value, 0.0);
    out.underflow = out.value < std::numeric_limits<double>::min();
    return out;
}

double subordinator_density(double beta, double u) { return subordinator_density_eval(beta, u).value; }

double first_passage_density(double beta, double t, double x) {
    if (!(t > 0.0)) throw DomainError("first_passage_density: t > 0 required");
    if (!(x > 0.0)) return 0.0;
    const double lu = std::log(t) - std::log(x) / beta;
    const double u = std::exp(lu);
    if (u == 0.0 || std::isinf(u)) return 0.0;
    const double g = subordinator_density(beta, u);
    if (g == 0.0) return 0.0;
    return std::exp(lu - std::log(x) + std::log(g)) / beta;
}

} // namespace tfshe::specfun
