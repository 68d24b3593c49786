#include <doctest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <gsl/gsl_sf_erf.h>

#include <cmath>
#include <numbers>

#include "tfshe/errors.hpp"
#include "tfshe/quadrature.hpp"
#include "tfshe/specfun.hpp"

using namespace tfshe;
using namespace tfshe::specfun;
using std::numbers::pi;

namespace {

using big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<160>>;

// Alternating power series in 160 decimal digits; exact to double precision
// while x^{1/beta} stays below ~200.
double ml_oracle(double beta, double x) {
    big sum = 0, xk = 1, bx = x;
    for (int k = 0; k < 4000; ++k) {
        big term = xk / boost::multiprecision::tgamma(big(1) + big(beta) * k);
        if (k % 2) sum -= term; else sum += term;
        if (k > 10 && term < big("1e-40")) break;
        xk *= bx;
    }
    return static_cast<double>(sum);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST_CASE("ml_neg matches high-precision series") {
    for (double beta : {0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
        for (double x : {0.01, 0.3, 0.5, 0.51, 1.0, 2.0, 3.0, 5.0, 8.0}) {
            if (std::pow(x, 1.0 / beta) > 200.0) continue;
            CAPTURE(beta);
            CAPTURE(x);
            CHECK(rel(ml_neg(beta, x), ml_oracle(beta, x)) < 1e-12);
        }
    }
}

TEST_CASE("ml_neg half order equals scaled erfc") {
    for (double x = 0.05; x < 20.0; x *= 1.3) {
        const double ref = std::exp(x * x) * std::erfc(x);
        CHECK(rel(ml_neg(0.5, x), ref) < 1e-12);
    }
}

TEST_CASE("ml_neg order one is the exponential") {
    for (int i = 0; i < 100; ++i) {
        const double x = 1e-3 * std::pow(1e6, i / 99.0);
        CHECK(std::abs(ml_neg(1.0, x) - std::exp(-x)) <= 1e-12 * std::exp(-x));
    }
    // near the classical limit the integral branch tends to the exponential
    for (double x : {0.7, 2.0, 5.0}) CHECK(rel(ml_neg(1.0 - 1e-7, x), std::exp(-x)) < 1e-5);
}

TEST_CASE("ml_neg strict rational envelope") {
    int violations = 0;
    for (int i = 0; i < 100; ++i) {
        const double beta = 0.005 + 0.99 * i / 99.0;
        for (int j = 0; j < 100; ++j) {
            const double x = 1e-3 * std::pow(1e6, j / 99.0);
            auto v = mittag_leffler_neg(beta, x);
            if (!(v.lower < v.value && v.value < v.upper)) ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("ml_neg is decreasing and large-x asymptotic") {
    for (double beta : {0.2, 0.6, 0.95}) {
        double prev = 1.0;
        for (double x = 0.01; x < 1e4; x *= 1.1) {
            const double v = ml_neg(beta, x);
            CHECK(v < prev);
            prev = v;
        }
        const double x = 1e6;
        CHECK(rel(ml_neg(beta, x), 1.0 / (std::tgamma(1.0 - beta) * x)) < 1e-4);
    }
}

TEST_CASE("ml_neg rejects bad input") {
    CHECK_THROWS_AS(ml_neg(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(ml_neg(1.5, 1.0), DomainError);
    CHECK_THROWS_AS(ml_neg(0.5, -1.0), DomainError);
}

TEST_CASE("ml_log_pos against direct series and asymptotics") {
    for (double rho : {0.25, 0.5, 0.75, 1.0}) {
        for (double z : {0.0, 0.1, 1.0, 3.0, 10.0}) {
            if (std::pow(z, 1.0 / rho) > 200.0) continue;
            CAPTURE(rho);
            CAPTURE(z);
            // positive series in extended precision
            big sum = 0, zk = 1;
            for (int k = 0; k < 3000; ++k) {
                big term = zk / boost::multiprecision::tgamma(big(1) + big(rho) * k);
                sum += term;
                if (k > 20 && term < sum * big("1e-40")) break;
                zk *= big(z);
            }
            const double ref = static_cast<double>(boost::multiprecision::log(sum));
            CHECK(std::abs(ml_log_pos(rho, z) - ref) < 1e-12 * std::max(1.0, std::abs(ref)));
        }
    }
    CHECK(std::abs(ml_log_pos(0.5, 1e3) - (1e6 - std::log(0.5))) < 1e-9 * 1e6);
    CHECK(std::abs(ml_log_pos(0.5, 2.0) - std::log(2.0 * std::exp(4.0) * 0.5 * std::erfc(-2.0))) < 1e-12);
}

TEST_CASE("subordinator density half order closed form") {
    for (double u = 1e-2; u < 1e3; u *= 1.25) {
        const double ref = 0.5 / std::sqrt(pi) * std::pow(u, -1.5) * std::exp(-0.25 / u);
        CAPTURE(u);
        CHECK(rel(subordinator_density(0.5, u), ref) < 1e-10);
    }
}

TEST_CASE("subordinator density branches agree at the crossover") {
    for (double beta : {0.1, 0.3, 0.5, 0.7, 0.9, 0.97}) {
        for (double u : {1.0, 1.4, 2.0, 5.0}) {
            const double a = subordinator_density_series(beta, u);
            const double b = subordinator_density_integral(beta, u);
            CAPTURE(beta);
            CAPTURE(u);
            CHECK(std::abs(a - b) < 1e-8 * std::abs(b));
        }
    }
}

TEST_CASE("subordinator density Laplace transform and mass") {
    for (double beta : {0.3, 0.5, 0.7, 0.9}) {
        for (double s : {0.0, 0.5, 1.0, 2.0}) {
            auto f = [&](double v) {
                const double u = std::exp(v);
                if (u == 0.0 || std::isinf(u)) return 0.0;
                return std::exp(-s * u) * subordinator_density(beta, u) * u;
            };
            quad::Options opt;
            opt.epsrel = 1e-11;
            const double I = quad::integrate_lower(f, 0.0, opt).value + quad::integrate_upper(f, 0.0, opt).value;
            CAPTURE(beta);
            CAPTURE(s);
            CHECK(rel(I, std::exp(-std::pow(s, beta))) < 1e-8);
        }
    }
}

TEST_CASE("subordinator density small-u behaviour") {
    // log g ~ -(1-beta) (u/beta)^{-beta/(1-beta)} as u -> 0
    for (double beta : {0.3, 0.6, 0.9}) {
        const double lead = -300.0;
        const double u = beta * std::pow(-lead / (1.0 - beta), -(1.0 - beta) / beta);
        const double lg = std::log(subordinator_density(beta, u));
        CHECK(std::abs(lg / lead - 1.0) < 0.1);
    }
    auto e = subordinator_density_eval(0.5, 1e-6);
    CHECK(e.branch == SubordinatorBranch::Integral);
    CHECK(e.value >= 0.0);
}

TEST_CASE("inverse subordinator density is normalized with the right mean") {
    for (double beta : {0.3, 0.5, 0.8}) {
        const double t = 1.7;
        auto f0 = [&](double v) { const double x = std::exp(v); if (x == 0.0 || std::isinf(x)) return 0.0; const double p = first_passage_density(beta, t, x); return p == 0.0 ? 0.0 : p * x; };
        auto f1 = [&](double v) { const double x = std::exp(v); if (x == 0.0 || std::isinf(x)) return 0.0; const double p = first_passage_density(beta, t, x); return p == 0.0 ? 0.0 : p * x * x; };
        quad::Options opt;
        opt.epsrel = 1e-11;
        const double m0 = quad::integrate_lower(f0, 0.0, opt).value + quad::integrate_upper(f0, 0.0, opt).value;
        const double m1 = quad::integrate_lower(f1, 0.0, opt).value + quad::integrate_upper(f1, 0.0, opt).value;
        CHECK(rel(m0, 1.0) < 1e-8);
        CHECK(rel(m1, std::pow(t, beta) / std::tgamma(1.0 + beta)) < 1e-8);
    }
}

TEST_CASE("stable density closed forms versus Fourier inversion") {
    for (int d : {1, 2, 3}) {
        for (double alpha : {1.0, 2.0}) {
            for (double r : {0.0, 0.3, 1.0, 2.5}) {
                CAPTURE(d);
                CAPTURE(alpha);
                CAPTURE(r);
                const double a = stable_density(alpha, 0.8, d, 1.3, r);
                const double b = stable_density_fourier(alpha, 0.8, d, 1.3, r);
                CHECK(rel(a, b) < 1e-8);
            }
        }
    }
}

TEST_CASE("stable density general alpha: three routes agree") {
    for (double alpha : {0.7, 1.2, 1.5, 1.8}) {
        for (double r : {0.0, 0.2, 1.0, 3.0, 10.0}) {
            CAPTURE(alpha);
            CAPTURE(r);
            const double a = stable_density(alpha, 1.1, 1, 0.9, r);
            if (r > 0.0 || alpha > 1.0) CHECK(rel(a, stable_density_fourier(alpha, 1.1, 1, 0.9, r)) < 1e-8);
            if (r > 0.0) CHECK(rel(a, stable_density_mixture(alpha, 1.1, 1, 0.9, r)) < 1e-8);
        }
    }
    for (int d : {2, 3}) {
        for (double alpha : {1.2, 1.7}) {
            for (double r : {0.1, 1.0, 4.0}) {
                CAPTURE(d);
                CAPTURE(alpha);
                CAPTURE(r);
                CHECK(rel(stable_density(alpha, 1.0, d, 1.0, r), stable_density_fourier(alpha, 1.0, d, 1.0, r)) < 1e-8);
            }
        }
    }
}

TEST_CASE("stable tail is the integral of the density") {
    for (double alpha : {0.8, 1.0, 1.5, 2.0}) {
        for (double x : {0.0, 0.5, 2.0, 7.0}) {
            auto f = [&](double y) { return stable_density(alpha, 1.0, 1, 0.6, y); };
            quad::Options opt;
            opt.epsrel = 1e-11;
            const double ref = quad::integrate_upper(f, x, opt).value;
            CAPTURE(alpha);
            CAPTURE(x);
            CHECK(rel(stable_tail(alpha, 1.0, 0.6, x), ref) < 1e-8);
        }
    }
    CHECK(rel(stable_interval_mass(1.5, 1.0, 1.0, -1.0, 1.0),
              1.0 - 2.0 * stable_tail(1.5, 1.0, 1.0, 1.0)) < 1e-14);
}

TEST_CASE("riesz constant against the Gaussian moment identity") {
    // int |x|^{-g} (4 pi s)^{-1/2} e^{-x^2/4s} dx = (2 pi)^{-1} c int e^{-s xi^2} |xi|^{g-1} dxi
    const double g = 0.4, s = 0.7;
    const double lhs = std::pow(2.0 * s, -0.5 * g) * std::pow(2.0, -0.5 * g) * std::tgamma(0.5 * (1 - g)) /
                       std::sqrt(pi);
    const double rhs = riesz_constant(1, g) / (2.0 * pi) * std::tgamma(0.5 * g) * std::pow(s, -0.5 * g);
    CHECK(rel(lhs, rhs) < 1e-13);
    CHECK(rel(sphere_area(3), 4.0 * pi) < 1e-15);
}

TEST_CASE("subordinator density large-u power law") {
    // At u = 1e3 the second term of the expansion is still ~7% of the first,
    // so the leading power law is checked further out and the two-term form at 1e3.
    const double beta = 0.3;
    auto lead = [&](double u) { return beta * std::pow(u, -beta - 1.0) / std::tgamma(1.0 - beta); };
    auto second = [&](double u) {
        return -std::tgamma(2.0 * beta + 1.0) * std::sin(2.0 * pi * beta) * std::pow(u, -2.0 * beta - 1.0) / (2.0 * pi);
    };
    CHECK(std::abs(subordinator_density(beta, 1e3) / (lead(1e3) + second(1e3)) - 1.0) < 0.01);
    CHECK(std::abs(subordinator_density(beta, 1e7) / lead(1e7) - 1.0) < 0.01);
    double prev = 1.0;
    for (double u : {1e2, 1e3, 1e4, 1e5, 1e6}) {
        const double gap = std::abs(subordinator_density(beta, u) / lead(u) - 1.0);
        CHECK(gap < prev);
        prev = gap;
    }
}

TEST_CASE("inverse subordinator density scaling") {
    const double beta = 0.6, c = 2.0, cb = std::pow(c, beta);
    for (double x : {0.1, 0.5, 1.0, 2.0, 4.0}) {
        CAPTURE(x);
        CHECK(rel(first_passage_density(beta, c, cb * x) * cb, first_passage_density(beta, 1.0, x)) < 1e-9);
    }
    const double g = std::exp(-0.25) / (2.0 * std::sqrt(pi));
    CHECK(rel(first_passage_density(0.5, 1.0, 1.0), 2.0 * g) < 1e-10);
}

TEST_CASE("stable density scaling in time") {
    const double s = 8.0;
    for (double alpha : {0.7, 1.3, 1.5, 2.0}) {
        for (int d : {1, 2}) {
            for (double x : {0.0, 0.4, 1.5, 6.0}) {
                CAPTURE(alpha);
                CAPTURE(d);
                CAPTURE(x);
                const double lhs = stable_density(alpha, 1.0, d, s, x);
                const double rhs = std::pow(s, -d / alpha) * stable_density(alpha, 1.0, d, 1.0, x * std::pow(s, -1.0 / alpha));
                CHECK(rel(lhs, rhs) < 1e-8);
            }
        }
    }
    CHECK(rel(stable_density(2.0, 1.0, 1, 1.0, 0.0), 1.0 / std::sqrt(4.0 * pi)) < 1e-14);
    CHECK(rel(stable_density(1.0, 1.0, 1, 1.0, 0.0), 1.0 / pi) < 1e-14);
}

TEST_CASE("stable density is radially non-increasing") {
    for (double alpha : {0.8, 1.5, 2.0}) {
        for (int d : {1, 2, 3}) {
            double prev = stable_density(alpha, 1.0, d, 1.0, 0.0);
            for (double r = 0.05; r < 30.0; r *= 1.25) {
                const double v = stable_density(alpha, 1.0, d, 1.0, r);
                CAPTURE(alpha);
                CAPTURE(d);
                CAPTURE(r);
                CHECK(v <= prev);
                prev = v;
            }
        }
    }
}

TEST_CASE("stable density semi-product bound") {
    for (double alpha : {1.2, 2.0}) {
        // p(t, 0) <= 1 holds from t = 1 for these orders in d = 1
        const double t = 1.0;
        REQUIRE(stable_density(alpha, 1.0, 1, t, 0.0) <= 1.0);
        for (double x = -4.0; x <= 4.0; x += 0.5) {
            for (double y = -4.0; y <= 4.0; y += 0.5) {
                const double lhs = stable_density(alpha, 1.0, 1, t, std::abs(x - y) / 2.0);
                const double rhs = stable_density(alpha, 1.0, 1, t, std::abs(x)) * stable_density(alpha, 1.0, 1, t, std::abs(y));
                CAPTURE(x);
                CAPTURE(y);
                CHECK(lhs >= rhs);
            }
        }
    }
}

TEST_CASE("ml_neg large-x expansion agrees with the branch-cut integral") {
    for (double beta : {0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
        for (double x = 30.0; x < 1e6; x *= 1.7) {
            const double a = ml_neg_asymptotic(beta, x);
            if (!std::isfinite(a)) continue;
            CAPTURE(beta);
            CAPTURE(x);
            CHECK(rel(a, ml_neg_integral(beta, x)) < 1e-11);
        }
    }
    // E_{1/2}(-x) = exp(x^2) erfc(x)
    CHECK(rel(ml_neg(0.5, 100.0), std::exp(gsl_sf_log_erfc(100.0) + 1e4)) < 1e-12);
}
