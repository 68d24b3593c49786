#include <doctest.h>

#include <gsl/gsl_sf_hyperg.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "tfshe/errors.hpp"
#include "tfshe/initial_data.hpp"
#include "tfshe/kernel.hpp"
#include "tfshe/quadrature.hpp"
#include "tfshe/specfun.hpp"

using namespace tfshe;
using namespace tfshe::kernel;
using std::numbers::pi;

namespace {

ModelParams model(double alpha, double beta, int d, double nu = 1.0) {
    ModelParams p;
    p.frac = beta == 1.0 ? FracOrder::classical_limit(alpha) : FracOrder{alpha, beta, false};
    p.nu = nu;
    p.d = d;
    return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double slope(const std::vector<double>& x, const std::vector<double>& y) {
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
    mx /= x.size();
    my /= y.size();
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
    return sxy / sxx;
}

// Brownian (alpha = 2, d = 1) covariance oracle: X - X' + sep given the two clocks is
// N(sep, 2 nu (s1 + s2)), and E|N(m, v)|^{-gamma} is a confluent hypergeometric value.
double gaussian_covariance_oracle(double beta, double nu, double gamma, double t, double sep) {
    auto gauss_moment = [&](double var) {
        const double c = std::pow(2.0, -gamma / 2.0) * std::tgamma((1.0 - gamma) / 2.0) / std::sqrt(pi);
        return c * std::pow(var, -gamma / 2.0) * gsl_sf_hyperg_1F1(gamma / 2.0, 0.5, -sep * sep / (2.0 * var));
    };
    auto clock = [&](double v) { return std::pow(t * std::exp(-v), beta); }; // s = (t/u)^beta
    auto weight = [&](double v) {
        const double u = std::exp(v);
        if (u == 0.0 || std::isinf(u)) return 0.0;
        return specfun::subordinator_density(beta, u) * u;
    };
    quad::Options opt;
    opt.epsrel = 1e-9;
    auto inner = [&](double v1) {
        const double w1 = weight(v1);
        if (w1 == 0.0) return 0.0;
        const double s1 = clock(v1);
        auto f = [&](double v2) {
            const double w2 = weight(v2);
            if (w2 == 0.0) return 0.0;
            return w2 * gauss_moment(2.0 * nu * (s1 + clock(v2)));
        };
        return w1 * (quad::integrate_lower(f, 0.0, opt).value + quad::integrate_upper(f, 0.0, opt).value);
    };
    return quad::integrate_lower(inner, 0.0, opt).value + quad::integrate_upper(inner, 0.0, opt).value;
}

} // namespace

TEST_CASE("symbol is one at the origin, decreasing, and exponential in the classical limit") {
    const auto p = model(1.5, 0.7, 1);
    CHECK(symbol(p, 1.0, 0.0) == 1.0);
    const auto c = model(2.0, 1.0, 1);
    for (double k : {0.1, 0.5, 1.0, 3.0}) CHECK(rel(symbol(c, 1.0, k), std::exp(-k * k)) < 1e-14);
    for (double t : {0.5, 1.0, 2.0}) {
        double prev = 1.0;
        for (double k = 0.01; k < 50.0; k *= 1.3) {
            const double v = symbol(p, t, k);
            CHECK(v > 0.0);
            CHECK(v <= prev);
            CHECK(v >= symbol(p, 2.0 * t, k));
            prev = v;
        }
    }
}

TEST_CASE("classical limit reduces to the Gaussian and stable densities") {
    CHECK(rel(kernel_subordination(model(2.0, 1.0, 1), 1.0, 0.0), 0.28209479177387814) < 1e-12);
    const auto p = model(1.5, 1.0, 1);
    for (double r : {0.0, 0.3, 1.0, 4.0}) {
        CAPTURE(r);
        CHECK(rel(kernel_fourier(p, 1.0, r), specfun::stable_density(1.5, 1.0, 1, 1.0, r)) < 1e-8);
    }
}

TEST_CASE("origin value closed form") {
    for (auto [a, b] : {std::pair{2.0, 0.5}, {1.5, 0.7}, {1.2, 0.9}}) {
        const auto p = model(a, b, 1);
        for (double t : {0.5, 1.0, 3.0}) {
            CAPTURE(a);
            CAPTURE(t);
            CHECK(rel(kernel_subordination(p, t, 0.0), kernel_at_origin(p, t)) < 1e-8);
        }
    }
    CHECK_THROWS_AS(kernel_at_origin(model(1.2, 0.5, 2), 1.0), DivergenceError);
    CHECK_THROWS_AS(kernel_subordination(model(1.2, 0.5, 2), 1.0, 0.0), DivergenceError);
}

TEST_CASE("mass is one") {
    for (double t : {0.5, 1.0, 2.0}) {
        const auto p = model(2.0, 0.5, 1);
        auto f = [&](double r) { return 2.0 * kernel_subordination(p, t, r); };
        quad::Options opt;
        opt.epsrel = 1e-8;
        CHECK(std::abs(quad::integrate_upper(f, 0.0, opt).value - 1.0) < 1e-5);
    }
    const auto p = model(1.5, 0.7, 1);
    auto f = [&](double r) { return 2.0 * kernel_subordination(p, 1.0, r); };
    quad::Options opt;
    opt.epsrel = 1e-8;
    CHECK(std::abs(quad::integrate_upper(f, 0.0, opt).value - 1.0) < 1e-5);
    const auto q = model(2.0, 0.6, 2);
    auto g = [&](double r) { return 2.0 * pi * r * kernel_subordination(q, 1.0, r); };
    CHECK(std::abs(quad::integrate_upper(g, 0.0, opt).value - 1.0) < 1e-5);
}

TEST_CASE("self-similarity") {
    const auto p = model(2.0, 0.5, 1);
    const double g1 = kernel_subordination(p, 1.0, 0.0);
    for (double t : {0.5, 2.0}) CHECK(rel(kernel_subordination(p, t, 0.0) * std::pow(t, 0.25), g1) < 1e-8);
    for (auto [a, b, d] : {std::tuple{1.5, 0.7, 1}, {2.0, 0.3, 2}}) {
        const auto q = model(a, b, d);
        for (double t : {0.3, 4.0}) {
            for (double x : {0.2, 1.0, 2.5}) {
                const double lhs = kernel_subordination(q, t, x);
                const double rhs = std::pow(t, -b * d / a) * kernel_subordination(q, 1.0, std::pow(t, -b / a) * x);
                CAPTURE(a);
                CAPTURE(t);
                CAPTURE(x);
                CHECK(rel(lhs, rhs) < 1e-5);
            }
        }
    }
}

TEST_CASE("dual-path agreement at 20 radii") {
    const auto p = model(1.5, 0.7, 1);
    const auto radii = geometric_radii(0.02, 8.0, 20, false);
    for (double r : radii) {
        const double s = kernel_subordination(p, 1.0, r);
        CAPTURE(r);
        CHECK(std::abs(kernel_fourier(p, 1.0, r) - s) / s < 1e-4);
    }
}

TEST_CASE("profile: non-negative, non-increasing, interpolates, exports") {
    const auto p = model(1.5, 0.7, 1);
    auto prof = build_profile(p, 1.0, Method::Subordination, geometric_radii(1e-2, 10.0, 120, true), 2);
    REQUIRE(prof.radii.size() == 121);
    CHECK(prof.origin_defined);
    for (std::size_t i = 0; i < prof.values.size(); ++i) {
        CHECK(prof.values[i] >= 0.0);
        if (i) CHECK(prof.values[i] <= prof.values[i - 1]);
    }
    for (double r : {0.0137, 0.3, 1.7, 6.1}) {
        CAPTURE(r);
        CHECK(rel(prof.interpolate(r), kernel_subordination(p, 1.0, r)) < 1e-5);
    }
    CHECK(std::isfinite(prof.c_star));
    CHECK_THROWS_AS(prof.interpolate(20.0), DomainError);

    const auto dir = std::filesystem::temp_directory_path() / "tfshe_profile_test";
    std::filesystem::create_directories(dir);
    prof.write_csv(dir / "g.csv");
    prof.write_json(dir / "g.json");
    std::ifstream csv(dir / "g.csv");
    std::string line;
    std::getline(csv, line);
    CHECK(line == "r,G");
    std::ifstream js(dir / "g.json");
    const auto j = nlohmann::json::parse(js);
    CHECK(j["method"] == "subordination");
    CHECK(j["alpha"] == 1.5);
    CHECK(j.contains("c_star"));

    auto q = build_profile(model(1.2, 0.6, 2), 1.0, Method::Fourier, {0.0, 0.5, 1.0, 2.0}, 1);
    CHECK_FALSE(q.origin_defined);
    CHECK(q.radii.size() == 3);
}

TEST_CASE("L2 norm: Gaussian value, power law, constant, sandwich") {
    const auto g = model(2.0, 1.0, 1);
    const auto l = l2_norm(g, 1.0);
    CHECK(rel(l.direct, 1.0 / std::sqrt(8.0 * pi)) < 1e-6);
    CHECK(rel(l.via_constant, 1.0 / std::sqrt(8.0 * pi)) < 1e-6);

    for (auto [a, b, d] : {std::tuple{2.0, 0.5, 1}, {1.5, 0.7, 1}, {1.2, 0.9, 2}}) {
        const auto p = model(a, b, d);
        std::vector<double> lt, ly;
        for (int i = 0; i <= 8; ++i) {
            const double t = 0.1 * std::pow(100.0, i / 8.0);
            const auto v = l2_norm(p, t);
            CHECK(rel(v.direct, v.via_constant) < 1e-6);
            lt.push_back(std::log(t));
            ly.push_back(std::log(v.direct));
        }
        CHECK(std::abs(slope(lt, ly) + b * d / a) < 1e-3);
        const auto sw = beta_sandwich(b, d / a);
        const double pref = std::pow(2.0 * pi, -d) * specfun::sphere_area(d) / a;
        CHECK(c_star(p) > pref * sw.lower);
        CHECK(c_star(p) < pref * sw.upper);
    }
    CHECK_THROWS_AS(l2_norm(model(0.4, 0.5, 1), 1.0), DivergenceError);
}

TEST_CASE("square moment of the Mittag-Leffler function") {
    // beta = 1: int z^{a-1} e^{-2z} dz = Gamma(a) 2^{-a}
    for (double a : {0.3, 0.5, 1.0, 1.7}) CHECK(rel(ml_square_moment(1.0, a), std::tgamma(a) * std::pow(2.0, -a)) < 1e-9);
    for (double b : {0.2, 0.5, 0.8}) {
        for (double a : {0.25, 0.5, 1.0, 1.5}) {
            const auto sw = beta_sandwich(b, a);
            const double v = ml_square_moment(b, a);
            CHECK(sw.lower < v);
            CHECK(v < sw.upper);
        }
    }
    CHECK_THROWS_AS(ml_square_moment(0.5, 2.0), DivergenceError);
}

TEST_CASE("Riesz-weighted L2: power law, constant, limit gamma -> d") {
    const auto p = model(2.0, 0.5, 1);
    for (double gamma : {0.3, 0.5, 0.9}) {
        std::vector<double> lt, ly;
        for (int i = 0; i <= 6; ++i) {
            const double t = 0.1 * std::pow(10.0, i / 6.0);
            const auto v = riesz_weighted_l2(p, t, gamma);
            CHECK(rel(v.direct, v.via_constant) < 1e-6);
            lt.push_back(std::log(t));
            ly.push_back(std::log(v.direct));
        }
        CHECK(std::abs(slope(lt, ly) + 0.5 * gamma / 2.0) < 1e-3);
        const auto sw = beta_sandwich(0.5, gamma / 2.0);
        const double pref = specfun::sphere_area(1) / 2.0;
        CHECK(c_star_gamma(p, gamma) > pref * sw.lower);
        CHECK(c_star_gamma(p, gamma) < pref * sw.upper);
    }
    for (double t : {0.5, 2.0}) CHECK(rel(riesz_weighted_l2(p, t, 1.0).direct, 2.0 * pi * l2_norm(p, t).direct) < 1e-8);
    CHECK_THROWS_AS(riesz_weighted_l2(p, 1.0, 4.0), DivergenceError);
}

TEST_CASE("pointwise bounds report") {
    const std::vector<double> times{0.5, 1.0, 2.0, 4.0};
    const std::vector<double> ys{0.05, 0.3, 1.0, 2.0, 4.0};
    auto rep = pointwise_bounds_check(model(2.0, 0.5, 1), times, ys);
    CHECK(rep.c1 > 0.0);
    CHECK(rep.c1 <= rep.c2);
    CHECK(rep.stable);
    CHECK(rep.pass);
    CHECK(rep.ratio_at_crossover >= rep.c1);
    CHECK(rep.ratio_at_crossover <= rep.c2);

    auto r2 = pointwise_bounds_check(model(1.5, 0.7, 1), {1.0, 2.0}, ys);
    CHECK(r2.upper_checked);
    CHECK(r2.pass);

    auto skip = pointwise_bounds_check(model(1.2, 0.5, 2), {1.0, 2.0}, {0.5, 2.0});
    CHECK_FALSE(skip.upper_checked);
    CHECK(skip.note.find("skipped") != std::string::npos);
    CHECK(skip.c1 > 0.0);
}

TEST_CASE("temporal increment: vanishing, monotone, power law") {
    auto p = model(2.0, 0.5, 1);
    p.gamma = 0.5;
    std::vector<double> hs;
    for (int k = 3; k <= 10; ++k) hs.push_back(std::ldexp(1.0, -k));
    auto with_tiny = hs;
    with_tiny.push_back(std::ldexp(1.0, -20));
    auto v = temporal_increments(p, 1.0, with_tiny);
    const double tiny = v.back();
    v.pop_back();
    std::vector<double> lh, lv;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        CHECK(v[i] > 0.0);
        if (i) CHECK(v[i] < v[i - 1]);
        lh.push_back(std::log(hs[i]));
        lv.push_back(std::log(v[i]));
    }
    CHECK(std::abs(slope(lh, lv) - (1.0 - 0.5 * 0.5 / 2.0)) < 0.05);
    CHECK(tiny < 1e-5);
    CHECK(tiny < v.back());
    CHECK(rel(temporal_increment(p, 1.0, hs[2]), v[2]) < 1e-6);

    // the bound c h^{1 - beta gamma / alpha} with one fitted constant
    double c = 0.0;
    for (std::size_t i = 0; i < hs.size(); ++i) c = std::max(c, v[i] / std::pow(hs[i], 0.875));
    for (std::size_t i = 0; i < hs.size(); ++i) CHECK(v[i] <= c * std::pow(hs[i], 0.875) * (1 + 1e-12));

    auto bad = model(2.0, 0.5, 1);
    bad.gamma = 4.5;
    CHECK_THROWS_AS(temporal_increment(bad, 1.0, 0.1), DivergenceError);
}

TEST_CASE("covariance double integral") {
    auto p = model(2.0, 0.5, 1);
    p.gamma = 0.5;
    const double c = specfun::riesz_constant(1, 0.5);
    CHECK(rel(covariance_double_integral(p, 1.0, 0.0), c / (2.0 * pi) * riesz_weighted_l2(p, 1.0).direct) < 1e-8);
    for (double sep : {0.0, 0.7, 2.0}) {
        CAPTURE(sep);
        CHECK(rel(covariance_double_integral(p, 1.0, sep), gaussian_covariance_oracle(0.5, 1.0, 0.5, 1.0, sep)) < 1e-6);
    }
    double prev = covariance_double_integral(p, 1.0, 0.0);
    for (double sep : {1.0, 2.0}) {
        const double v = covariance_double_integral(p, 1.0, sep);
        CHECK(v < prev);
        prev = v;
    }
    std::vector<double> lt, ly;
    for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        lt.push_back(std::log(t));
        ly.push_back(std::log(covariance_double_integral(p, t, 0.0)));
    }
    CHECK(std::abs(slope(lt, ly) + 0.5 * 0.5 / 2.0) < 0.02);
    // uniform in separation: sup over separations is the value at 0
    for (double t : {0.5, 2.0})
        for (double sep : {0.3, 3.0}) CHECK(covariance_double_integral(p, t, sep) <= covariance_double_integral(p, t, 0.0));
}

TEST_CASE("smoothed initial data and decay floor") {
    const auto p = model(2.0, 0.5, 1);
    for (double t : {0.1, 1.0, 10.0})
        for (double x : {-3.0, 0.0, 5.0}) CHECK(smoothed_initial(p, InitialData::constant(1.0), t, x) == 1.0);

    const auto u0 = InitialData::indicator(-1.0, 1.0);
    // step data against the explicit convolution with the kernel
    auto direct = [&](double t, double x) {
        auto f = [&](double y) { return kernel_subordination(p, t, std::abs(x - y)); };
        const std::array<double, 3> pts{-1.0, std::clamp(x, -1.0, 1.0), 1.0};
        quad::Options opt;
        opt.epsrel = 1e-8;
        return quad::integrate_points(f, pts, opt).value;
    };
    for (double t : {0.2, 2.0}) {
        for (double x : {0.0, 0.5, 2.0}) {
            CAPTURE(t);
            CAPTURE(x);
            CHECK(rel(smoothed_initial(p, u0, t, x), direct(t, x)) < 1e-6);
        }
    }
    const auto fn = InitialData::callable([](double y) { return 1.0; }, -1.0, 1.0, 1.0);
    CHECK(rel(smoothed_initial(p, fn, 1.0, 0.3), smoothed_initial(p, u0, 1.0, 0.3)) < 1e-6);

    const auto fl = build_decay_floor(p, u0);
    CHECK(fl.t0 == 0.125);
    CHECK(fl.kappa == 1.0);
    CHECK(fl.c2 > 0.0);
    std::vector<double> lt, ly;
    for (double t = 1.0; t <= 100.0; t *= 1.5) {
        lt.push_back(std::log(t));
        ly.push_back(std::log(fl(t)));
        CHECK(std::log(fl(t)) >= -(fl.kappa * fl.beta + 1.0) * std::log(t) + std::log(fl(1.0)) - 1e-12);
    }
    CHECK(slope(lt, ly) >= -2.0 * 0.5 / 2.0 - 0.1);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const double t = 1e-2 * std::pow(1e4, unif(rng));
        const double s = t * unif(rng);
        const double x = (2.0 * unif(rng) - 1.0) * std::pow(t, 0.25);
        CAPTURE(t);
        CAPTURE(s);
        CAPTURE(x);
        CHECK(fl(t) <= smoothed_initial(p, u0, fl.t0 + s, x));
    }
    const auto flat = build_decay_floor(p, InitialData::constant(2.0));
    CHECK(flat.kappa == 0.0);
    CHECK(flat(50.0) == 2.0);
}
