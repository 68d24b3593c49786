#include "tfshe/kernel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <thread>

#include "tfshe/errors.hpp"
#include "tfshe/quadrature.hpp"
#include "tfshe/specfun.hpp"

namespace tfshe::kernel {

using std::numbers::pi;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("kernel: t > 0 required");
}

// int_R h(v) dv split at the given points.
template <class F>
double integrate_line(F&& h, double a, double b, double epsrel) {
    quad::Options opt;
    opt.epsrel = epsrel;
    if (a > b) std::swap(a, b);
    double s = quad::integrate_lower(h, a, opt).value + quad::integrate_upper(h, b, opt).value;
    if (b > a) s += quad::integrate(h, a, b, opt).value;
    return s;
}

double symbol_scale(const ModelParams& p, double t) {
    const double tb = p.frac.classical ? t : std::pow(t, p.beta());
    return std::pow(p.nu * tb, -1.0 / p.alpha());
}

} // namespace

double symbol(const ModelParams& p, double t, double xi) {
    const double x = p.nu * std::pow(std::abs(xi), p.alpha());
    if (p.frac.classical) return std::exp(-x * t);
    return specfun::ml_neg(p.beta(), x * std::pow(t, p.beta()));
}

double kernel_subordination(const ModelParams& p, double t, double r) {
    check_time(t);
    if (!(r >= 0.0)) throw DomainError("kernel: r >= 0 required");
    const double a = p.alpha(), b = p.beta();
    if (p.frac.classical) return specfun::stable_density(a, p.nu, p.d, t, r);
    if (r == 0.0 && p.d >= a) throw DivergenceError("G_t(0) is infinite for d >= alpha");
    const double lt = std::log(t);
    const double lp0 = r == 0.0 ? std::log(specfun::stable_density(a, p.nu, p.d, 1.0, 0.0)) : 0.0;
    // u = e^v, s = (t/u)^beta
    auto h = [&](double v) {
        const double u = std::exp(v);
        if (u == 0.0 || std::isinf(u)) return 0.0;
        const double g = specfun::subordinator_density(b, u);
        if (g == 0.0) return 0.0;
        if (r == 0.0) {
            // p(s, 0) = p(1, 0) s^{-d/alpha}, kept in logs for extreme s
            return std::exp(lp0 - p.d / a * b * (lt - v) + std::log(g) + v);
        }
        const double s = std::exp(b * (lt - v));
        if (s == 0.0 || std::isinf(s)) return 0.0;
        const double pv = specfun::stable_density(a, p.nu, p.d, s, r);
        return pv * g * u;
    };
    double vr = 0.0;
    if (r > 0.0) {
        const double s_r = std::pow(r, a) / p.nu;
        vr = lt - std::log(s_r) / b;
    }
    return integrate_line(h, std::min(0.0, vr), std::max(0.0, vr), 1e-10);
}

double kernel_fourier(const ModelParams& p, double t, double r) {
    check_time(t);
    if (!(r >= 0.0)) throw DomainError("kernel: r >= 0 required");
    if (r == 0.0 && p.d >= p.alpha()) throw DivergenceError("G_t(0) is infinite for d >= alpha");
    auto f = [&](double k) { return symbol(p, t, k); };
    quad::Options opt;
    opt.epsrel = 1e-10;
    return quad::radial_fourier_inverse(f, p.d, r, symbol_scale(p, t), opt).value;
}

double kernel_at_origin(const ModelParams& p, double t) {
    check_time(t);
    const double a = p.alpha(), b = p.beta();
    const int d = p.d;
    if (d >= a) throw DivergenceError("G_t(0) is infinite for d >= alpha");
    const double p0 = std::pow(2.0 * pi, -d) * specfun::sphere_area(d) * std::tgamma(d / a) / a;
    const double moment = std::tgamma(1.0 - d / a) / std::tgamma(1.0 - b * d / a);
    return p0 * std::pow(p.nu, -d / a) * std::pow(t, -b * d / a) * moment;
}

std::string to_string(Method m) { return m == Method::Subordination ? "subordination" : "fourier"; }

// ---------------------------------------------------------------------------
// Profiles

std::vector<double> geometric_radii(double r_min, double r_max, std::size_t n, bool include_zero) {
    if (!(r_min > 0.0 && r_max > r_min) || n < 2) throw DomainError("geometric_radii: 0 < r_min < r_max, n >= 2");
    std::vector<double> r;
    if (include_zero) r.push_back(0.0);
    for (std::size_t i = 0; i < n; ++i) r.push_back(r_min * std::pow(r_max / r_min, double(i) / (n - 1)));
    return r;
}

void KernelProfile::finalize() {
    log_scale_ = std::all_of(values.begin(), values.end(), [](double v) { return v > 0.0; });
    std::vector<double> x, y;
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] <= 0.0) continue;
        x.push_back(std::log(radii[i]));
        y.push_back(log_scale_ ? std::log(values[i]) : values[i]);
    }
    if (x.size() >= 3) spline_ = MonotoneSpline(x, y);
}

double KernelProfile::interpolate(double r) const {
    if (spline_.empty()) throw DomainError("KernelProfile: not finalized");
    auto from = [&](double v) { return log_scale_ ? std::exp(v) : v; };
    const double r1 = std::exp(spline_.x_min());
    if (r < r1 && !radii.empty() && radii.front() == 0.0 && r >= 0.0) {
        // linear between the origin node and the first positive node
        const double g1 = from(spline_(spline_.x_min()));
        return values.front() + (g1 - values.front()) * r / r1;
    }
    if (!(r > 0.0) || std::log(r) < spline_.x_min() || std::log(r) > spline_.x_max())
        throw DomainError("KernelProfile: radius outside tabulated range");
    return from(spline_(std::log(r)));
}

nlohmann::json KernelProfile::header() const {
    nlohmann::json j;
    j["alpha"] = params.alpha();
    j["beta"] = params.beta();
    j["classical_limit"] = params.frac.classical;
    j["nu"] = params.nu;
    j["d"] = params.d;
    j["gamma"] = params.gamma ? nlohmann::json(*params.gamma) : nlohmann::json(nullptr);
    j["t"] = t;
    j["method"] = to_string(method);
    j["nodes"] = radii.size();
    j["origin_defined"] = origin_defined;
    auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
    j["c_star"] = num(c_star);
    j["c_star_gamma"] = num(c_star_gamma);
    j["riesz_constant"] = num(riesz_constant);
    j["fourier_convention"] = "forward exp(-i xi.x), inverse (2 pi)^{-d}";
    return j;
}

void KernelProfile::write_csv(const std::filesystem::path& path) const {
    std::ofstream os(path);
    if (!os) throw IOError("cannot write " + path.string());
    os.precision(17);
    os << "r,G\n";
    for (std::size_t i = 0; i < radii.size(); ++i) os << radii[i] << ',' << values[i] << '\n';
}

void KernelProfile::write_json(const std::filesystem::path& path) const {
    std::ofstream os(path);
    if (!os) throw IOError("cannot write " + path.string());
    os << header().dump(2) << '\n';
}

KernelProfile build_profile(const ModelParams& p, double t, Method m, std::vector<double> radii,
                            unsigned threads) {
    check_time(t);
    std::sort(radii.begin(), radii.end());
    KernelProfile prof;
    prof.params = p;
    prof.t = t;
    prof.method = m;
    prof.origin_defined = p.d < p.alpha();
    if (!prof.origin_defined) radii.erase(std::remove(radii.begin(), radii.end(), 0.0), radii.end());
    prof.radii = radii;
    prof.values.assign(radii.size(), 0.0);
    prof.c_star = p.d < 2.0 * p.alpha() ? c_star(p) : kNaN;
    if (p.gamma && *p.gamma > 0.0 && *p.gamma < p.d) {
        prof.c_star_gamma = c_star_gamma(p, *p.gamma);
        prof.riesz_constant = specfun::riesz_constant(p.d, *p.gamma);
    } else {
        prof.c_star_gamma = kNaN;
        prof.riesz_constant = kNaN;
    }

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(radii.size()));
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(threads);
    auto work = [&](unsigned id) {
        try {
            for (std::size_t i; (i = next++) < radii.size();) {
                prof.values[i] = m == Method::Subordination ? kernel_subordination(p, t, radii[i])
                                                            : kernel_fourier(p, t, radii[i]);
            }
        } catch (...) {
            errors[id] = std::current_exception();
        }
    };
    if (threads <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work, k);
        for (auto& th : pool) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    prof.finalize();
    return prof;
}

// ---------------------------------------------------------------------------
// L2-type constants

double ml_square_moment(double beta, double a) {
    if (!(a > 0.0 && a < 2.0)) throw DivergenceError("int z^{a-1} E_beta(-z)^2 dz requires 0 < a < 2");
    auto h = [&](double v) {
        const double z = std::exp(v);
        if (z == 0.0 || std::isinf(z)) return 0.0;
        const double e = specfun::ml_neg(beta, z);
        if (e <= 0.0) return 0.0;
        return std::exp(a * v + 2.0 * std::log(e));
    };
    return integrate_line(h, 0.0, 0.0, 1e-11);
}

BetaSandwich beta_sandwich(double beta, double a) {
    const double B = std::tgamma(a) * std::tgamma(2.0 - a) / std::tgamma(2.0);
    const double lower = beta == 1.0 ? 0.0 : B * std::pow(std::tgamma(1.0 - beta), -a);
    return {lower, B * std::pow(std::tgamma(1.0 + beta), a)};
}

double c_star(const ModelParams& p) {
    const double a = p.alpha();
    const int d = p.d;
    if (!(d < 2.0 * a)) throw DivergenceError("int G_t^2 dx is infinite unless d < 2 alpha");
    return std::pow(p.nu, -d / a) * specfun::sphere_area(d) / (a * std::pow(2.0 * pi, d)) *
           ml_square_moment(p.beta(), d / a);
}

L2Norm l2_norm(const ModelParams& p, double t) {
    check_time(t);
    const double cs = c_star(p);
    const int d = p.d;
    auto f = [&](double k) {
        const double e = symbol(p, t, k);
        return std::pow(k, d - 1) * e * e;
    };
    quad::Options opt;
    opt.epsrel = 1e-11;
    const double sc = symbol_scale(p, t);
    const double I = quad::integrate(f, 0.0, sc, opt).value + quad::integrate_upper(f, sc, opt).value;
    const double direct = std::pow(2.0 * pi, -d) * specfun::sphere_area(d) * I;
    const double tb = p.frac.classical ? t : std::pow(t, p.beta());
    return {direct, cs * std::pow(tb, -double(d) / p.alpha()), cs};
}

double c_star_gamma(const ModelParams& p, double gamma) {
    const double a = p.alpha();
    if (!(gamma > 0.0)) throw DomainError("gamma > 0 required");
    if (!(gamma < 2.0 * a)) throw DivergenceError("Riesz-weighted L2 norm is infinite unless gamma < 2 alpha");
    return std::pow(p.nu, -gamma / a) * specfun::sphere_area(p.d) / a * ml_square_moment(p.beta(), gamma / a);
}

RieszL2 riesz_weighted_l2(const ModelParams& p, double t, double gamma) {
    check_time(t);
    const double cg = c_star_gamma(p, gamma);
    auto f = [&](double k) {
        const double e = symbol(p, t, k);
        return std::pow(k, gamma - 1.0) * e * e;
    };
    quad::Options opt;
    opt.epsrel = 1e-11;
    const double sc = symbol_scale(p, t);
    const double I = quad::integrate(f, 0.0, sc, opt).value + quad::integrate_upper(f, sc, opt).value;
    const double direct = specfun::sphere_area(p.d) * I;
    const double tb = p.frac.classical ? t : std::pow(t, p.beta());
    return {direct, cg * std::pow(tb, -gamma / p.alpha()), cg};
}

RieszL2 riesz_weighted_l2(const ModelParams& p, double t) {
    if (!p.gamma) throw DomainError("riesz_weighted_l2: model has no Riesz exponent");
    return riesz_weighted_l2(p, t, *p.gamma);
}

// ---------------------------------------------------------------------------
// Pointwise bounds

BoundsReport pointwise_bounds_check(const ModelParams& p, const std::vector<double>& times,
                                    const std::vector<double>& scaled_radii) {
    BoundsReport rep;
    rep.times = times;
    const double a = p.alpha(), b = p.frac.classical ? 1.0 : p.beta();
    const int d = p.d;
    rep.upper_checked = a > d;
    if (!rep.upper_checked) rep.note = "upper bound requires alpha > d; skipped";
    auto ratio = [&](double t, double y) {
        const double r = std::pow(t, b / a) * y;
        const double G = kernel_subordination(p, t, r);
        const double bound = std::min(std::pow(t, -b * d / a), std::pow(t, b) / std::pow(r, d + a));
        return G / bound;
    };
    for (double t : times) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (double y : scaled_radii) {
            if (!(y > 0.0)) continue;
            const double q = ratio(t, y);
            lo = std::min(lo, q);
            hi = std::max(hi, q);
        }
        rep.c1_by_t.push_back(lo);
        rep.c2_by_t.push_back(rep.upper_checked ? hi : kNaN);
    }
    rep.c1 = *std::min_element(rep.c1_by_t.begin(), rep.c1_by_t.end());
    rep.c2 = rep.upper_checked ? *std::max_element(rep.c2_by_t.begin(), rep.c2_by_t.end()) : kNaN;
    rep.ratio_at_crossover = ratio(times.front(), 1.0);
    double spread = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        spread = std::max(spread, std::abs(rep.c1_by_t[i] / rep.c1 - 1.0));
        if (rep.upper_checked) spread = std::max(spread, std::abs(rep.c2_by_t[i] / rep.c2 - 1.0));
    }
    rep.stable = spread < 1e-4;
    const bool crossover_ok = rep.ratio_at_crossover >= rep.c1 * (1 - 1e-9) &&
                              (!rep.upper_checked || rep.ratio_at_crossover <= rep.c2 * (1 + 1e-9));
    rep.pass = rep.c1 > 0.0 && (!rep.upper_checked || (std::isfinite(rep.c2) && rep.c1 <= rep.c2)) &&
               crossover_ok && rep.stable;
    return rep;
}

// ---------------------------------------------------------------------------
// Temporal increments

std::vector<double> temporal_increments(const ModelParams& p, double t, const std::vector<double>& hs) {
    check_time(t);
    const double a = p.alpha(), b = p.frac.classical ? 1.0 : p.beta();
    const double g = p.noise_exponent();
    const double bound = std::min(2.0, 1.0 / b) * a;
    if (!(g < bound)) throw DivergenceError("temporal increment requires gamma < min(2, 1/beta) alpha");
    const double ea = g / a;     // exponent of z in the inner integral
    const double eb = b * g / a; // singular exponent in the outer integral
    auto E = [&](double z) { return p.frac.classical ? std::exp(-z) : specfun::ml_neg(b, z); };
    // Phi(q) = int z^{ea-1} (E(-q z) - E(-z))^2 dz
    auto Phi = [&](double q) {
        auto h = [&](double v) {
            const double z = std::exp(v);
            if (z == 0.0 || std::isinf(z)) return 0.0;
            const double qz = q * z;
            const double diff = std::abs((std::isinf(qz) ? 0.0 : E(qz)) - E(z));
            if (diff == 0.0) return 0.0;
            return std::exp(ea * v + 2.0 * std::log(diff));
        };
        return integrate_line(h, -std::log(q), 0.0, 1e-9);
    };
    // outer integrand in w = log v: v^{1-eb} Phi((1 + 1/v)^beta)
    auto outer = [&](double w) {
        const double v = std::exp(w);
        if (v == 0.0) return 0.0;
        const double q = std::exp(b * std::log1p(1.0 / v));
        // E(-q z) no longer overlaps E(-z) once q is astronomically large
        if (q > 1e250) return std::exp((1.0 - eb) * w) * (p.frac.classical ? std::tgamma(ea) * std::pow(2.0, -ea)
                                                                         : ml_square_moment(b, ea));
        return std::exp((1.0 - eb) * w) * Phi(q);
    };
    const double pref = specfun::sphere_area(p.d) * std::pow(p.nu, -g / a) / a;

    std::vector<std::size_t> order(hs.size());
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (!(hs[i] > 0.0 && hs[i] < 1.0)) throw DomainError("temporal increment: h in (0, 1) required");
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return hs[i] > hs[j]; });
    std::vector<double> out(hs.size());
    quad::Options opt;
    opt.epsrel = 1e-8;
    double W = 0.0, J = 0.0;
    bool started = false;
    for (std::size_t i : order) {
        const double Wn = std::log(t / hs[i]);
        if (!started) {
            J = quad::integrate_lower(outer, std::min(Wn, 0.0), opt).value;
            if (Wn > 0.0) J += quad::integrate(outer, 0.0, Wn, opt).value;
            started = true;
            W = Wn;
        } else if (Wn > W) {
            J += quad::integrate(outer, W, Wn, opt).value;
            W = Wn;
        }
        out[i] = pref * std::pow(hs[i], 1.0 - eb) * J;
    }
    return out;
}

double temporal_increment(const ModelParams& p, double t, double h) { return temporal_increments(p, t, {h})[0]; }

// ---------------------------------------------------------------------------
// Riesz covariance

double covariance_double_integral(const ModelParams& p, double t, double sep) {
    check_time(t);
    if (!p.gamma) throw DomainError("covariance_double_integral: model has no Riesz exponent");
    const double g = *p.gamma;
    if (!(g > 0.0 && g < std::min(p.alpha(), double(p.d)))) throw DomainError("0 < γ < α∧d violated");
    if (!(sep >= 0.0)) throw DomainError("separation >= 0 required");
    const double c = specfun::riesz_constant(p.d, g);
    auto f = [&](double k) {
        const double e = symbol(p, t, k);
        return c * e * e * std::pow(k, g - p.d);
    };
    quad::Options opt;
    opt.epsrel = 1e-10;
    return quad::radial_fourier_inverse(f, p.d, sep, symbol_scale(p, t), opt).value;
}

} // namespace tfshe::kernel
