#include "tfshe/moments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include <gsl/gsl_sf_gamma.h>

#include "tfshe/errors.hpp"
#include "tfshe/fftconv.hpp"
#include "tfshe/kernel.hpp"
#include "tfshe/specfun.hpp"

namespace tfshe::moments {

using std::numbers::pi;

void VolterraProblem::validate() const {
    if (!(rho > 0.0 && rho <= 1.0)) throw DomainError("Volterra: rho in (0, 1] required");
    if (!(kappa >= 0.0)) throw DomainError("Volterra: kappa >= 0 required");
    if (!forcing && !(c >= 0.0)) throw DomainError("Volterra: c >= 0 required");
    if (!(T > 0.0) || !(dt > 0.0) || dt > T) throw DomainError("Volterra: 0 < dt <= T required");
}

double MomentCurve::at(double t) const {
    if (times.empty() || t < times.front() || t > times.back()) throw DomainError("MomentCurve: t outside grid");
    auto it = std::lower_bound(times.begin(), times.end(), t);
    const std::size_t j = static_cast<std::size_t>(it - times.begin());
    if (times[j] == t || j == 0) return values[j];
    const double w = (t - times[j - 1]) / (times[j] - times[j - 1]);
    return (1.0 - w) * values[j - 1] + w * values[j];
}

void MomentCurve::write_csv(const std::filesystem::path& path) const {
    std::ofstream os(path);
    if (!os) throw IOError("cannot write " + path.string());
    os.precision(17);
    const bool se = !stderrs.empty();
    os << "t,value,tag" << (se ? ",stderr" : "") << '\n';
    for (std::size_t i = 0; i < times.size(); ++i) {
        os << times[i] << ',' << values[i] << ',' << tag;
        if (se) os << ',' << stderrs[i];
        os << '\n';
    }
}

namespace {

// int_a^b tau^{rho-1} e^{-mu tau} dtau
double tilted_moment(double rho, double mu, double a, double b) {
    if (mu == 0.0) return (std::pow(b, rho) - std::pow(a, rho)) / rho;
    const double scale = std::tgamma(rho) * std::pow(mu, -rho);
    const double xa = mu * a, xb = mu * b;
    if (xa > rho + 1.0) return scale * (gsl_sf_gamma_inc_Q(rho, xa) - gsl_sf_gamma_inc_Q(rho, xb));
    return scale * (gsl_sf_gamma_inc_P(rho, xb) - gsl_sf_gamma_inc_P(rho, xa));
}

} // namespace

MomentCurve volterra_solve(const VolterraProblem& pb) {
    pb.validate();
    const std::size_t n = static_cast<std::size_t>(std::llround(pb.T / pb.dt));
    const double dt = pb.T / static_cast<double>(n);
    const double r = pb.rho;
    // f = e^{mu t} h with mu the growth rate of the constant-forcing solution; h solves
    // the same equation with kernel tau^{rho-1} e^{-mu tau} and forcing c(t) e^{-mu t}.
    const double mu = pb.kappa > 0.0 ? std::pow(pb.kappa * std::tgamma(r), 1.0 / r) : 0.0;
    std::vector<double> w(n);
    for (std::size_t j = 0; j < n; ++j) w[j] = pb.kappa * tilted_moment(r, mu, j * dt, (j + 1) * dt);
    const double pivot = 1.0 - w[0];
    if (!(pivot > 0.0)) throw InstabilityError("Volterra: first-panel weight >= 1; refine dt");
    if (mu * pb.T > 690.0) throw InstabilityError("Volterra: solution overflows before T");

    std::vector<double> h(n + 1, 0.0), hist(n + 1, 0.0), conv;
    auto step = [&](std::size_t k) {
        const double t = k * dt;
        h[k] = (pb.forcing_at(t) * std::exp(-mu * t) + hist[k]) / pivot;
        if (!std::isfinite(h[k])) throw InstabilityError("Volterra: non-finite value at t = " + std::to_string(t));
    };
    // Online history sums hist[k] = sum_{1 <= m < k} w[k-m] h[m] by divide and conquer:
    // the left half's contribution to the right half is one FFT convolution.
    constexpr std::size_t block = 64;
    auto solve = [&](auto&& self, std::size_t lo, std::size_t hi) -> void {
        if (hi - lo <= block) {
            for (std::size_t k = lo; k < hi; ++k) {
                double acc = 0.0;
                for (std::size_t m = lo; m < k; ++m) acc += w[k - m] * h[m];
                hist[k] += acc;
                step(k);
            }
            return;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        self(self, lo, mid);
        fft_convolve(std::span<const double>(h.data() + lo, mid - lo), std::span<const double>(w.data(), hi - lo), conv);
        for (std::size_t k = mid; k < hi; ++k) hist[k] += conv[k - lo];
        self(self, mid, hi);
    };
    solve(solve, 1, n + 1);
    h[0] = pb.forcing_at(0.0);
    MomentCurve out;
    out.tag = "volterra";
    out.times.resize(n + 1);
    out.values.resize(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        out.times[k] = k * dt;
        out.values[k] = h[k] * std::exp(mu * k * dt);
    }
    return out;
}

MomentCurve volterra_solve_richardson(const VolterraProblem& pb) {
    // Error model A dt + B dt^{1+rho}: eliminate both from solves at dt, dt/2, dt/4.
    const MomentCurve f1 = volterra_solve(pb);
    const std::size_t n = f1.times.size() - 1;
    VolterraProblem fine = pb;
    fine.dt = pb.T / (2.0 * n);
    const MomentCurve f2 = volterra_solve(fine);
    fine.dt = pb.T / (4.0 * n);
    const MomentCurve f4 = volterra_solve(fine);
    const double p = std::pow(2.0, 1.0 + pb.rho);
    MomentCurve out = f1;
    out.tag = "volterra_richardson";
    for (std::size_t k = 0; k <= n; ++k) {
        const double r1 = 2.0 * f2.values[2 * k] - f1.values[k];
        const double r2 = 2.0 * f4.values[4 * k] - f2.values[2 * k];
        out.values[k] = (p * r2 - r1) / (p - 1.0);
    }
    return out;
}

double volterra_closed_form_log(double rho, double kappa, double c, double t) {
    if (t == 0.0 || kappa == 0.0) return std::log(c);
    return std::log(c) + specfun::ml_log_pos(rho, kappa * std::tgamma(rho) * std::pow(t, rho));
}

double volterra_closed_form(double rho, double kappa, double c, double t) {
    return std::exp(volterra_closed_form_log(rho, kappa, c, t));
}

double flat_weight(const ModelParams& p) {
    if (p.white()) {
        std::string why;
        if (!white_noise_valid(p, &why)) throw DomainError(why);
        return kernel::c_star(p);
    }
    std::string why;
    if (!colored_noise_valid(p, &why)) throw DomainError(why);
    return kernel::covariance_double_integral(p, 1.0, 0.0);
}

namespace {

void require_pam(const ModelParams& p, double u0) {
    if (!p.sigma.is_linear()) throw DomainError("flat-data moment requires linear sigma");
    if (!(u0 > 0.0)) throw DomainError("flat-data moment requires u0 > 0");
}

FlatMoment flat_moment(const ModelParams& p, double u0, double T, std::optional<double> dt) {
    require_pam(p, u0);
    FlatMoment fm;
    fm.rho = p.rho();
    const double s = p.sigma.slope();
    fm.kappa = p.lambda * p.lambda * s * s * flat_weight(p);
    VolterraProblem pb;
    pb.rho = fm.rho;
    pb.kappa = fm.kappa;
    pb.c = u0 * u0;
    pb.T = T;
    pb.dt = dt ? *dt : T / 4096.0;
    fm.numeric = fm.kappa == 0.0 ? volterra_solve(pb) : volterra_solve_richardson(pb);
    fm.closed.tag = "closed_form";
    fm.closed.times = fm.numeric.times;
    fm.max_rel_err = 0.0;
    for (std::size_t k = 0; k < fm.closed.times.size(); ++k) {
        const double v = volterra_closed_form(fm.rho, fm.kappa, pb.c, fm.closed.times[k]);
        fm.closed.values.push_back(v);
        fm.max_rel_err = std::max(fm.max_rel_err, std::abs(fm.numeric.values[k] - v) / v);
    }
    return fm;
}

} // namespace

FlatMoment pam_second_moment_white(const ModelParams& p, double u0, double T, std::optional<double> dt) {
    if (!p.white()) throw DomainError("pam_second_moment_white: model has a Riesz exponent");
    return flat_moment(p, u0, T, dt);
}

FlatMoment pam_second_moment_colored(const ModelParams& p, double u0, double T, std::optional<double> dt) {
    if (p.white()) throw DomainError("pam_second_moment_colored: model has no Riesz exponent");
    return flat_moment(p, u0, T, dt);
}

double pam_log_moment(const ModelParams& p, double u0, double t) {
    require_pam(p, u0);
    const double s = p.sigma.slope();
    const double kappa = p.lambda * p.lambda * s * s * flat_weight(p);
    return volterra_closed_form_log(p.rho(), kappa, u0 * u0, t);
}

double chaos_constant(const ModelParams& p) {
    const int d = p.d;
    const double omega = std::pow(pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
    const double g = kernel::kernel_subordination(p, 1.0, 1.0);
    return g * g * omega * std::pow(2.0, -d) / p.rho();
}

ChaosBound chaos_lower_bound(const ModelParams& p, const kernel::DecayFloor& floor, double t,
                             std::optional<double> c1) {
    if (!(t > 0.0)) throw DomainError("chaos_lower_bound: t > 0 required");
    const double rho = p.rho();
    const double l = p.sigma.l_sigma();
    const double c = c1 ? *c1 : chaos_constant(p);
    const double g = floor(t);
    const double lg2 = 2.0 * std::log(g);
    const double b = p.lambda * p.lambda * l * l * c;
    if (b == 0.0) return {g * g, lg2, 1};
    const double lb = std::log(b), lt = std::log(t);
    // log-sum-exp with a running maximum
    double lmax = 0.0, acc = 1.0; // k = 0 term is 1
    std::size_t k = 1;
    constexpr std::size_t cap = 10000;
    double prev = 0.0;
    for (; k <= cap; ++k) {
        const double lk = k * lb + k * rho * (lt - std::log(double(k)));
        if (lk > lmax) {
            acc = acc * std::exp(lmax - lk) + 1.0;
            lmax = lk;
        } else {
            acc += std::exp(lk - lmax);
        }
        if (lk < prev && lk - (lmax + std::log(acc)) < std::log(1e-16)) break;
        prev = lk;
    }
    if (k > cap)
        throw InstabilityError("chaos_lower_bound: terms still significant at the cap k = " + std::to_string(cap));
    const double ls = lmax + std::log(acc) + lg2;
    return {std::exp(ls), ls, k};
}

double exp_series_log(double rho, double b) {
    double lmax = 0.0, acc = 1.0, prev = 0.0;
    const double lb = std::log(b);
    for (std::size_t j = 1; j < 1000000; ++j) {
        const double lj = j * (lb - rho * std::log(double(j)));
        if (lj > lmax) {
            acc = acc * std::exp(lmax - lj) + 1.0;
            lmax = lj;
        } else {
            acc += std::exp(lj - lmax);
        }
        if (lj < prev && lj - (lmax + std::log(acc)) < std::log(1e-17)) break;
        prev = lj;
    }
    return lmax + std::log(acc);
}

ExpLowerFit fit_exp_lower_bound(double rho, double b_max_factor) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("exp lower bound: 0 < rho < 1 required");
    ExpLowerFit fit;
    fit.rho = rho;
    fit.b_min = std::pow(std::numbers::e / rho, rho);
    fit.b_max = b_max_factor * fit.b_min;
    auto ratio = [&](double b) { return exp_series_log(rho, b) / std::pow(b, 1.0 / rho); };
    double c = std::numeric_limits<double>::infinity();
    const int coarse = 41;
    for (int i = 0; i < coarse; ++i) c = std::min(c, ratio(fit.b_min * std::pow(b_max_factor, double(i) / (coarse - 1))));
    // margin for the gaps between coarse nodes
    fit.c1 = 0.9 * c;
    fit.worst_margin = std::numeric_limits<double>::infinity();
    const int fine = 1001;
    for (int i = 0; i < fine; ++i) {
        const double b = fit.b_min * std::pow(b_max_factor, double(i) / (fine - 1));
        fit.worst_margin = std::min(fit.worst_margin, exp_series_log(rho, b) - fit.c1 * std::pow(b, 1.0 / rho));
    }
    fit.pass = fit.c1 > 0.0 && fit.worst_margin >= 0.0;
    return fit;
}

RenewalSandwich renewal_sandwich(const MomentCurve& f, double rho, double kappa) {
    RenewalSandwich s{};
    s.rate = std::pow(std::tgamma(rho) * kappa, 1.0 / rho);
    const std::size_t n = f.times.size();
    if (n < 4 || !(s.rate > 0.0)) throw UnderResolvedError("renewal_sandwich: need kappa > 0 and >= 4 points");
    // least squares of log f against rate t on the second half
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = n / 2; i < n; ++i, ++m) {
        const double x = s.rate * f.times[i], y = std::log(f.values[i]);
        sx += x, sy += y, sxx += x * x, sxy += x * y;
    }
    s.c3 = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    const double icpt = (sy - s.c3 * sx) / m;
    double res = 0.0;
    for (std::size_t i = n / 2; i < n; ++i) {
        const double e = std::log(f.values[i]) - icpt - s.c3 * s.rate * f.times[i];
        res += e * e;
    }
    s.fit_residual = std::sqrt(res / m);
    s.c_upper = 0.0;
    s.c_lower = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double q = f.values[i] * std::exp(-s.c3 * s.rate * f.times[i]);
        s.c_upper = std::max(s.c_upper, q);
        s.c_lower = std::min(s.c_lower, q);
    }
    s.pass = s.c3 > 0.0 && s.c_lower > 0.0 && std::isfinite(s.c_upper);
    return s;
}

double excitation_theoretical(const ModelParams& p) {
    const double a = p.alpha(), b = p.frac.classical ? 1.0 : p.beta();
    return 2.0 * a / (a - b * p.noise_exponent());
}

} // namespace tfshe::moments
