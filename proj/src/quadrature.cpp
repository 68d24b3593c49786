#include "tfshe/quadrature.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gsl/gsl_sf_bessel.h>
#include <gsl/gsl_sum.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

namespace tfshe::quad {
namespace detail {
namespace {

void silence_gsl() {
    static std::once_flag once;
    std::call_once(once, [] { gsl_set_error_handler_off(); });
}

struct Workspace {
    explicit Workspace(std::size_t n) : n(n), w(gsl_integration_workspace_alloc(n)) {}
    ~Workspace() { gsl_integration_workspace_free(w); }
    Workspace(const Workspace&) = delete;
    Workspace& operator=(const Workspace&) = delete;
    std::size_t n;
    gsl_integration_workspace* w;
};

// One workspace per thread; integrands may recurse into further integrals, so
// workspaces are handed out as a stack.
class WorkspacePool {
public:
    gsl_integration_workspace* acquire(std::size_t n) {
        if (depth_ == stack_.size()) stack_.push_back(std::make_unique<Workspace>(n));
        auto& slot = stack_[depth_];
        if (slot->n < n) slot = std::make_unique<Workspace>(n);
        ++depth_;
        return slot->w;
    }
    void release() { --depth_; }

private:
    std::vector<std::unique_ptr<Workspace>> stack_;
    std::size_t depth_ = 0;
};

thread_local WorkspacePool pool;

struct Lease {
    explicit Lease(std::size_t n) : w(pool.acquire(n)) {}
    ~Lease() { pool.release(); }
    gsl_integration_workspace* w;
};

double trampoline(double x, void* p) {
    auto* cb = static_cast<Callback*>(p);
    if (cb->error) return 0.0;
    try {
        return cb->fn(x, cb->data);
    } catch (...) {
        cb->error = std::current_exception();
        return 0.0;
    }
}

Result finish(Callback& cb, int status, double value, double abserr, const Options& opt,
              const char* who) {
    if (cb.error) std::rethrow_exception(cb.error);
    if (!std::isfinite(value)) throw QuadratureError(std::string(who) + ": non-finite result", value, abserr);
    if (status != GSL_SUCCESS) {
        const double target = std::max(opt.epsabs, opt.epsrel * std::abs(value));
        if (!(abserr <= opt.slack * target) && abserr > 1e-300) {
            throw QuadratureError(std::string(who) + ": " + gsl_strerror(status), value, abserr);
        }
    }
    return {value, abserr};
}

} // namespace

Result qags(Callback& cb, double a, double b, const Options& opt) {
    silence_gsl();
    if (a == b) return {};
    Lease lease(opt.limit);
    gsl_function F{&trampoline, &cb};
    double v = 0, e = 0;
    int st = gsl_integration_qags(&F, a, b, opt.epsabs, opt.epsrel, opt.limit, lease.w, &v, &e);
    return finish(cb, st, v, e, opt, "qags");
}

Result qag(Callback& cb, double a, double b, const Options& opt) {
    silence_gsl();
    if (a == b) return {};
    Lease lease(opt.limit);
    gsl_function F{&trampoline, &cb};
    double v = 0, e = 0;
    int st = gsl_integration_qag(&F, a, b, opt.epsabs, opt.epsrel, opt.limit, GSL_INTEG_GAUSS41,
                                 lease.w, &v, &e);
    return finish(cb, st, v, e, opt, "qag");
}

Result pieces(Callback& cb, std::span<const double> pts, const Options& opt) {
    silence_gsl();
    gsl_function F{&trampoline, &cb};
    double scale = 0.0;
    std::vector<Result> coarse(pts.size());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!(pts[i + 1] > pts[i])) continue;
        double v = 0, e = 0, ra = 0, rasc = 0;
        gsl_integration_qk41(&F, pts[i], pts[i + 1], &v, &e, &ra, &rasc);
        coarse[i] = {v, e};
        scale += std::abs(v);
    }
    if (cb.error) std::rethrow_exception(cb.error);
    Options local = opt;
    local.epsabs = std::max(opt.epsabs, 1e-3 * opt.epsrel * scale);
    Result total;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (!(pts[i + 1] > pts[i])) continue;
        // keep the coarse rule where its own error estimate is already well inside tolerance
        const double tol = std::max(local.epsabs, opt.epsrel * std::abs(coarse[i].value));
        const Result r = coarse[i].abserr <= 0.1 * tol ? coarse[i] : qag(cb, pts[i], pts[i + 1], local);
        total.value += r.value;
        total.abserr += r.abserr;
    }
    return total;
}

Result qagiu(Callback& cb, double a, const Options& opt) {
    silence_gsl();
    Lease lease(opt.limit);
    gsl_function F{&trampoline, &cb};
    double v = 0, e = 0;
    int st = gsl_integration_qagiu(&F, a, opt.epsabs, opt.epsrel, opt.limit, lease.w, &v, &e);
    return finish(cb, st, v, e, opt, "qagiu");
}

Result qagil(Callback& cb, double b, const Options& opt) {
    silence_gsl();
    Lease lease(opt.limit);
    gsl_function F{&trampoline, &cb};
    double v = 0, e = 0;
    int st = gsl_integration_qagil(&F, b, opt.epsabs, opt.epsrel, opt.limit, lease.w, &v, &e);
    return finish(cb, st, v, e, opt, "qagil");
}

Result qagp(Callback& cb, std::span<const double> pts, const Options& opt) {
    silence_gsl();
    std::vector<double> p;
    p.reserve(pts.size());
    for (double x : pts) {
        if (p.empty() || x > p.back()) p.push_back(x);
    }
    if (p.size() < 2) return {};
    Lease lease(std::max(opt.limit, 2 * p.size()));
    gsl_function F{&trampoline, &cb};
    double v = 0, e = 0;
    int st = gsl_integration_qagp(&F, p.data(), p.size(), opt.epsabs, opt.epsrel, opt.limit, lease.w,
                                  &v, &e);
    return finish(cb, st, v, e, opt, "qagp");
}

namespace {

double weight(Kernel kind, double nu, double x) {
    switch (kind) {
    case Kernel::Cos: return std::cos(x);
    case Kernel::Sin: return std::sin(x);
    case Kernel::Bessel: return gsl_sf_bessel_Jnu(nu, x);
    }
    return 0.0;
}

// m-th positive zero (m >= 0) of the weight.
double zero(Kernel kind, double nu, std::size_t m) {
    using std::numbers::pi;
    switch (kind) {
    case Kernel::Cos: return (m + 0.5) * pi;
    case Kernel::Sin: return (m + 1.0) * pi;
    case Kernel::Bessel: return gsl_sf_bessel_zero_Jnu(nu, static_cast<unsigned>(m + 1));
    }
    return 0.0;
}

} // namespace

Result oscillatory(Callback& cb, double r, const OscillatorySpec& spec, const Options& opt) {
    if (!(r > 0.0)) throw DomainError("integrate_oscillatory: r > 0 required");
    auto g = [&](double k) { return cb.fn(k, cb.data) * weight(spec.kind, spec.nu, k * r); };
    Options panel_opt = opt;
    panel_opt.epsrel = std::min(opt.epsrel, 1e-11);

    // Head: direct panel sum until the first zero past a few decay scales.
    const double head_end = 4.0 * spec.scale;
    double sum = 0.0, err = 0.0, a = 0.0;
    std::size_t m = 0;
    constexpr std::size_t max_head = 200000;
    for (;; ++m) {
        const double b = zero(spec.kind, spec.nu, m) / r;
        Result p = integrate(g, a, b, panel_opt);
        sum += p.value;
        err += p.abserr;
        a = b;
        if (b >= head_end) break;
        if (m > max_head) throw QuadratureError("integrate_oscillatory: too many head panels", sum, err);
    }
    // Tail: Levin-accelerated sum of the remaining half-period panels.
    std::vector<double> terms;
    terms.reserve(spec.panels);
    for (std::size_t j = 1; j <= spec.panels; ++j) {
        const double b = zero(spec.kind, spec.nu, m + j) / r;
        Result p = integrate(g, a, b, panel_opt);
        terms.push_back(p.value);
        err += p.abserr;
        a = b;
    }
    Result tail = levin_sum(terms);
    Result out{sum + tail.value, err + tail.abserr};
    if (cb.error) std::rethrow_exception(cb.error);
    const double target = std::max(opt.epsabs, opt.epsrel * std::abs(out.value));
    if (!std::isfinite(out.value) || out.abserr > opt.slack * target) {
        throw QuadratureError("integrate_oscillatory: extrapolation did not converge", out.value,
                              out.abserr);
    }
    return out;
}

} // namespace detail

Result levin_sum(std::span<const double> terms) {
    detail::silence_gsl();
    if (terms.empty()) return {};
    if (terms.size() < 3) {
        double s = 0;
        for (double t : terms) s += t;
        return {s, std::abs(terms.back())};
    }
    // All-zero tails (integrand already underflowed) break the transform.
    double partial = 0;
    for (double t : terms) partial += t;
    if (std::abs(terms.back()) <= 1e-16 * std::abs(partial) || terms.back() == 0.0) {
        return {partial, std::abs(terms.back())};
    }
    gsl_sum_levin_u_workspace* w = gsl_sum_levin_u_alloc(terms.size());
    double sum = 0, abserr = 0;
    int st = gsl_sum_levin_u_accel(terms.data(), terms.size(), w, &sum, &abserr);
    gsl_sum_levin_u_free(w);
    if (st != GSL_SUCCESS || !std::isfinite(sum)) {
        double s = 0;
        for (double t : terms) s += t;
        return {s, std::abs(terms.back())};
    }
    return {sum, abserr};
}

} // namespace tfshe::quad
