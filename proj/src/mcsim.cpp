#include "tfshe/mcsim.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "tfshe/errors.hpp"
#include "tfshe/kernel.hpp"
#include "tfshe/spectral.hpp"
#include "tfshe/stats.hpp"

namespace tfshe::mc {

using std::numbers::pi;
using cplx = std::complex<double>;

SpectralKernelCache::SpectralKernelCache(const ModelParams& p, const GridSpec& g, int max_lag, int steps_per_lag)
    : max_lag_(max_lag), spl_(steps_per_lag) {
    if (max_lag < 0 || steps_per_lag < 1) throw DomainError("SpectralKernelCache: bad lag range");
    RealFFT fft(g.nx, g.d);
    nk_ = fft.complex_size();
    const std::vector<double> k2 = fft.wavenumber_sq();
    // evaluate once per distinct |k|^2
    std::map<double, std::size_t> uniq;
    for (double v : k2) uniq.emplace(v, 0);
    std::vector<double> xi;
    for (auto& [v, idx] : uniq) {
        idx = xi.size();
        xi.push_back(2.0 * pi / g.L * std::sqrt(v));
    }
    std::vector<std::size_t> slot(nk_);
    for (std::size_t k = 0; k < nk_; ++k) slot[k] = uniq[k2[k]];
    data_.assign(static_cast<std::size_t>(max_lag + 1) * nk_, 1.0);
    std::vector<double> vals(xi.size());
    for (int l = 1; l <= max_lag; ++l) {
        const double t = g.dt() * l / spl_;
        for (std::size_t u = 0; u < xi.size(); ++u) vals[u] = kernel::symbol(p, t, xi[u]);
        double* r = data_.data() + static_cast<std::size_t>(l) * nk_;
        for (std::size_t k = 0; k < nk_; ++k) r[k] = vals[slot[k]];
    }
}

const double* FieldEnsemble::snapshot(std::size_t s, std::size_t r) const {
    return snapshots.data() + (s * static_cast<std::size_t>(replicas) + r) * cells();
}

const double* FieldEnsemble::probe(std::size_t r, std::size_t p) const {
    const std::size_t len = static_cast<std::size_t>(grid.nt) + 1;
    return probe_series.data() + (r * probe_cells.size() + p) * len;
}

std::size_t FieldEnsemble::aborted() const {
    return static_cast<std::size_t>(std::count_if(aborted_at.begin(), aborted_at.end(), [](int a) { return a >= 0; }));
}

namespace {

void check_setup(const ModelParams& p, const GridSpec& g, const InitialData& u0) {
    p.validate();
    g.validate();
    u0.validate();
    if (p.d != g.d) throw DomainError("grid dimension differs from model dimension");
    if (u0.kind() != InitialData::Kind::Constant && g.d != 1)
        throw DomainError("non-constant initial data is one-dimensional");
    if (u0.kind() != InitialData::Kind::Constant && (u0.support_lo() < -g.L / 2 || u0.support_hi() > g.L / 2))
        throw DomainError("initial data support must lie inside the torus [-L/2, L/2]");
}

// Cell averages of u0 (first axis carries x for d = 1).
std::vector<double> sample_initial(const GridSpec& g, const InitialData& u0) {
    std::vector<double> v(g.cells());
    const double h = g.dx();
    switch (u0.kind()) {
    case InitialData::Kind::Constant: std::fill(v.begin(), v.end(), u0.constant_value()); break;
    case InitialData::Kind::Step:
        for (int j = 0; j < g.nx; ++j) {
            const double lo = g.coord(j) - h / 2, hi = lo + h;
            double s = 0.0;
            for (const auto& pc : u0.pieces()) s += pc.value * std::max(0.0, std::min(hi, pc.b) - std::max(lo, pc.a));
            v[static_cast<std::size_t>(j)] = s / h;
        }
        break;
    case InitialData::Kind::Callable:
        for (int j = 0; j < g.nx; ++j) {
            double s = 0.0;
            for (int q = 0; q < 16; ++q) s += u0(g.coord(j) - h / 2 + (q + 0.5) * h / 16);
            v[static_cast<std::size_t>(j)] = s / 16;
        }
        break;
    }
    return v;
}

// Cell noise source for one replica, matching synthesize_* stream by stream.
class NoiseSource {
public:
    NoiseSource(const ModelParams& p, const GridSpec& g) : white_(g) {
        if (!p.white()) colored_.emplace(g, *p.gamma);
    }
    std::uint32_t tag() const { return colored_ ? 2u : 1u; }
    bool colored() const { return colored_.has_value(); }
    const ColoredNoise& colored_noise() const { return *colored_; }
    void draw(NormalStream& rng, std::span<double> out, AlignedBuffer<double>& work,
              AlignedBuffer<cplx>& spec) const {
        if (colored_) colored_->draw(rng, out, work, spec);
        else white_.draw(rng, out);
    }

private:
    WhiteNoise white_;
    std::optional<ColoredNoise> colored_;
};

std::string noise_label(const ModelParams& p) {
    if (p.white()) return "white";
    std::ostringstream os;
    os << "colored(" << *p.gamma << ")";
    return os.str();
}

struct Workspace {
    AlignedBuffer<double> u, s, xi, work;
    AlignedBuffer<cplx> spec, h;
    std::vector<cplx> hist;   // [m][k]
    std::vector<cplx> prefix; // [m][k], blocked variant only
    Workspace(std::size_t cells, std::size_t nk, int nt, bool blocked)
        : u(cells), s(cells), xi(cells), work(cells), spec(nk), h(nk),
          hist(static_cast<std::size_t>(nt) * nk),
          prefix(blocked ? (static_cast<std::size_t>(nt) + 1) * nk : 0) {}
};

inline void axpy(const double* g, const cplx* s, cplx* h, std::size_t nk) {
    auto* hd = reinterpret_cast<double*>(h);
    const auto* sd = reinterpret_cast<const double*>(s);
    for (std::size_t k = 0; k < nk; ++k) {
        hd[2 * k] += g[k] * sd[2 * k];
        hd[2 * k + 1] += g[k] * sd[2 * k + 1];
    }
}

struct Plan {
    const ModelParams& p;
    const GridSpec& g;
    const SimOptions& opt;
    RealFFT fft;
    SpectralKernelCache cache;
    NoiseSource noise;
    std::vector<double> u0;
    bool flat;
    std::vector<double> gu0; // [n][cell], non-constant data only
    std::vector<int> snap_of_step;

    Plan(const ModelParams& p_, const GridSpec& g_, const InitialData& init, const SimOptions& o)
        : p(p_), g(g_), opt(o), fft(g_.nx, g_.d),
          cache(p_, g_, o.blocked_history ? 2 * g_.nt + 1 : g_.nt, o.blocked_history ? 2 : 1),
          noise(p_, g_), u0(sample_initial(g_, init)), flat(init.kind() == InitialData::Kind::Constant),
          snap_of_step(static_cast<std::size_t>(g_.nt) + 1, -1) {
        if (!flat) smooth_initial();
    }

    const double* symbol(int lag) const { return cache.row(lag * cache.steps_per_lag()); }

    void smooth_initial() {
        const std::size_t n = fft.real_size(), nk = fft.complex_size();
        AlignedBuffer<double> r(n);
        AlignedBuffer<cplx> c0(nk), c(nk);
        std::copy(u0.begin(), u0.end(), r.data());
        fft.forward(r.data(), c0.data());
        gu0.resize((static_cast<std::size_t>(g.nt) + 1) * n);
        std::copy(u0.begin(), u0.end(), gu0.begin());
        for (int step = 1; step <= g.nt; ++step) {
            const double* G = symbol(step);
            for (std::size_t k = 0; k < nk; ++k) c[k] = G[k] * c0[k];
            fft.inverse(c.data(), r.data());
            for (std::size_t i = 0; i < n; ++i) gu0[static_cast<std::size_t>(step) * n + i] = r[i] / static_cast<double>(n);
        }
    }

    double initial_at(int step, std::size_t i) const {
        return flat ? u0[0] : gu0[static_cast<std::size_t>(step) * fft.real_size() + i];
    }
};

void record(FieldEnsemble& e, const Plan& plan, std::size_t r, int step, const double* u) {
    const std::size_t cells = e.cells();
    const std::size_t len = static_cast<std::size_t>(e.grid.nt) + 1;
    double ms = 0.0;
    for (std::size_t i = 0; i < cells; ++i) ms += u[i] * u[i];
    e.mean_square[r * len + static_cast<std::size_t>(step)] = ms / static_cast<double>(cells);
    for (std::size_t q = 0; q < e.probe_cells.size(); ++q)
        e.probe_series[(r * e.probe_cells.size() + q) * len + static_cast<std::size_t>(step)] = u[e.probe_cells[q]];
    const int s = plan.snap_of_step[static_cast<std::size_t>(step)];
    if (s >= 0) {
        double* dst = e.snapshots.data() + (static_cast<std::size_t>(s) * static_cast<std::size_t>(e.replicas) + r) * cells;
        std::copy(u, u + cells, dst);
    }
}

void record_nan(FieldEnsemble& e, const Plan& plan, std::size_t r, int step) {
    std::vector<double> nan(e.cells(), std::numeric_limits<double>::quiet_NaN());
    record(e, plan, r, step, nan.data());
}

void run_replica(FieldEnsemble& e, const Plan& plan, std::size_t r, Workspace& ws) {
    const GridSpec& g = plan.g;
    const std::size_t n_cells = plan.fft.real_size(), nk = plan.fft.complex_size();
    const double coef = plan.p.lambda / (g.cell_volume() * static_cast<double>(n_cells));
    const SigmaSpec& sigma = plan.p.sigma;
    NormalStream rng(e.seed, r, plan.noise.tag());

    std::copy(plan.u0.begin(), plan.u0.end(), ws.u.data());
    record(e, plan, r, 0, ws.u.data());
    if (plan.opt.blocked_history) std::fill(ws.prefix.begin(), ws.prefix.begin() + static_cast<long>(nk), cplx{});

    for (int n = 1; n <= g.nt; ++n) {
        const int m_new = n - 1;
        plan.noise.draw(rng, std::span<double>(ws.xi.data(), n_cells), ws.work, ws.spec);
        for (std::size_t i = 0; i < n_cells; ++i) ws.s[i] = sigma(ws.u[i]) * ws.xi[i];
        cplx* S = ws.hist.data() + static_cast<std::size_t>(m_new) * nk;
        plan.fft.forward(ws.s.data(), S);

        std::fill(ws.h.data(), ws.h.data() + nk, cplx{});
        if (!plan.opt.blocked_history) {
            for (int m = 0; m < n; ++m)
                axpy(plan.symbol(n - m), ws.hist.data() + static_cast<std::size_t>(m) * nk, ws.h.data(), nk);
        } else {
            const cplx* Pm = ws.prefix.data() + static_cast<std::size_t>(m_new) * nk;
            cplx* Pn = ws.prefix.data() + static_cast<std::size_t>(n) * nk;
            for (std::size_t k = 0; k < nk; ++k) Pn[k] = Pm[k] + S[k];
            int e_end = std::max(0, n - plan.opt.block_near);
            for (int m = e_end; m < n; ++m)
                axpy(plan.symbol(n - m), ws.hist.data() + static_cast<std::size_t>(m) * nk, ws.h.data(), nk);
            while (e_end > 0) {
                const int near_lag = n - e_end + 1;
                int w = 1;
                while (2 * w <= e_end && e_end % (2 * w) == 0 && 2 * w * plan.opt.block_ratio <= near_lag) w *= 2;
                const cplx* Pe = ws.prefix.data() + static_cast<std::size_t>(e_end) * nk;
                const cplx* Ps = ws.prefix.data() + static_cast<std::size_t>(e_end - w) * nk;
                for (std::size_t k = 0; k < nk; ++k) ws.spec[k] = Pe[k] - Ps[k];
                axpy(plan.cache.row(2 * (n - e_end) + w + 1), ws.spec.data(), ws.h.data(), nk);
                e_end -= w;
            }
        }

        plan.fft.inverse(ws.h.data(), ws.work.data());
        double peak = 0.0;
        for (std::size_t i = 0; i < n_cells; ++i) {
            ws.u[i] = plan.initial_at(n, i) + coef * ws.work[i];
            peak = std::max(peak, std::abs(ws.u[i]));
        }
        if (!(peak <= plan.opt.blowup)) {
            e.aborted_at[r] = n;
            for (int k = n; k <= g.nt; ++k) record_nan(e, plan, r, k);
            return;
        }
        record(e, plan, r, n, ws.u.data());
    }
}

} // namespace

FieldEnsemble simulate(const ModelParams& p, const GridSpec& g, const InitialData& u0, const SimOptions& opt) {
    const auto t_start = std::chrono::steady_clock::now();
    check_setup(p, g, u0);
    if (opt.replicas < 1) throw DomainError("simulate: replicas >= 1 required");
    if (static_cast<std::uint64_t>(opt.replicas) > kMaxStreamsPerSeed)
        throw DomainError("seed streams exhausted: at most 2^24 replicas per base seed");
    if (opt.blocked_history && (opt.block_near < 1 || opt.block_ratio < 1))
        throw DomainError("blocked history: block_near >= 1 and block_ratio >= 1 required");

    FieldEnsemble e;
    e.params = p;
    e.grid = g;
    e.initial = u0.describe();
    e.noise = noise_label(p);
    e.seed = opt.seed;
    e.replicas = opt.replicas;
    e.blocked_history = opt.blocked_history;
    if (!g.resolved(p)) e.warnings.push_back("resolution guard: dt^(beta/alpha) < dx, kernel under-resolved");
    if (!g.torus_large_enough(p)) e.warnings.push_back("torus: L < 8 (nu T^beta)^(1/alpha), wrap-around not negligible");

    Plan plan(p, g, u0, opt);
    for (double t : opt.snapshot_times) {
        const double pos = t / g.dt();
        const long step = std::lround(pos);
        if (step < 0 || step > g.nt || std::abs(pos - static_cast<double>(step)) > 1e-9 * std::max(1.0, pos))
            throw DomainError("snapshot time is not on the time grid");
        if (plan.snap_of_step[static_cast<std::size_t>(step)] >= 0) throw DomainError("duplicate snapshot time");
        plan.snap_of_step[static_cast<std::size_t>(step)] = static_cast<int>(e.snapshot_steps.size());
        e.snapshot_times.push_back(t);
        e.snapshot_steps.push_back(static_cast<int>(step));
    }
    for (double x : opt.probe_points) e.probe_cells.push_back(g.cell_at(x));

    const std::size_t R = static_cast<std::size_t>(opt.replicas);
    const std::size_t len = static_cast<std::size_t>(g.nt) + 1;
    e.snapshots.assign(e.snapshot_steps.size() * R * g.cells(), 0.0);
    e.probe_series.assign(R * e.probe_cells.size() * len, 0.0);
    e.mean_square.assign(R * len, 0.0);
    e.aborted_at.assign(R, -1);

    unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, R));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex fail_mu;
    auto worker = [&] {
        try {
            Workspace ws(g.cells(), plan.fft.complex_size(), g.nt, opt.blocked_history);
            for (std::size_t r; (r = next.fetch_add(1)) < R;) run_replica(e, plan, r, ws);
        } catch (...) {
            std::lock_guard lock(fail_mu);
            if (!failure) failure = std::current_exception();
            next = R;
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    if (e.aborted() > 0) {
        std::ostringstream os;
        os << "blow-up guard: " << e.aborted() << " of " << R << " replicas exceeded |u| > " << opt.blowup
           << " and were aborted (moments biased low)";
        e.warnings.push_back(os.str());
    }
    e.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return e;
}

double markov_collapse_error(const ModelParams& p, const GridSpec& g, const InitialData& u0, std::uint64_t seed) {
    if (!p.frac.classical) throw DomainError("Markov collapse requires the classical limit beta = 1");
    SimOptions opt;
    opt.replicas = 1;
    opt.seed = seed;
    opt.threads = 1;
    for (int n = 0; n <= g.nt; ++n) opt.snapshot_times.push_back(n * g.dt());
    const FieldEnsemble e = simulate(p, g, u0, opt);
    if (!e.ok(0)) throw InstabilityError("Markov collapse: replica hit the blow-up guard");

    const auto xi = p.white() ? synthesize_white_noise(p, g, seed, 0) : synthesize_colored_noise(p, g, seed, 0);
    RealFFT fft(g.nx, g.d);
    const std::size_t n_cells = fft.real_size(), nk = fft.complex_size();
    SpectralKernelCache cache(p, g, 1);
    const double* G1 = cache.row(1);
    const double scale = p.lambda / g.cell_volume();
    AlignedBuffer<double> u(n_cells), s(n_cells), tmp(n_cells);
    AlignedBuffer<cplx> U(nk), S(nk), C(nk);
    const std::vector<double> init = sample_initial(g, u0);
    std::copy(init.begin(), init.end(), u.data());
    std::copy(init.begin(), init.end(), tmp.data());
    fft.forward(tmp.data(), U.data());

    double err = 0.0, mag = 0.0;
    for (int n = 1; n <= g.nt; ++n) {
        for (std::size_t i = 0; i < n_cells; ++i) s[i] = p.sigma(u[i]) * xi[static_cast<std::size_t>(n - 1)][i];
        fft.forward(s.data(), S.data());
        for (std::size_t k = 0; k < nk; ++k) U[k] = G1[k] * (U[k] + scale * S[k]);
        std::copy(U.data(), U.data() + nk, C.data());
        fft.inverse(C.data(), u.data());
        const double* h = e.snapshot(static_cast<std::size_t>(n), 0);
        for (std::size_t i = 0; i < n_cells; ++i) {
            u[i] /= static_cast<double>(n_cells);
            err = std::max(err, std::abs(u[i] - h[i]));
            mag = std::max(mag, std::abs(h[i]));
        }
    }
    return mag > 0.0 ? err / mag : err;
}

moments::MomentCurve discrete_flat_oracle(const ModelParams& p, const GridSpec& g, double c) {
    p.validate();
    g.validate();
    if (!p.sigma.is_linear()) throw DomainError("discrete oracle: sigma(x) = s x required");
    const double s2 = p.sigma.slope() * p.sigma.slope();
    RealFFT fft(g.nx, g.d);
    const std::size_t n_cells = fft.real_size(), nk = fft.complex_size();
    SpectralKernelCache cache(p, g, g.nt);
    const double vol = g.cell_volume();

    // noise covariance as a function of the cell lag
    std::vector<double> cov(n_cells, 0.0);
    if (p.white()) {
        cov[0] = g.dt() * vol;
    } else {
        ColoredNoise cn(g, *p.gamma);
        std::vector<int> lag(static_cast<std::size_t>(g.d));
        for (std::size_t i = 0; i < n_cells; ++i) {
            std::size_t r = i;
            for (int a = g.d - 1; a >= 0; --a) {
                lag[static_cast<std::size_t>(a)] = static_cast<int>(r % static_cast<std::size_t>(g.nx));
                r /= static_cast<std::size_t>(g.nx);
            }
            cov[i] = cn.covariance(lag);
        }
    }

    const double lam2 = p.lambda * p.lambda * s2 / (vol * vol);
    std::vector<double> qhat(static_cast<std::size_t>(g.nt) * nk); // [m][k], real
    AlignedBuffer<double> rr(n_cells);
    AlignedBuffer<cplx> rh(nk);
    std::vector<double> Rhat(nk);

    moments::MomentCurve out;
    out.tag = "discrete-oracle";
    out.times.push_back(0.0);
    out.values.push_back(c * c);
    // R_0 = c^2 everywhere
    std::fill(rr.data(), rr.data() + n_cells, c * c);
    for (int n = 0; n < g.nt; ++n) {
        // Q_n = R_n cov, transformed
        for (std::size_t i = 0; i < n_cells; ++i) rr[i] *= cov[i];
        fft.forward(rr.data(), rh.data());
        for (std::size_t k = 0; k < nk; ++k) qhat[static_cast<std::size_t>(n) * nk + k] = rh[k].real();
        // R_{n+1}
        const int np = n + 1;
        std::fill(Rhat.begin(), Rhat.end(), 0.0);
        for (int m = 0; m < np; ++m) {
            const double* G = cache.row(np - m);
            const double* Q = qhat.data() + static_cast<std::size_t>(m) * nk;
            for (std::size_t k = 0; k < nk; ++k) Rhat[k] += G[k] * G[k] * Q[k];
        }
        for (std::size_t k = 0; k < nk; ++k) rh[k] = lam2 * Rhat[k];
        rh[0] += c * c * static_cast<double>(n_cells);
        fft.inverse(rh.data(), rr.data());
        for (std::size_t i = 0; i < n_cells; ++i) rr[i] /= static_cast<double>(n_cells);
        out.times.push_back(np * g.dt());
        out.values.push_back(rr[0]);
    }
    return out;
}

SecondMoment second_moment(const FieldEnsemble& e, bool x_average, std::size_t probe, int bootstrap,
                           std::uint64_t seed) {
    if (e.replicas < 1) throw UnderResolvedError("second_moment: empty ensemble");
    if (!x_average && probe >= e.probe_cells.size()) throw DomainError("second_moment: probe index out of range");
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < static_cast<std::size_t>(e.replicas); ++r)
        if (e.ok(r)) keep.push_back(r);
    if (keep.empty()) throw UnderResolvedError("second_moment: every replica hit the blow-up guard");
    const std::size_t len = static_cast<std::size_t>(e.grid.nt) + 1;
    // per kept replica, per step
    std::vector<double> point(keep.size() * len), avg(keep.size() * len);
    for (std::size_t i = 0; i < keep.size(); ++i) {
        for (std::size_t n = 0; n < len; ++n) {
            avg[i * len + n] = e.mean_square[keep[i] * len + n];
            if (!x_average) {
                const double u = e.probe(keep[i], probe)[n];
                point[i * len + n] = u * u;
            }
        }
    }
    const std::vector<double>& src = x_average ? avg : point;
    auto mean_of = [&](const std::vector<double>& data) {
        return [&data, &keep, len](std::span<const int> w, std::span<double> out) {
            std::fill(out.begin(), out.end(), 0.0);
            double tot = 0.0;
            for (std::size_t i = 0; i < keep.size(); ++i) {
                if (w[i] == 0) continue;
                tot += w[i];
                const double* row = data.data() + i * len;
                for (std::size_t n = 0; n < len; ++n) out[n] += w[i] * row[n];
            }
            for (double& v : out) v /= tot;
        };
    };
    const auto bm = stats::bootstrap_many(keep.size(), len, mean_of(src), bootstrap, seed);
    const auto ba = x_average ? bm : stats::bootstrap_many(keep.size(), len, mean_of(avg), bootstrap, seed);

    SecondMoment sm;
    sm.used = keep.size();
    sm.aborted = e.aborted();
    sm.curve.tag = x_average ? "mc-xavg" : "mc-point";
    sm.energy.tag = "mc-energy";
    const double volume = std::pow(e.grid.L, e.grid.d);
    for (std::size_t n = 0; n < len; ++n) {
        const double t = e.time(static_cast<int>(n));
        sm.curve.times.push_back(t);
        sm.curve.values.push_back(bm[n].estimate);
        sm.curve.stderrs.push_back(bm[n].se);
        sm.ci_lo.push_back(bm[n].lo);
        sm.ci_hi.push_back(bm[n].hi);
        const double en = std::sqrt(volume * ba[n].estimate);
        sm.energy.times.push_back(t);
        sm.energy.values.push_back(en);
        sm.energy.stderrs.push_back(en > 0.0 ? volume * ba[n].se / (2.0 * en) : 0.0);
    }
    return sm;
}

nlohmann::json HolderFit::to_json() const {
    nlohmann::json j{{"skipped", skipped}, {"reason", reason}, {"lags", lags}, {"increments", increments},
                     {"slope", slope}, {"exponent", exponent}, {"ci", {ci_lo, ci_hi}}, {"r2", r2},
                     {"theoretical", theoretical}};
    return j;
}

HolderFit holder_increments(const FieldEnsemble& e, std::size_t probe, const std::vector<int>& lags,
                            double start_fraction, int bootstrap, std::uint64_t seed) {
    HolderFit fit;
    const ModelParams& p = e.params;
    fit.lags = lags;
    fit.theoretical = (p.alpha() - p.beta() * p.noise_exponent()) / (2.0 * p.alpha());
    std::string why;
    if (p.frac.classical) {
        fit.skipped = true;
        fit.reason = "Hölder statement assumes 0 < beta < 1; classical limit skipped";
        return fit;
    }
    if (p.white() ? !white_noise_valid(p, &why) : !colored_noise_valid(p, &why)) {
        fit.skipped = true;
        fit.reason = why;
        return fit;
    }
    if (lags.size() < 32) throw UnderResolvedError("holder_increments: at least 32 lags required");
    if (probe >= e.probe_cells.size()) throw DomainError("holder_increments: probe index out of range");
    const int n0 = static_cast<int>(std::ceil(start_fraction * e.grid.nt));
    for (int l : lags)
        if (l < 1 || n0 + l > e.grid.nt) throw UnderResolvedError("holder_increments: lag exceeds the time window");

    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < static_cast<std::size_t>(e.replicas); ++r)
        if (e.ok(r)) keep.push_back(r);
    if (keep.size() < 2) throw UnderResolvedError("holder_increments: fewer than two usable replicas");

    const std::size_t L = lags.size();
    std::vector<double> a(keep.size() * L); // per replica mean squared increment
    for (std::size_t i = 0; i < keep.size(); ++i) {
        const double* u = e.probe(keep[i], probe);
        for (std::size_t j = 0; j < L; ++j) {
            const int l = lags[j];
            double s = 0.0;
            int cnt = 0;
            for (int n = n0; n + l <= e.grid.nt; ++n, ++cnt) s += (u[n + l] - u[n]) * (u[n + l] - u[n]);
            a[i * L + j] = s / cnt;
        }
    }
    std::vector<double> logh(L);
    for (std::size_t j = 0; j < L; ++j) logh[j] = std::log(lags[j] * e.grid.dt());
    auto slope_of = [&](std::span<const int> w, std::vector<double>* inc) {
        std::vector<double> m(L, 0.0);
        double tot = 0.0;
        for (std::size_t i = 0; i < keep.size(); ++i) {
            if (w[i] == 0) continue;
            tot += w[i];
            for (std::size_t j = 0; j < L; ++j) m[j] += w[i] * a[i * L + j];
        }
        std::vector<double> y(L);
        for (std::size_t j = 0; j < L; ++j) y[j] = std::log(m[j] / tot);
        if (inc) *inc = m;
        return stats::linear_fit(logh, y);
    };
    std::vector<int> ones(keep.size(), 1);
    const stats::LinearFit lf = slope_of(ones, &fit.increments);
    for (double& v : fit.increments) v /= static_cast<double>(keep.size());
    fit.slope = lf.slope;
    fit.exponent = lf.slope / 2.0;
    fit.r2 = lf.r2;
    const stats::Bootstrap b = stats::bootstrap(
        keep.size(), [&](std::span<const int> w) { return slope_of(w, nullptr).slope / 2.0; }, bootstrap, seed);
    fit.ci_lo = b.lo;
    fit.ci_hi = b.hi;
    return fit;
}

} // namespace tfshe::mc
