// Acceptance runner: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tfshe/errors.hpp"
#include "tfshe/experiments.hpp"
#include "tfshe/initial_data.hpp"
#include "tfshe/kernel.hpp"
#include "tfshe/mcsim.hpp"
#include "tfshe/moments.hpp"
#include "tfshe/specfun.hpp"
#include "tfshe/stats.hpp"

using namespace tfshe;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

fs::path g_work;
bool g_reuse = false;

ModelParams model(double alpha, double beta, int d = 1, double lambda = 1.0, std::optional<double> gamma = {}) {
    ModelParams p;
    p.frac = beta == 1.0 ? FracOrder::classical_limit(alpha) : FracOrder{alpha, beta, false};
    p.d = d;
    p.lambda = lambda;
    p.gamma = gamma;
    return p;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
    }
    return stats::linear_fit(lx, ly).slope;
}

std::vector<double> geometric(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(a * std::pow(b / a, i / (n - 1.0)));
    return v;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

expcli::RunResult run_config(expcli::ExperimentConfig c, const std::string& sub, std::optional<unsigned> threads = {}) {
    expcli::RunOptions opt;
    opt.out = g_work / sub;
    opt.force = !g_reuse;
    opt.threads = threads;
    return expcli::run(std::move(c), opt);
}

const expcli::Check* find_check(const expcli::Manifest& m, const std::string& name) {
    for (const auto& c : m.checks)
        if (c.name == name) return &c;
    return nullptr;
}

// ---- 1 ----------------------------------------------------------------------
Outcome c1() {
    long violations = 0;
    for (int i = 0; i < 100; ++i) {
        const double beta = (i + 0.5) / 100.0;
        for (int j = 0; j < 100; ++j) {
            const double x = j == 0 ? 0.0 : std::pow(10.0, -3.0 + 6.0 * j / 99.0);
            const auto v = specfun::mittag_leffler_neg(beta, x);
            if (!(v.lower <= v.value && v.value <= v.upper)) ++violations;
        }
    }
    double worst = 0.0;
    for (int j = 0; j < 100; ++j) {
        const double x = 0.05 * j;
        worst = std::max(worst, rel(specfun::ml_neg(1.0, x), std::exp(-x)));
    }
    std::ostringstream os;
    os << "violations=" << violations << "/10000, max |E_1(-x)/e^{-x}-1|=" << worst;
    return {violations == 0 && worst <= 1e-12, os.str()};
}

// ---- 2 ----------------------------------------------------------------------
Outcome c2() {
    double worst = 0.0;
    for (auto [a, b] : {std::pair{2.0, 0.5}, std::pair{1.5, 0.7}, std::pair{1.2, 0.9}}) {
        const auto p = model(a, b);
        for (double r : geometric(0.05, 5.0, 20))
            worst = std::max(worst, rel(kernel::kernel_subordination(p, 1.0, r), kernel::kernel_fourier(p, 1.0, r)));
    }
    std::ostringstream os;
    os << "max relative difference " << worst << " over 3 x 20 radii (t=1)";
    return {worst < 1e-4, os.str()};
}

// ---- 3 ----------------------------------------------------------------------
Outcome c3() {
    const auto ts = geometric(0.1, 10.0, 9);
    double worst = 0.0;
    for (auto [a, b] : {std::pair{2.0, 0.5}, std::pair{1.5, 0.7}, std::pair{1.2, 0.9}, std::pair{2.0, 1.0}}) {
        const auto p = model(a, b);
        std::vector<double> v;
        for (double t : ts) v.push_back(kernel::l2_norm(p, t).direct);
        worst = std::max(worst, std::abs(loglog_slope(ts, v) + b / a));
    }
    double gauss = 0.0;
    const auto g = model(2.0, 1.0);
    for (double t : ts) gauss = std::max(gauss, rel(kernel::l2_norm(g, t).direct, 1.0 / std::sqrt(8.0 * std::numbers::pi * t)));
    std::ostringstream os;
    os << "max |slope + beta d/alpha|=" << worst << ", Gaussian max rel err=" << gauss;
    return {worst <= 1e-3 && gauss <= 1e-6, os.str()};
}

// ---- 4 ----------------------------------------------------------------------
Outcome c4() {
    const auto ts = geometric(0.1, 10.0, 9);
    std::vector<double> hs;
    for (int k = 3; k <= 10; ++k) hs.push_back(std::ldexp(1.0, -k));
    double worst_r = 0.0, worst_h = 0.0;
    struct Case {
        double a, b, gamma;
    };
    for (const Case& k : {Case{2.0, 0.5, 0.5}, Case{1.5, 0.7, 0.5}, Case{2.0, 0.5, 1.0}}) {
        const auto p = model(k.a, k.b, 1, 1.0, k.gamma);
        std::vector<double> v;
        for (double t : ts) v.push_back(kernel::riesz_weighted_l2(p, t, k.gamma).direct);
        worst_r = std::max(worst_r, std::abs(loglog_slope(ts, v) + k.b * k.gamma / k.a));
        const auto inc = kernel::temporal_increments(p, 1.0, hs);
        worst_h = std::max(worst_h, std::abs(loglog_slope(hs, inc) - (1.0 - k.b * k.gamma / k.a)));
    }
    std::ostringstream os;
    os << "max Riesz slope error=" << worst_r << ", max increment slope error=" << worst_h;
    return {worst_r <= 1e-3 && worst_h <= 0.05, os.str()};
}

// ---- 5 ----------------------------------------------------------------------
double ml_series_oracle(double rho, double z) {
    double s = 0.0;
    // Terms peak near k = z^{1/rho} / rho; stop once well past the peak.
    const double peak = std::pow(z, 1.0 / rho) / rho;
    for (int k = 0; k < 100000; ++k) {
        const double term = std::exp(k * std::log(z) - std::lgamma(1.0 + rho * k));
        s += term;
        if (k > peak + 10 && term < 1e-18 * s) break;
    }
    return s;
}

Outcome c5() {
    double worst = 0.0;
    for (double rho : {0.25, 0.5, 0.75}) {
        moments::VolterraProblem pb;
        pb.rho = rho;
        pb.kappa = 1.0;
        pb.c = 1.0;
        pb.T = 2.0;
        pb.dt = 2.0 / 32768.0;
        const auto f = moments::volterra_solve_richardson(pb);
        for (double t : {0.5, 1.0, 2.0})
            worst = std::max(worst, rel(f.at(t), ml_series_oracle(rho, std::tgamma(rho) * std::pow(t, rho))));
    }
    std::ostringstream os;
    os << "kappa=1, c=1: max relative error " << worst;
    return {worst < 1e-4, os.str()};
}

// ---- 6 ----------------------------------------------------------------------
expcli::ExperimentConfig c6_config(int nx, int nt) {
    expcli::ExperimentConfig c;
    c.mode = expcli::Mode::McWhite;
    c.model = model(2.0, 0.5, 1, 1.0);
    c.grid.L = 16.0;
    c.grid.nx = nx;
    c.grid.T = 1.0;
    c.grid.nt = nt;
    c.replicas = 2000;
    c.seed = 2024;
    c.check_times = {0.25, 0.5, 1.0};
    c.probes = {0.0};
    return c;
}

Outcome c6() {
    std::ostringstream os;
    bool pass = true;
    double disc_gap[2] = {0.0, 0.0};
    const std::pair<int, int> levels[2] = {{512, 256}, {1024, 512}};
    for (int l = 0; l < 2; ++l) {
        const auto [nx, nt] = levels[l];
        const auto r = run_config(c6_config(nx, nt), "c6_nx" + std::to_string(nx));
        os << "[nx=" << nx << ",nt=" << nt << "]";
        for (double t : {0.25, 0.5, 1.0}) {
            std::ostringstream tag;
            tag << t;
            const auto* ch = find_check(r.manifest, "mc_vs_oracle_t" + tag.str());
            if (!ch) {
                pass = false;
                os << " t=" << t << " missing";
                continue;
            }
            pass = pass && ch->pass;
            os << " t=" << t << " z=" << ch->detail.at("z").get<double>();
            const double o = ch->detail.at("oracle").get<double>(), d = ch->detail.at("discrete_oracle").get<double>();
            disc_gap[l] = std::max(disc_gap[l], std::abs(d - o) / o);
        }
        os << "; ";
    }
    const bool shrinks = disc_gap[1] < disc_gap[0];
    os << "scheme bias (discrete oracle vs continuum) " << disc_gap[0] << " -> " << disc_gap[1];
    return {pass && shrinks, os.str()};
}

// ---- 7 ----------------------------------------------------------------------
Outcome c7() {
    struct Case {
        double a, b;
        std::optional<double> gamma;
    };
    std::ostringstream os;
    bool pass = true;
    int i = 0;
    for (const Case& k : {Case{2, 1, std::nullopt}, Case{2, 0.8, std::nullopt}, Case{2, 0.5, 0.5}}) {
        expcli::ExperimentConfig c;
        c.mode = expcli::Mode::Excitation;
        c.pipeline = "oracle";
        c.model = model(k.a, k.b, 1, 1.0, k.gamma);
        c.lambdas = {4, 8, 16, 32, 64};
        c.fit_times = {1.0, 0.1};
        const auto r = run_config(c, "c7_" + std::to_string(i++));
        const auto* ch = find_check(r.manifest, "excitation_t1");
        const bool ok = ch && ch->pass;
        pass = pass && ok;
        os << "(" << k.a << "," << k.b << (k.gamma ? ",g=0.5" : "") << ") ";
        if (ch && ch->detail.contains("slope"))
            os << "slope=" << ch->detail["slope"].get<double>() << " vs " << ch->detail["theoretical"].get<double>();
        else
            os << "no fit";
        os << "; ";
    }
    return {pass, os.str()};
}

// ---- 8 ----------------------------------------------------------------------
Outcome c8() {
    std::ostringstream os;
    bool pass = true;
    for (bool colored : {false, true}) {
        expcli::ExperimentConfig c;
        c.mode = expcli::Mode::Excitation;
        c.pipeline = "mc";
        c.model = model(2.0, 0.5, 1, 1.0, colored ? std::optional<double>(0.5) : std::nullopt);
        c.grid.L = 16.0;
        c.grid.nx = 256;
        c.grid.T = 1.0;
        c.grid.nt = 256;
        c.replicas = 200;
        c.seed = 77;
        c.lambdas = {4, 8, 16, 32};
        c.fit_times = {1.0, 0.1};
        c.bootstrap = 100;
        const auto r = run_config(c, colored ? "c8_colored" : "c8_white");
        const auto* ch = find_check(r.manifest, "excitation_t1");
        pass = pass && ch && ch->pass;
        os << (colored ? "colored: " : "white: ");
        if (!ch)
            os << "no check";
        else if (ch->detail.contains("slope"))
            os << "slope=" << ch->detail["slope"].get<double>() << " vs " << ch->detail["theoretical"].get<double>();
        else
            os << ch->detail.value("error", std::string("no fit"));
        os << "; ";
    }
    return {pass, os.str()};
}

// ---- 9 ----------------------------------------------------------------------
Outcome c9() {
    std::ostringstream os;
    bool pass = true;
    long compared = 0;
    for (auto [a, b] : {std::pair{2.0, 0.5}, std::pair{1.5, 0.7}}) {
        const auto p = model(a, b, 1, 1.0);
        const auto floor = kernel::build_decay_floor(p, InitialData::constant(1.0));
        const double c1 = moments::chaos_constant(p);
        for (int i = 1; i <= 40; ++i) {
            const double t = 0.25 * i;
            const auto lb = moments::chaos_lower_bound(p, floor, t, c1);
            ++compared;
            if (!(lb.log_value <= moments::pam_log_moment(p, 1.0, t + floor.t0))) pass = false;
        }
    }
    os << compared << " grid times compared; ";
    for (double rho : {0.3, 0.5, 0.7}) {
        const auto fit = moments::fit_exp_lower_bound(rho);
        pass = pass && fit.pass && fit.c1 > 0.0 && fit.worst_margin >= 0.0;
        os << "rho=" << rho << " c1=" << fit.c1 << " margin=" << fit.worst_margin << "; ";
    }
    return {pass, os.str()};
}

// ---- 10 ---------------------------------------------------------------------
Outcome c10() {
    expcli::ExperimentConfig c;
    c.mode = expcli::Mode::Hoelder;
    c.model = model(2.0, 0.5, 1, 1.0, 0.5);
    c.grid.L = 16.0;
    c.grid.nx = 256;
    c.grid.T = 1.0;
    c.grid.nt = 256;
    c.replicas = 1000;
    c.seed = 99;
    c.lags = 64;
    c.bootstrap = 200;
    const auto r = run_config(c, "c10");
    const auto* ch = find_check(r.manifest, "hoelder_colored");
    std::ostringstream os;
    if (!ch) return {false, "no fit"};
    os << "exponent=" << ch->detail.value("exponent", std::nan("")) << " threshold=" << ch->detail.value("threshold", 0.0);
    if (const auto* w = find_check(r.manifest, "hoelder_white"))
        os << "; white exponent=" << w->detail.value("exponent", std::nan(""));
    return {ch->pass, os.str()};
}

// ---- 11 ---------------------------------------------------------------------
Outcome c11() {
    const auto a = run_config(c6_config(512, 256), "c11_threads1", 1u);
    const auto b = run_config(c6_config(512, 256), "c11_threads3", 3u);
    const std::string ca = slurp(a.dir / "moments.csv"), cb = slurp(b.dir / "moments.csv");
    const bool same = !ca.empty() && ca == cb;
    std::ostringstream os;
    os << "moments.csv " << (same ? "bit-identical" : "differs") << " (1 vs 3 threads, " << ca.size() << " bytes)";
    return {same, os.str()};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance criteria"};
    std::string work = "acceptance_runs";
    std::vector<int> only, allow_fail;
    app.add_option("--workdir", work, "directory for run outputs");
    app.add_option("--only", only, "criteria to run (default: all)");
    app.add_option("--allow-fail", allow_fail, "criteria whose failure does not set the exit code");
    app.add_flag("--reuse", g_reuse, "reuse up-to-date run directories instead of recomputing");
    CLI11_PARSE(app, argc, argv);
    g_work = work;
    fs::create_directories(g_work);

    const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
        {1, c1}, {2, c2}, {3, c3}, {4, c4}, {5, c5}, {6, c6}, {7, c7}, {8, c8}, {9, c9}, {10, c10}, {11, c11}};
    const std::set<int> sel(only.begin(), only.end()), allowed(allow_fail.begin(), allow_fail.end());
    int hard_failures = 0;
    for (const auto& [n, fn] : criteria) {
        if (!sel.empty() && !sel.count(n)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << "criterion " << n << ": " << (o.pass ? "PASS" : "FAIL") << " [" << secs << " s] " << o.detail
                  << (o.pass || !allowed.count(n) ? "" : " (known unattainable, see notes)") << std::endl;
        if (!o.pass && !allowed.count(n)) ++hard_failures;
    }
    return hard_failures == 0 ? 0 : 1;
}
