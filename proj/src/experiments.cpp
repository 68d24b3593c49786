#include "tfshe/experiments.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "tfshe/ensemble_io.hpp"
#include "tfshe/errors.hpp"
#include "tfshe/initial_data.hpp"
#include "tfshe/kernel.hpp"
#include "tfshe/mcsim.hpp"
#include "tfshe/specfun.hpp"
#include "tfshe/stats.hpp"

namespace tfshe::expcli {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw IOError("cannot write " + path.string());
    os.precision(17);
    return os;
}

std::string time_tag(double t) {
    std::ostringstream os;
    os << t;
    return os.str();
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    auto os = open_out(path);
    os << j.dump(2) << "\n";
}

// Asymptotic Lyapunov rate (Gamma(rho) kappa)^{1/rho} of the flat-data moment.
double oracle_rate(const ModelParams& p) {
    const double rho = p.rho();
    const double kappa = p.lambda * p.lambda * p.sigma.slope() * p.sigma.slope() * moments::flat_weight(p);
    return std::pow(std::tgamma(rho) * kappa, 1.0 / rho);
}

// ---- kernel-verify --------------------------------------------------------

Check ml_sandwich_check() {
    long violations = 0, bad_exp = 0;
    for (int i = 0; i < 100; ++i) {
        const double beta = (i + 0.5) / 100.0;
        for (int j = 0; j < 100; ++j) {
            const double x = j == 0 ? 0.0 : std::pow(10.0, -3.0 + 6.0 * j / 99.0);
            const auto v = specfun::mittag_leffler_neg(beta, x);
            if (!(v.lower <= v.value && v.value <= v.upper)) ++violations;
        }
    }
    for (int j = 0; j < 100; ++j) {
        const double x = 0.05 * j;
        const double v = specfun::ml_neg(1.0, x), e = std::exp(-x);
        if (std::abs(v - e) > 1e-12 * e) ++bad_exp;
    }
    return {"ml_sandwich", violations == 0 && bad_exp == 0, true,
            {{"grid", "100 x 100 (beta, x)"}, {"violations", violations}, {"exp_mismatches", bad_exp}}};
}

Check dual_path_check(const ModelParams& p) {
    double worst = 0.0;
    const double scale = std::pow(p.nu, 1.0 / p.alpha());
    const auto radii = kernel::geometric_radii(0.05 * scale, 5.0 * scale, 20, false);
    for (double r : radii) {
        const double a = kernel::kernel_subordination(p, 1.0, r), b = kernel::kernel_fourier(p, 1.0, r);
        worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
    return {"dual_path", worst < 1e-4, true, {{"t", 1.0}, {"radii", radii}, {"max_rel_diff", worst}, {"tol", 1e-4}}};
}

Check slope_check(const std::string& name, const std::vector<double>& xs, const std::vector<double>& ys, double target,
                  double tol, nlohmann::json extra) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    const auto f = stats::linear_fit(lx, ly);
    extra["slope"] = f.slope;
    extra["target"] = target;
    extra["tol"] = tol;
    extra["prefactor"] = std::exp(f.intercept);
    return {name, std::abs(f.slope - target) <= tol, true, extra};
}

void kernel_verify(const ExperimentConfig& c, const std::filesystem::path& dir, Manifest& m) {
    const ModelParams& p = c.model;
    m.checks.push_back(ml_sandwich_check());
    m.checks.push_back(dual_path_check(p));

    const double a = p.alpha(), b = p.beta();
    const int d = p.d;
    std::vector<double> ts;
    for (int i = 0; i <= 8; ++i) ts.push_back(0.1 * std::pow(100.0, i / 8.0));
    if (d < 2 * a) {
        std::vector<double> l2;
        for (double t : ts) l2.push_back(kernel::l2_norm(p, t).direct);
        m.checks.push_back(slope_check("l2_scaling", ts, l2, -b * d / a, 1e-3, {{"c_star", kernel::c_star(p)}}));
    }
    const double gamma = p.gamma ? *p.gamma : 0.5 * std::min(a, static_cast<double>(d));
    {
        std::vector<double> rz;
        for (double t : ts) rz.push_back(kernel::riesz_weighted_l2(p, t, gamma).direct);
        m.checks.push_back(slope_check("riesz_scaling", ts, rz, -b * gamma / a, 1e-3,
                                       {{"gamma", gamma}, {"c_star_gamma", kernel::c_star_gamma(p, gamma)}}));
    }
    const double ge = p.noise_exponent();
    if (ge < std::min(2.0, 1.0 / b) * a) {
        std::vector<double> hs;
        for (int k = 3; k <= 10; ++k) hs.push_back(std::ldexp(1.0, -k));
        const auto inc = kernel::temporal_increments(p, 1.0, hs);
        m.checks.push_back(slope_check("temporal_increment", hs, inc, 1.0 - b * ge / a, 0.05, {{"t", 1.0}, {"h", hs}}));
    }
    {
        const auto rep = kernel::pointwise_bounds_check(p, {0.5, 1.0, 2.0}, kernel::geometric_radii(0.1, 20.0, 12, true));
        m.checks.push_back({"pointwise_bounds", rep.pass, true,
                            {{"c1", rep.c1}, {"c2", rep.c2}, {"stable", rep.stable}, {"upper_checked", rep.upper_checked},
                             {"note", rep.note}}});
    }
    {
        const double u = 1e8;
        const double lead = b * std::pow(u, -b - 1.0) / std::tgamma(1.0 - b);
        const double ratio = specfun::subordinator_density(b, u) / lead;
        const double small = specfun::subordinator_density(b, 1e-2);
        m.checks.push_back({"subordinator_tails", std::abs(ratio - 1.0) < 0.01 && small < 1e-6, true,
                            {{"u_large", u}, {"ratio_to_power_law", ratio}, {"g_at_0.01", small}}});
    }
    if (p.gamma) {
        const double cov = kernel::covariance_double_integral(p, 1.0, 0.0);
        m.checks.push_back({"covariance_double_integral", std::isfinite(cov) && cov > 0.0, true, {{"value_t1_sep0", cov}}});
    }
    const auto prof = kernel::build_profile(p, 1.0, kernel::Method::Subordination,
                                            kernel::geometric_radii(1e-3, 30.0, 60, d < a), c.threads);
    prof.write_csv(dir / "profile.csv");
    prof.write_json(dir / "profile.json");
    m.add_output(dir, "profile.csv");
    m.add_output(dir, "profile.json");
    nlohmann::json rep = nlohmann::json::array();
    for (const auto& ch : m.checks) rep.push_back({{"name", ch.name}, {"pass", ch.pass}, {"detail", ch.detail}});
    write_json(dir / "kernel_report.json", {{"model", p.to_json()}, {"checks", rep}});
    m.add_output(dir, "kernel_report.json");
}

// ---- moment-oracle ----------------------------------------------------------

Check excitation_check(const ExcitationEstimate& e, double tol, bool asserted) {
    return {"excitation_t" + time_tag(e.t), e.rel_err <= tol, asserted, e.to_json()};
}

void write_excitation(const std::vector<ExcitationEstimate>& est, const std::filesystem::path& dir, Manifest& m) {
    nlohmann::json all = nlohmann::json::array();
    for (const auto& e : est) {
        const std::string name = "excitation_t" + time_tag(e.t) + ".csv";
        e.write_csv(dir / name);
        m.add_output(dir, name);
        all.push_back(e.to_json());
    }
    write_json(dir / "excitation.json", all);
    m.add_output(dir, "excitation.json");
}

std::vector<ExcitationEstimate> excitation_all(const ExperimentConfig& c, Manifest& m, double tol);

void moment_oracle(const ExperimentConfig& c, const std::filesystem::path& dir, Manifest& m) {
    const ModelParams& p = c.model;
    const double T = c.grid.T;
    const auto fm = p.white() ? moments::pam_second_moment_white(p, c.u0, T)
                              : moments::pam_second_moment_colored(p, c.u0, T);
    {
        auto os = open_out(dir / "moment_oracle.csv");
        os << "t,volterra,closed_form,rel_err\n";
        for (std::size_t i = 0; i < fm.numeric.times.size(); ++i) {
            const double v = fm.numeric.values[i], cf = fm.closed.values[i];
            os << fm.numeric.times[i] << "," << v << "," << cf << "," << std::abs(v - cf) / cf << "\n";
        }
    }
    m.add_output(dir, "moment_oracle.csv");
    m.checks.push_back({"volterra_vs_closed_form", fm.max_rel_err < 1e-4, true,
                        {{"max_rel_err", fm.max_rel_err}, {"tol", 1e-4}, {"rho", fm.rho}, {"kappa", fm.kappa}}});

    // Lyapunov rate scaling under lambda -> 2 lambda, on a horizon long enough for the
    // asymptotic regime (rate * horizon = 50 at the smaller lambda).
    ModelParams p2 = p;
    p2.lambda = 2.0 * p.lambda;
    if (p.lambda > 0.0) {
        const double horizon = 50.0 / oracle_rate(p);
        const auto g1 = fit_growth_rate(oracle_curve(p, c.u0, horizon, 400), c.tail_fraction);
        const auto g2 = fit_growth_rate(oracle_curve(p2, c.u0, horizon, 400), c.tail_fraction);
        const double expect = std::pow(2.0, moments::excitation_theoretical(p));
        const double ratio = g2.rate / g1.rate;
        m.checks.push_back({"growth_rate_ratio", std::abs(ratio / expect - 1.0) <= 0.15, true,
                            {{"lambda", p.lambda}, {"horizon", horizon}, {"rate", g1.rate}, {"rate_2lambda", g2.rate},
                             {"ratio", ratio}, {"expected", expect}, {"tol", 0.15}}});
    }
    if (c.lambdas.size() >= 4) write_excitation(excitation_all(c, m, 0.05), dir, m);
}

// ---- excitation -------------------------------------------------------------

// log(M / u0^2) and its standard error for every (t, lambda).
struct LogMoments {
    std::map<double, std::vector<double>> value, se;
};

LogMoments mc_log_moments(const ExperimentConfig& c, const std::vector<double>& times) {
    LogMoments out;
    for (double t : times) {
        out.value[t].assign(c.lambdas.size(), std::nan(""));
        out.se[t].assign(c.lambdas.size(), std::nan(""));
    }
    for (std::size_t i = 0; i < c.lambdas.size(); ++i) {
        ModelParams p = c.model;
        p.lambda = c.lambdas[i];
        mc::SimOptions opt;
        opt.replicas = c.replicas;
        opt.seed = c.seed;
        opt.threads = c.threads;
        opt.probe_points = c.probes;
        opt.blocked_history = c.blocked_history;
        const auto e = mc::simulate(p, c.grid, c.initial(), opt);
        if (e.aborted() == static_cast<std::size_t>(e.replicas)) continue;
        const auto sm = mc::second_moment(e, true, 0, c.bootstrap, c.seed);
        for (double t : times) {
            const double v = sm.curve.at(t) / (c.u0 * c.u0);
            const auto n = static_cast<std::size_t>(std::lround(t / c.grid.dt()));
            out.value[t][i] = v > 0.0 ? std::log(v) : std::nan("");
            out.se[t][i] = sm.curve.stderrs[n] / sm.curve.values[n];
        }
    }
    return out;
}

LogMoments oracle_log_moments(const ExperimentConfig& c, const std::vector<double>& times) {
    LogMoments out;
    for (double t : times) {
        for (double lam : c.lambdas) {
            ModelParams p = c.model;
            p.lambda = lam;
            out.value[t].push_back(moments::pam_log_moment(p, 1.0, t));
            out.se[t].push_back(0.0);
        }
    }
    return out;
}

std::vector<ExcitationEstimate> excitation_all(const ExperimentConfig& c, Manifest& m, double tol) {
    const bool mc = c.mode == Mode::Excitation && c.pipeline == "mc";
    const LogMoments lm = mc ? mc_log_moments(c, c.fit_times) : oracle_log_moments(c, c.fit_times);
    const double theo = moments::excitation_theoretical(c.model);
    std::vector<ExcitationEstimate> est;
    for (std::size_t k = 0; k < c.fit_times.size(); ++k) {
        const double t = c.fit_times[k];
        try {
            auto e = fit_excitation_values(c.lambdas, lm.value.at(t), theo, t, mc ? "mc" : "oracle");
            e.log_moment_se = lm.se.at(t);
            m.checks.push_back(excitation_check(e, tol, k == 0));
            est.push_back(std::move(e));
        } catch (const UnderResolvedError& err) {
            m.checks.push_back({"excitation_t" + time_tag(t), false, k == 0,
                                {{"error", err.what()}, {"log_moment", lm.value.at(t)}, {"lambdas", c.lambdas}}});
        }
    }
    return est;
}

void excitation(const ExperimentConfig& c, const std::filesystem::path& dir, Manifest& m) {
    const double tol = c.pipeline == "mc" ? 0.15 : 0.05;
    write_excitation(excitation_all(c, m, tol), dir, m);
}

// ---- Monte Carlo ------------------------------------------------------------

void monte_carlo(const ExperimentConfig& c, const std::filesystem::path& dir, Manifest& m) {
    const ModelParams& p = c.model;
    mc::SimOptions opt;
    opt.replicas = c.replicas;
    opt.seed = c.seed;
    opt.threads = c.threads;
    opt.snapshot_times = c.check_times;
    opt.probe_points = c.probes;
    opt.blocked_history = c.blocked_history;
    const auto e = mc::simulate(p, c.grid, c.initial(), opt);
    mc::write_ensemble(e, dir / "ensemble.bin");
    m.add_output(dir, "ensemble.bin");

    const auto pt = mc::second_moment(e, false, 0, c.bootstrap, c.seed);
    const auto xa = mc::second_moment(e, true, 0, c.bootstrap, c.seed);
    const bool oracle = p.sigma.is_linear() && !c.u0_support;
    moments::MomentCurve disc;
    if (oracle) {
        disc = mc::discrete_flat_oracle(p, c.grid, c.u0);
    }
    {
        auto os = open_out(dir / "moments.csv");
        os << "t,mc_point,mc_point_se,mc_xavg,mc_xavg_se,energy,energy_se";
        if (oracle) os << ",oracle,discrete_oracle";
        os << "\n";
        for (std::size_t n = 0; n < pt.curve.times.size(); ++n) {
            const double t = pt.curve.times[n];
            os << t << "," << pt.curve.values[n] << "," << pt.curve.stderrs[n] << "," << xa.curve.values[n] << ","
               << xa.curve.stderrs[n] << "," << xa.energy.values[n] << "," << xa.energy.stderrs[n];
            if (oracle)
                os << "," << std::exp(2.0 * std::log(c.u0) + moments::pam_log_moment(p, 1.0, t)) << ","
                   << disc.values[n];
            os << "\n";
        }
    }
    m.add_output(dir, "moments.csv");

    m.checks.push_back({"resolution_guard", c.grid.resolved(p), false,
                        {{"dt^(beta/alpha)", std::pow(c.grid.dt(), p.beta() / p.alpha())}, {"dx", c.grid.dx()}}});
    m.checks.push_back({"blow_up_guard", e.aborted() == 0, false, {{"aborted", e.aborted()}, {"warnings", e.warnings}}});
    if (oracle) {
        for (double t : c.check_times) {
            const auto n = static_cast<std::size_t>(std::lround(t / c.grid.dt()));
            const double o = std::exp(2.0 * std::log(c.u0) + moments::pam_log_moment(p, 1.0, t));
            const double v = pt.curve.values[n], se = pt.curve.stderrs[n];
            m.checks.push_back({"mc_vs_oracle_t" + time_tag(t), std::abs(v - o) <= 2.0 * se, true,
                                {{"t", t}, {"mc", v}, {"se", se}, {"oracle", o}, {"discrete_oracle", disc.values[n]},
                                 {"z", (v - o) / se}, {"tol_se", 2.0}}});
            m.checks.push_back({"mc_vs_discrete_oracle_t" + time_tag(t), std::abs(v - disc.values[n]) <= 2.0 * se,
                                false, {{"t", t}, {"z", (v - disc.values[n]) / se}}});
        }
        try {
            const auto g = fit_growth_rate(pt.curve, c.tail_fraction);
            const auto go = fit_growth_rate(oracle_curve(p, c.u0, c.grid.T, c.grid.nt), c.tail_fraction);
            m.checks.push_back({"growth_rate", g.rate > 0.0 && g.ci_lo <= go.rate && go.rate <= g.ci_hi, false,
                                {{"mc_rate", g.rate}, {"ci", {g.ci_lo, g.ci_hi}}, {"oracle_rate", go.rate}}});
        } catch (const std::exception& err) {
            m.checks.push_back({"growth_rate", false, false, {{"error", err.what()}}});
        }
    }
}

// ---- Hoelder ----------------------------------------------------------------

void hoelder(const ExperimentConfig& c, const std::filesystem::path& dir, Manifest& m) {
    std::vector<int> lags(static_cast<std::size_t>(c.lags));
    for (int i = 0; i < c.lags; ++i) lags[static_cast<std::size_t>(i)] = i + 1;
    mc::SimOptions opt;
    opt.replicas = c.replicas;
    opt.seed = c.seed;
    opt.threads = c.threads;
    opt.probe_points = c.probes;
    opt.blocked_history = c.blocked_history;

    nlohmann::json report;
    auto one = [&](const ModelParams& p, const std::string& label, bool asserted) {
        const auto e = mc::simulate(p, c.grid, c.initial(), opt);
        const auto fit = mc::holder_increments(e, 0, lags, 0.25, c.bootstrap ? c.bootstrap : 200, c.seed);
        report[label] = fit.to_json();
        const std::string name = "hoelder_" + label + ".csv";
        auto os = open_out(dir / name);
        os << "lag,h,increment\n";
        for (std::size_t i = 0; i < fit.lags.size() && i < fit.increments.size(); ++i)
            os << fit.lags[i] << "," << fit.lags[i] * c.grid.dt() << "," << fit.increments[i] << "\n";
        os.close();
        m.add_output(dir, name);
        nlohmann::json detail = fit.to_json();
        detail["threshold"] = fit.theoretical - 0.1;
        m.checks.push_back({"hoelder_" + label, fit.skipped ? false : fit.exponent >= fit.theoretical - 0.1,
                            asserted, detail});
    };
    one(c.model, "colored", true);
    ModelParams w = c.model;
    w.gamma.reset();
    if (white_noise_valid(w)) one(w, "white", false);
    write_json(dir / "hoelder.json", report);
    m.add_output(dir, "hoelder.json");
}

} // namespace

nlohmann::json ExcitationEstimate::to_json() const {
    std::vector<int> adm(admitted.begin(), admitted.end());
    return {{"t", t},         {"pipeline", pipeline}, {"lambdas", lambdas}, {"log_moment", log_moment},
            {"log_moment_se", log_moment_se}, {"loglog", loglog}, {"admitted", adm}, {"cut_loglog", cut},
            {"slope", slope}, {"ci", {ci_lo, ci_hi}}, {"r2", r2}, {"theoretical", theoretical},
            {"rel_err", rel_err}};
}

void ExcitationEstimate::write_csv(const std::filesystem::path& path) const {
    auto os = open_out(path);
    os << "lambda,log_moment,loglog,admitted\n";
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        os << lambdas[i] << "," << log_moment[i] << "," << loglog[i] << "," << (admitted[i] ? 1 : 0) << "\n";
}

ExcitationEstimate fit_excitation_values(const std::vector<double>& lambdas, const std::vector<double>& log_moment,
                                         double theoretical, double t, const std::string& pipeline) {
    if (lambdas.size() != log_moment.size()) throw DomainError("fit_excitation: size mismatch");
    ExcitationEstimate e;
    e.t = t;
    e.pipeline = pipeline;
    e.lambdas = lambdas;
    e.log_moment = log_moment;
    e.theoretical = theoretical;
    std::vector<double> x, y;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double lm = log_moment[i];
        const bool ok = std::isfinite(lm) && lm > std::exp(e.cut);
        e.loglog.push_back(lm > 0.0 && std::isfinite(lm) ? std::log(lm) : std::nan(""));
        e.admitted.push_back(ok);
        if (ok) {
            x.push_back(std::log(lambdas[i]));
            y.push_back(e.loglog.back());
        }
    }
    if (x.size() < 4) {
        std::ostringstream os;
        os << "excitation fit at t = " << t << ": only " << x.size()
           << " lambdas pass the double-log cut log E > e^0.5 (4 required)";
        throw UnderResolvedError(os.str());
    }
    const auto f = stats::linear_fit(x, y);
    e.slope = f.slope;
    e.ci_lo = f.ci_lo;
    e.ci_hi = f.ci_hi;
    e.r2 = f.r2;
    e.rel_err = std::abs(f.slope - theoretical) / theoretical;
    return e;
}

ExcitationEstimate fit_excitation(const ExperimentConfig& c, double t) {
    if (c.lambdas.size() < 4) throw UnderResolvedError("fit_excitation: at least four lambdas required");
    const bool mc = c.mode == Mode::Excitation && c.pipeline == "mc";
    if (!mc && !c.model.sigma.is_linear()) throw DomainError("oracle excitation requires linear sigma");
    const LogMoments lm = mc ? mc_log_moments(c, {t}) : oracle_log_moments(c, {t});
    auto e = fit_excitation_values(c.lambdas, lm.value.at(t), moments::excitation_theoretical(c.model), t,
                                   mc ? "mc" : "oracle");
    e.log_moment_se = lm.se.at(t);
    return e;
}

GrowthRate fit_growth_rate(const moments::MomentCurve& curve, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) throw DomainError("fit_growth_rate: tail fraction in (0, 1]");
    if (curve.times.empty()) throw UnderResolvedError("fit_growth_rate: empty curve");
    const double t0 = curve.times.back() - tail_fraction * (curve.times.back() - curve.times.front());
    std::vector<double> t, y;
    for (std::size_t i = 0; i < curve.times.size(); ++i) {
        if (curve.times[i] < t0) continue;
        if (!(curve.values[i] > 0.0)) throw DomainError("fit_growth_rate: non-positive value in the tail window");
        t.push_back(curve.times[i]);
        y.push_back(std::log(curve.values[i]));
    }
    const auto f = stats::linear_fit(t, y);
    return {f.slope, f.ci_lo, f.ci_hi, f.r2, t.size()};
}

moments::MomentCurve oracle_curve(const ModelParams& p, double u0, double T, int n) {
    moments::MomentCurve c;
    c.tag = "oracle";
    for (int i = 0; i <= n; ++i) {
        const double t = T * i / n;
        c.times.push_back(t);
        c.values.push_back(std::exp(2.0 * std::log(u0) + moments::pam_log_moment(p, 1.0, t)));
    }
    return c;
}

RunResult run(ExperimentConfig c, const RunOptions& opt) {
    if (opt.seed) c.seed = *opt.seed;
    if (opt.replicas) c.replicas = *opt.replicas;
    if (opt.threads) c.threads = *opt.threads;
    if (opt.out) c.outputs = *opt.out;
    c.validate();

    RunResult res;
    res.dir = c.outputs;
    std::filesystem::create_directories(res.dir);
    const std::string text = c.canonical();
    const std::string hash = hex64(fnv1a64(text));
    if (!opt.force) {
        if (auto old = Manifest::read(res.dir); old && old->reusable(res.dir, hash)) {
            res.manifest = *old;
            res.pass = old->pass();
            res.reused = true;
            return res;
        }
    }

    const auto t0 = std::chrono::steady_clock::now();
    Manifest& m = res.manifest;
    m.mode = to_string(c.mode);
    m.config_hash = hash;
    m.config_text = text;
    m.seed = c.seed;
    m.seed_streams = "replica r draws from mt19937_64 seeded by (seed, r, noise tag)";
    m.versions = build_versions();
    switch (c.mode) {
    case Mode::KernelVerify: kernel_verify(c, res.dir, m); break;
    case Mode::MomentOracle: moment_oracle(c, res.dir, m); break;
    case Mode::McWhite:
    case Mode::McColored: monte_carlo(c, res.dir, m); break;
    case Mode::Excitation: excitation(c, res.dir, m); break;
    case Mode::Hoelder: hoelder(c, res.dir, m); break;
    }
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    m.write(res.dir);
    res.pass = m.pass();
    return res;
}

} // namespace tfshe::expcli
