#pragma once

// Deterministic second-moment machinery: weakly singular renewal equations, the
// flat-data closed forms, the chaos-series lower bound and theoretical exponents.

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tfshe/initial_data.hpp"
#include "tfshe/model.hpp"

namespace tfshe::moments {

// f(t) = c(t) + kappa int_0^t (t - s)^{rho - 1} f(s) ds on [0, T].
struct VolterraProblem {
    double rho = 0.5;
    double kappa = 1.0;
    double c = 1.0;
    std::function<double(double)> forcing; // overrides c when set
    double T = 1.0;
    double dt = 1e-3;

    double forcing_at(double t) const { return forcing ? forcing(t) : c; }
    void validate() const;
};

struct MomentCurve {
    std::vector<double> times;
    std::vector<double> values;
    std::vector<double> stderrs; // empty unless produced by sampling
    std::string tag;

    // Linear interpolation in t; throws outside the grid.
    double at(double t) const;
    // Columns t, value, tag (and stderr when present).
    void write_csv(const std::filesystem::path& path) const;
};

// Product rectangle rule, value at the right end of each panel, exact panel
// moments of the kernel. First order in dt.
MomentCurve volterra_solve(const VolterraProblem& pb);
// Two-level Richardson (orders 1 and 1 + rho) from dt, dt/2, dt/4, on the dt grid.
MomentCurve volterra_solve_richardson(const VolterraProblem& pb);

// c E_rho(kappa Gamma(rho) t^rho), and its logarithm (finite far past overflow).
double volterra_closed_form(double rho, double kappa, double c, double t);
double volterra_closed_form_log(double rho, double kappa, double c, double t);

struct FlatMoment {
    double rho;   // 1 - beta d / alpha or 1 - beta gamma / alpha
    double kappa; // lambda^2 times the kernel weight constant
    MomentCurve numeric;
    MomentCurve closed;
    double max_rel_err;
};

// Kernel weight K in E|u_t|^2 = u0^2 + lambda^2 K int (t-s)^{rho-1} E|u_s|^2 ds:
// C* (white) or c_{d,gamma} (2 pi)^{-d} C*_1 (colored).
double flat_weight(const ModelParams& p);

// Linear sigma, constant initial data. dt defaults to T / 4096.
FlatMoment pam_second_moment_white(const ModelParams& p, double u0, double T, std::optional<double> dt = {});
FlatMoment pam_second_moment_colored(const ModelParams& p, double u0, double T, std::optional<double> dt = {});
// log E|u_t|^2 for flat data from the closed form; valid for both noise types.
double pam_log_moment(const ModelParams& p, double u0, double t);

// Ball-mass constant of the chaos lower bound: G_1(1)^2 omega_d 2^{-d} / rho.
double chaos_constant(const ModelParams& p);

struct ChaosBound {
    double value;
    double log_value;
    std::size_t terms;
};
// g_t^2 sum_k (lambda^2 l_sigma^2 c1)^k (t/k)^{k rho}; c1 defaults to chaos_constant.
ChaosBound chaos_lower_bound(const ModelParams& p, const kernel::DecayFloor& floor, double t,
                             std::optional<double> c1 = {});

// log sum_{j>=0} (b / j^rho)^j
double exp_series_log(double rho, double b);

struct ExpLowerFit {
    double rho;
    double c1;      // fitted on the coarse grid
    double b_min;   // (e / rho)^rho
    double b_max;
    double worst_margin; // min over the fine grid of log S(b) - c1 b^{1/rho}
    bool pass;
};
ExpLowerFit fit_exp_lower_bound(double rho, double b_max_factor = 50.0);

struct RenewalSandwich {
    double rate;      // (Gamma(rho) kappa)^{1/rho}
    double c3;        // fitted exponent multiplier
    double c_upper;   // sup f exp(-c3 rate t)
    double c_lower;   // inf f exp(-c3 rate t)
    double fit_residual;
    bool pass;
};
RenewalSandwich renewal_sandwich(const MomentCurve& f, double rho, double kappa);

// 2 alpha / (alpha - d beta) or 2 alpha / (alpha - gamma beta)
double excitation_theoretical(const ModelParams& p);

} // namespace tfshe::moments
