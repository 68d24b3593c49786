#pragma once

// Mode runners, excitation and growth-rate fits.

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tfshe/config.hpp"
#include "tfshe/manifest.hpp"
#include "tfshe/moments.hpp"

namespace tfshe::expcli {

struct ExcitationEstimate {
    double t = 1.0;
    std::string pipeline;
    std::vector<double> lambdas;
    std::vector<double> log_moment; // log(E|u_t|^2 / u0^2)
    std::vector<double> log_moment_se;
    std::vector<double> loglog;
    std::vector<bool> admitted;     // log moment > e^{1/2}
    double cut = 0.5;               // on the double log
    double slope = 0.0, ci_lo = 0.0, ci_hi = 0.0, r2 = 0.0;
    double theoretical = 0.0;
    double rel_err = 0.0;

    nlohmann::json to_json() const;
    void write_csv(const std::filesystem::path& path) const;
};

// Applies the double-log cut and fits log log M against log lambda.
// Throws UnderResolvedError when fewer than four lambdas survive.
ExcitationEstimate fit_excitation_values(const std::vector<double>& lambdas, const std::vector<double>& log_moment,
                                         double theoretical, double t, const std::string& pipeline);

// Oracle: closed-form flat-data moment (linear sigma). MC: one ensemble per lambda,
// spatially averaged second moment at t. Both are normalized by u0^2.
ExcitationEstimate fit_excitation(const ExperimentConfig& c, double t);

struct GrowthRate {
    double rate = 0.0, ci_lo = 0.0, ci_hi = 0.0, r2 = 0.0;
    std::size_t points = 0;
};
// Least-squares slope of log value against t over the last tail_fraction of the curve.
GrowthRate fit_growth_rate(const moments::MomentCurve& curve, double tail_fraction);

// Flat-data oracle curve on n + 1 equispaced times in [0, T], from the log closed form.
moments::MomentCurve oracle_curve(const ModelParams& p, double u0, double T, int n);

struct RunOptions {
    std::optional<std::filesystem::path> out;
    std::optional<std::uint64_t> seed;
    std::optional<int> replicas;
    std::optional<unsigned> threads;
    bool force = false;
};

struct RunResult {
    bool pass = false;
    bool reused = false; // an up-to-date manifest was found and nothing was recomputed
    std::filesystem::path dir;
    Manifest manifest;
};

// Runs the configured mode into its output directory and writes manifest.json.
RunResult run(ExperimentConfig c, const RunOptions& opt = {});

} // namespace tfshe::expcli
